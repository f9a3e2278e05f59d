#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kontact/document.hpp"
#include "kontact/liesys.hpp"

namespace kontact::corpus {

struct RunOptions {
  std::uint64_t seed = kDefaultSeed;
  std::optional<double> tol;  // overrides every numeric tolerance
};

// status: "match" (equals the target), "recomputed" (value stored in the data
// differs from a print-suspect display), "divergence" (print-suspect display
// with no stored value, differs), "pass" (derived property holds), "fail".
struct Check {
  std::string name;
  std::string status;
  json expected;  // null when the check has no stored target
  json actual;
  json printed;   // the printed display when it differs from the stored value
  std::string provenance;
  std::string note;
  bool failed() const { return status == "fail"; }
};

struct ExampleReport {
  std::string example, title;
  std::vector<Check> checks;
  bool pass() const;
  std::size_t count(const std::string& status) const;
  json to_json() const;
  std::string to_text() const;
};

std::vector<std::string> example_names();
// "control" is accepted for control2. UnknownExample otherwise.
std::string canonical_name(const std::string& name);
const std::string& example_text(const std::string& name);
Document example_document(const std::string& name);

// Documents with a "derive" block are resolved against the registered corpus.
ExampleReport run_document(const Document& doc, const RunOptions& opts = {});
ExampleReport run_example(const std::string& name, const RunOptions& opts = {});
// Runs on a worker pool; result order follows example_names().
std::vector<ExampleReport> run_all(const RunOptions& opts = {}, unsigned threads = 0);

}  // namespace kontact::corpus
