// kontact command line: parses flags into a JSON request and hands it to kontact_run.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <regex>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kontact/kontact.h"

using nlohmann::json;

namespace {

constexpr int kUsage = 2;

struct Common {
  std::string file;
  bool json_out = false;
  std::string seed;
  double tol = 0;
};

void add_common(CLI::App* sub, Common& c, bool needs_file = true) {
  if (needs_file) sub->add_option("file", c.file, "input document (JSON)")->required();
  sub->add_flag("--json", c.json_out, "JSON report instead of text");
  sub->add_option("--seed", c.seed, "RNG seed (default 0xC0FFEE, env KONTACT_SEED)");
  sub->add_option("--tol", c.tol, "override numeric tolerances")->check(CLI::PositiveNumber);
}

json base_request(const Common& c) {
  json r = json::object();
  if (!c.file.empty()) r["file"] = c.file;
  r["json"] = c.json_out;
  std::string seed = c.seed;
  if (seed.empty())
    if (const char* env = std::getenv("KONTACT_SEED")) seed = env;
  if (!seed.empty()) r["seed"] = seed;
  if (c.tol > 0) r["tol"] = c.tol;
  return r;
}

// --b1 1 --b2=0.5 style coefficient profiles, left over by CLI11.
bool take_profiles(const std::vector<std::string>& extra, json& profiles, std::string& bad) {
  static const std::regex flag("--(b[0-9]+)(=(.*))?");
  for (std::size_t i = 0; i < extra.size(); ++i) {
    std::smatch m;
    if (!std::regex_match(extra[i], m, flag)) {
      bad = extra[i];
      return false;
    }
    if (m[2].matched) {
      profiles[m[1].str()] = m[3].str();
    } else if (i + 1 < extra.size()) {
      profiles[m[1].str()] = extra[++i];
    } else {
      bad = extra[i] + " (missing value)";
      return false;
    }
  }
  return true;
}

int run(const std::string& command, const json& request) {
  char* report = nullptr;
  char* diag = nullptr;
  int code = kUsage;
  kontact_status s = kontact_run(command.c_str(), request.dump().c_str(), &report, &diag, &code);
  if (s != KONTACT_OK) {
    std::cerr << "kontact: " << kontact_last_error() << "\n";
    return kUsage;
  }
  if (report && *report) std::fputs(report, stdout);
  if (diag && *diag) std::cerr << "kontact: " << diag << "\n";
  kontact_string_free(report);
  kontact_string_free(diag);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-contact structures and Lie systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kontact_version());

  Common c;
  std::vector<std::string> list_a, list_b, theta;
  std::size_t copies = 1;
  bool flag_a = false;
  double t1 = 1, step = 1e-3, h = 1e-5;
  std::string text_a, text_b, x0;
  std::vector<std::string> at, names;
  unsigned threads = 0;

  auto* check = app.add_subcommand("check-kcontact", "verify that the document's eta is k-contact");
  add_common(check, c);
  auto* closure = app.add_subcommand("closure", "close generators under the Lie bracket");
  add_common(closure, c);
  closure->add_option("--generators", list_a, "generator field names")->delimiter(',');
  auto* hams = app.add_subcommand("hamiltonians", "Hamiltonian k-functions of the basis fields");
  add_common(hams, c);
  auto* table = app.add_subcommand("bracket-table", "structure constants and the Hamiltonian bracket table");
  add_common(table, c);
  auto* build = app.add_subcommand("build-eta", "build a k-contact form from a distribution and Reeb candidates");
  add_common(build, c);
  build->add_option("--distribution", list_a, "spanning fields")->delimiter(',');
  build->add_option("--reeb", list_b, "Reeb candidate fields")->delimiter(',');
  auto* prolong = app.add_subcommand("prolong", "diagonal prolongation");
  add_common(prolong, c);
  prolong->add_option("--copies", copies, "extra copies of the chart (l)");
  auto* comp = app.add_subcommand("companion", "companion system for a momentum direction");
  add_common(comp, c);
  comp->add_option("--theta", theta, "coefficients of theta in the dual basis")->delimiter(',');
  comp->add_option("--coefficients", list_a, "coefficient names")->delimiter(',');
  comp->add_flag("--allow-dependent", flag_a, "accept dependent projections");
  auto* integ = app.add_subcommand("integrate", "integrate the Lie system (pass profiles as --b1 SPEC ...)");
  add_common(integ, c);
  integ->allow_extras();
  integ->add_option("--t", t1, "final time")->check(CLI::PositiveNumber);
  integ->add_option("--step", step, "step size")->check(CLI::PositiveNumber);
  integ->add_option("--x0", x0, "initial point, comma separated");
  integ->add_flag("--check-constant", flag_a, "check the invariant stays constant");
  integ->add_option("--invariant", text_a, "invariant expression (int_bN for quadratures)");
  integ->add_option("--quadratures", list_b, "coefficients to integrate alongside")->delimiter(',');
  auto* fd = app.add_subcommand("fd-check", "finite-difference check of a symbolic derivative");
  fd->set_help_flag("--help", "print this help and exit");  // frees -h for --h
  add_common(fd, c);
  fd->add_option("--expr", text_a, "expression");
  fd->add_option("--var", text_b, "variable");
  fd->add_option("--at", at, "point as name=value")->delimiter(',');
  fd->add_option("--h", h, "step")->check(CLI::PositiveNumber);
  auto* corpus = app.add_subcommand("corpus", "built-in examples: list | show NAME | run NAME... | run --all");
  add_common(corpus, c, false);
  corpus->add_option("action", text_a, "list, show or run")->required();
  corpus->add_option("names", names, "example names");
  corpus->add_flag("--all", flag_a, "run every example");
  corpus->add_option("--threads", threads, "worker threads for --all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (auto& ch : msg)
      if (ch == '\n') ch = ' ';
    std::cerr << "kontact: usage: " << msg << "\n";
    return kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();
  json r = base_request(c);
  if (sub == closure && !list_a.empty()) r["generators"] = list_a;
  if (sub == build) {
    if (!list_a.empty()) r["distribution"] = list_a;
    if (!list_b.empty()) r["reeb"] = list_b;
  }
  if (sub == prolong) r["copies"] = copies;
  if (sub == comp) {
    if (!theta.empty()) r["theta"] = theta;
    if (!list_a.empty()) r["coefficients"] = list_a;
    if (flag_a) r["allow_dependent"] = true;
  }
  if (sub == integ) {
    json profiles = json::object();
    std::string bad;
    if (!take_profiles(sub->remaining(), profiles, bad)) {
      std::cerr << "kontact: usage: unexpected argument " << bad << "\n";
      return kUsage;
    }
    r["profiles"] = profiles;
    r["t"] = t1;
    r["step"] = step;
    r["check_constant"] = flag_a;
    if (!text_a.empty()) r["invariant"] = text_a;
    if (!list_b.empty()) r["quadratures"] = list_b;
    if (!x0.empty()) {
      std::vector<double> v;
      try {
        for (const auto& p : CLI::detail::split(x0, ',')) v.push_back(std::stod(p));
      } catch (const std::exception&) {
        std::cerr << "kontact: usage: --x0 expects comma separated numbers\n";
        return kUsage;
      }
      r["x0"] = v;
    }
  }
  if (sub == fd) {
    if (!text_a.empty()) r["expr"] = text_a;
    if (!text_b.empty()) r["var"] = text_b;
    r["h"] = h;
    json pt = json::object();
    for (const auto& a : at) {
      auto eq = a.find('=');
      try {
        if (eq == std::string::npos) throw std::invalid_argument(a);
        pt[a.substr(0, eq)] = std::stod(a.substr(eq + 1));
      } catch (const std::exception&) {
        std::cerr << "kontact: usage: --at expects name=value, got '" << a << "'\n";
        return kUsage;
      }
    }
    if (!pt.empty()) r["at"] = pt;
  }
  if (sub == corpus) {
    r["action"] = text_a;
    r["names"] = names;
    r["all"] = flag_a;
    r["threads"] = threads;
  }
  return run(cmd, r);
}
