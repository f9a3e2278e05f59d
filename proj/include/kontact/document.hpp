#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kontact/exterior.hpp"
#include "kontact/kcontact.hpp"

namespace kontact {

using json = nlohmann::ordered_json;

// How the k-contact form of a document is obtained.
struct EtaRecipe {
  enum class Kind { None, Components, Coframe, Build };
  Kind kind = Kind::None;
  std::vector<std::string> components;    // Components: form names in e_alpha order
  std::vector<std::size_t> select;        // Coframe: 1-based indices into the dual coframe of the symmetries
  std::vector<std::string> distribution;  // Build: fields spanning ker eta
  std::vector<std::string> reeb;          // Build: transversal commuting symmetries
  std::vector<std::string> labels;        // e_alpha labels, default e1..ek
};

struct Document {
  int schema_version = 1;
  std::string name, title;
  SpacePtr space;
  std::vector<std::pair<std::string, std::string>> definitions;  // macro name -> expression text
  std::vector<std::string> field_names;
  std::map<std::string, VectorField> fields;
  std::map<std::string, DiffForm> forms;
  std::vector<std::string> generators, basis, symmetries;
  std::vector<std::string> coefficients;  // names of the b's multiplying the basis
  EtaRecipe eta;
  std::optional<std::pair<std::string, std::size_t>> prolong_from;  // (example, l)
  json expected = json::object();
  json numeric = json::array();
  json raw;
  // definitions parsed in order, each over (chart vars, definition names, consts)
  SpacePtr def_space;
  std::vector<Expr> def_values;

  const VectorField& field(const std::string& name) const;
  std::vector<VectorField> fields_of(const std::vector<std::string>& names) const;
  // Parses an expression on the document space with the definitions expanded.
  Expr expr(const std::string& text) const;
  Expr expr(const std::string& text, const SpacePtr& target) const;
  // "dx1^dx3" style term maps.
  DiffForm form(const json& terms) const;
};

// InvalidInput (with a JSON path) on schema violations; expression errors keep
// their own codes.
Document parse_document(const json& j);
Document parse_document_text(const std::string& text);
Document load_document(const std::string& path);

// The k-contact form described by the eta recipe (InvalidInput without one).
VecForm eta_of(const Document& d);

// Serialization helpers shared by reports.
std::string form_key(const SpacePtr& s, const FormIndex& idx);
json form_json(const DiffForm& w);
json field_json(const VectorField& X);
json kfunction_json(const KFunction& h);

}  // namespace kontact
