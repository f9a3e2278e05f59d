#include "kontact/document.hpp"

#include <fstream>
#include <sstream>

#include "kontact/error.hpp"
#include "kontact/liesys.hpp"

namespace kontact {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) { fail(Errc::InvalidInput, path + ": " + msg); }

const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) bad(path, std::string("missing '") + key + "'");
  return j.at(key);
}

std::vector<std::string> strings(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) bad(path + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

// Expression text may come as a string or as an integer literal.
std::string expr_text(const json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  bad(path, "expected an expression string");
}

void check_names(const Document& d, const std::vector<std::string>& names, const std::string& path) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (!d.fields.count(names[i])) bad(path + "[" + std::to_string(i) + "]", "unknown field '" + names[i] + "'");
}

}  // namespace

const VectorField& Document::field(const std::string& n) const {
  auto it = fields.find(n);
  if (it == fields.end()) fail(Errc::InvalidInput, "unknown field '" + n + "'");
  return it->second;
}

std::vector<VectorField> Document::fields_of(const std::vector<std::string>& names) const {
  std::vector<VectorField> out;
  for (const auto& n : names) out.push_back(field(n));
  return out;
}

Expr Document::expr(const std::string& text) const { return expr(text, space); }

Expr Document::expr(const std::string& text, const SpacePtr& target) const {
  if (definitions.empty()) return parse_expr(text, space).rebase(target);
  Expr raw_e = parse_expr(text, def_space);
  std::map<std::string, Expr> b;
  for (std::size_t i = 0; i < definitions.size(); ++i) b.emplace(definitions[i].first, def_values[i].rebase(target));
  return substitute(raw_e, b, target);
}

DiffForm Document::form(const json& terms) const {
  if (!terms.is_object()) fail(Errc::InvalidInput, "form: expected an object of terms");
  unsigned degree = 0;
  bool first = true;
  DiffForm w;
  for (const auto& [key, val] : terms.items()) {
    FormIndex idx;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, '^')) {
      if (part.size() < 2 || part[0] != 'd') fail(Errc::InvalidInput, "form term '" + key + "' is not of the form dx^dy");
      auto v = space->find_var(part.substr(1));
      if (!v) fail(Errc::UnknownSymbol, "form term '" + key + "': '" + part.substr(1) + "' is not a chart variable");
      idx.push_back(static_cast<std::uint8_t>(*v));
    }
    if (first) {
      degree = static_cast<unsigned>(idx.size());
      w = DiffForm(space, degree);
      first = false;
    } else if (idx.size() != degree) {
      fail(Errc::InvalidInput, "form terms of mixed degree");
    }
    w.add(idx, expr(expr_text(val, key)));
  }
  if (first) fail(Errc::InvalidInput, "form: no terms (write {\"dx\": \"0\"} for the zero form)");
  return w;
}

Document parse_document(const json& j) {
  if (!j.is_object()) bad("$", "document must be an object");
  Document d;
  d.raw = j;
  const json& ver = need(j, "schema_version", "$");
  if (!ver.is_number_integer() || ver.get<int>() != 1) bad("$.schema_version", "unsupported version (expected 1)");
  d.name = j.value("name", std::string());
  d.title = j.value("title", std::string());
  if (j.contains("derive") && !j.contains("chart")) {
    // derived documents carry only expectations; the chart comes from the base example
    const json& dv = j["derive"];
    std::string from = need(dv, "from", "$.derive").get<std::string>();
    const json& l = need(dv, "prolong", "$.derive");
    if (!l.is_number_integer() || l.get<long>() < 0) bad("$.derive.prolong", "expected a non-negative integer");
    d.prolong_from = std::make_pair(from, l.get<std::size_t>());
    if (j.contains("expected")) d.expected = j["expected"];
    if (j.contains("numeric")) d.numeric = j["numeric"];
    return d;
  }
  std::vector<std::string> chart = strings(need(j, "chart", "$"), "$.chart");
  std::vector<std::string> consts;
  if (j.contains("constants")) consts = strings(j["constants"], "$.constants");
  if (chart.empty()) bad("$.chart", "empty chart");
  d.space = make_space(chart, consts);

  if (j.contains("definitions")) {
    const json& defs = j["definitions"];
    if (!defs.is_object()) bad("$.definitions", "expected an object");
    std::vector<std::string> names;
    for (const auto& [k, v] : defs.items()) {
      if (!is_identifier(k) || d.space->find(k)) bad("$.definitions." + k, "name must be a fresh identifier");
      names.push_back(k);
      d.definitions.emplace_back(k, expr_text(v, "$.definitions." + k));
    }
    std::vector<std::string> ext = chart;
    ext.insert(ext.end(), names.begin(), names.end());
    d.def_space = make_space(ext, consts);
    // each definition may use the ones before it
    for (std::size_t i = 0; i < names.size(); ++i) {
      Expr e = parse_expr(d.definitions[i].second, d.def_space);
      std::map<std::string, Expr> b;
      for (std::size_t m = 0; m < i; ++m) b.emplace(names[m], d.def_values[m]);
      for (std::size_t m = i; m < names.size(); ++m)
        if (e.uses(*d.def_space->find(names[m])))
          bad("$.definitions." + names[i], "uses '" + names[m] + "' before it is defined");
      d.def_values.push_back(substitute(e, b, d.space));
    }
  }

  if (j.contains("fields")) {
    const json& fs = j["fields"];
    if (!fs.is_object()) bad("$.fields", "expected an object");
    for (const auto& [name, coeffs] : fs.items()) {
      std::string path = "$.fields." + name;
      if (!coeffs.is_array() || coeffs.size() != chart.size())
        bad(path, "expected " + std::to_string(chart.size()) + " coefficients");
      std::vector<Expr> c;
      for (std::size_t i = 0; i < coeffs.size(); ++i) c.push_back(d.expr(expr_text(coeffs[i], path)));
      d.field_names.push_back(name);
      d.fields.emplace(name, VectorField(d.space, c));
    }
  }
  if (j.contains("forms")) {
    const json& fs = j["forms"];
    if (!fs.is_object()) bad("$.forms", "expected an object");
    for (const auto& [name, terms] : fs.items()) d.forms.emplace(name, d.form(terms));
  }
  if (j.contains("system")) {
    const json& s = j["system"];
    if (s.contains("generators")) d.generators = strings(s["generators"], "$.system.generators");
    if (s.contains("basis")) d.basis = strings(s["basis"], "$.system.basis");
    if (s.contains("coefficients")) d.coefficients = strings(s["coefficients"], "$.system.coefficients");
    check_names(d, d.generators, "$.system.generators");
    check_names(d, d.basis, "$.system.basis");
  }
  if (j.contains("symmetries")) {
    d.symmetries = strings(j["symmetries"], "$.symmetries");
    check_names(d, d.symmetries, "$.symmetries");
  }
  if (j.contains("eta")) {
    const json& e = j["eta"];
    if (e.contains("labels")) d.eta.labels = strings(e["labels"], "$.eta.labels");
    if (e.contains("components")) {
      d.eta.kind = EtaRecipe::Kind::Components;
      d.eta.components = strings(e["components"], "$.eta.components");
      for (const auto& c : d.eta.components)
        if (!d.forms.count(c)) bad("$.eta.components", "unknown form '" + c + "'");
    } else if (e.contains("coframe")) {
      d.eta.kind = EtaRecipe::Kind::Coframe;
      if (d.symmetries.empty()) bad("$.eta.coframe", "needs symmetries");
      for (const auto& v : e["coframe"]) {
        if (!v.is_number_integer() || v.get<long>() < 1 || static_cast<std::size_t>(v.get<long>()) > d.symmetries.size())
          bad("$.eta.coframe", "indices are 1-based positions in symmetries");
        d.eta.select.push_back(v.get<std::size_t>());
      }
    } else if (e.contains("build")) {
      d.eta.kind = EtaRecipe::Kind::Build;
      d.eta.distribution = strings(need(e["build"], "distribution", "$.eta.build"), "$.eta.build.distribution");
      d.eta.reeb = strings(need(e["build"], "reeb", "$.eta.build"), "$.eta.build.reeb");
      check_names(d, d.eta.distribution, "$.eta.build.distribution");
      check_names(d, d.eta.reeb, "$.eta.build.reeb");
    } else {
      bad("$.eta", "needs one of components, coframe, build");
    }
  }
  if (j.contains("derive")) {
    const json& dv = j["derive"];
    std::string from = need(dv, "from", "$.derive").get<std::string>();
    const json& l = need(dv, "prolong", "$.derive");
    if (!l.is_number_integer() || l.get<long>() < 0) bad("$.derive.prolong", "expected a non-negative integer");
    d.prolong_from = std::make_pair(from, l.get<std::size_t>());
  }
  if (j.contains("expected")) {
    if (!j["expected"].is_object()) bad("$.expected", "expected an object");
    d.expected = j["expected"];
  }
  if (j.contains("numeric")) {
    if (!j["numeric"].is_array()) bad("$.numeric", "expected an array");
    d.numeric = j["numeric"];
  }
  return d;
}

Document parse_document_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Errc::InvalidInput, std::string("JSON: ") + e.what());
  }
  return parse_document(j);
}

Document load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::InvalidInput, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document_text(ss.str());
}

VecForm eta_of(const Document& d) {
  switch (d.eta.kind) {
    case EtaRecipe::Kind::Components: {
      std::vector<DiffForm> c;
      for (const auto& n : d.eta.components) c.push_back(d.forms.at(n));
      return VecForm(c);
    }
    case EtaRecipe::Kind::Coframe: {
      auto U = dual_coframe(d.fields_of(d.symmetries));
      std::vector<DiffForm> c;
      for (auto i : d.eta.select) c.push_back(U[i - 1]);
      return VecForm(c);
    }
    case EtaRecipe::Kind::Build:
      return build_kcontact(Distribution{d.space, d.fields_of(d.eta.distribution)}, d.fields_of(d.eta.reeb));
    case EtaRecipe::Kind::None:
      break;
  }
  fail(Errc::InvalidInput, "document '" + d.name + "' has no eta");
}

std::string form_key(const SpacePtr& s, const FormIndex& idx) {
  std::string k;
  for (std::size_t i = 0; i < idx.size(); ++i) k += (i ? "^d" : "d") + s->vars()[idx[i]];
  return k;
}

json form_json(const DiffForm& w) {
  json o = json::object();
  for (const auto& [idx, e] : w.terms()) o[form_key(w.space(), idx)] = e.str();
  return o;
}

json field_json(const VectorField& X) {
  json a = json::array();
  for (const auto& c : X.coeffs()) a.push_back(c.str());
  return a;
}

json kfunction_json(const KFunction& h) {
  json a = json::array();
  for (const auto& c : h.comps()) a.push_back(c.str());
  return a;
}

}  // namespace kontact
