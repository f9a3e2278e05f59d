#include "app/commands.hpp"

#include <algorithm>
#include <sstream>

#include "kontact/corpus.hpp"
#include "kontact/error.hpp"
#include "kontact/liesys.hpp"
#include "kontact/numeric.hpp"

namespace kontact::app {

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t seed_of(const json& req) {
  if (!req.contains("seed")) return kDefaultSeed;
  const json& s = req["seed"];
  if (s.is_number_unsigned() || s.is_number_integer()) return s.get<std::uint64_t>();
  if (s.is_string()) {
    try {
      std::size_t pos = 0;
      auto v = std::stoull(s.get<std::string>(), &pos, 0);
      if (pos == s.get<std::string>().size()) return v;
    } catch (const std::exception&) {
    }
  }
  throw Usage("seed must be a non-negative integer");
}

std::optional<double> tol_of(const json& req) {
  if (!req.contains("tol") || req["tol"].is_null()) return std::nullopt;
  if (!req["tol"].is_number() || !(req["tol"].get<double>() > 0)) throw Usage("tol must be a positive number");
  return req["tol"].get<double>();
}

Document load(const json& req) {
  if (req.contains("document")) return parse_document(req["document"]);
  if (!req.contains("file") || !req["file"].is_string()) throw Usage("missing input file");
  Document d = load_document(req["file"].get<std::string>());
  if (!d.space) fail(Errc::InvalidInput, "derived documents are only runnable through 'corpus run'");
  return d;
}

std::string input_name(const json& req) {
  return req.contains("file") && req["file"].is_string() ? req["file"].get<std::string>() : std::string("-");
}

std::vector<std::string> names_opt(const json& req, const char* key, const std::vector<std::string>& dflt) {
  if (!req.contains(key) || req[key].is_null()) return dflt;
  return req[key].get<std::vector<std::string>>();
}

std::vector<mpq_class> rationals(const json& j) {
  std::vector<mpq_class> out;
  for (const auto& v : j) {
    if (v.is_number_integer()) out.emplace_back(v.get<long>());
    else if (v.is_string()) out.push_back(parse_rational(v.get<std::string>()));
    else fail(Errc::InvalidInput, "theta entries must be integers or rational strings");
  }
  return out;
}

json fields_json(const std::vector<std::string>& names, const std::vector<VectorField>& fs) {
  json o = json::object();
  for (std::size_t i = 0; i < fs.size(); ++i) o[names[i]] = field_json(fs[i]);
  return o;
}

json forms_json(const VecForm& w) {
  json a = json::array();
  for (const auto& c : w.comps()) a.push_back(form_json(c));
  return a;
}

json kreport_json(const KContactReport& r) {
  json o = {{"is_kcontact", r.is_kcontact},
            {"failure_reason", failure_name(r.failure_reason)},
            {"k", r.k},
            {"dim", r.dim},
            {"rank_ker_eta", r.rank_ker_eta},
            {"rank_ker_deta", r.rank_ker_deta},
            {"rank_intersection", r.rank_intersection}};
  if (r.reeb) {
    json rb = json::array();
    for (const auto& R : *r.reeb) rb.push_back(field_json(R));
    o["reeb"] = rb;
  }
  json locus = json::array();
  for (const auto& e : r.locus)
    if (!e.is_constant()) locus.push_back(e.str());
  o["locus"] = locus;
  return o;
}

json base(const std::string& cmd, const json& req) { return json{{"command", cmd}, {"input", input_name(req)}}; }

// --- commands -----------------------------------------------------------------

json cmd_check_kcontact(const json& req) {
  Document d = load(req);
  KContactReport r = verify_kcontact(eta_of(d));
  json o = base("check-kcontact", req);
  o["pass"] = r.is_kcontact;
  o.update(kreport_json(r));
  return o;
}

json cmd_closure(const json& req) {
  Document d = load(req);
  auto gens = names_opt(req, "generators", d.generators.empty() ? d.basis : d.generators);
  if (gens.empty()) throw Usage("no generators (set system.generators or --generators)");
  LieClosure cl = bracket_closure(d.fields_of(gens), 64, 16, seed_of(req));
  json o = base("closure", req);
  o["pass"] = cl.closed;
  o["dim"] = cl.dim();
  o["words"] = cl.words;
  o["table"] = format_table(cl.c);
  json b = json::array();
  for (const auto& X : cl.basis) b.push_back(field_json(X));
  o["basis"] = b;
  o["locally_automorphic"] = is_locally_automorphic(cl);
  return o;
}

std::vector<VectorField> basis_of(const Document& d) {
  if (d.basis.empty()) fail(Errc::InvalidInput, "document has no system.basis");
  return d.fields_of(d.basis);
}

json cmd_hamiltonians(const json& req) {
  Document d = load(req);
  auto B = basis_of(d);
  KContactForm ctx(eta_of(d));
  json hs = json::array();
  bool all = true;
  for (std::size_t a = 0; a < B.size(); ++a) {
    HamiltonianCheck hc = hamiltonian_check(B[a], ctx);
    all = all && hc.is_hamiltonian;
    json h = {{"field", d.basis[a]}, {"is_hamiltonian", hc.is_hamiltonian}};
    h["hamiltonian"] = hc.is_hamiltonian ? kfunction_json(hc.h) : json(nullptr);
    hs.push_back(h);
  }
  json o = base("hamiltonians", req);
  o["pass"] = all;
  o["k"] = ctx.k();
  o["hamiltonians"] = hs;
  return o;
}

json cmd_bracket_table(const json& req) {
  Document d = load(req);
  auto B = basis_of(d);
  KContactForm ctx(eta_of(d));
  std::uint64_t seed = seed_of(req);
  StructureConstants c = structure_constants(B, seed);
  std::vector<KFunction> hs;
  for (const auto& X : B) hs.push_back(hamiltonian_of(X, ctx));
  StructureConstants hc = c;
  for (auto& r : hc)
    for (auto& s : r)
      for (auto& q : s) q = -q;
  json bad = json::array();
  for (std::size_t i = 0; i < B.size(); ++i)
    for (std::size_t j = i + 1; j < B.size(); ++j) {
      KFunction want = KFunction::zero(ctx.space(), ctx.k());
      for (std::size_t g = 0; g < B.size(); ++g)
        if (hc[i][j][g] != 0) want = want + Expr(hc[i][j][g]) * hs[g];
      if (kcontact_bracket(hs[i], hs[j], ctx, B[i], B[j]) != want)
        bad.push_back("{h" + std::to_string(i + 1) + ",h" + std::to_string(j + 1) + "}");
    }
  json o = base("bracket-table", req);
  o["pass"] = bad.empty();
  o["basis"] = d.basis;
  o["field_table"] = format_table(c);
  o["bracket_table"] = format_table(hc, "h", "{", "}");
  o["inconsistent"] = bad;
  return o;
}

json cmd_build_eta(const json& req) {
  Document d = load(req);
  // defaults: the document's eta.build, else its expected "build" entry
  const json xb = d.expected.contains("build") ? d.expected["build"] : json::object();
  auto dist = names_opt(req, "distribution",
                        d.eta.distribution.empty() ? xb.value("distribution", std::vector<std::string>{})
                                                   : d.eta.distribution);
  auto reeb = names_opt(req, "reeb", d.eta.reeb.empty() ? xb.value("reeb", std::vector<std::string>{}) : d.eta.reeb);
  if (dist.empty() || reeb.empty()) throw Usage("need a distribution and Reeb candidates (eta.build or options)");
  Distribution D{d.space, d.fields_of(dist)};
  bool mni = max_nonintegrable(D);
  VecForm w = build_kcontact(D, d.fields_of(reeb));
  KContactReport r = verify_kcontact(w);
  json o = base("build-eta", req);
  o["pass"] = mni && r.is_kcontact;
  o["distribution"] = dist;
  o["reeb_candidates"] = reeb;
  o["max_nonintegrable"] = mni;
  o["eta"] = forms_json(w);
  o["deta"] = forms_json(ext_deriv_k(w));
  o["kcontact"] = kreport_json(r);
  return o;
}

json cmd_prolong(const json& req) {
  Document d = load(req);
  auto B = basis_of(d);
  long l = req.value("copies", 1L);
  if (l < 0) throw Usage("copies must be non-negative");
  Prolongation p = diagonal_prolongation(B, eta_of(d), static_cast<std::size_t>(l));
  KContactReport r = verify_kcontact(p.eta);
  std::uint64_t seed = seed_of(req);
  bool same = structure_constants(p.fields, seed) == structure_constants(B, seed);
  json o = base("prolong", req);
  o["pass"] = r.is_kcontact && same;
  o["copies"] = l + 1;
  o["chart"] = p.space->vars();
  o["structure_constants_equal"] = same;
  o["kcontact"] = kreport_json(r);
  o["fields"] = fields_json(d.basis, p.fields);
  o["eta"] = forms_json(p.eta);
  json hs = json::array();
  for (const auto& h : p.hamiltonians) hs.push_back(kfunction_json(h));
  o["hamiltonians"] = hs;
  return o;
}

json cmd_companion(const json& req) {
  Document d = load(req);
  auto B = basis_of(d);
  KContactForm ctx(eta_of(d));
  const json dflt = d.expected.contains("companion") ? d.expected["companion"] : json::object();
  json theta_j = req.contains("theta") ? req["theta"] : dflt.value("theta", json());
  if (!theta_j.is_array()) throw Usage("missing theta");
  auto theta = rationals(theta_j);
  std::vector<std::string> coeffs =
      names_opt(req, "coefficients", dflt.value("coefficients", std::vector<std::string>{}));
  bool dep = req.value("allow_dependent", dflt.value("allow_dependent", false));
  std::vector<KFunction> hs;
  for (const auto& X : B) hs.push_back(hamiltonian_of(X, ctx));
  CompanionSystem cs = companion_system(B, hs, ctx, theta, coeffs, dep, seed_of(req));
  json o = base("companion", req);
  o["pass"] = true;
  o["theta"] = theta_j;
  o["dependent"] = cs.dependent;
  o["nilpotency_order"] = cs.nilpotency_order ? json(*cs.nilpotency_order) : json(nullptr);
  json ht = json::array();
  for (const auto& e : cs.h_theta) ht.push_back(e.str());
  o["h_theta"] = ht;
  json M = json::array();
  for (std::size_t i = 0; i < cs.M.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < cs.M.cols(); ++j) row.push_back(cs.M(i, j).str());
    M.push_back(row);
  }
  o["M"] = M;
  return o;
}

json cmd_integrate(const json& req) {
  Document d = load(req);
  auto B = basis_of(d);
  const json* constant = nullptr;
  for (const auto& e : d.numeric)
    if (e.value("kind", std::string()) == "constant") {
      constant = &e;
      break;
    }
  double t1 = req.value("t", 1.0), step = req.value("step", 1e-3);
  if (!(t1 > 0) || !(step > 0)) throw Usage("--t and --step must be positive");
  const json profiles = req.value("profiles", json::object());
  if (profiles.empty()) throw Usage("give at least one coefficient profile (--b1 ...)");
  IntegrationSetup s;
  for (const auto& [name, spec] : profiles.items()) {
    auto it = std::find(d.coefficients.begin(), d.coefficients.end(), name);
    if (it == d.coefficients.end()) throw Usage("unknown coefficient '" + name + "'");
    s.fields.push_back(B.at(static_cast<std::size_t>(it - d.coefficients.begin())));
    s.profiles.push_back(Profile::parse(spec.get<std::string>(), 0, t1));
    s.labels.push_back(name);
  }
  bool check = req.value("check_constant", false);
  std::string invariant = req.value("invariant", std::string());
  std::vector<std::string> quads = names_opt(req, "quadratures", {});
  std::vector<double> x0;
  if (req.contains("x0")) x0 = req["x0"].get<std::vector<double>>();
  if (constant) {
    if (invariant.empty()) invariant = constant->value("invariant", std::string());
    if (quads.empty() && constant->contains("quadratures"))
      quads = (*constant)["quadratures"].get<std::vector<std::string>>();
    if (x0.empty() && constant->contains("x0")) x0 = (*constant)["x0"].get<std::vector<double>>();
  }
  if (x0.empty()) x0.assign(d.space->dim(), 0.0);
  for (const auto& q : quads) {
    auto it = std::find(s.labels.begin(), s.labels.end(), q);
    if (it == s.labels.end()) {
      // a quadrature of an unset coefficient is still tracked, with a zero profile
      auto c = std::find(d.coefficients.begin(), d.coefficients.end(), q);
      if (c == d.coefficients.end()) throw Usage("unknown quadrature '" + q + "'");
      s.fields.push_back(VectorField::zero(d.space));
      s.profiles.push_back(Profile::constant(0));
      s.labels.push_back(q);
      it = s.labels.end() - 1;
    }
    s.quadratures.push_back(static_cast<std::size_t>(it - s.labels.begin()));
  }
  Trajectory tr = integrate(s, x0, 0, t1, step);
  json o = base("integrate", req);
  o["method"] = tr.method;
  o["step"] = step;
  o["steps"] = tr.times.size() - 1;
  json fin = json::object();
  for (std::size_t i = 0; i < tr.names.size(); ++i) fin[tr.names[i]] = tr.states.back()[i];
  o["t"] = tr.times.back();
  o["final"] = fin;
  bool pass = true;
  if (check) {
    if (invariant.empty()) throw Usage("--check-constant needs --invariant or a constant entry in the document");
    double tol = tol_of(req).value_or(constant ? constant->value("tol", 1e-6) : 1e-6);
    Expr I = parse_expr(invariant, trajectory_space(tr, d.space->consts()));
    ConstantReport r = check_constant(tr, I, tol);
    o["invariant"] = invariant;
    o["max_drift"] = r.max_drift;
    o["tol"] = tol;
    pass = r.pass;
  }
  o["pass"] = pass;
  return o;
}

json cmd_fd_check(const json& req) {
  Document d = load(req);
  double tol = tol_of(req).value_or(1e-6);
  double h = req.value("h", 1e-5);
  json checks = json::array();
  bool pass = true;
  auto one = [&](const std::string& expr, const std::string& var, const json& at) {
    std::map<std::string, double> pt;
    for (const auto& [k, v] : at.items()) pt[k] = v.get<double>();
    FdReport r = fd_validate(d.expr(expr), var, pt, h, tol);
    pass = pass && r.pass;
    checks.push_back(json{{"expr", expr},
                          {"var", var},
                          {"symbolic", r.symbolic},
                          {"numeric", r.numeric},
                          {"rel_error", r.rel_error},
                          {"pass", r.pass}});
  };
  if (req.contains("expr")) {
    if (!req.contains("var")) throw Usage("--expr needs --var");
    one(req["expr"].get<std::string>(), req["var"].get<std::string>(), req.value("at", json::object()));
  } else {
    for (const auto& e : d.numeric)
      if (e.value("kind", std::string()) == "fd") one(e.at("expr"), e.at("var"), e.at("point"));
    if (checks.empty()) throw Usage("no fd entries in the document; use --expr/--var/--at");
  }
  json o = base("fd-check", req);
  o["pass"] = pass;
  o["tol"] = tol;
  o["checks"] = checks;
  return o;
}

Outcome cmd_corpus(const json& req) {
  std::string action = req.value("action", std::string("list"));
  bool as_json = req.value("json", false);
  Outcome out;
  if (action == "list") {
    auto names = corpus::example_names();
    if (as_json) {
      out.out = json{{"command", "corpus list"}, {"pass", true}, {"examples", names}}.dump(2) + "\n";
    } else {
      for (const auto& n : names) out.out += n + "\n";
    }
    return out;
  }
  if (action == "show") {
    auto names = names_opt(req, "names", {});
    if (names.size() != 1) throw Usage("corpus show takes one example name");
    out.out = corpus::example_text(names[0]);
    return out;
  }
  if (action != "run") throw Usage("unknown corpus action '" + action + "' (list, show, run)");
  corpus::RunOptions opts;
  opts.seed = seed_of(req);
  opts.tol = tol_of(req);
  std::vector<corpus::ExampleReport> reps;
  if (req.value("all", false)) {
    reps = corpus::run_all(opts, req.value("threads", 0u));
  } else {
    auto names = names_opt(req, "names", {});
    if (names.empty()) throw Usage("corpus run needs example names or --all");
    for (const auto& n : names) corpus::canonical_name(n);  // UnknownExample before any work
    for (const auto& n : names) reps.push_back(corpus::run_example(n, opts));
  }
  bool pass = std::all_of(reps.begin(), reps.end(), [](const auto& r) { return r.pass(); });
  if (as_json) {
    json a = json::array();
    for (const auto& r : reps) a.push_back(r.to_json());
    out.out = json{{"command", "corpus run"}, {"pass", pass}, {"reports", a}}.dump(2) + "\n";
  } else {
    for (std::size_t i = 0; i < reps.size(); ++i) out.out += (i ? "\n" : "") + reps[i].to_text();
  }
  out.exit_code = pass ? kExitPass : kExitFail;
  return out;
}

// "key: value" lines, nested values indented.
void render(std::ostringstream& os, const std::string& key, const json& v, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  auto scalar = [](const json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
  auto flat = [](const json& x) {
    return std::all_of(x.begin(), x.end(), [](const json& e) { return e.is_primitive(); });
  };
  if (v.is_primitive()) {
    os << pad << key << ": " << scalar(v) << "\n";
  } else if (v.is_array() && flat(v)) {
    os << pad << key << ": [";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << scalar(v[i]);
    os << "]\n";
  } else if (v.is_array()) {
    os << pad << key << ":\n";
    for (std::size_t i = 0; i < v.size(); ++i) render(os, "[" + std::to_string(i + 1) + "]", v[i], indent + 2);
  } else {
    os << pad << key << ":\n";
    for (const auto& [k, x] : v.items()) render(os, k, x, indent + 2);
  }
}

std::string to_text(const json& o) {
  std::ostringstream os;
  for (const auto& [k, v] : o.items())
    if (k != "pass") render(os, k, v, 0);
  os << "result: " << (o.value("pass", false) ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"check-kcontact", "closure",   "hamiltonians", "bracket-table",
                                              "build-eta",      "prolong",   "companion",    "integrate",
                                              "corpus",         "fd-check"};
  return names;
}

Outcome run_command(const std::string& command, const json& request) {
  Outcome out;
  try {
    if (!request.is_object()) throw Usage("request must be a JSON object");
    if (command == "corpus") return cmd_corpus(request);
    json o;
    if (command == "check-kcontact") o = cmd_check_kcontact(request);
    else if (command == "closure") o = cmd_closure(request);
    else if (command == "hamiltonians") o = cmd_hamiltonians(request);
    else if (command == "bracket-table") o = cmd_bracket_table(request);
    else if (command == "build-eta") o = cmd_build_eta(request);
    else if (command == "prolong") o = cmd_prolong(request);
    else if (command == "companion") o = cmd_companion(request);
    else if (command == "integrate") o = cmd_integrate(request);
    else if (command == "fd-check") o = cmd_fd_check(request);
    else throw Usage("unknown command '" + command + "'");
    out.out = request.value("json", false) ? o.dump(2) + "\n" : to_text(o);
    out.exit_code = o.value("pass", false) ? kExitPass : kExitFail;
  } catch (const Usage& e) {
    out = Outcome{kExitUsage, "", std::string("usage: ") + e.what()};
  } catch (const Error& e) {
    out = Outcome{kExitUsage, "", e.what()};
  } catch (const json::exception& e) {
    out = Outcome{kExitUsage, "", std::string("InvalidInput: ") + e.what()};
  } catch (const std::exception& e) {
    out = Outcome{kExitUsage, "", std::string("Internal: ") + e.what()};
  }
  return out;
}

}  // namespace kontact::app
