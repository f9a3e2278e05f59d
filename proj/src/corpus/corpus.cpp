#include "kontact/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "kontact/error.hpp"
#include "kontact/numeric.hpp"
#include "liesys/span.hpp"

namespace kontact::corpus {

const std::vector<std::pair<std::string_view, std::string_view>>& embedded_files();

namespace {

using Eq = std::function<bool(const json&)>;

std::string hname(std::size_t a) { return "h" + std::to_string(a + 1); }

std::vector<mpq_class> rationals(const json& j, const std::string& what) {
  if (!j.is_array()) fail(Errc::InvalidInput, what + ": expected an array of numbers");
  std::vector<mpq_class> out;
  for (const auto& v : j) {
    if (v.is_number_integer()) out.emplace_back(v.get<long>());
    else if (v.is_string()) out.push_back(parse_rational(v.get<std::string>()));
    else fail(Errc::InvalidInput, what + ": entries must be integers or rational strings");
  }
  return out;
}

std::vector<double> doubles(const json& j, const std::string& what) {
  if (!j.is_array()) fail(Errc::InvalidInput, what + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) fail(Errc::InvalidInput, what + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

double number(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key) || !j[key].is_number()) fail(Errc::InvalidInput, what + ": missing number '" + key + "'");
  return j[key].get<double>();
}

json forms_json(const std::vector<DiffForm>& v) {
  json a = json::array();
  for (const auto& w : v) a.push_back(form_json(w));
  return a;
}

StructureConstants negated(StructureConstants c) {
  for (auto& r : c)
    for (auto& s : r)
      for (auto& q : s) q = -q;
  return c;
}

// Everything the pipeline needs, whether it came from a file or a prolongation.
struct Model {
  SpacePtr space;
  std::vector<std::string> basis_names;
  std::vector<VectorField> basis;
  std::vector<VectorField> generators;
  std::optional<VecForm> eta;
  std::optional<Prolongation> prolongation;
};

class Runner {
 public:
  Runner(const Document& d, const RunOptions& o) : doc_(d), opts_(o) {
    rep_.example = d.name;
    rep_.title = d.title;
  }

  ExampleReport run() {
    if (doc_.prolong_from) {
      if (!prepare_prolonged()) return finish();
    } else {
      prepare_plain();
    }
    closure();
    symmetries();
    eta();
    kcontact();
    if (ctx_) {
      hamiltonians();
      derived();
    }
    numerics();
    return finish();
  }

 private:
  // --- bookkeeping -------------------------------------------------------

  const json* expected(const std::string& key) {
    used_.insert(key);
    if (!doc_.expected.contains(key)) return nullptr;
    return &doc_.expected[key];
  }

  void push(Check c) { rep_.checks.push_back(std::move(c)); }

  void property(const std::string& name, bool ok, json actual = nullptr, std::string note = {}) {
    push(Check{name, ok ? "pass" : "fail", nullptr, std::move(actual), nullptr, "derived", std::move(note)});
  }

  void error(const std::string& name, const std::exception& e) {
    push(Check{name, "fail", nullptr, nullptr, nullptr, "", e.what()});
  }

  template <class F>
  void guarded(const std::string& name, F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      error(name, e);
    }
  }

  // Entry semantics: the stored value is the target; a print that differs must
  // be flagged print_suspect. Without a value, the print is the target and a
  // flagged mismatch is only reported.
  void entry(const std::string& name, const json& e, const json& actual, const Eq& eq) {
    Check c{name, "fail", nullptr, actual, nullptr, e.value("provenance", std::string()), e.value("note", std::string())};
    bool suspect = e.value("print_suspect", false);
    std::string err;
    auto test = [&](const json& t) {
      try {
        return eq(t);
      } catch (const std::exception& ex) {
        err = ex.what();
        return false;
      }
    };
    if (e.contains("value")) {
      c.expected = e["value"];
      if (!test(e["value"])) {
        c.status = "fail";
      } else if (e.contains("printed") && !test(e["printed"])) {
        c.printed = e["printed"];
        c.status = suspect ? "recomputed" : "fail";
        if (!suspect) c.note = "printed value differs and the entry is not marked print_suspect";
      } else {
        c.status = "match";
      }
    } else if (e.contains("printed")) {
      c.expected = e["printed"];
      c.status = test(e["printed"]) ? "match" : (suspect ? "divergence" : "fail");
    } else {
      c.note = "entry has neither value nor printed";
    }
    if (!err.empty()) c.note += (c.note.empty() ? "" : "; ") + err;
    push(std::move(c));
  }

  void expect(const std::string& key, const json& actual, const Eq& eq) {
    if (const json* e = expected(key)) entry(key, *e, actual, eq);
  }

  // --- comparisons ---------------------------------------------------------

  Eq eq_json(const json& actual) const {
    return [actual](const json& t) { return t == actual; };
  }

  Eq eq_exprs(const std::vector<Expr>& actual) const {
    return [this, actual](const json& t) {
      if (!t.is_array() || t.size() != actual.size()) return false;
      for (std::size_t i = 0; i < actual.size(); ++i) {
        std::string text = t[i].is_string() ? t[i].get<std::string>() : t[i].dump();
        if (doc_.expr(text, actual[i].space() ? actual[i].space() : model_.space) != actual[i]) return false;
      }
      return true;
    };
  }

  Eq eq_forms(const std::vector<DiffForm>& actual) const {
    return [this, actual](const json& t) {
      if (!t.is_array() || t.size() != actual.size()) return false;
      for (std::size_t i = 0; i < actual.size(); ++i)
        if (doc_.form(t[i]) != actual[i]) return false;
      return true;
    };
  }

  // Field names or coefficient lists.
  Eq eq_fields(const std::vector<VectorField>& actual) const {
    return [this, actual](const json& t) {
      if (!t.is_array() || t.size() != actual.size()) return false;
      for (std::size_t i = 0; i < actual.size(); ++i) {
        if (t[i].is_string()) {
          if (doc_.field(t[i].get<std::string>()) != actual[i]) return false;
        } else if (!eq_exprs(actual[i].coeffs())(t[i])) {
          return false;
        }
      }
      return true;
    };
  }

  // --- stages --------------------------------------------------------------

  void prepare_plain() {
    model_.space = doc_.space;
    model_.basis_names = doc_.basis;
    model_.basis = doc_.fields_of(doc_.basis);
    model_.generators = doc_.fields_of(doc_.generators.empty() ? doc_.basis : doc_.generators);
  }

  bool prepare_prolonged() {
    const auto& [from, l] = *doc_.prolong_from;
    try {
      Document base = example_document(from);
      if (base.prolong_from) fail(Errc::InvalidInput, "cannot derive from a derived example");
      VecForm eta = eta_of(base);
      Prolongation p = diagonal_prolongation(base.fields_of(base.basis), eta, l);
      model_.space = p.space;
      model_.basis_names = base.basis;
      model_.basis = p.fields;
      std::vector<std::string> gens = base.generators.empty() ? base.basis : base.generators;
      for (const auto& g : gens) {
        auto it = std::find(base.basis.begin(), base.basis.end(), g);
        if (it == base.basis.end()) fail(Errc::InvalidInput, "generator '" + g + "' is not a basis field of " + from);
        model_.generators.push_back(p.fields[static_cast<std::size_t>(it - base.basis.begin())]);
      }
      model_.eta = p.eta;
      model_.prolongation = std::move(p);
      property("prolongation", true,
               json{{"from", from}, {"copies", l + 1}, {"dim", model_.space->dim()}, {"k", model_.eta->k()}});
      return true;
    } catch (const std::exception& e) {
      error("prolongation", e);
      return false;
    }
  }

  void closure() {
    if (model_.basis.empty()) return;
    guarded("closure", [&] {
      LieClosure cl = bracket_closure(model_.generators, 64, 16, opts_.seed);
      property("closure", cl.closed, json{{"dim", cl.dim()}, {"words", cl.words}});
      expect("closure_dim", cl.dim(), eq_json(cl.dim()));
      std::string table = format_table(cl.c);
      expect("closure_table", table, eq_json(table));

      // the closure must sit inside the declared basis
      detail::ExprSpan span(model_.space, model_.space->dim(), opts_.seed);
      for (const auto& X : model_.basis)
        if (span.add(X.coeffs())) fail(Errc::SpanFailure, "declared basis is linearly dependent");
      std::vector<std::string> outside;
      for (std::size_t i = 0; i < cl.dim(); ++i)
        if (!span.express(cl.basis[i].coeffs())) outside.push_back(cl.words[i]);
      property("closure_in_basis", outside.empty(), outside.empty() ? json(nullptr) : json(outside));
    });
    guarded("basis", [&] {
      basis_c_ = structure_constants(model_.basis, opts_.seed);
      property("basis_lie_algebra", is_antisymmetric(*basis_c_) && satisfies_jacobi(*basis_c_));
      std::string table = format_table(*basis_c_);
      expect("basis_table", table, eq_json(table));
      if (expected("locally_automorphic")) {
        LieClosure lc;
        lc.space = model_.space;
        lc.basis = model_.basis;
        lc.words = model_.basis_names;
        lc.c = *basis_c_;
        lc.closed = true;
        bool la = is_locally_automorphic(lc);
        expect("locally_automorphic", la, eq_json(la));
      }
    });
  }

  void symmetries() {
    if (doc_.symmetries.empty()) {
      if (const json* fe = expected("fields")) fields_entries(*fe);
      return;
    }
    auto Y = doc_.fields_of(doc_.symmetries);
    guarded("symmetries_commute", [&] {
      json bad = json::array();
      for (std::size_t i = 0; i < Y.size(); ++i)
        for (std::size_t j = 0; j < model_.basis.size(); ++j)
          if (!lie_bracket(Y[i], model_.basis[j]).is_zero())
            bad.push_back("[" + doc_.symmetries[i] + "," + model_.basis_names[j] + "]");
      property("symmetries_commute", bad.empty(), bad.empty() ? json(nullptr) : bad);
    });
    if (const json* fe = expected("fields")) fields_entries(*fe);
    std::optional<StructureConstants> yc;
    guarded("symmetry_table", [&] {
      yc = structure_constants(Y, opts_.seed);
      std::string table = format_table(*yc, "Y");
      expect("symmetry_table", table, eq_json(table));
    });
    bool want = doc_.eta.kind == EtaRecipe::Kind::Coframe || doc_.expected.contains("coframe") ||
                doc_.expected.contains("coframe_differentials") || doc_.expected.contains("maurer_cartan");
    if (!want) return;
    guarded("coframe", [&] {
      auto U = dual_coframe(Y);
      bool dual = true;
      for (std::size_t i = 0; i < U.size(); ++i)
        for (std::size_t j = 0; j < Y.size(); ++j)
          if (interior(Y[j], U[i]).scalar() != Expr(i == j ? 1 : 0)) dual = false;
      property("coframe_duality", dual);
      expect("coframe", forms_json(U), eq_forms(U));
      if (const json* e = expected("coframe_differentials")) {
        // dU^i = sum_{j<k} a_jk U^j ^ U^k with a_jk = dU^i(Y_j, Y_k)
        json actual = json::object();
        std::vector<std::map<std::pair<std::size_t, std::size_t>, Expr>> coef(U.size());
        for (std::size_t i = 0; i < U.size(); ++i) {
          DiffForm dU = ext_deriv(U[i]);
          json terms = json::array();
          for (std::size_t j = 0; j < Y.size(); ++j)
            for (std::size_t k = j + 1; k < Y.size(); ++k) {
              Expr a = dU.evaluate({Y[j], Y[k]});
              if (a.is_zero()) continue;
              coef[i].emplace(std::make_pair(j, k), a);
              json c = a.as_rational() ? json(rational_str(*a.as_rational())) : json(a.str());
              terms.push_back(json::array({c, j + 1, k + 1}));
            }
          actual[std::to_string(i + 1)] = terms;
        }
        entry("coframe_differentials", *e, actual, [&, coef](const json& t) {
          if (!t.is_object()) return false;
          for (std::size_t i = 0; i < U.size(); ++i) {
            std::string key = std::to_string(i + 1);
            if (!t.contains(key)) continue;  // only the listed displays are compared
            std::map<std::pair<std::size_t, std::size_t>, Expr> want_c;
            for (const auto& term : t[key]) {
              if (!term.is_array() || term.size() != 3) fail(Errc::InvalidInput, "differential terms are [coef, j, k]");
              mpq_class q = term[0].is_string() ? parse_rational(term[0].get<std::string>())
                                                : mpq_class(term[0].get<long>());
              std::size_t j = term[1].get<std::size_t>() - 1, k = term[2].get<std::size_t>() - 1;
              if (j == k) continue;
              if (j > k) {
                std::swap(j, k);
                q = -q;
              }
              auto key2 = std::make_pair(j, k);
              Expr sum = want_c.count(key2) ? want_c.at(key2) + Expr(q) : Expr(q);
              want_c.insert_or_assign(key2, sum);
            }
            std::erase_if(want_c, [](const auto& p) { return p.second.is_zero(); });
            if (want_c.size() != coef[i].size()) return false;
            for (const auto& [jk, a] : coef[i]) {
              auto it = want_c.find(jk);
              if (it == want_c.end() || it->second != a) return false;
            }
          }
          return true;
        });
      }
      if (yc) {
        auto mc = maurer_cartan_check(U, *yc);
        if (const json* e = expected("maurer_cartan")) entry("maurer_cartan", *e, mc.holds, eq_json(mc.holds));
        else property("maurer_cartan", mc.holds);
      }
    });
  }

  void fields_entries(const json& fe) {
    for (const auto& [name, e] : fe.items()) {
      guarded("fields." + name, [&] {
        const VectorField& X = doc_.field(name);
        entry("fields." + name, e, field_json(X), eq_exprs(X.coeffs()));
      });
    }
  }

  void eta() {
    if (doc_.prolong_from) return;
    if (const json* e = expected("max_nonintegrable")) {
      guarded("max_nonintegrable", [&] {
        if (doc_.eta.kind != EtaRecipe::Kind::Build) fail(Errc::InvalidInput, "needs an eta.build distribution");
        bool m = max_nonintegrable(Distribution{doc_.space, doc_.fields_of(doc_.eta.distribution)});
        entry("max_nonintegrable", *e, m, eq_json(m));
      });
    }
    if (const json* e = expected("build")) {
      guarded("build", [&] {
        std::vector<std::string> dist = (*e).at("distribution"), reeb = (*e).at("reeb");
        VecForm w = build_kcontact(Distribution{doc_.space, doc_.fields_of(dist)}, doc_.fields_of(reeb));
        entry("build", *e, forms_json(w.comps()), eq_forms(w.comps()));
        property("build_kcontact", verify_kcontact(w).is_kcontact);
      });
    }
    if (doc_.eta.kind == EtaRecipe::Kind::None) return;
    guarded("eta", [&] {
      model_.eta = eta_of(doc_);
      expect("eta", forms_json(model_.eta->comps()), eq_forms(model_.eta->comps()));
      VecForm d = ext_deriv_k(*model_.eta);
      expect("deta", forms_json(d.comps()), eq_forms(d.comps()));
    });
  }

  void kcontact() {
    if (!model_.eta) return;
    guarded("kcontact", [&] {
      KContactReport r = verify_kcontact(*model_.eta);
      json a = {{"is_kcontact", r.is_kcontact},
                {"k", r.k},
                {"dim", r.dim},
                {"rank_ker_eta", r.rank_ker_eta},
                {"rank_ker_deta", r.rank_ker_deta},
                {"rank_intersection", r.rank_intersection},
                {"failure_reason", failure_name(r.failure_reason)}};
      property("kcontact", r.is_kcontact, a);
      expect("k", r.k, eq_json(r.k));
      if (!r.is_kcontact) return;
      ctx_.emplace(*model_.eta);
      const auto& R = ctx_->reeb();
      json rj = json::array();
      for (const auto& X : R) rj.push_back(field_json(X));
      expect("reeb", rj, eq_fields(R));
      bool dual = true, comm = true;
      VecForm d = ctx_->deta();
      for (std::size_t a = 0; a < R.size(); ++a) {
        for (std::size_t b = 0; b < R.size(); ++b) {
          if (interior((R[a]), (*model_.eta)[b]).scalar() != Expr(a == b ? 1 : 0)) dual = false;
          if (!interior(R[a], d[b]).is_zero()) dual = false;
        }
        for (std::size_t b = a + 1; b < R.size(); ++b)
          if (!lie_bracket(R[a], R[b]).is_zero()) comm = false;
      }
      property("reeb_duality", dual);
      property("reeb_commute", comm);
    });
  }

  void hamiltonians() {
    guarded("hamiltonian_equations", [&] {
      json bad = json::array();
      for (std::size_t a = 0; a < model_.basis.size(); ++a) {
        HamiltonianCheck hc = hamiltonian_check(model_.basis[a], *ctx_);
        if (!hc.is_hamiltonian) bad.push_back(model_.basis_names[a]);
        hams_.push_back(hc.h);
      }
      property("hamiltonian_equations", bad.empty(), bad.empty() ? json(nullptr) : bad);
      if (!bad.empty()) hams_.clear();
    });
    if (hams_.empty()) return;
    if (model_.prolongation) {
      bool same = model_.prolongation->hamiltonians == hams_;
      property("prolonged_hamiltonians", same);
    }
    if (const json* e = expected("hamiltonians")) {
      for (const auto& [name, entry_j] : e->items()) {
        guarded("hamiltonians." + name, [&] {
          std::size_t a = 0;
          while (a < hams_.size() && hname(a) != name) ++a;
          if (a == hams_.size()) fail(Errc::InvalidInput, "no basis field for '" + name + "'");
          entry("hamiltonians." + name, entry_j, kfunction_json(hams_[a]), eq_exprs(hams_[a].comps()));
        });
      }
    }
    if (!basis_c_) return;
    guarded("bracket_table", [&] {
      StructureConstants hc = negated(*basis_c_);
      std::string table = format_table(hc, "h", "{", "}");
      expect("bracket_table", table, eq_json(table));
      // every entry against the literal bracket
      std::size_t r = hams_.size();
      json bad = json::array();
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j) {
          KFunction want = KFunction::zero(model_.space, ctx_->k());
          for (std::size_t g = 0; g < r; ++g)
            if (hc[i][j][g] != 0) want = want + Expr(hc[i][j][g]) * hams_[g];
          KFunction got = kcontact_bracket(hams_[i], hams_[j], *ctx_, model_.basis[i], model_.basis[j]);
          if (got != want) bad.push_back("{" + hname(i) + "," + hname(j) + "}");
        }
      property("bracket_consistency", bad.empty(), bad.empty() ? json(nullptr) : bad);
    });
  }

  std::vector<std::size_t> indices_of(const std::vector<std::string>& names) const {
    std::vector<std::size_t> out;
    for (const auto& n : names) {
      auto it = std::find(model_.basis_names.begin(), model_.basis_names.end(), n);
      if (it == model_.basis_names.end()) fail(Errc::InvalidInput, "'" + n + "' is not a basis field");
      out.push_back(static_cast<std::size_t>(it - model_.basis_names.begin()));
    }
    return out;
  }

  void derived() {
    if (const json* e = expected("projectable")) {
      guarded("projectable", [&] {
        Projectability p = projectability_check(model_.basis, *ctx_);
        json off = json::array();
        for (auto [b, a] : p.offending) off.push_back(json::array({b + 1, model_.basis_names[a]}));
        json a = off.empty() ? json(p.projectable) : json{{"projectable", p.projectable}, {"offending", off}};
        bool got = p.projectable;
        entry("projectable", *e, a, [got](const json& t) { return t.is_boolean() && t.get<bool>() == got; });
      });
    }
    if (const json* e = expected("dissipated")) {
      guarded("dissipated", [&] {
        if (!e->contains("hamiltonian")) fail(Errc::InvalidInput, "dissipated: missing 'hamiltonian' coefficients");
        const json& cj = (*e)["hamiltonian"];
        if (!cj.is_array() || cj.size() != hams_.size())
          fail(Errc::InvalidInput, "dissipated: one coefficient per basis field");
        KFunction h = KFunction::zero(model_.space, ctx_->k());
        VectorField Xh = VectorField::zero(model_.space);
        for (std::size_t a = 0; a < hams_.size(); ++a) {
          Expr c = doc_.expr(cj[a].get<std::string>());
          if (c.is_zero()) continue;
          h = h + c * hams_[a];
          Xh = Xh + c * model_.basis[a];
        }
        json names = json::array();
        for (std::size_t a = 0; a < hams_.size(); ++a)
          if (is_dissipated(hams_[a], h, *ctx_, Xh, model_.basis[a])) names.push_back(hname(a));
        entry("dissipated", *e, names, eq_json(names));
      });
    }
    if (const json* e = expected("momentum")) {
      guarded("momentum", [&] {
        auto theta = rationals(e->at("theta"), "momentum.theta");
        auto idx = indices_of(e->at("fields").get<std::vector<std::string>>());
        std::vector<VectorField> fs;
        std::vector<KFunction> hs;
        for (auto i : idx) {
          fs.push_back(model_.basis[i]);
          hs.push_back(hams_[i]);
        }
        std::map<std::string, mpq_class> fixed;
        if (e->contains("zero_set"))
          for (const auto& [v, val] : (*e)["zero_set"].items()) {
            if (!model_.space->find(v)) fail(Errc::UnknownSymbol, "momentum.zero_set: '" + v + "'");
            fixed.emplace(v, parse_rational(val.is_string() ? val.get<std::string>() : val.dump()));
          }
        std::size_t n = e->value("samples", std::size_t{20});
        std::mt19937_64 rng(opts_.seed);
        std::uniform_int_distribution<int> pick(-30, 30);
        std::vector<std::map<std::string, PointValue>> samples;
        for (std::size_t s = 0; s < n; ++s) {
          std::map<std::string, PointValue> pt;
          for (std::size_t i = 0; i < model_.space->nsymbols(); ++i) {
            const std::string& v = model_.space->symbol_name(i);
            auto it = fixed.find(v);
            pt.insert_or_assign(v, PointValue(it != fixed.end() ? it->second : mpq_class(pick(rng), 10)));
          }
          samples.push_back(std::move(pt));
        }
        MomentumReport m = momentum_invariance(fs, hs, theta, *ctx_, samples);
        json a = {{"invariant", m.invariant},
                  {"samples", m.samples},
                  {"max_level", m.max_level},
                  {"max_reeb", m.max_reeb},
                  {"max_flow", m.max_flow}};
        entry("momentum", *e, a, [m](const json& t) { return t.is_boolean() && t.get<bool>() == m.invariant; });
      });
    }
    if (const json* e = expected("companion")) {
      guarded("companion", [&] {
        companion_ = companion_from(*e);
        json a = companion_->nilpotency_order ? json(*companion_->nilpotency_order) : json(nullptr);
        entry("companion", *e, a, eq_json(a));
      });
    }
  }

  CompanionSystem companion_from(const json& e) {
    auto theta = rationals(e.at("theta"), "companion.theta");
    std::vector<std::string> coeffs;
    if (e.contains("coefficients")) coeffs = e["coefficients"].get<std::vector<std::string>>();
    return companion_system(model_.basis, hams_, *ctx_, theta, coeffs, e.value("allow_dependent", false), opts_.seed);
  }

  // --- numeric ---------------------------------------------------------------

  double tol(const json& e, double dflt) const {
    if (opts_.tol) return *opts_.tol;
    return e.contains("tol") ? e["tol"].get<double>() : dflt;
  }

  // Expression over a trajectory; hA_a stands for component a of the k-function of basis field A.
  Expr trajectory_expr(const std::string& text, const SpacePtr& ts) {
    static const std::regex hre(R"(\bh(\d+)_(\d+)\b)");
    std::vector<std::string> vars = ts->vars();
    std::map<std::string, Expr> bind;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), hre); it != std::sregex_iterator(); ++it) {
      std::string name = (*it)[0];
      if (bind.count(name)) continue;
      std::size_t a = std::stoul((*it)[1]), c = std::stoul((*it)[2]);
      if (a == 0 || a > hams_.size() || c == 0 || c > ctx_->k())
        fail(Errc::UnknownSymbol, "'" + name + "' does not name a k-function component");
      bind.emplace(name, hams_[a - 1][c - 1].rebase(ts));
      vars.push_back(name);
    }
    if (bind.empty()) return parse_expr(text, ts);
    return substitute(parse_expr(text, make_space(vars, ts->consts())), bind, ts);
  }

  IntegrationSetup setup_from(const json& e, double t1, std::vector<std::string> quads = {}) {
    IntegrationSetup s;
    const json& pj = e.at("profiles");
    if (!pj.is_object()) fail(Errc::InvalidInput, "profiles: expected an object keyed by coefficient name");
    for (const auto& [name, spec] : pj.items()) {
      auto it = std::find(doc_.coefficients.begin(), doc_.coefficients.end(), name);
      if (it == doc_.coefficients.end()) fail(Errc::InvalidInput, "profiles: unknown coefficient '" + name + "'");
      s.fields.push_back(model_.basis.at(static_cast<std::size_t>(it - doc_.coefficients.begin())));
      s.profiles.push_back(Profile::parse(spec.get<std::string>(), 0, t1));
      s.labels.push_back(name);
    }
    for (const auto& q : quads) {
      auto it = std::find(s.labels.begin(), s.labels.end(), q);
      if (it == s.labels.end()) fail(Errc::InvalidInput, "quadrature '" + q + "' has no profile");
      s.quadratures.push_back(static_cast<std::size_t>(it - s.labels.begin()));
    }
    return s;
  }

  std::map<std::string, double> const_values() const {
    std::map<std::string, double> c;
    const auto& names = model_.space->consts();
    for (std::size_t i = 0; i < names.size(); ++i) c[names[i]] = 0.5 + 0.1 * static_cast<double>(i);
    return c;
  }

  void numerics() {
    for (std::size_t i = 0; i < doc_.numeric.size(); ++i) {
      const json& e = doc_.numeric[i];
      std::string kind = e.value("kind", std::string("?"));
      std::string name = "numeric." + std::to_string(i + 1) + "." + kind;
      guarded(name, [&] { numeric(name, kind, e); });
    }
  }

  void numeric(const std::string& name, const std::string& kind, const json& e) {
    auto needs_ctx = [&] {
      if (!ctx_ || hams_.empty()) fail(Errc::NotKContact, "needs a verified k-contact form and Hamiltonians");
    };
    if (kind == "riccati") {
      auto specs = e.at("profiles").get<std::vector<std::string>>();
      if (specs.size() != 3) fail(Errc::InvalidInput, "riccati: three profiles");
      double t1 = number(e, "t1", name);
      auto r = riccati_superposition_check(Profile::parse(specs[0], 0, t1), Profile::parse(specs[1], 0, t1),
                                           Profile::parse(specs[2], 0, t1), doubles(e.at("seeds"), name),
                                           number(e, "k", name), 0, t1, number(e, "step", name), tol(e, 1e-6));
      push(numeric_check(name, r.pass, json{{"max_deviation", r.max_deviation}, {"x4_initial", r.x4_initial}},
                         tol(e, 1e-6)));
    } else if (kind == "constant") {
      double t1 = number(e, "t1", name);
      std::vector<std::string> quads;
      if (e.contains("quadratures")) quads = e["quadratures"].get<std::vector<std::string>>();
      IntegrationSetup s = setup_from(e, t1, quads);
      auto cv = const_values();
      s.consts = cv;
      Trajectory tr = integrate(s, doubles(e.at("x0"), name), 0, t1, number(e, "step", name));
      std::string inv = e.at("invariant").get<std::string>();
      if (inv.find('h') != std::string::npos) needs_ctx();
      SpacePtr ts = trajectory_space(tr, model_.space->consts());
      Expr I = trajectory_expr(inv, ts);
      double t = tol(e, 1e-6);
      auto r = check_constant(tr, I, t, cv);
      push(numeric_check(name, r.pass, json{{"invariant", inv}, {"max_drift", r.max_drift}, {"initial", r.initial}}, t));
    } else if (kind == "third_difference") {
      needs_ctx();
      double t1 = number(e, "t1", name);
      IntegrationSetup s = setup_from(e, t1);
      auto cv = const_values();
      s.consts = cv;
      Trajectory tr = integrate(s, doubles(e.at("x0"), name), 0, t1, number(e, "step", name));
      SpacePtr ts = trajectory_space(tr, model_.space->consts());
      double H = number(e, "H", name), worst = 0;
      json what;
      if (e.contains("theta")) {
        auto theta = rationals(e["theta"], name + ".theta");
        for (const auto& h : hams_) worst = std::max(worst, third_difference(tr, pairing(h, theta).rebase(ts), H, cv));
        what = e["theta"];
      } else {
        std::string inv = e.at("invariant").get<std::string>();
        worst = third_difference(tr, trajectory_expr(inv, ts), H, cv);
        what = inv;
      }
      double t = tol(e, 1e-4);
      push(numeric_check(name, worst < t, json{{"of", what}, {"max_third_difference", worst}}, t));
    } else if (kind == "companion") {
      needs_ctx();
      const json* ce = doc_.expected.contains("companion") ? &doc_.expected["companion"] : nullptr;
      const json& src = e.contains("theta") ? e : (ce ? *ce : e);
      if (!companion_ || e.contains("theta")) companion_ = companion_from(src);
      double t1 = number(e, "t1", name);
      std::vector<Profile> ps;
      const json& pj = e.at("profiles");
      for (std::size_t b = 1; b <= pj.size(); ++b) {
        std::string key = "b" + std::to_string(b);
        if (!pj.contains(key)) fail(Errc::InvalidInput, "companion profiles are b1..bp");
        ps.push_back(Profile::parse(pj[key].get<std::string>(), 0, t1));
      }
      double t = tol(e, 1e-6);
      auto r = companion_check(*companion_, model_.basis, ps, doubles(e.at("x0"), name), doubles(e.at("f0"), name), 0,
                               t1, number(e, "step", name), t, const_values());
      push(numeric_check(name, r.pass, json{{"max_drift", r.max_drift}}, t));
    } else if (kind == "spot_check") {
      needs_ctx();
      int points = e.value("points", 10);
      double worst = 0;
      for (const auto& X : model_.basis)
        worst = std::max(worst, hamiltonian_spot_check(X, *ctx_, opts_.seed, points, const_values()));
      double t = tol(e, 1e-9);
      push(numeric_check(name, worst < t, json{{"max_residual", worst}, {"points", points}}, t));
    } else if (kind == "fd") {
      std::map<std::string, double> pt;
      for (const auto& [k, v] : e.at("point").items()) pt[k] = v.get<double>();
      double t = tol(e, 1e-6);
      auto r = fd_validate(doc_.expr(e.at("expr").get<std::string>()), e.at("var").get<std::string>(), pt, 1e-5, t);
      push(numeric_check(name, r.pass, json{{"symbolic", r.symbolic}, {"numeric", r.numeric}, {"rel_error", r.rel_error}},
                         t));
    } else {
      fail(Errc::InvalidInput, "unknown numeric kind '" + kind + "'");
    }
  }

  static Check numeric_check(const std::string& name, bool ok, json actual, double tol) {
    return Check{name, ok ? "pass" : "fail", json{{"tol", tol}}, std::move(actual), nullptr, "numeric", ""};
  }

  ExampleReport finish() {
    for (const auto& [key, v] : doc_.expected.items())
      if (!used_.count(key))
        push(Check{"expected." + key, "fail", v, nullptr, nullptr, "", "expectation was not checked by the pipeline"});
    return std::move(rep_);
  }

  const Document& doc_;
  RunOptions opts_;
  ExampleReport rep_;
  Model model_;
  std::set<std::string> used_;
  std::optional<StructureConstants> basis_c_;
  std::optional<KContactForm> ctx_;
  std::vector<KFunction> hams_;
  std::optional<CompanionSystem> companion_;
};

std::string fmt_json(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

}  // namespace

bool ExampleReport::pass() const {
  return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.failed(); });
}

std::size_t ExampleReport::count(const std::string& status) const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [&](const Check& c) { return c.status == status; }));
}

json ExampleReport::to_json() const {
  json cs = json::array();
  for (const auto& c : checks) {
    json o = {{"name", c.name}, {"status", c.status}, {"expected", c.expected}, {"actual", c.actual}};
    if (!c.printed.is_null()) o["printed"] = c.printed;
    o["provenance"] = c.provenance;
    o["note"] = c.note;
    cs.push_back(std::move(o));
  }
  json counts = json::object();
  for (const char* s : {"match", "recomputed", "divergence", "pass", "fail"}) counts[s] = count(s);
  return json{{"example", example}, {"title", title}, {"pass", pass()}, {"counts", counts}, {"checks", cs}};
}

std::string ExampleReport::to_text() const {
  std::ostringstream os;
  os << "example " << example;
  if (!title.empty()) os << ": " << title;
  os << "\n";
  for (const auto& c : checks) {
    os << "  " << c.status << std::string(c.status.size() < 11 ? 11 - c.status.size() : 1, ' ') << c.name;
    if (c.status == "pass" && !c.actual.is_null() && c.provenance == "numeric") os << "  " << c.actual.dump();
    os << "\n";
    bool detail = c.status == "fail" || c.status == "recomputed" || c.status == "divergence";
    if (detail) {
      if (!c.expected.is_null()) os << "      expected: " << fmt_json(c.expected) << "\n";
      if (!c.printed.is_null()) os << "      printed:  " << fmt_json(c.printed) << "\n";
      if (!c.actual.is_null()) os << "      actual:   " << fmt_json(c.actual) << "\n";
    }
    if (!c.note.empty() && (detail || c.status == "match")) os << "      note: " << c.note << "\n";
  }
  os << "summary: " << checks.size() << " checks, " << count("match") << " match, " << count("recomputed")
     << " recomputed, " << count("divergence") << " divergence, " << count("pass") << " pass, " << count("fail")
     << " fail: " << (pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::vector<std::string> example_names() {
  std::vector<std::string> out;
  for (const auto& [n, _] : embedded_files()) out.emplace_back(n);
  std::sort(out.begin(), out.end());
  return out;
}

std::string canonical_name(const std::string& name) {
  if (name == "control") return "control2";
  for (const auto& [n, _] : embedded_files())
    if (n == name) return name;
  fail(Errc::UnknownExample, "no example named '" + name + "'");
}

const std::string& example_text(const std::string& name) {
  static const std::map<std::string, std::string> texts = [] {
    std::map<std::string, std::string> m;
    for (const auto& [n, t] : embedded_files()) m.emplace(std::string(n), std::string(t));
    return m;
  }();
  return texts.at(canonical_name(name));
}

Document example_document(const std::string& name) {
  Document d = parse_document_text(example_text(name));
  if (d.name.empty()) d.name = canonical_name(name);
  return d;
}

ExampleReport run_document(const Document& doc, const RunOptions& opts) { return Runner(doc, opts).run(); }

ExampleReport run_example(const std::string& name, const RunOptions& opts) {
  return run_document(example_document(name), opts);
}

std::vector<ExampleReport> run_all(const RunOptions& opts, unsigned threads) {
  auto names = example_names();
  std::vector<ExampleReport> out(names.size());
  std::vector<std::string> errors(names.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(names.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < names.size();) {
      try {
        out[i] = run_example(names[i], opts);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (!errors[i].empty()) {
      out[i].example = names[i];
      out[i].checks.push_back(Check{"load", "fail", nullptr, nullptr, nullptr, "", errors[i]});
    }
  return out;
}

}  // namespace kontact::corpus
