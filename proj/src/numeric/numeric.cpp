#include "kontact/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "kontact/error.hpp"

namespace kontact {

// ---- profiles

Profile Profile::constant(double c) {
  Profile p;
  p.kind_ = Kind::Constant;
  p.c_ = {c};
  return p;
}

Profile Profile::polynomial(std::vector<double> ascending) {
  if (ascending.empty()) ascending.push_back(0);
  Profile p;
  p.kind_ = Kind::Polynomial;
  p.c_ = std::move(ascending);
  return p;
}

Profile Profile::table(std::vector<double> times, std::vector<double> values) {
  if (times.size() != values.size() || times.size() < 2) fail(Errc::InvalidInput, "table needs matching times/values, at least 2");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) fail(Errc::InvalidInput, "table times must increase strictly");
  Profile p;
  p.kind_ = Kind::Table;
  p.t_ = std::move(times);
  p.v_ = std::move(values);
  return p;
}

Profile Profile::sine_table(double a, double w, double phi, double t0, double t1, std::size_t n) {
  if (!(t1 > t0) || n < 2) fail(Errc::InvalidInput, "sine table needs t1 > t0 and n >= 2");
  std::vector<double> ts(n + 1), vs(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    ts[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n);
    vs[i] = a * std::sin(w * ts[i] + phi);
  }
  Profile p = table(std::move(ts), std::move(vs));
  std::ostringstream os;
  os << "sin:" << a << "," << w << "," << phi;
  p.label_ = os.str();
  return p;
}

namespace {

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      fail(Errc::InvalidInput, "bad number '" + item + "' in profile");
    }
  }
  return out;
}

}  // namespace

Profile Profile::parse(const std::string& spec, double t0, double t1) {
  if (spec.rfind("poly:", 0) == 0) return polynomial(parse_numbers(spec.substr(5)));
  if (spec.rfind("sin:", 0) == 0) {
    auto v = parse_numbers(spec.substr(4));
    if (v.size() != 3) fail(Errc::InvalidInput, "sin profile needs a,w,phi");
    return sine_table(v[0], v[1], v[2], t0, t1);
  }
  auto v = parse_numbers(spec);
  if (v.size() != 1) fail(Errc::InvalidInput, "profile '" + spec + "' is not a number, poly: or sin: spec");
  return constant(v[0]);
}

double Profile::operator()(double t) const {
  switch (kind_) {
    case Kind::Constant: return c_[0];
    case Kind::Polynomial: {
      double s = 0;
      for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * t + *it;
      return s;
    }
    case Kind::Table: break;
  }
  std::size_t n = t_.size();
  if (t <= t_.front()) return v_.front();
  if (t >= t_.back()) return v_.back();
  std::size_t i = static_cast<std::size_t>(std::upper_bound(t_.begin(), t_.end(), t) - t_.begin()) - 1;
  double h = t_[i + 1] - t_[i], s = (t - t_[i]) / h;
  auto slope = [&](std::size_t j) {
    if (j == 0) return (v_[1] - v_[0]) / (t_[1] - t_[0]);
    if (j == n - 1) return (v_[n - 1] - v_[n - 2]) / (t_[n - 1] - t_[n - 2]);
    return (v_[j + 1] - v_[j - 1]) / (t_[j + 1] - t_[j - 1]);
  };
  double m0 = slope(i) * h, m1 = slope(i + 1) * h;
  double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * v_[i] + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * v_[i + 1] + (s3 - s2) * m1;
}

double Profile::integral(double t0, double t1) const {
  if (kind_ == Kind::Table) fail(Errc::InvalidInput, "tabulated profile has no closed-form integral");
  auto F = [&](double t) {
    double s = 0;
    for (std::size_t i = c_.size(); i-- > 0;) s = s * t + c_[i] / static_cast<double>(i + 1);
    return s * t;
  };
  return F(t1) - F(t0);
}

bool Profile::covers(double t0, double t1) const {
  if (kind_ != Kind::Table) return true;
  double eps = 1e-12 * std::max(1.0, std::fabs(t_.back()));
  return t0 >= t_.front() - eps && t1 <= t_.back() + eps;
}

std::string Profile::describe() const {
  if (!label_.empty()) return label_;
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::Constant: os << c_[0]; break;
    case Kind::Polynomial:
      os << "poly:";
      for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i];
      break;
    case Kind::Table: os << "table[" << t_.size() << "]"; break;
  }
  return os.str();
}

// ---- integration

namespace {

struct Compiled {
  Poly num, den;
};

Compiled compile(const Expr& e) { return {e.num(), e.den()}; }

double eval_guarded(const Compiled& c, const std::vector<double>& vals, double t) {
  double d = c.den.eval(vals);
  if (std::isfinite(d) && std::fabs(d) >= 1e-12) {
    double v = c.num.eval(vals) / d;
    if (std::isfinite(v)) return v;
  }
  std::ostringstream os;
  os.precision(17);
  os << "denominator below 1e-12 (or non-finite value) at t = " << t << ", state (";
  for (std::size_t i = 0; i < vals.size(); ++i) os << (i ? ", " : "") << vals[i];
  os << ")";
  fail(Errc::PoleEncountered, os.str());
}

using Rhs = std::function<void(double, const std::vector<double>&, std::vector<double>&)>;

// Denominators of the right-hand side; a sign change between two accepted
// states means the step jumped over a pole.
struct PoleWatch {
  std::vector<Poly> dens;
  std::vector<double> base;
  std::size_t n = 0;
  void add(const Poly& d) {
    if (d.is_constant()) return;
    for (const auto& e : dens)
      if (e == d) return;
    dens.push_back(d);
  }
  void check(double t, const std::vector<double>& a, const std::vector<double>& b) const {
    if (dens.empty()) return;
    std::vector<double> va = base, vb = base;
    std::copy(a.begin(), a.begin() + static_cast<long>(n), va.begin());
    std::copy(b.begin(), b.begin() + static_cast<long>(n), vb.begin());
    for (const auto& d : dens) {
      double x = d.eval(va), y = d.eval(vb);
      if ((x > 0) != (y > 0) || !std::isfinite(y)) {
        std::ostringstream os;
        os.precision(17);
        os << "a denominator changes sign during the step ending at t = " << t;
        fail(Errc::PoleEncountered, os.str());
      }
    }
  }
};

Trajectory rk4(const Rhs& f, std::vector<double> y, double t0, double t1, double step, const PoleWatch* watch = nullptr) {
  if (!(step > 0) || !(t1 > t0)) fail(Errc::InvalidInput, "need step > 0 and t1 > t0");
  auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / step - 1e-9));
  if (n == 0) n = 1;
  double h = (t1 - t0) / static_cast<double>(n);
  Trajectory tr;
  tr.step = h;
  tr.times.reserve(n + 1);
  tr.states.reserve(n + 1);
  tr.times.push_back(t0);
  tr.states.push_back(y);
  std::size_t m = y.size();
  std::vector<double> k1(m), k2(m), k3(m), k4(m), tmp(m);
  for (std::size_t s = 0; s < n; ++s) {
    double t = t0 + h * static_cast<double>(s);
    f(t, y, k1);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    f(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    f(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * k3[i];
    f(t + h, tmp, k4);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    if (watch) watch->check(t + h, y, tmp);
    y.swap(tmp);
    tr.times.push_back(s + 1 == n ? t1 : t0 + h * static_cast<double>(s + 1));
    tr.states.push_back(y);
  }
  return tr;
}

std::vector<double> symbol_values(const SpacePtr& s, const std::map<std::string, double>& consts) {
  std::vector<double> vals(s->nsymbols());
  for (std::size_t i = s->dim(); i < s->nsymbols(); ++i) {
    auto it = consts.find(s->symbol_name(i));
    if (it == consts.end()) fail(Errc::UnboundSymbol, "no value for constant '" + s->symbol_name(i) + "'");
    vals[i] = it->second;
  }
  return vals;
}

}  // namespace

Trajectory integrate(const IntegrationSetup& setup, const std::vector<double>& x0, double t0, double t1, double step) {
  if (setup.fields.empty()) fail(Errc::InvalidInput, "no vector fields");
  if (setup.profiles.size() != setup.fields.size()) fail(Errc::LengthMismatch, "one profile per vector field");
  SpacePtr s = setup.fields[0].space();
  for (const auto& X : setup.fields) s = common_space(s, X.space());
  std::size_t n = s->dim();
  if (x0.size() != n) fail(Errc::LengthMismatch, "initial state has " + std::to_string(x0.size()) + " entries, chart has " + std::to_string(n));
  for (const auto& p : setup.profiles)
    if (!p.covers(t0, t1)) fail(Errc::InvalidInput, "profile table does not cover the integration interval");
  std::vector<std::string> labels = setup.labels;
  for (std::size_t b = labels.size(); b < setup.profiles.size(); ++b) labels.push_back("b" + std::to_string(b + 1));

  std::vector<std::vector<Compiled>> comp(setup.fields.size());
  for (std::size_t b = 0; b < setup.fields.size(); ++b)
    for (std::size_t i = 0; i < n; ++i) comp[b].push_back(compile(setup.fields[b][i]));
  std::vector<double> base = symbol_values(s, setup.consts);
  for (auto q : setup.quadratures)
    if (q >= setup.profiles.size()) fail(Errc::InvalidInput, "quadrature index out of range");

  Rhs f = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
    std::vector<double> vals = base;
    std::copy(y.begin(), y.begin() + static_cast<long>(n), vals.begin());
    std::fill(dy.begin(), dy.end(), 0.0);
    for (std::size_t b = 0; b < comp.size(); ++b) {
      double bt = setup.profiles[b](t);
      if (bt == 0) continue;
      for (std::size_t i = 0; i < n; ++i)
        if (!comp[b][i].num.is_zero()) dy[i] += bt * eval_guarded(comp[b][i], vals, t);
    }
    for (std::size_t q = 0; q < setup.quadratures.size(); ++q) dy[n + q] = setup.profiles[setup.quadratures[q]](t);
  };
  PoleWatch watch{{}, base, n};
  for (const auto& row : comp)
    for (const auto& c : row) watch.add(c.den);
  std::vector<double> y = x0;
  y.resize(n + setup.quadratures.size(), 0.0);
  {
    std::vector<double> probe(y.size());
    f(t0, y, probe);
  }
  Trajectory tr = rk4(f, y, t0, t1, step, &watch);
  tr.names = s->vars();
  for (auto q : setup.quadratures) tr.names.push_back("int_" + labels[q]);
  return tr;
}

SpacePtr trajectory_space(const Trajectory& traj, const std::vector<std::string>& consts) {
  std::vector<std::string> vars = traj.names;
  vars.push_back("t");
  return make_space(vars, consts);
}

namespace {

// I evaluated at sample j of the trajectory; I lives on a space whose variables
// are a subset of the trajectory names plus "t".
struct TrajEval {
  Compiled c;
  std::vector<std::size_t> var_to_state;  // index into state, or npos for t
  std::vector<double> vals;
  TrajEval(const Trajectory& traj, const Expr& I, const std::map<std::string, double>& consts) : c(compile(I)) {
    const SpacePtr& s = I.space();
    if (!s) return;
    vals = symbol_values(s, consts);
    for (std::size_t i = 0; i < s->dim(); ++i) {
      const std::string& name = s->vars()[i];
      if (name == "t") {
        var_to_state.push_back(static_cast<std::size_t>(-1));
        continue;
      }
      auto it = std::find(traj.names.begin(), traj.names.end(), name);
      if (it == traj.names.end()) {
        if (I.uses(i)) fail(Errc::UnboundSymbol, "'" + name + "' is not a trajectory state");
        var_to_state.push_back(static_cast<std::size_t>(-2));
        continue;
      }
      var_to_state.push_back(static_cast<std::size_t>(it - traj.names.begin()));
    }
  }
  double at(const Trajectory& traj, std::size_t j) {
    for (std::size_t i = 0; i < var_to_state.size(); ++i) {
      std::size_t m = var_to_state[i];
      if (m == static_cast<std::size_t>(-1))
        vals[i] = traj.times[j];
      else if (m != static_cast<std::size_t>(-2))
        vals[i] = traj.states[j][m];
    }
    return eval_guarded(c, vals, traj.times[j]);
  }
};

}  // namespace

ConstantReport check_constant(const Trajectory& traj, const Expr& I, double tol,
                              const std::map<std::string, double>& consts) {
  TrajEval ev(traj, I, consts);
  ConstantReport r;
  r.initial = ev.at(traj, 0);
  for (std::size_t j = 1; j < traj.times.size(); ++j) r.max_drift = std::max(r.max_drift, std::fabs(ev.at(traj, j) - r.initial));
  r.pass = r.max_drift < tol;
  return r;
}

double third_difference(const Trajectory& traj, const Expr& I, double H, const std::map<std::string, double>& consts) {
  auto stride = static_cast<std::size_t>(std::llround(H / traj.step));
  if (stride == 0) stride = 1;
  double Hs = traj.step * static_cast<double>(stride);
  TrajEval ev(traj, I, consts);
  std::vector<double> v;
  for (std::size_t j = 0; j < traj.times.size(); ++j) v.push_back(ev.at(traj, j));
  double worst = 0;
  for (std::size_t j = 0; j + 3 * stride < v.size(); ++j) {
    double d3 = v[j + 3 * stride] - 3 * v[j + 2 * stride] + 3 * v[j + stride] - v[j];
    worst = std::max(worst, std::fabs(d3) / (Hs * Hs * Hs));
  }
  return worst;
}

RiccatiReport riccati_superposition_check(const Profile& b1, const Profile& b2, const Profile& b3,
                                          const std::vector<double>& seeds, double k, double t0, double t1,
                                          double step, double tol) {
  if (seeds.size() != 3) fail(Errc::InvalidInput, "need three seed values");
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      if (seeds[i] == seeds[j]) fail(Errc::DegenerateSeeds, "seeds " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " coincide");
  auto formula = [&](double x1, double x2, double x3, double& den) {
    den = x3 - x2 - k * (x3 - x1);
    return (x1 * (x3 - x2) - k * x2 * (x3 - x1)) / den;
  };
  double den0 = 0;
  double x4 = formula(seeds[0], seeds[1], seeds[2], den0);
  if (std::fabs(den0) < 1e-12) fail(Errc::DegenerateSeeds, "superposition denominator vanishes at t0 for this k");
  Rhs f = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
    double a = b1(t), b = b2(t), c = b3(t);
    for (std::size_t i = 0; i < y.size(); ++i) dy[i] = a + b * y[i] + c * y[i] * y[i];
  };
  Trajectory tr = rk4(f, {seeds[0], seeds[1], seeds[2], x4}, t0, t1, step);
  RiccatiReport r;
  r.k = k;
  r.x4_initial = x4;
  for (std::size_t j = 0; j < tr.times.size(); ++j) {
    const auto& y = tr.states[j];
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || !std::isfinite(y[2]) || !std::isfinite(y[3]))
      fail(Errc::PoleEncountered, "a particular solution blew up before t = " + std::to_string(tr.times[j]));
    double den = 0;
    double rec = formula(y[0], y[1], y[2], den);
    if (std::fabs(den) < 1e-9) fail(Errc::PoleEncountered, "superposition denominator vanishes at t = " + std::to_string(tr.times[j]));
    r.max_deviation = std::max(r.max_deviation, std::fabs(rec - y[3]));
  }
  r.pass = r.max_deviation < tol;
  return r;
}

FdReport fd_validate(const Expr& e, const std::string& var, const std::map<std::string, double>& point, double h,
                     double tol) {
  const SpacePtr& s = e.space();
  FdReport r;
  if (!s) {
    r.pass = true;
    return r;
  }
  auto vi = s->find_var(var);
  if (!vi) fail(Errc::UnknownSymbol, "'" + var + "' is not a chart variable");
  std::vector<double> vals(s->nsymbols());
  for (std::size_t i = 0; i < s->nsymbols(); ++i) {
    auto it = point.find(s->symbol_name(i));
    if (it == point.end()) {
      if (e.uses(i)) fail(Errc::UnboundSymbol, "no value for '" + s->symbol_name(i) + "'");
      continue;
    }
    vals[i] = it->second;
  }
  Expr d = e.diff(*vi);
  std::vector<double> lo = vals, hi = vals;
  lo[*vi] -= h;
  hi[*vi] += h;
  double dl = e.den().eval(lo), dm = e.den().eval(vals), dh = e.den().eval(hi);
  if (std::fabs(dm) < 1e-12 || std::fabs(dl) < 1e-12 || std::fabs(dh) < 1e-12 || (dl > 0) != (dm > 0) ||
      (dh > 0) != (dm > 0))
    fail(Errc::PoleEncountered, "a denominator vanishes within the difference stencil around " + var);
  Compiled c = compile(e), cd = compile(d);
  r.symbolic = eval_guarded(cd, vals, 0);
  r.numeric = (eval_guarded(c, hi, 0) - eval_guarded(c, lo, 0)) / (2 * h);
  r.rel_error = std::fabs(r.numeric - r.symbolic) / std::max(1.0, std::fabs(r.symbolic));
  r.pass = r.rel_error < tol;
  return r;
}

double hamiltonian_spot_check(const VectorField& X, const KContactForm& ctx, std::uint64_t seed, int points,
                              const std::map<std::string, double>& consts) {
  const SpacePtr& s = ctx.space();
  std::size_t n = s->dim(), k = ctx.k();
  KFunction h = hamiltonian_of(X, ctx);
  // Pieces as separate expressions; the identity is assembled in floating point.
  std::vector<Expr> pieces;
  for (std::size_t i = 0; i < n; ++i) pieces.push_back(X[i]);
  std::vector<std::vector<Expr>> eta(k), deta(k);
  for (std::size_t a = 0; a < k; ++a) {
    eta[a] = ctx.eta()[a].one_form_coeffs();
    deta[a].assign(n * n, Expr());
    for (const auto& [idx, e] : ctx.deta()[a].terms()) {
      deta[a][idx[0] * n + idx[1]] = e;
      deta[a][idx[1] * n + idx[0]] = -e;
    }
  }
  std::vector<std::vector<Expr>> dh(k), R(k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t i = 0; i < n; ++i) dh[a].push_back(h[a].diff(i));
    R[a] = ctx.reeb()[a].coeffs();
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  std::vector<double> vals = symbol_values(s, consts);
  auto ev = [&](const Expr& e) { return eval_guarded(compile(e), vals, 0); };
  double worst = 0;
  int done = 0;
  for (int tries = 0; done < points && tries < 100 * points; ++tries) {
    for (std::size_t i = 0; i < n; ++i) vals[i] = U(rng);
    try {
      std::vector<double> Xv(n);
      for (std::size_t i = 0; i < n; ++i) Xv[i] = ev(X[i]);
      for (std::size_t a = 0; a < k; ++a) {
        std::vector<double> Rh(k);
        for (std::size_t b = 0; b < k; ++b) {
          double v = 0;
          for (std::size_t j = 0; j < n; ++j) v += ev(R[b][j]) * ev(dh[a][j]);
          Rh[b] = v;
        }
        double contr = 0;
        for (std::size_t j = 0; j < n; ++j) contr += ev(eta[a][j]) * Xv[j];
        worst = std::max(worst, std::fabs(contr + ev(h[a])));
        for (std::size_t i = 0; i < n; ++i) {
          // (ι_X dη)_i = sum_j X^j dη_{ji}
          double v = -ev(dh[a][i]);
          for (std::size_t j = 0; j < n; ++j) v += Xv[j] * ev(deta[a][j * n + i]);
          for (std::size_t b = 0; b < k; ++b) v += Rh[b] * ev(eta[b][i]);
          worst = std::max(worst, std::fabs(v));
        }
      }
      ++done;
    } catch (const Error& e) {
      if (e.code() != Errc::PoleEncountered) throw;
    }
  }
  if (done < points) fail(Errc::PoleEncountered, "could not find enough regular sample points");
  return worst;
}

CompanionRun companion_check(const CompanionSystem& cs, const std::vector<VectorField>& basis,
                             const std::vector<Profile>& profiles, const std::vector<double>& x0,
                             const std::vector<double>& f0, double t0, double t1, double step, double tol,
                             const std::map<std::string, double>& consts) {
  std::size_t r = basis.size();
  if (cs.coeffs.size() != r || f0.size() != r) fail(Errc::LengthMismatch, "companion data does not match the basis");
  const SpacePtr& s = cs.space;
  std::size_t n = s->dim();
  if (x0.size() != n) fail(Errc::LengthMismatch, "initial state length");
  // profiles bind b1..b_p; every other constant comes from consts
  std::vector<std::size_t> bidx;
  for (std::size_t b = 0; b < profiles.size(); ++b) {
    auto i = s->find("b" + std::to_string(b + 1));
    if (!i) fail(Errc::InvalidInput, "no coefficient b" + std::to_string(b + 1));
    bidx.push_back(*i);
  }
  std::vector<Compiled> coeff, M;
  for (const auto& c : cs.coeffs) coeff.push_back(compile(c));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) M.push_back(compile(cs.M(a, b)));
  std::vector<std::vector<Compiled>> X(r);
  for (std::size_t b = 0; b < r; ++b)
    for (std::size_t i = 0; i < n; ++i) X[b].push_back(compile(basis[b][i].rebase(s)));
  std::vector<Compiled> ht;
  for (const auto& h : cs.h_theta) ht.push_back(compile(h.rebase(s)));
  // constants nobody reads (coefficients fixed to 0) may stay unbound
  auto used = [&](std::size_t i) {
    auto in = [&](const Compiled& c) { return c.num.uses(i) || c.den.uses(i); };
    for (const auto& c : coeff) if (in(c)) return true;
    for (const auto& c : M) if (in(c)) return true;
    for (const auto& c : ht) if (in(c)) return true;
    for (const auto& row : X) for (const auto& c : row) if (in(c)) return true;
    return false;
  };
  std::vector<double> base(s->nsymbols());
  for (std::size_t i = n; i < s->nsymbols(); ++i) {
    if (std::find(bidx.begin(), bidx.end(), i) != bidx.end()) continue;
    auto it = consts.find(s->symbol_name(i));
    if (it != consts.end())
      base[i] = it->second;
    else if (used(i))
      fail(Errc::UnboundSymbol, "no value for constant '" + s->symbol_name(i) + "'");
  }

  auto load = [&](double t, const std::vector<double>& y) {
    std::vector<double> vals = base;
    std::copy(y.begin(), y.begin() + static_cast<long>(n), vals.begin());
    for (std::size_t b = 0; b < bidx.size(); ++b) vals[bidx[b]] = profiles[b](t);
    return vals;
  };
  Rhs f = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
    std::vector<double> vals = load(t, y);
    std::fill(dy.begin(), dy.end(), 0.0);
    for (std::size_t b = 0; b < r; ++b) {
      double cb = eval_guarded(coeff[b], vals, t);
      if (cb == 0) continue;
      for (std::size_t i = 0; i < n; ++i)
        if (!X[b][i].num.is_zero()) dy[i] += cb * eval_guarded(X[b][i], vals, t);
    }
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b)
        if (!M[a * r + b].num.is_zero()) dy[n + a] += eval_guarded(M[a * r + b], vals, t) * y[n + b];
  };
  // pole watch on the basis fields only; M and the pairings are evaluated guarded
  PoleWatch watch{{}, base, n};
  for (const auto& row : X)
    for (const auto& c : row) watch.add(c.den);
  std::vector<double> y = x0;
  y.insert(y.end(), f0.begin(), f0.end());
  CompanionRun out;
  out.traj = rk4(f, y, t0, t1, step, &watch);
  out.traj.names = s->vars();
  for (std::size_t a = 0; a < r; ++a) out.traj.names.push_back("f" + std::to_string(a + 1));
  auto I = [&](std::size_t j) {
    std::vector<double> vals = load(out.traj.times[j], out.traj.states[j]);
    double v = 0;
    for (std::size_t a = 0; a < r; ++a) v += out.traj.states[j][n + a] * eval_guarded(ht[a], vals, out.traj.times[j]);
    return v;
  };
  double i0 = I(0);
  for (std::size_t j = 1; j < out.traj.times.size(); ++j) out.max_drift = std::max(out.max_drift, std::fabs(I(j) - i0));
  out.pass = out.max_drift < tol;
  return out;
}

}  // namespace kontact
