#include "kontact/exterior.hpp"

#include <algorithm>

#include "kontact/error.hpp"

namespace kontact {

namespace {

Expr on_space(const SpacePtr& s, const Expr& e) {
  SpacePtr c = common_space(s, e.space());
  if (e.space() == c) return e;
  return e.rebase(c);
}

std::vector<Expr> on_space(const SpacePtr& s, std::vector<Expr> v) {
  for (auto& e : v) e = on_space(s, e);
  return v;
}

SpacePtr require_common(const SpacePtr& a, const SpacePtr& b) {
  if (!a || !b) return a ? a : b;
  return common_space(a, b);
}

// Determinant of the p x p matrix m[r][c] by cofactor expansion; p stays small.
Expr small_det(std::vector<std::vector<Expr>> m) {
  std::size_t n = m.size();
  if (n == 0) return Expr(1);
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  Expr sum;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<Expr>> minor(n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) minor[r - 1].push_back(m[r][j]);
    Expr t = m[0][c] * small_det(std::move(minor));
    sum = (c % 2) ? sum - t : sum + t;
  }
  return sum;
}

}  // namespace

// ---- VectorField

VectorField::VectorField(SpacePtr s, std::vector<Expr> coeffs) : s_(std::move(s)) {
  if (!s_) fail(Errc::InvalidInput, "vector field without a chart");
  if (coeffs.size() != s_->dim())
    fail(Errc::LengthMismatch, "vector field has " + std::to_string(coeffs.size()) + " components on a " +
                                   std::to_string(s_->dim()) + "-dimensional chart");
  c_ = on_space(s_, std::move(coeffs));
}

VectorField VectorField::zero(const SpacePtr& s) { return VectorField(s, std::vector<Expr>(s->dim())); }

VectorField VectorField::coordinate(const SpacePtr& s, std::size_t i) {
  std::vector<Expr> c(s->dim());
  c.at(i) = Expr(1);
  return VectorField(s, std::move(c));
}

bool VectorField::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Expr& e) { return e.is_zero(); });
}

Expr VectorField::apply(const Expr& f) const {
  Expr out;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero() || !f.uses(i)) continue;
    out += c_[i] * f.diff(i);
  }
  return on_space(s_, out);
}

VectorField VectorField::operator+(const VectorField& o) const {
  SpacePtr s = require_common(s_, o.s_);
  std::vector<Expr> c(c_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = c_[i] + o.c_[i];
  return VectorField(s, std::move(c));
}

VectorField VectorField::operator-(const VectorField& o) const { return *this + (-o); }

VectorField VectorField::operator-() const {
  VectorField r = *this;
  for (auto& e : r.c_) e = -e;
  return r;
}

VectorField operator*(const Expr& f, const VectorField& X) {
  VectorField r = X;
  for (auto& e : r.c_) e = f * e;
  r.c_ = on_space(r.s_, std::move(r.c_));
  return r;
}

bool VectorField::operator==(const VectorField& o) const { return c_ == o.c_; }

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
  SpacePtr s = require_common(X.space(), Y.space());
  std::vector<Expr> c(X.dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = X.apply(Y[i]) - Y.apply(X[i]);
  return VectorField(s, std::move(c));
}

// ---- DiffForm

DiffForm::DiffForm(SpacePtr s, unsigned degree) : s_(std::move(s)), p_(degree) {
  if (!s_) fail(Errc::InvalidInput, "form without a chart");
}

DiffForm DiffForm::function(const SpacePtr& s, const Expr& f) {
  DiffForm w(s, 0);
  w.add({}, f);
  return w;
}

DiffForm DiffForm::dx(const SpacePtr& s, std::size_t i) {
  DiffForm w(s, 1);
  w.add({static_cast<std::uint8_t>(i)}, Expr(1));
  return w;
}

DiffForm DiffForm::one_form(const SpacePtr& s, const std::vector<Expr>& coeffs) {
  if (coeffs.size() != s->dim()) fail(Errc::LengthMismatch, "one-form coefficient count");
  DiffForm w(s, 1);
  for (std::size_t i = 0; i < coeffs.size(); ++i) w.add({static_cast<std::uint8_t>(i)}, coeffs[i]);
  return w;
}

Expr DiffForm::component(const FormIndex& idx) const {
  auto it = t_.find(idx);
  return it == t_.end() ? Expr() : it->second;
}

void DiffForm::add(FormIndex idx, const Expr& c) {
  if (c.is_zero()) return;
  if (idx.size() != p_) fail(Errc::InvalidInput, "form index length differs from degree");
  for (auto i : idx)
    if (i >= dim()) fail(Errc::InvalidInput, "form index outside the chart");
  bool neg = false;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b + 1 < idx.size() - a; ++b) {
      if (idx[b] == idx[b + 1]) return;
      if (idx[b] > idx[b + 1]) {
        std::swap(idx[b], idx[b + 1]);
        neg = !neg;
      }
    }
  for (std::size_t b = 0; b + 1 < idx.size(); ++b)
    if (idx[b] == idx[b + 1]) return;
  Expr v = on_space(s_, neg ? -c : c);
  auto it = t_.find(idx);
  if (it == t_.end()) {
    t_.emplace(std::move(idx), std::move(v));
    return;
  }
  it->second += v;
  if (it->second.is_zero()) t_.erase(it);
}

std::vector<Expr> DiffForm::one_form_coeffs() const {
  if (p_ != 1) fail(Errc::InvalidInput, "not a one-form");
  std::vector<Expr> c(dim());
  for (const auto& [idx, e] : t_) c[idx[0]] = e;
  return c;
}

Expr DiffForm::scalar() const {
  if (p_ != 0) fail(Errc::InvalidInput, "not a function");
  return on_space(s_, component({}));
}

DiffForm DiffForm::operator+(const DiffForm& o) const {
  require_common(s_, o.s_);
  if (p_ != o.p_) fail(Errc::InvalidInput, "adding forms of different degree");
  DiffForm r = *this;
  for (const auto& [idx, e] : o.t_) r.add(idx, e);
  return r;
}

DiffForm DiffForm::operator-(const DiffForm& o) const { return *this + (-o); }

DiffForm DiffForm::operator-() const {
  DiffForm r = *this;
  for (auto& [idx, e] : r.t_) e = -e;
  return r;
}

DiffForm operator*(const Expr& f, const DiffForm& w) {
  DiffForm r(w.s_, w.p_);
  for (const auto& [idx, e] : w.t_) r.add(idx, f * e);
  return r;
}

bool DiffForm::operator==(const DiffForm& o) const {
  if (t_.empty() && o.t_.empty()) return true;
  return p_ == o.p_ && t_ == o.t_;
}

Expr DiffForm::evaluate(const std::vector<VectorField>& xs) const {
  if (xs.size() != p_) fail(Errc::LengthMismatch, "form needs " + std::to_string(p_) + " arguments");
  Expr sum;
  for (const auto& [idx, e] : t_) {
    std::vector<std::vector<Expr>> m(p_, std::vector<Expr>(p_));
    for (std::size_t r = 0; r < p_; ++r)
      for (std::size_t c = 0; c < p_; ++c) m[r][c] = xs[c][idx[r]];
    sum += e * small_det(std::move(m));
  }
  return on_space(s_, sum);
}

DiffForm ext_deriv(const DiffForm& w) {
  DiffForm r(w.space(), w.degree() + 1);
  for (const auto& [idx, e] : w.terms()) {
    for (std::size_t j = 0; j < w.dim(); ++j) {
      if (!e.uses(j) || std::find(idx.begin(), idx.end(), j) != idx.end()) continue;
      FormIndex n;
      n.reserve(idx.size() + 1);
      n.push_back(static_cast<std::uint8_t>(j));
      n.insert(n.end(), idx.begin(), idx.end());
      r.add(std::move(n), e.diff(j));
    }
  }
  return r;
}

DiffForm wedge(const DiffForm& a, const DiffForm& b) {
  SpacePtr s = require_common(a.space(), b.space());
  DiffForm r(s, a.degree() + b.degree());
  for (const auto& [ia, ea] : a.terms())
    for (const auto& [ib, eb] : b.terms()) {
      FormIndex n = ia;
      n.insert(n.end(), ib.begin(), ib.end());
      r.add(std::move(n), ea * eb);
    }
  return r;
}

DiffForm interior(const VectorField& X, const DiffForm& w) {
  require_common(X.space(), w.space());
  if (w.degree() == 0) fail(Errc::DegreeZero, "contraction of a function");
  DiffForm r(w.space(), w.degree() - 1);
  for (const auto& [idx, e] : w.terms()) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const Expr& xi = X[idx[k]];
      if (xi.is_zero()) continue;
      FormIndex n;
      for (std::size_t m = 0; m < idx.size(); ++m)
        if (m != k) n.push_back(idx[m]);
      Expr t = xi * e;
      r.add(std::move(n), (k % 2) ? -t : t);
    }
  }
  return r;
}

DiffForm lie_derivative(const VectorField& X, const DiffForm& w) {
  require_common(X.space(), w.space());
  if (w.degree() == 0) return DiffForm::function(w.space(), X.apply(w.scalar()));
  return interior(X, ext_deriv(w)) + ext_deriv(interior(X, w));
}

// ---- VecForm

VecForm::VecForm(std::vector<DiffForm> comps) : c_(std::move(comps)) {
  if (c_.empty()) fail(Errc::InvalidInput, "R^k-valued form needs k >= 1");
  for (const auto& w : c_) {
    require_common(c_[0].space(), w.space());
    if (w.degree() != c_[0].degree()) fail(Errc::InvalidInput, "components of different degree");
  }
}

VecForm ext_deriv_k(const VecForm& w) {
  std::vector<DiffForm> out;
  for (const auto& c : w.comps()) out.push_back(ext_deriv(c));
  return VecForm(std::move(out));
}

VecForm interior_k(const VectorField& X, const VecForm& w) {
  std::vector<DiffForm> out;
  for (const auto& c : w.comps()) out.push_back(interior(X, c));
  return VecForm(std::move(out));
}

VecForm lie_derivative_k(const VectorField& X, const VecForm& w) {
  std::vector<DiffForm> out;
  for (const auto& c : w.comps()) out.push_back(lie_derivative(X, c));
  return VecForm(std::move(out));
}

// ---- KFunction

KFunction::KFunction(SpacePtr s, std::vector<Expr> comps) : s_(std::move(s)) {
  if (!s_) fail(Errc::InvalidInput, "k-function without a chart");
  c_ = on_space(s_, std::move(comps));
}

KFunction KFunction::zero(const SpacePtr& s, std::size_t k) { return KFunction(s, std::vector<Expr>(k)); }

KFunction KFunction::unit(const SpacePtr& s, std::size_t k, std::size_t a, const Expr& scale) {
  std::vector<Expr> c(k);
  c.at(a) = scale;
  return KFunction(s, std::move(c));
}

bool KFunction::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Expr& e) { return e.is_zero(); });
}

KFunction KFunction::operator+(const KFunction& o) const {
  if (k() != o.k()) fail(Errc::LengthMismatch, "k-functions of different length");
  std::vector<Expr> c(k());
  for (std::size_t a = 0; a < k(); ++a) c[a] = c_[a] + o.c_[a];
  return KFunction(require_common(s_, o.s_), std::move(c));
}

KFunction KFunction::operator-(const KFunction& o) const { return *this + (-o); }

KFunction KFunction::operator-() const {
  KFunction r = *this;
  for (auto& e : r.c_) e = -e;
  return r;
}

KFunction operator*(const Expr& f, const KFunction& h) {
  std::vector<Expr> c(h.k());
  for (std::size_t a = 0; a < h.k(); ++a) c[a] = f * h.c_[a];
  return KFunction(h.s_, std::move(c));
}

bool KFunction::operator==(const KFunction& o) const { return c_ == o.c_; }

KFunction apply(const VectorField& X, const KFunction& h) {
  std::vector<Expr> c(h.k());
  for (std::size_t a = 0; a < h.k(); ++a) c[a] = X.apply(h[a]);
  return KFunction(require_common(X.space(), h.space()), std::move(c));
}

Expr pairing(const KFunction& h, const std::vector<mpq_class>& theta) {
  if (theta.size() != h.k())
    fail(Errc::LengthMismatch, "covector of length " + std::to_string(theta.size()) + " against k = " +
                                   std::to_string(h.k()));
  Expr sum;
  for (std::size_t a = 0; a < h.k(); ++a)
    if (theta[a] != 0) sum += Expr(theta[a]) * h[a];
  return h.space() ? on_space(h.space(), sum) : sum;
}

}  // namespace kontact
