#pragma once

#include <map>
#include <vector>

#include "kontact/expr.hpp"

namespace kontact {

class VectorField {
 public:
  VectorField() = default;
  VectorField(SpacePtr s, std::vector<Expr> coeffs);
  static VectorField zero(const SpacePtr& s);
  static VectorField coordinate(const SpacePtr& s, std::size_t i);  // d/dx^i

  const SpacePtr& space() const { return s_; }
  std::size_t dim() const { return c_.size(); }
  const Expr& operator[](std::size_t i) const { return c_[i]; }
  const std::vector<Expr>& coeffs() const { return c_; }
  bool is_zero() const;

  // X(f) = sum X^i df/dx^i
  Expr apply(const Expr& f) const;

  VectorField operator+(const VectorField& o) const;
  VectorField operator-(const VectorField& o) const;
  VectorField operator-() const;
  friend VectorField operator*(const Expr& f, const VectorField& X);
  bool operator==(const VectorField& o) const;
  bool operator!=(const VectorField& o) const { return !(*this == o); }

 private:
  SpacePtr s_;
  std::vector<Expr> c_;
};

VectorField lie_bracket(const VectorField& X, const VectorField& Y);

// Strictly increasing 0-based coordinate indices of a basis p-form.
using FormIndex = std::vector<std::uint8_t>;

// Sparse p-form: sum over I of w_I dx^I, zero coefficients never stored.
class DiffForm {
 public:
  DiffForm() = default;
  DiffForm(SpacePtr s, unsigned degree);
  static DiffForm function(const SpacePtr& s, const Expr& f);
  static DiffForm dx(const SpacePtr& s, std::size_t i);
  static DiffForm one_form(const SpacePtr& s, const std::vector<Expr>& coeffs);

  const SpacePtr& space() const { return s_; }
  unsigned degree() const { return p_; }
  std::size_t dim() const { return s_ ? s_->dim() : 0; }
  const std::map<FormIndex, Expr>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  Expr component(const FormIndex& idx) const;
  // Adds c dx^{idx}; idx may be unsorted, antisymmetry is applied here.
  void add(FormIndex idx, const Expr& c);
  // Dense coefficients of a 1-form.
  std::vector<Expr> one_form_coeffs() const;
  // Value of a degree-0 form.
  Expr scalar() const;

  DiffForm operator+(const DiffForm& o) const;
  DiffForm operator-(const DiffForm& o) const;
  DiffForm operator-() const;
  friend DiffForm operator*(const Expr& f, const DiffForm& w);
  bool operator==(const DiffForm& o) const;
  bool operator!=(const DiffForm& o) const { return !(*this == o); }

  // w(X_1, ..., X_p) with the determinant convention (dx^1^dx^2)(X,Y) = X^1 Y^2 - X^2 Y^1.
  Expr evaluate(const std::vector<VectorField>& xs) const;

 private:
  SpacePtr s_;
  unsigned p_ = 0;
  std::map<FormIndex, Expr> t_;
};

DiffForm ext_deriv(const DiffForm& w);
DiffForm wedge(const DiffForm& a, const DiffForm& b);
DiffForm interior(const VectorField& X, const DiffForm& w);  // contraction in the first slot
DiffForm lie_derivative(const VectorField& X, const DiffForm& w);

// R^k-valued form, one DiffForm per component e_alpha, all of the same degree.
class VecForm {
 public:
  VecForm() = default;
  explicit VecForm(std::vector<DiffForm> comps);
  std::size_t k() const { return c_.size(); }
  unsigned degree() const { return c_.empty() ? 0 : c_[0].degree(); }
  const SpacePtr& space() const { return c_.at(0).space(); }
  const DiffForm& operator[](std::size_t a) const { return c_[a]; }
  const std::vector<DiffForm>& comps() const { return c_; }
  bool operator==(const VecForm& o) const { return c_ == o.c_; }

 private:
  std::vector<DiffForm> c_;
};
using VecValuedOneForm = VecForm;

VecForm ext_deriv_k(const VecForm& w);
VecForm interior_k(const VectorField& X, const VecForm& w);
VecForm lie_derivative_k(const VectorField& X, const VecForm& w);

// R^k-valued function h = sum h^alpha e_alpha.
class KFunction {
 public:
  KFunction() = default;
  KFunction(SpacePtr s, std::vector<Expr> comps);
  static KFunction zero(const SpacePtr& s, std::size_t k);
  static KFunction unit(const SpacePtr& s, std::size_t k, std::size_t a, const Expr& scale = Expr(1));

  const SpacePtr& space() const { return s_; }
  std::size_t k() const { return c_.size(); }
  const Expr& operator[](std::size_t a) const { return c_[a]; }
  const std::vector<Expr>& comps() const { return c_; }
  bool is_zero() const;

  KFunction operator+(const KFunction& o) const;
  KFunction operator-(const KFunction& o) const;
  KFunction operator-() const;
  friend KFunction operator*(const Expr& f, const KFunction& h);
  bool operator==(const KFunction& o) const;
  bool operator!=(const KFunction& o) const { return !(*this == o); }

 private:
  SpacePtr s_;
  std::vector<Expr> c_;
};

// Componentwise X(h).
KFunction apply(const VectorField& X, const KFunction& h);
// sum_alpha theta_alpha h^alpha
Expr pairing(const KFunction& h, const std::vector<mpq_class>& theta);

struct KVectorField {
  std::vector<VectorField> fields;
  std::size_t k() const { return fields.size(); }
};

}  // namespace kontact
