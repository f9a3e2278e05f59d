#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kontact/poly.hpp"

namespace kontact {

// Symbol table shared by every value over one chart: coordinate variables
// first, then opaque constants. Constants have zero coordinate derivatives.
class Space {
 public:
  Space(std::vector<std::string> vars, std::vector<std::string> consts = {});

  std::size_t dim() const { return vars_.size(); }
  std::size_t nconsts() const { return consts_.size(); }
  std::size_t nsymbols() const { return vars_.size() + consts_.size(); }
  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<std::string>& consts() const { return consts_; }
  const std::string& symbol_name(std::size_t i) const;
  std::optional<std::size_t> find(const std::string& name) const;
  std::optional<std::size_t> find_var(const std::string& name) const;
  bool is_var(std::size_t sym) const { return sym < vars_.size(); }
  bool same_as(const Space& o) const { return vars_ == o.vars_ && consts_ == o.consts_; }

 private:
  std::vector<std::string> vars_;
  std::vector<std::string> consts_;
  std::map<std::string, std::size_t> index_;
};

using SpacePtr = std::shared_ptr<const Space>;

SpacePtr make_space(std::vector<std::string> vars, std::vector<std::string> consts = {});
bool is_identifier(const std::string& s);

// Exact rational function num/den over Z[symbols]. Canonical: gcd(num, den) = 1
// including integer content, and den has positive grlex leading coefficient.
// A value with a null space is a pure rational constant usable with any space.
class Expr {
 public:
  Expr() = default;
  Expr(long v);  // NOLINT(google-explicit-constructor)
  Expr(const mpq_class& q);  // NOLINT(google-explicit-constructor)

  static Expr symbol(const SpacePtr& s, std::size_t index);
  static Expr symbol(const SpacePtr& s, const std::string& name);
  static Expr from_polys(const SpacePtr& s, Poly num, Poly den);

  const SpacePtr& space() const { return space_; }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  std::optional<mpq_class> as_rational() const;
  bool uses(std::size_t sym) const { return num_.uses(sym) || den_.uses(sym); }
  // Sum of total degrees and term counts, used to rank pivots.
  std::size_t complexity() const;
  std::size_t term_count() const { return num_.size() + den_.size(); }

  Expr operator-() const;
  Expr operator+(const Expr& o) const;
  Expr operator-(const Expr& o) const;
  Expr operator*(const Expr& o) const;
  Expr operator/(const Expr& o) const;
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }
  Expr pow(long n) const;
  Expr inverse() const;

  bool operator==(const Expr& o) const;
  bool operator!=(const Expr& o) const { return !(*this == o); }

  // Partial derivative by symbol index (variables or constants).
  Expr diff(std::size_t sym) const;
  Expr diff(const std::string& var) const;

  // Exact value at a rational point, vals indexed by symbol; PoleAtPoint on zero denominator.
  mpq_class eval_exact(const std::vector<mpq_class>& vals) const;
  // Same expression moved to another space with the same symbol names (superset allowed).
  Expr rebase(const SpacePtr& target) const;
  // Rename symbols by index: symbol i becomes map[i] in target. map must be injective
  // on the symbols used.
  Expr remap(const std::vector<std::size_t>& map, const SpacePtr& target) const;
  // Replace symbols; bindings[i] == nullopt keeps symbol i (must exist in target).
  Expr substitute(const std::vector<std::optional<Expr>>& bindings, const SpacePtr& target) const;

  std::string str() const;

 private:
  SpacePtr space_;
  Poly num_;
  Poly den_ = Poly(1);
};

SpacePtr common_space(const SpacePtr& a, const SpacePtr& b);

std::ostream& operator<<(std::ostream& os, const Expr& e);

// Grammar: expr := term (('+'|'-') term)*; term := factor (('*'|'/') factor)*;
// factor := ('+'|'-') factor | base ('^' int)?; base := ident | number | '(' expr ')'.
Expr parse_expr(const std::string& text, const SpacePtr& space);

// IEEE value; vars/consts looked up by name. Values may be exact rationals (then
// the exact result is rounded once) or doubles.
struct PointValue {
  std::optional<mpq_class> exact;
  double approx = 0;
  PointValue(double d) : approx(d) {}  // NOLINT(google-explicit-constructor)
  PointValue(const mpq_class& q) : exact(q), approx(q.get_d()) {}  // NOLINT
};
double eval(const Expr& e, const std::map<std::string, PointValue>& point,
            const std::map<std::string, double>& consts = {});

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings, const SpacePtr& target);

std::string rational_str(const mpq_class& q);
mpq_class parse_rational(const std::string& s);

}  // namespace kontact
