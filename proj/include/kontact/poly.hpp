#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace kontact {

// Hard limit on symbols (chart variables + opaque constants) in one space.
constexpr std::size_t kMaxSymbols = 40;

struct Mono {
  std::array<std::uint8_t, kMaxSymbols> e{};
  std::uint32_t deg = 0;

  static Mono var(std::size_t i, unsigned power = 1);
  bool is_one() const { return deg == 0; }
  bool operator==(const Mono& o) const { return deg == o.deg && e == o.e; }
  bool operator!=(const Mono& o) const { return !(*this == o); }
};

// Graded lexicographic: total degree first, then x1 > x2 > ... .
int grlex_cmp(const Mono& a, const Mono& b);
Mono operator*(const Mono& a, const Mono& b);
bool mono_divides(const Mono& a, const Mono& b);  // a | b
Mono mono_quo(const Mono& b, const Mono& a);      // b / a, requires a | b
Mono mono_gcd(const Mono& a, const Mono& b);

struct Term {
  Mono m;
  mpz_class c;
};

// Sparse polynomial over Z, terms sorted by decreasing grlex, no zero coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(const mpz_class& c);
  static Poly from_terms(std::vector<Term> terms);  // sorts and merges
  static Poly variable(std::size_t i);
  static Poly monomial(const Mono& m, const mpz_class& c);

  bool is_zero() const { return t_.empty(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].m.is_one()); }
  bool is_one() const { return t_.size() == 1 && t_[0].m.is_one() && t_[0].c == 1; }
  mpz_class constant_value() const;  // requires is_constant
  const std::vector<Term>& terms() const { return t_; }
  std::size_t size() const { return t_.size(); }
  const Term& lead() const { return t_.front(); }
  std::uint32_t total_degree() const { return t_.empty() ? 0 : t_.front().m.deg; }
  unsigned degree_in(std::size_t v) const;
  bool uses(std::size_t v) const;
  std::uint64_t used_mask() const;  // bit i set when symbol i occurs (i < 64)
  mpz_class max_norm() const;
  mpz_class content() const;  // positive gcd of the coefficients
  Mono mono_content() const;

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly mul(const mpz_class& c) const;
  Poly mul(const Mono& m) const;
  Poly mul(const Mono& m, const mpz_class& c) const;
  Poly divexact(const mpz_class& c) const;
  Poly divexact(const Mono& m) const;
  Poly pow(unsigned n) const;

  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly derivative(std::size_t v) const;
  Poly eval_var(std::size_t v, const mpz_class& x) const;
  // Full evaluation; vals indexed by symbol.
  mpq_class eval(const std::vector<mpq_class>& vals) const;
  double eval(const std::vector<double>& vals) const;

  // Coefficients in variable v: result[k] multiplies v^k.
  std::vector<Poly> coeffs_in(std::size_t v) const;
  static Poly from_coeffs_in(std::size_t v, const std::vector<Poly>& cs);

 private:
  std::vector<Term> t_;
  friend std::optional<Poly> divide_exact(const Poly&, const Poly&);
};

// q with f = q*g over Z, or nullopt when g does not divide f.
std::optional<Poly> divide_exact(const Poly& f, const Poly& g);

// Full gcd over Z[x] including integer and monomial content; leading coefficient > 0.
Poly gcd(const Poly& a, const Poly& b);
// Same result through the primitive pseudo-remainder route only (test oracle, fallback).
Poly gcd_prs(const Poly& a, const Poly& b);

}  // namespace kontact
