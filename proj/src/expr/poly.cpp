#include "kontact/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "kontact/error.hpp"

namespace kontact {

Mono Mono::var(std::size_t i, unsigned power) {
  if (i >= kMaxSymbols) fail(Errc::InvalidInput, "too many symbols");
  if (power > 255) fail(Errc::RankComputationOverflow, "exponent overflow");
  Mono m;
  m.e[i] = static_cast<std::uint8_t>(power);
  m.deg = power;
  return m;
}

int grlex_cmp(const Mono& a, const Mono& b) {
  if (a.deg != b.deg) return a.deg < b.deg ? -1 : 1;
  int c = std::memcmp(a.e.data(), b.e.data(), kMaxSymbols);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

Mono operator*(const Mono& a, const Mono& b) {
  Mono r;
  for (std::size_t i = 0; i < kMaxSymbols; ++i) {
    unsigned s = unsigned(a.e[i]) + b.e[i];
    if (s > 255) fail(Errc::RankComputationOverflow, "exponent overflow");
    r.e[i] = static_cast<std::uint8_t>(s);
  }
  r.deg = a.deg + b.deg;
  return r;
}

bool mono_divides(const Mono& a, const Mono& b) {
  if (a.deg > b.deg) return false;
  for (std::size_t i = 0; i < kMaxSymbols; ++i)
    if (a.e[i] > b.e[i]) return false;
  return true;
}

Mono mono_quo(const Mono& b, const Mono& a) {
  Mono r;
  for (std::size_t i = 0; i < kMaxSymbols; ++i) r.e[i] = static_cast<std::uint8_t>(b.e[i] - a.e[i]);
  r.deg = b.deg - a.deg;
  return r;
}

Mono mono_gcd(const Mono& a, const Mono& b) {
  Mono r;
  r.deg = 0;
  for (std::size_t i = 0; i < kMaxSymbols; ++i) {
    r.e[i] = std::min(a.e[i], b.e[i]);
    r.deg += r.e[i];
  }
  return r;
}

namespace {

bool term_greater(const Term& a, const Term& b) { return grlex_cmp(a.m, b.m) > 0; }

// Sort descending and merge equal monomials, dropping zeros.
void normalize(std::vector<Term>& t) {
  std::sort(t.begin(), t.end(), term_greater);
  std::size_t out = 0;
  for (std::size_t i = 0; i < t.size();) {
    std::size_t j = i + 1;
    mpz_class c = std::move(t[i].c);
    while (j < t.size() && t[j].m == t[i].m) {
      c += t[j].c;
      ++j;
    }
    if (c != 0) {
      if (out != i) t[out].m = t[i].m;
      t[out].c = std::move(c);
      ++out;
    }
    i = j;
  }
  t.resize(out);
}

}  // namespace

Poly::Poly(const mpz_class& c) {
  if (c != 0) t_.push_back(Term{Mono{}, c});
}

Poly Poly::from_terms(std::vector<Term> terms) {
  Poly p;
  normalize(terms);
  p.t_ = std::move(terms);
  return p;
}

Poly Poly::variable(std::size_t i) { return monomial(Mono::var(i), 1); }

Poly Poly::monomial(const Mono& m, const mpz_class& c) {
  Poly p;
  if (c != 0) p.t_.push_back(Term{m, c});
  return p;
}

mpz_class Poly::constant_value() const {
  if (t_.empty()) return 0;
  return t_[0].c;
}

unsigned Poly::degree_in(std::size_t v) const {
  unsigned d = 0;
  for (const auto& t : t_) d = std::max<unsigned>(d, t.m.e[v]);
  return d;
}

bool Poly::uses(std::size_t v) const {
  for (const auto& t : t_)
    if (t.m.e[v]) return true;
  return false;
}

std::uint64_t Poly::used_mask() const {
  std::uint64_t mask = 0;
  for (const auto& t : t_)
    for (std::size_t i = 0; i < kMaxSymbols; ++i)
      if (t.m.e[i]) mask |= (std::uint64_t(1) << i);
  return mask;
}

mpz_class Poly::max_norm() const {
  mpz_class n = 0;
  for (const auto& t : t_) {
    if (mpz_cmpabs(t.c.get_mpz_t(), n.get_mpz_t()) > 0) n = abs(t.c);
  }
  return n;
}

mpz_class Poly::content() const {
  mpz_class g = 0;
  for (const auto& t : t_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

Mono Poly::mono_content() const {
  if (t_.empty()) return Mono{};
  Mono m = t_[0].m;
  for (std::size_t i = 1; i < t_.size() && !m.is_one(); ++i) m = mono_gcd(m, t_[i].m);
  return m;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.t_) t.c = -t.c;
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r;
  r.t_.reserve(t_.size() + o.t_.size());
  std::size_t i = 0, j = 0;
  while (i < t_.size() && j < o.t_.size()) {
    int c = grlex_cmp(t_[i].m, o.t_[j].m);
    if (c > 0) {
      r.t_.push_back(t_[i++]);
    } else if (c < 0) {
      r.t_.push_back(o.t_[j++]);
    } else {
      mpz_class s = t_[i].c + o.t_[j].c;
      if (s != 0) r.t_.push_back(Term{t_[i].m, std::move(s)});
      ++i;
      ++j;
    }
  }
  for (; i < t_.size(); ++i) r.t_.push_back(t_[i]);
  for (; j < o.t_.size(); ++j) r.t_.push_back(o.t_[j]);
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  if (t_.empty() || o.t_.empty()) return Poly{};
  if (o.t_.size() == 1) return mul(o.t_[0].m, o.t_[0].c);
  if (t_.size() == 1) return o.mul(t_[0].m, t_[0].c);
  std::vector<Term> prods;
  prods.reserve(t_.size() * o.t_.size());
  for (const auto& a : t_)
    for (const auto& b : o.t_) prods.push_back(Term{a.m * b.m, a.c * b.c});
  return from_terms(std::move(prods));
}

Poly Poly::mul(const mpz_class& c) const {
  if (c == 0) return Poly{};
  Poly r = *this;
  for (auto& t : r.t_) t.c *= c;
  return r;
}

Poly Poly::mul(const Mono& m) const {
  Poly r = *this;
  for (auto& t : r.t_) t.m = t.m * m;
  return r;
}

Poly Poly::mul(const Mono& m, const mpz_class& c) const {
  if (c == 0) return Poly{};
  Poly r = *this;
  for (auto& t : r.t_) {
    t.m = t.m * m;
    t.c *= c;
  }
  return r;
}

Poly Poly::divexact(const mpz_class& c) const {
  Poly r = *this;
  for (auto& t : r.t_) mpz_divexact(t.c.get_mpz_t(), t.c.get_mpz_t(), c.get_mpz_t());
  return r;
}

Poly Poly::divexact(const Mono& m) const {
  Poly r = *this;
  for (auto& t : r.t_) t.m = mono_quo(t.m, m);
  return r;
}

Poly Poly::pow(unsigned n) const {
  Poly result(1);
  Poly base = *this;
  while (n) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n) base = base * base;
  }
  return result;
}

bool Poly::operator==(const Poly& o) const {
  if (t_.size() != o.t_.size()) return false;
  for (std::size_t i = 0; i < t_.size(); ++i)
    if (t_[i].m != o.t_[i].m || t_[i].c != o.t_[i].c) return false;
  return true;
}

Poly Poly::derivative(std::size_t v) const {
  std::vector<Term> out;
  for (const auto& t : t_) {
    if (!t.m.e[v]) continue;
    Term n{t.m, t.c * t.m.e[v]};
    n.m.e[v] -= 1;
    n.m.deg -= 1;
    out.push_back(std::move(n));
  }
  // differentiation can reorder terms of equal degree only by shifting them together; renormalize
  return from_terms(std::move(out));
}

Poly Poly::eval_var(std::size_t v, const mpz_class& x) const {
  unsigned d = degree_in(v);
  std::vector<mpz_class> pw(d + 1);
  pw[0] = 1;
  for (unsigned k = 1; k <= d; ++k) pw[k] = pw[k - 1] * x;
  std::vector<Term> out;
  out.reserve(t_.size());
  for (const auto& t : t_) {
    Term n{t.m, t.c * pw[t.m.e[v]]};
    n.m.deg -= n.m.e[v];
    n.m.e[v] = 0;
    if (n.c != 0) out.push_back(std::move(n));
  }
  return from_terms(std::move(out));
}

mpq_class Poly::eval(const std::vector<mpq_class>& vals) const {
  mpq_class sum = 0;
  for (const auto& t : t_) {
    mpq_class p = t.c;
    for (std::size_t i = 0; i < kMaxSymbols && i < vals.size(); ++i) {
      for (unsigned k = 0; k < t.m.e[i]; ++k) p *= vals[i];
    }
    sum += p;
  }
  sum.canonicalize();
  return sum;
}

double Poly::eval(const std::vector<double>& vals) const {
  double sum = 0;
  for (const auto& t : t_) {
    double p = t.c.get_d();
    for (std::size_t i = 0; i < kMaxSymbols && i < vals.size(); ++i) {
      if (t.m.e[i]) p *= std::pow(vals[i], int(t.m.e[i]));
    }
    sum += p;
  }
  return sum;
}

std::vector<Poly> Poly::coeffs_in(std::size_t v) const {
  std::vector<std::vector<Term>> parts(degree_in(v) + 1);
  for (const auto& t : t_) {
    Term n = t;
    unsigned k = n.m.e[v];
    n.m.e[v] = 0;
    n.m.deg -= k;
    parts[k].push_back(std::move(n));
  }
  std::vector<Poly> out;
  out.reserve(parts.size());
  for (auto& p : parts) out.push_back(from_terms(std::move(p)));
  return out;
}

Poly Poly::from_coeffs_in(std::size_t v, const std::vector<Poly>& cs) {
  std::vector<Term> all;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    Mono m = Mono::var(v, static_cast<unsigned>(k));
    for (const auto& t : cs[k].terms()) all.push_back(Term{t.m * m, t.c});
  }
  return from_terms(std::move(all));
}

std::optional<Poly> divide_exact(const Poly& f, const Poly& g) {
  if (g.is_zero()) fail(Errc::ZeroDenominator, "division by zero polynomial");
  if (f.is_zero()) return Poly{};
  if (g.size() == 1) {
    const Term& d = g.lead();
    std::vector<Term> out;
    out.reserve(f.size());
    for (const auto& t : f.terms()) {
      if (!mono_divides(d.m, t.m) || !mpz_divisible_p(t.c.get_mpz_t(), d.c.get_mpz_t()))
        return std::nullopt;
      Term q{mono_quo(t.m, d.m), 0};
      mpz_divexact(q.c.get_mpz_t(), t.c.get_mpz_t(), d.c.get_mpz_t());
      out.push_back(std::move(q));
    }
    Poly r;
    r.t_ = std::move(out);  // order preserved under division by a monomial
    return r;
  }
  if (f.total_degree() < g.total_degree()) return std::nullopt;
  // per-variable degree bounds prune hopeless divisions early
  std::array<int, kMaxSymbols> bound{};
  for (std::size_t v = 0; v < kMaxSymbols; ++v) {
    bound[v] = int(f.degree_in(v)) - int(g.degree_in(v));
    if (bound[v] < 0) return std::nullopt;
  }
  Poly r = f;
  std::vector<Term> q;
  const Term& lg = g.lead();
  while (!r.is_zero()) {
    const Term& lr = r.lead();
    if (!mono_divides(lg.m, lr.m)) return std::nullopt;
    if (!mpz_divisible_p(lr.c.get_mpz_t(), lg.c.get_mpz_t())) return std::nullopt;
    Term qt{mono_quo(lr.m, lg.m), 0};
    for (std::size_t v = 0; v < kMaxSymbols; ++v)
      if (int(qt.m.e[v]) > bound[v]) return std::nullopt;
    mpz_divexact(qt.c.get_mpz_t(), lr.c.get_mpz_t(), lg.c.get_mpz_t());
    r = r - g.mul(qt.m, qt.c);
    q.push_back(std::move(qt));
  }
  Poly out;
  out.t_ = std::move(q);  // produced in decreasing order
  return out;
}

}  // namespace kontact
