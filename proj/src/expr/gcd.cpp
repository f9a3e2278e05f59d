// Multivariate gcd over Z: content splitting, variable elimination, a heuristic
// evaluation/interpolation gcd, and a primitive PRS fallback.
#include <cmath>

#include "kontact/error.hpp"
#include "kontact/poly.hpp"

namespace kontact {

namespace {

Poly positive(Poly p) {
  if (!p.is_zero() && p.lead().c < 0) return -p;
  return p;
}

int lowest_bit(std::uint64_t m) { return __builtin_ctzll(m); }

using GcdFn = Poly (*)(const Poly&, const Poly&);

// gcd(a, b) when some variable occurs in a but not in b.
Poly gcd_eliminate(const Poly& a, std::size_t v, const Poly& b, GcdFn rec) {
  Poly g = b;
  for (const auto& c : a.coeffs_in(v)) {
    if (c.is_zero()) continue;
    g = rec(g, c);
    if (g.is_constant()) break;
  }
  return positive(g);
}

Poly symmetric_mod(const Poly& p, const mpz_class& m, const mpz_class& half) {
  std::vector<Term> out;
  for (const auto& t : p.terms()) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), t.c.get_mpz_t(), m.get_mpz_t());
    if (r > half) r -= m;
    if (r != 0) out.push_back(Term{t.m, r});
  }
  return Poly::from_terms(std::move(out));
}

Poly interpolate(const Poly& h, const mpz_class& xi, std::size_t v) {
  mpz_class half = xi / 2;
  std::vector<Poly> digits;
  Poly cur = h;
  while (!cur.is_zero()) {
    Poly g = symmetric_mod(cur, xi, half);
    digits.push_back(g);
    cur = (cur - g).divexact(xi);
    if (digits.size() > 255) fail(Errc::RankComputationOverflow, "gcd interpolation runaway");
  }
  return Poly::from_coeffs_in(v, digits);
}

Poly primitive(const Poly& p) {
  if (p.is_zero()) return p;
  mpz_class c = p.content();
  Poly r = (c == 1) ? p : p.divexact(c);
  return positive(r);
}

std::optional<Poly> heuristic_gcd(const Poly& a, const Poly& b) {
  std::size_t v = static_cast<std::size_t>(lowest_bit(a.used_mask()));
  mpz_class fn = a.max_norm(), gn = b.max_norm();
  // xi above 2*min norm + 2 makes a dividing candidate provably the gcd.
  mpz_class xi = 2 * (fn < gn ? fn : gn) + 29;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Poly ff = a.eval_var(v, xi), gg = b.eval_var(v, xi);
    if (!ff.is_zero() && !gg.is_zero()) {
      Poly h = gcd(ff, gg);
      Poly cand = primitive(interpolate(h, xi, v));
      if (!cand.is_zero()) {
        if (cand.is_constant()) return Poly(1);
        if (divide_exact(a, cand) && divide_exact(b, cand)) return cand;
      }
    }
    mpz_class s = sqrt(sqrt(xi));
    xi = 73794 * xi * s / 27011;
  }
  return std::nullopt;
}

Poly pseudo_rem(const Poly& a, const Poly& b, std::size_t v) {
  unsigned db = b.degree_in(v);
  Poly lcb = b.coeffs_in(v)[db];
  Poly r = a;
  while (!r.is_zero()) {
    unsigned dr = r.degree_in(v);
    if (dr < db) break;
    Poly lcr = r.coeffs_in(v)[dr];
    r = r * lcb - (lcr * b).mul(Mono::var(v, dr - db));
  }
  return r;
}

Poly content_in(const Poly& p, std::size_t v) {
  Poly g;
  for (const auto& c : p.coeffs_in(v)) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? positive(c) : gcd_prs(g, c);
    if (g.is_one()) break;
  }
  return g;
}

Poly prs_primitive(const Poly& a0, const Poly& b0) {
  if (a0.is_constant() || b0.is_constant()) return Poly(1);
  std::uint64_t ma = a0.used_mask(), mb = b0.used_mask();
  if (ma != mb) {
    std::uint64_t only_a = ma & ~mb;
    if (only_a) return gcd_eliminate(a0, lowest_bit(only_a), b0, gcd_prs);
    return gcd_eliminate(b0, lowest_bit(mb & ~ma), a0, gcd_prs);
  }
  std::size_t v = static_cast<std::size_t>(lowest_bit(ma));
  Poly ca = content_in(a0, v), cb = content_in(b0, v);
  Poly a = *divide_exact(a0, ca), b = *divide_exact(b0, cb);
  Poly c = gcd_prs(ca, cb);
  if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);
  Poly g;
  while (true) {
    Poly r = pseudo_rem(a, b, v);
    if (r.is_zero()) {
      g = b;
      break;
    }
    if (r.degree_in(v) == 0) {
      g = Poly(1);
      break;
    }
    a = b;
    b = *divide_exact(r, content_in(r, v));
  }
  if (!g.is_constant()) g = *divide_exact(g, content_in(g, v));
  return positive(c * g);
}

Poly gcd_primitive(const Poly& a0, const Poly& b0) {
  if (a0.is_constant() || b0.is_constant()) return Poly(1);
  Poly a = positive(a0), b = positive(b0);
  if (a == b) return a;
  std::uint64_t ma = a.used_mask(), mb = b.used_mask();
  if (ma != mb) {
    std::uint64_t only_a = ma & ~mb;
    if (only_a) return gcd_eliminate(a, lowest_bit(only_a), b, gcd);
    return gcd_eliminate(b, lowest_bit(mb & ~ma), a, gcd);
  }
  if (b.total_degree() <= a.total_degree()) {
    if (divide_exact(a, b)) return b;
  } else if (divide_exact(b, a)) {
    return a;
  }
  if (auto h = heuristic_gcd(a, b)) return *h;
  return prs_primitive(a, b);
}

template <typename Core>
Poly gcd_with(const Poly& a, const Poly& b, Core core) {
  if (a.is_zero()) return positive(b);
  if (b.is_zero()) return positive(a);
  mpz_class ca = a.content(), cb = b.content();
  mpz_class c;
  mpz_gcd(c.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  if (a.is_constant() || b.is_constant()) return Poly(c);
  Mono ma = a.mono_content(), mb = b.mono_content();
  Mono mg = mono_gcd(ma, mb);
  Poly pa = a.divexact(ma), pb = b.divexact(mb);
  if (ca != 1) pa = pa.divexact(ca);
  if (cb != 1) pb = pb.divexact(cb);
  Poly g = core(pa, pb);
  return positive(g.mul(mg, c));
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) { return gcd_with(a, b, gcd_primitive); }

Poly gcd_prs(const Poly& a, const Poly& b) { return gcd_with(a, b, prs_primitive); }

}  // namespace kontact
