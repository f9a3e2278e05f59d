#include "kontact/expr.hpp"

#include <cctype>
#include <cmath>
#include <ostream>
#include <sstream>

#include "kontact/error.hpp"

namespace kontact {

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

Space::Space(std::vector<std::string> vars, std::vector<std::string> consts)
    : vars_(std::move(vars)), consts_(std::move(consts)) {
  if (nsymbols() > kMaxSymbols)
    fail(Errc::InvalidInput, "at most " + std::to_string(kMaxSymbols) + " symbols per chart");
  for (std::size_t i = 0; i < nsymbols(); ++i) {
    const std::string& n = symbol_name(i);
    if (!is_identifier(n)) fail(Errc::InvalidInput, "bad identifier '" + n + "'");
    if (!index_.emplace(n, i).second) fail(Errc::InvalidInput, "duplicate symbol '" + n + "'");
  }
}

const std::string& Space::symbol_name(std::size_t i) const {
  return i < vars_.size() ? vars_[i] : consts_.at(i - vars_.size());
}

std::optional<std::size_t> Space::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Space::find_var(const std::string& name) const {
  auto i = find(name);
  if (i && *i < vars_.size()) return i;
  return std::nullopt;
}

SpacePtr make_space(std::vector<std::string> vars, std::vector<std::string> consts) {
  return std::make_shared<const Space>(std::move(vars), std::move(consts));
}

SpacePtr common_space(const SpacePtr& a, const SpacePtr& b) {
  if (!a) return b;
  if (!b || a == b) return a;
  if (a->same_as(*b)) return a;
  fail(Errc::ChartMismatch, "operands live on different charts");
}

namespace {

// Make den's leading coefficient positive.
void fix_sign(Poly& num, Poly& den) {
  if (den.lead().c < 0) {
    num = -num;
    den = -den;
  }
}

}  // namespace

Expr::Expr(long v) : num_(mpz_class(v)) {}

Expr::Expr(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  num_ = Poly(c.get_num());
  den_ = Poly(c.get_den());
}

Expr Expr::symbol(const SpacePtr& s, std::size_t index) {
  if (!s || index >= s->nsymbols()) fail(Errc::UnknownSymbol, "symbol index out of range");
  Expr e;
  e.space_ = s;
  e.num_ = Poly::variable(index);
  return e;
}

Expr Expr::symbol(const SpacePtr& s, const std::string& name) {
  auto i = s ? s->find(name) : std::nullopt;
  if (!i) fail(Errc::UnknownSymbol, "'" + name + "'");
  return symbol(s, *i);
}

Expr Expr::from_polys(const SpacePtr& s, Poly num, Poly den) {
  if (den.is_zero()) fail(Errc::ZeroDenominator, "denominator simplifies to 0");
  Expr e;
  e.space_ = s;
  if (num.is_zero()) return e;
  if (!den.is_one()) {
    Poly g = gcd(num, den);
    if (!g.is_one()) {
      num = *divide_exact(num, g);
      den = *divide_exact(den, g);
    }
    fix_sign(num, den);
  }
  e.num_ = std::move(num);
  e.den_ = std::move(den);
  return e;
}

std::optional<mpq_class> Expr::as_rational() const {
  if (!is_constant()) return std::nullopt;
  mpq_class q(num_.constant_value(), den_.constant_value());
  q.canonicalize();
  return q;
}

std::size_t Expr::complexity() const {
  return (std::size_t(num_.total_degree()) + den_.total_degree()) * 1000000u + term_count();
}

Expr Expr::operator-() const {
  Expr r = *this;
  r.num_ = -r.num_;
  return r;
}

Expr Expr::operator+(const Expr& o) const {
  SpacePtr s = common_space(space_, o.space_);
  if (is_zero()) {
    Expr r = o;
    r.space_ = s;
    return r;
  }
  if (o.is_zero()) {
    Expr r = *this;
    r.space_ = s;
    return r;
  }
  Expr r;
  r.space_ = s;
  if (den_ == o.den_) {
    Poly n = num_ + o.num_;
    if (n.is_zero()) return r;
    if (den_.is_one()) {
      r.num_ = std::move(n);
      return r;
    }
    Poly g = gcd(n, den_);
    if (g.is_one()) {
      r.num_ = std::move(n);
      r.den_ = den_;
    } else {
      r.num_ = *divide_exact(n, g);
      r.den_ = *divide_exact(den_, g);
      fix_sign(r.num_, r.den_);
    }
    return r;
  }
  Poly g = gcd(den_, o.den_);
  if (g.is_one()) {
    r.num_ = num_ * o.den_ + o.num_ * den_;
    r.den_ = den_ * o.den_;
    if (r.num_.is_zero()) r.den_ = Poly(1);
    return r;
  }
  Poly b1 = *divide_exact(den_, g), d1 = *divide_exact(o.den_, g);
  Poly t = num_ * d1 + o.num_ * b1;
  if (t.is_zero()) return r;
  Poly g2 = gcd(t, g);
  if (g2.is_one()) {
    r.num_ = std::move(t);
    r.den_ = b1 * o.den_;
  } else {
    r.num_ = *divide_exact(t, g2);
    r.den_ = b1 * *divide_exact(o.den_, g2);
  }
  fix_sign(r.num_, r.den_);
  return r;
}

Expr Expr::operator-(const Expr& o) const { return *this + (-o); }

Expr Expr::operator*(const Expr& o) const {
  SpacePtr s = common_space(space_, o.space_);
  Expr r;
  r.space_ = s;
  if (is_zero() || o.is_zero()) return r;
  if (den_.is_one() && o.den_.is_one()) {
    r.num_ = num_ * o.num_;
    return r;
  }
  Poly g1 = o.den_.is_one() ? Poly(1) : gcd(num_, o.den_);
  Poly g2 = den_.is_one() ? Poly(1) : gcd(o.num_, den_);
  Poly a = g1.is_one() ? num_ : *divide_exact(num_, g1);
  Poly d = g1.is_one() ? o.den_ : *divide_exact(o.den_, g1);
  Poly c = g2.is_one() ? o.num_ : *divide_exact(o.num_, g2);
  Poly b = g2.is_one() ? den_ : *divide_exact(den_, g2);
  r.num_ = a * c;
  r.den_ = b * d;
  fix_sign(r.num_, r.den_);
  return r;
}

Expr Expr::inverse() const {
  if (is_zero()) fail(Errc::ZeroDenominator, "division by zero");
  Expr r;
  r.space_ = space_;
  r.num_ = den_;
  r.den_ = num_;
  fix_sign(r.num_, r.den_);
  return r;
}

Expr Expr::operator/(const Expr& o) const {
  if (o.is_zero()) fail(Errc::ZeroDenominator, "division by zero");
  return *this * o.inverse();
}

Expr Expr::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  if (n > 255) fail(Errc::RankComputationOverflow, "exponent too large");
  Expr r;
  r.space_ = space_;
  r.num_ = num_.pow(static_cast<unsigned>(n));
  r.den_ = den_.pow(static_cast<unsigned>(n));
  return r;
}

bool Expr::operator==(const Expr& o) const {
  if (space_ && o.space_ && space_ != o.space_ && !space_->same_as(*o.space_)) return false;
  return num_ == o.num_ && den_ == o.den_;
}

Expr Expr::diff(std::size_t sym) const {
  if (space_ && sym >= space_->nsymbols()) fail(Errc::UnknownSymbol, "symbol index out of range");
  Expr r;
  r.space_ = space_;
  if (!uses(sym)) return r;
  if (den_.is_constant()) return from_polys(space_, num_.derivative(sym), den_);
  Poly n = num_.derivative(sym) * den_ - num_ * den_.derivative(sym);
  return from_polys(space_, std::move(n), den_ * den_);
}

Expr Expr::diff(const std::string& var) const {
  auto i = space_ ? space_->find(var) : std::nullopt;
  if (!i) fail(Errc::UnknownSymbol, "'" + var + "'");
  return diff(*i);
}

mpq_class Expr::eval_exact(const std::vector<mpq_class>& vals) const {
  mpq_class d = den_.eval(vals);
  if (d == 0) fail(Errc::PoleAtPoint, "denominator vanishes at point");
  mpq_class v = num_.eval(vals) / d;
  v.canonicalize();
  return v;
}

Expr Expr::rebase(const SpacePtr& target) const {
  if (!space_ || space_ == target) {
    Expr r = *this;
    r.space_ = target;
    return r;
  }
  std::vector<std::size_t> map(space_->nsymbols());
  for (std::size_t i = 0; i < map.size(); ++i) {
    auto j = target->find(space_->symbol_name(i));
    if (!j) {
      if (uses(i)) fail(Errc::UnknownSymbol, "'" + space_->symbol_name(i) + "' missing from target chart");
      map[i] = kMaxSymbols;
      continue;
    }
    map[i] = *j;
  }
  return remap(map, target);
}

Expr Expr::remap(const std::vector<std::size_t>& map, const SpacePtr& target) const {
  auto move = [&](const Poly& p) {
    std::vector<Term> out;
    out.reserve(p.size());
    for (const auto& t : p.terms()) {
      Term n{Mono{}, t.c};
      n.m.deg = t.m.deg;
      for (std::size_t i = 0; i < map.size(); ++i) {
        if (!t.m.e[i]) continue;
        if (map[i] >= kMaxSymbols) fail(Errc::UnknownSymbol, "symbol has no image in target chart");
        n.m.e[map[i]] = t.m.e[i];
      }
      out.push_back(std::move(n));
    }
    return Poly::from_terms(std::move(out));
  };
  Expr r;
  r.space_ = target;
  r.num_ = move(num_);
  r.den_ = move(den_);
  fix_sign(r.num_, r.den_);
  return r;
}

Expr Expr::substitute(const std::vector<std::optional<Expr>>& bindings, const SpacePtr& target) const {
  std::size_t n = space_ ? space_->nsymbols() : 0;
  std::vector<Expr> images(n);
  std::vector<std::vector<Expr>> powers(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < bindings.size() && bindings[i]) {
      images[i] = bindings[i]->rebase(common_space(target, bindings[i]->space()));
    } else if (num_.uses(i) || den_.uses(i)) {
      images[i] = Expr::symbol(target, space_->symbol_name(i));
    }
  }
  auto power = [&](std::size_t i, unsigned k) -> const Expr& {
    auto& pw = powers[i];
    if (pw.empty()) pw.push_back(Expr(1));
    while (pw.size() <= k) pw.push_back(pw.back() * images[i]);
    return pw[k];
  };
  auto image = [&](const Poly& p) {
    Expr sum;
    sum.space_ = target;
    for (const auto& t : p.terms()) {
      Expr term(mpq_class(t.c));
      for (std::size_t i = 0; i < n; ++i)
        if (t.m.e[i]) term = term * power(i, t.m.e[i]);
      sum = sum + term;
    }
    return sum;
  };
  Expr nd = image(den_);
  if (nd.is_zero()) fail(Errc::ZeroDenominator, "denominator vanishes after substitution");
  Expr r = image(num_) / nd;
  r.space_ = target;
  return r;
}

std::string rational_str(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  return c.get_str();
}

namespace {

// Prints p/scale with rational coefficients, grlex order.
void print_poly(std::ostream& os, const Poly& p, const mpz_class& scale, const Space* sp) {
  if (p.is_zero()) {
    os << "0";
    return;
  }
  bool first = true;
  for (const auto& t : p.terms()) {
    mpq_class c(t.c, scale);
    c.canonicalize();
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool unit = (c == 1);
    if (t.m.is_one()) {
      os << c.get_str();
      continue;
    }
    if (!unit) os << c.get_str() << "*";
    bool firstv = true;
    for (std::size_t i = 0; i < kMaxSymbols; ++i) {
      if (!t.m.e[i]) continue;
      if (!firstv) os << "*";
      firstv = false;
      os << (sp ? sp->symbol_name(i) : ("s" + std::to_string(i)));
      if (t.m.e[i] > 1) os << "^" << unsigned(t.m.e[i]);
    }
  }
}

}  // namespace

std::string Expr::str() const {
  std::ostringstream os;
  mpz_class L = den_.lead().c;  // positive by construction
  const Space* sp = space_.get();
  if (den_.is_constant()) {
    print_poly(os, num_, L, sp);
    return os.str();
  }
  bool wrap_num = num_.size() > 1;
  if (wrap_num) os << "(";
  print_poly(os, num_, L, sp);
  if (wrap_num) os << ")";
  os << "/(";
  print_poly(os, den_, L, sp);
  os << ")";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << e.str(); }

double eval(const Expr& e, const std::map<std::string, PointValue>& point,
            const std::map<std::string, double>& consts) {
  const SpacePtr& sp = e.space();
  std::size_t n = sp ? sp->nsymbols() : 0;
  bool all_exact = true;
  std::vector<mpq_class> q(n);
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!e.uses(i)) continue;
    const std::string& name = sp->symbol_name(i);
    if (sp->is_var(i)) {
      auto it = point.find(name);
      if (it == point.end()) fail(Errc::UnboundSymbol, "'" + name + "'");
      d[i] = it->second.approx;
      if (it->second.exact) {
        q[i] = *it->second.exact;
      } else {
        all_exact = false;
      }
    } else {
      auto it = consts.find(name);
      if (it != consts.end()) {
        d[i] = it->second;
        all_exact = false;
      } else {
        auto jt = point.find(name);
        if (jt == point.end()) fail(Errc::UnboundSymbol, "'" + name + "'");
        d[i] = jt->second.approx;
        if (jt->second.exact) {
          q[i] = *jt->second.exact;
        } else {
          all_exact = false;
        }
      }
    }
  }
  if (all_exact) return e.eval_exact(q).get_d();
  double den = e.den().eval(d);
  if (std::fabs(den) < 1e-12) fail(Errc::PoleAtPoint, "denominator below 1e-12");
  return e.num().eval(d) / den;
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings, const SpacePtr& target) {
  const SpacePtr& sp = e.space();
  std::vector<std::optional<Expr>> b(sp ? sp->nsymbols() : 0);
  for (const auto& [name, val] : bindings) {
    auto i = sp ? sp->find(name) : std::nullopt;
    if (!i) fail(Errc::UnknownSymbol, "'" + name + "'");
    b[*i] = val;
  }
  return e.substitute(b, target);
}

}  // namespace kontact
