#include "span.hpp"

#include "kontact/error.hpp"

namespace kontact::detail {

std::optional<std::vector<mpq_class>> solve_q(const std::vector<std::vector<mpq_class>>& cols,
                                              const std::vector<mpq_class>& rhs, std::size_t* rank) {
  std::size_t m = cols.size(), len = rhs.size();
  std::vector<std::vector<mpq_class>> a(len, std::vector<mpq_class>(m + 1));
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t j = 0; j < m; ++j) a[i][j] = cols[j][i];
    a[i][m] = rhs[i];
  }
  std::vector<std::size_t> piv;
  std::size_t row = 0;
  for (std::size_t c = 0; c < m && row < len; ++c) {
    std::size_t p = row;
    while (p < len && a[p][c] == 0) ++p;
    if (p == len) continue;
    std::swap(a[p], a[row]);
    mpq_class inv = 1 / a[row][c];
    for (std::size_t j = c; j <= m; ++j) a[row][j] *= inv;
    for (std::size_t i = 0; i < len; ++i) {
      if (i == row || a[i][c] == 0) continue;
      mpq_class f = a[i][c];
      for (std::size_t j = c; j <= m; ++j) a[i][j] -= f * a[row][j];
    }
    piv.push_back(c);
    ++row;
  }
  if (rank) *rank = piv.size();
  for (std::size_t i = row; i < len; ++i)
    if (a[i][m] != 0) return std::nullopt;
  std::vector<mpq_class> x(m);
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = a[i][m];
  return x;
}

ExprSpan::ExprSpan(SpacePtr space, std::size_t width, std::uint64_t seed)
    : space_(std::move(space)), width_(width), rng_(seed) {}

std::vector<mpq_class> ExprSpan::evaluate(const std::vector<Expr>& v) const {
  std::vector<mpq_class> out;
  out.reserve(points_.size() * width_);
  for (const auto& p : points_)
    for (const auto& e : v) out.push_back(e.eval_exact(p));
  return out;
}

namespace {

bool pole_free(const std::vector<Expr>& v, const std::vector<mpq_class>& p) {
  for (const auto& e : v)
    if (e.den().eval(p) == 0) return false;
  return true;
}

}  // namespace

void ExprSpan::resample(const std::vector<Expr>& extra) {
  std::size_t nsym = space_ ? space_->nsymbols() : 0;
  std::size_t want = nsym == 0 ? 1 : 2 * nsym + items_.size() + 1 + extra_points_;
  std::uniform_int_distribution<int> coord(-7, 7);
  points_.clear();
  for (std::size_t n = 0; n < want; ++n) {
    std::vector<mpq_class> p(nsym);
    bool ok = false;
    for (int tries = 0; tries < 1000 && !ok; ++tries) {
      for (auto& x : p) x = coord(rng_);
      ok = pole_free(extra, p);
      for (std::size_t i = 0; ok && i < items_.size(); ++i) ok = pole_free(items_[i], p);
    }
    if (!ok) fail(Errc::Internal, "no pole-free sample point in [-7, 7]");
    points_.push_back(std::move(p));
  }
  evals_.clear();
  for (const auto& it : items_) evals_.push_back(evaluate(it));
}

bool ExprSpan::try_points(const std::vector<Expr>& extra) {
  if (points_.empty()) return false;
  for (const auto& p : points_)
    if (!pole_free(extra, p)) return false;
  return true;
}

std::optional<std::vector<mpq_class>> ExprSpan::express(const std::vector<Expr>& v) {
  if (v.size() != width_) fail(Errc::LengthMismatch, "span element has the wrong length");
  if (items_.empty()) {
    for (const auto& e : v)
      if (!e.is_zero()) return std::nullopt;
    return std::vector<mpq_class>{};
  }
  for (int attempt = 0; attempt < 12; ++attempt) {
    if (!try_points(v)) resample(v);
    std::size_t rk = 0;
    auto sol = solve_q(evals_, evaluate(v), &rk);
    if (rk < items_.size()) {
      extra_points_ += 2 * width_ + 2;
      resample(v);
      continue;
    }
    if (!sol) return std::nullopt;
    bool ok = true;
    for (std::size_t j = 0; j < width_ && ok; ++j) {
      Expr s;
      for (std::size_t i = 0; i < items_.size(); ++i)
        if ((*sol)[i] != 0) s += Expr((*sol)[i]) * items_[i][j];
      ok = s == v[j];
    }
    if (ok) return sol;
    extra_points_ += 2;
    resample(v);
  }
  fail(Errc::Internal, "sample points keep missing a linear relation");
}

std::optional<std::vector<mpq_class>> ExprSpan::add(const std::vector<Expr>& v) {
  auto r = express(v);
  if (r) return r;
  items_.push_back(v);
  if (!try_points(v)) resample(v);
  evals_.push_back(evaluate(v));
  return std::nullopt;
}

}  // namespace kontact::detail
