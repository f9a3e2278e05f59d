#include "kontact/matrix.hpp"

#include "kontact/error.hpp"

namespace kontact {

namespace {

constexpr std::size_t kTermLimit = 100000;

void guard(const Expr& e) {
  if (e.term_count() > kTermLimit)
    fail(Errc::RankComputationOverflow, "entry grew past " + std::to_string(kTermLimit) + " terms");
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Expr(1);
  return m;
}

std::vector<Expr> Matrix::row(std::size_t i) const {
  return {a_.begin() + static_cast<std::ptrdiff_t>(i * c_), a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * c_)};
}

std::vector<Expr> Matrix::col(std::size_t j) const {
  std::vector<Expr> v(r_);
  for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
  return v;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (c_ != o.r_) fail(Errc::LengthMismatch, "matrix product shape");
  Matrix m(r_, o.c_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t k = 0; k < c_; ++k) {
      const Expr& x = (*this)(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < o.c_; ++j)
        if (!o(k, j).is_zero()) m(i, j) += x * o(k, j);
    }
  return m;
}

Matrix Matrix::transpose() const {
  Matrix m(c_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

Matrix Matrix::stack(const Matrix& o) const {
  if (r_ == 0) return o;
  if (o.r_ == 0) return *this;
  if (c_ != o.c_) fail(Errc::LengthMismatch, "stacked matrices differ in width");
  Matrix m(r_ + o.r_, c_);
  std::copy(a_.begin(), a_.end(), m.a_.begin());
  std::copy(o.a_.begin(), o.a_.end(), m.a_.begin() + static_cast<std::ptrdiff_t>(a_.size()));
  return m;
}

Elimination row_reduce(Matrix m, std::size_t pivot_limit) {
  Elimination out;
  std::size_t R = m.rows(), C = m.cols();
  if (pivot_limit > C) pivot_limit = C;
  std::size_t r = 0;
  for (std::size_t c = 0; c < pivot_limit && r < R; ++c) {
    std::size_t best = R;
    std::size_t best_cost = 0;
    for (std::size_t i = r; i < R; ++i) {
      if (m(i, c).is_zero()) continue;
      std::size_t cost = m(i, c).complexity();
      if (best == R || cost < best_cost) {
        best = i;
        best_cost = cost;
      }
    }
    if (best == R) continue;
    if (best != r)
      for (std::size_t j = 0; j < C; ++j) std::swap(m(r, j), m(best, j));
    Expr p = m(r, c);
    out.locus.push_back(p);
    Expr inv = p.inverse();
    for (std::size_t j = c; j < C; ++j)
      if (!m(r, j).is_zero()) m(r, j) = m(r, j) * inv;
    m(r, c) = Expr(1);
    for (std::size_t i = 0; i < R; ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Expr f = m(i, c);
      for (std::size_t j = c; j < C; ++j) {
        if (m(r, j).is_zero()) continue;
        m(i, j) -= f * m(r, j);
        guard(m(i, j));
      }
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const Matrix& m) { return row_reduce(m).rank(); }

std::vector<std::vector<Expr>> null_space(const Matrix& m) {
  Elimination e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<Expr>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Expr> v(m.cols());
    v[f] = Expr(1);
    for (std::size_t i = 0; i < e.pivot_cols.size(); ++i) v[e.pivot_cols[i]] = -e.reduced(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

Matrix solve(const Matrix& a, const Matrix& b, std::vector<Expr>* locus) {
  if (a.rows() != b.rows()) fail(Errc::LengthMismatch, "right-hand side height");
  std::size_t n = a.cols(), k = b.cols();
  Matrix aug(a.rows(), n + k);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    for (std::size_t j = 0; j < k; ++j) aug(i, n + j) = b(i, j);
  }
  Elimination e = row_reduce(std::move(aug), n);
  if (e.rank() < n) fail(Errc::SingularSolve, "system has rank " + std::to_string(e.rank()) + " < " + std::to_string(n));
  for (std::size_t i = n; i < a.rows(); ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (!e.reduced(i, n + j).is_zero()) fail(Errc::SingularSolve, "inconsistent system");
  Matrix x(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) x(i, j) = e.reduced(i, n + j);
  if (locus) *locus = std::move(e.locus);
  return x;
}

Matrix inverse(const Matrix& m, std::vector<Expr>* locus) {
  if (m.rows() != m.cols()) fail(Errc::LengthMismatch, "inverse of a non-square matrix");
  return solve(m, Matrix::identity(m.rows()), locus);
}

Expr det(const Matrix& m0) {
  if (m0.rows() != m0.cols()) fail(Errc::LengthMismatch, "determinant of a non-square matrix");
  Matrix m = m0;
  std::size_t n = m.rows();
  Expr d(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = n, best_cost = 0;
    for (std::size_t i = c; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      std::size_t cost = m(i, c).complexity();
      if (best == n || cost < best_cost) {
        best = i;
        best_cost = cost;
      }
    }
    if (best == n) return Expr(0);
    if (best != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(best, j));
      d = -d;
    }
    Expr p = m(c, c);
    d *= p;
    Expr inv = p.inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      Expr f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) {
        if (m(c, j).is_zero()) continue;
        m(i, j) -= f * m(c, j);
        guard(m(i, j));
      }
    }
  }
  return d;
}

}  // namespace kontact
