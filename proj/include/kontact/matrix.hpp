#pragma once

#include <vector>

#include "kontact/expr.hpp"

namespace kontact {

// Dense matrix over the rational-function field; row major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  Expr& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const Expr& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
  std::vector<Expr> row(std::size_t i) const;
  std::vector<Expr> col(std::size_t j) const;

  Matrix operator*(const Matrix& o) const;
  Matrix transpose() const;
  bool operator==(const Matrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
  // Rows of this followed by rows of o.
  Matrix stack(const Matrix& o) const;

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<Expr> a_;
};

// Reduced row echelon form at a generic point. Pivots are chosen only in columns
// below pivot_limit, preferring the simplest entry. Every pivot used is kept in
// locus: the reduction is valid off the zero set of their numerators.
struct Elimination {
  Matrix reduced;
  std::vector<std::size_t> pivot_cols;
  std::vector<Expr> locus;
  std::size_t rank() const { return pivot_cols.size(); }
};

Elimination row_reduce(Matrix m, std::size_t pivot_limit = static_cast<std::size_t>(-1));
std::size_t rank(const Matrix& m);
// Basis of {v : m v = 0}, one vector per free column.
std::vector<std::vector<Expr>> null_space(const Matrix& m);
// Unique X with a X = b. SingularSolve when a lacks full column rank or the
// system is inconsistent; locus (optional) receives the pivot entries.
Matrix solve(const Matrix& a, const Matrix& b, std::vector<Expr>* locus = nullptr);
Matrix inverse(const Matrix& m, std::vector<Expr>* locus = nullptr);
Expr det(const Matrix& m);

}  // namespace kontact
