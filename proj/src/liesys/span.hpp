#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "kontact/expr.hpp"

namespace kontact::detail {

// R-linear span of tuples of rational functions. Membership is decided by exact
// evaluation at seeded random rational points; every relation found that way is
// then checked symbolically, so bad points only cost another round.
class ExprSpan {
 public:
  ExprSpan(SpacePtr space, std::size_t width, std::uint64_t seed);

  std::size_t size() const { return items_.size(); }
  const std::vector<Expr>& item(std::size_t i) const { return items_[i]; }

  // Coefficients of v in the current items, or nullopt when v is independent.
  std::optional<std::vector<mpq_class>> express(const std::vector<Expr>& v);
  // Appends v if independent; returns its coefficients otherwise.
  std::optional<std::vector<mpq_class>> add(const std::vector<Expr>& v);

 private:
  bool try_points(const std::vector<Expr>& extra);
  void resample(const std::vector<Expr>& extra);
  std::vector<mpq_class> evaluate(const std::vector<Expr>& v) const;

  SpacePtr space_;
  std::size_t width_;
  std::mt19937_64 rng_;
  std::vector<std::vector<Expr>> items_;
  std::vector<std::vector<mpq_class>> points_;
  std::vector<std::vector<mpq_class>> evals_;  // per item
  std::size_t extra_points_ = 0;
};

// Solve sum_i c_i cols[i] = rhs over Q. Returns nullopt when inconsistent;
// *rank receives the rank of cols.
std::optional<std::vector<mpq_class>> solve_q(const std::vector<std::vector<mpq_class>>& cols,
                                              const std::vector<mpq_class>& rhs, std::size_t* rank);

}  // namespace kontact::detail
