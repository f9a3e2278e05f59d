#pragma once

#include <string>
#include <vector>

#include "kontact/exterior.hpp"

namespace kontact::testing {

inline VectorField field(const SpacePtr& s, const std::vector<std::string>& c) {
  std::vector<Expr> e;
  for (auto& t : c) e.push_back(parse_expr(t, s));
  return VectorField(s, e);
}

inline DiffForm one(const SpacePtr& s, const std::vector<std::string>& c) {
  std::vector<Expr> e;
  for (auto& t : c) e.push_back(parse_expr(t, s));
  return DiffForm::one_form(s, e);
}

inline KFunction kf(const SpacePtr& s, const std::vector<std::string>& c) {
  std::vector<Expr> e;
  for (auto& t : c) e.push_back(parse_expr(t, s));
  return KFunction(s, e);
}

}  // namespace kontact::testing
