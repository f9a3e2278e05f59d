#include <random>

#include "doctest.h"
#include "fuzz.hpp"
#include "kontact/error.hpp"
#include "kontact/exterior.hpp"

using namespace kontact;
using kontact::testing::random_field;
using kontact::testing::random_form;

namespace {

VectorField field(const SpacePtr& s, std::vector<std::string> c) {
  std::vector<Expr> e;
  for (auto& t : c) e.push_back(parse_expr(t, s));
  return VectorField(s, e);
}

DiffForm one(const SpacePtr& s, std::vector<std::string> c) {
  std::vector<Expr> e;
  for (auto& t : c) e.push_back(parse_expr(t, s));
  return DiffForm::one_form(s, e);
}

DiffForm dx(const SpacePtr& s, std::size_t i) { return DiffForm::dx(s, i); }

struct Control {
  SpacePtr s = make_space({"x1", "x2", "x3", "x4", "x5"});
  std::vector<VectorField> X{field(s, {"1", "0", "0", "0", "0"}),
                             field(s, {"0", "1", "x1", "x1^2", "2*x1*x2"}),
                             field(s, {"0", "0", "1", "2*x1", "2*x2"}),
                             field(s, {"0", "0", "0", "1", "0"}),
                             field(s, {"0", "0", "0", "0", "1"})};
  std::vector<DiffForm> U{one(s, {"1", "0", "0", "0", "0"}), one(s, {"0", "1", "0", "0", "0"}),
                          one(s, {"-x2", "0", "1", "0", "0"}), one(s, {"-2*x3", "0", "0", "1", "0"}),
                          one(s, {"-x2^2", "-2*x3", "0", "0", "1"})};
};

}  // namespace

TEST_CASE("lie bracket examples") {
  auto s = make_space({"x"});
  VectorField dxf = field(s, {"1"}), xdx = field(s, {"x"});
  CHECK(lie_bracket(dxf, xdx) == dxf);
  CHECK(lie_bracket(xdx, xdx).is_zero());
  Control c;
  CHECK(lie_bracket(c.X[0], c.X[2]) == Expr(2) * c.X[3]);
  CHECK(lie_bracket(c.X[0], c.X[1]) == c.X[2]);
  auto t = make_space({"y"});
  CHECK_THROWS_AS(lie_bracket(dxf, field(t, {"1"})), Error);
}

TEST_CASE("exterior derivative examples") {
  Control c;
  CHECK(ext_deriv(dx(c.s, 0)).is_zero());
  CHECK(ext_deriv(c.U[2]) == wedge(dx(c.s, 0), dx(c.s, 1)));
  CHECK(ext_deriv(c.U[3]) == Expr(-2) * wedge(dx(c.s, 2), dx(c.s, 0)));
  CHECK(ext_deriv(c.U[3]) == Expr(2) * wedge(c.U[0], c.U[2]));
  CHECK(ext_deriv(c.U[4]) == Expr(2) * wedge(c.U[1], c.U[2]));
  CHECK(wedge(c.U[0], c.U[2]) == wedge(dx(c.s, 0), dx(c.s, 2)));
  DiffForm top = wedge(wedge(wedge(wedge(dx(c.s, 0), dx(c.s, 1)), dx(c.s, 2)), dx(c.s, 3)), dx(c.s, 4));
  CHECK(ext_deriv(parse_expr("x1", c.s) * top).is_zero());
}

TEST_CASE("wedge antisymmetry") {
  auto s = make_space({"x1", "x2"});
  CHECK(wedge(dx(s, 0), dx(s, 0)).is_zero());
  CHECK(wedge(dx(s, 0), dx(s, 1)) == -wedge(dx(s, 1), dx(s, 0)));
}

TEST_CASE("interior examples") {
  Control c;
  CHECK(interior(c.X[3], c.U[3]).scalar() == Expr(1));
  CHECK(interior(c.X[2], DiffForm(c.s, 1)).is_zero());
  CHECK(interior(c.X[2], c.U[3]).scalar() == parse_expr("2*x1", c.s));
  CHECK_THROWS_AS(interior(c.X[0], DiffForm::function(c.s, Expr(1))), Error);
}

TEST_CASE("lie derivative examples") {
  Control c;
  CHECK(lie_derivative(c.X[3], dx(c.s, 0)).is_zero());
  for (const auto& X : c.X)
    for (const auto& U : c.U) CHECK(lie_derivative(X, U).is_zero());
  auto s = make_space({"x1", "v1", "x2", "v2"});
  DiffForm w = wedge(dx(s, 0), dx(s, 1)) + wedge(dx(s, 2), dx(s, 3));
  VectorField X4 = field(s, {"x1", "v1", "x2", "v2"});
  CHECK(lie_derivative(X4, w) == Expr(2) * w);
}

TEST_CASE("pairing") {
  auto s = make_space({"x1", "x2", "x3", "x4"});
  KFunction h1(s, {Expr(), Expr(), parse_expr("x2", s), parse_expr("-x3", s)});
  CHECK(pairing(h1, {0, 0, 1, 0}) == parse_expr("x2", s));
  CHECK(pairing(h1, {0, 0, 0, 0}).is_zero());
  CHECK_THROWS_AS(pairing(h1, {1, 0}), Error);
}

TEST_CASE("form evaluation uses the determinant convention") {
  auto s = make_space({"x", "y"});
  DiffForm w = wedge(dx(s, 0), dx(s, 1));
  VectorField X = field(s, {"1", "2"}), Y = field(s, {"3", "5"});
  CHECK(w.evaluate({X, Y}) == Expr(-1));
  CHECK(interior(X, w).evaluate({Y}) == w.evaluate({X, Y}));
}

TEST_CASE("property: Jacobi identity") {
  auto s = make_space({"a", "b", "c", "d"});
  std::mt19937_64 rng(101);
  for (int i = 0; i < 200; ++i) {
    auto sub = make_space(std::vector<std::string>(s->vars().begin(), s->vars().begin() + 2 + i % 3));
    VectorField X = random_field(rng, sub), Y = random_field(rng, sub), Z = random_field(rng, sub);
    VectorField j = lie_bracket(lie_bracket(X, Y), Z) + lie_bracket(lie_bracket(Y, Z), X) + lie_bracket(lie_bracket(Z, X), Y);
    REQUIRE(j.is_zero());
    REQUIRE(lie_bracket(X, Y) == -lie_bracket(Y, X));
  }
}

TEST_CASE("property: d squared vanishes") {
  auto s = make_space({"a", "b", "c", "d"});
  std::mt19937_64 rng(202);
  for (int i = 0; i < 200; ++i) {
    DiffForm w = random_form(rng, s, static_cast<unsigned>(i % 3), 3);
    REQUIRE(ext_deriv(ext_deriv(w)).is_zero());
  }
}

TEST_CASE("property: Cartan calculus identities") {
  auto s = make_space({"a", "b", "c"});
  std::mt19937_64 rng(303);
  for (int i = 0; i < 200; ++i) {
    VectorField X = random_field(rng, s), Y = random_field(rng, s);
    unsigned p = 1 + static_cast<unsigned>(i % 3);
    DiffForm w = random_form(rng, s, p);
    // i_[X,Y] = L_X i_Y - i_Y L_X
    REQUIRE(interior(lie_bracket(X, Y), w) == lie_derivative(X, interior(Y, w)) - interior(Y, lie_derivative(X, w)));
    // L_[X,Y] = L_X L_Y - L_Y L_X
    REQUIRE(lie_derivative(lie_bracket(X, Y), w) ==
            lie_derivative(X, lie_derivative(Y, w)) - lie_derivative(Y, lie_derivative(X, w)));
    if (p >= 2) REQUIRE(interior(X, interior(X, w)).is_zero());
    if (p == 1) {
      // coordinate formula (L_X w)_i = X^j d_j w_i + w_j d_i X^j
      auto wc = w.one_form_coeffs();
      std::vector<Expr> lc(3);
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) lc[a] += X[b] * wc[a].diff(b) + wc[b] * X[b].diff(a);
      REQUIRE(lie_derivative(X, w) == DiffForm::one_form(s, lc));
    }
  }
}

TEST_CASE("vector-valued variants are componentwise") {
  Control c;
  VecForm eta({c.U[3], c.U[4]});
  VecForm d = ext_deriv_k(eta);
  CHECK(d[0] == ext_deriv(c.U[3]));
  CHECK(d[1] == ext_deriv(c.U[4]));
  VecForm i = interior_k(c.X[2], eta);
  CHECK(i[0].scalar() == parse_expr("2*x1", c.s));
  CHECK(i[1].scalar() == parse_expr("2*x2", c.s));
  VecForm l = lie_derivative_k(c.X[1], eta);
  CHECK(l[0].is_zero());
  CHECK(l[1].is_zero());
}
