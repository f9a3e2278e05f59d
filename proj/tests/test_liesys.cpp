#include "doctest.h"
#include "kontact/error.hpp"
#include "kontact/liesys.hpp"
#include "util.hpp"

using namespace kontact;
using kontact::testing::field;
using kontact::testing::kf;
using kontact::testing::one;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Internal;
}

struct Control {
  SpacePtr s = make_space({"x1", "x2", "x3", "x4", "x5"});
  std::vector<VectorField> X{field(s, {"1", "0", "0", "0", "0"}), field(s, {"0", "1", "x1", "x1^2", "2*x1*x2"}),
                             field(s, {"0", "0", "1", "2*x1", "2*x2"}), field(s, {"0", "0", "0", "1", "0"}),
                             field(s, {"0", "0", "0", "0", "1"})};
  std::vector<VectorField> Y{field(s, {"1", "0", "x2", "2*x3", "x2^2"}), field(s, {"0", "1", "0", "0", "2*x3"}),
                             field(s, {"0", "0", "1", "0", "0"}), field(s, {"0", "0", "0", "1", "0"}),
                             field(s, {"0", "0", "0", "0", "1"})};
  VecForm eta{{one(s, {"-2*x3", "0", "0", "1", "0"}), one(s, {"-x2^2", "-2*x3", "0", "0", "1"})}};
  VecForm eta3{{one(s, {"-x2", "0", "1", "0", "0"}), one(s, {"2*(x1*x2 - x3)", "0", "-2*x1", "1", "0"}),
                one(s, {"x2^2", "-2*x3", "-2*x2", "0", "1"})}};
};

struct Jet {
  SpacePtr s = make_space({"q", "z1", "z2", "p1", "p2"});
  VecForm eta{{one(s, {"-p1", "1", "0", "0", "0"}), one(s, {"-p2", "0", "1", "0", "0"})}};
  std::vector<VectorField> X{field(s, {"0", "1", "0", "0", "0"}), field(s, {"0", "0", "1", "0", "0"}),
                             field(s, {"1", "0", "0", "0", "0"}), field(s, {"q", "0", "0", "-p1", "-p2"}),
                             field(s, {"1/2*q", "z1", "1/4*z2", "1/2*p1", "-1/4*p2"})};
};

struct FrontWheel {
  SpacePtr s = make_space({"x1", "x2", "x3", "x4"});
  std::vector<VectorField> X{field(s, {"1", "0", "x2", "x3"}), field(s, {"0", "1", "0", "0"}),
                             field(s, {"0", "0", "-1", "0"}), field(s, {"0", "0", "0", "1"})};
  VecForm eta{{one(s, {"0", "x1", "-1", "0"}), one(s, {"0", "-x1^2/2", "0", "1"})}};
};

}  // namespace

TEST_CASE("closure: Riccati") {
  auto s = make_space({"x"});
  LieClosure c = bracket_closure({field(s, {"1"}), field(s, {"x"}), field(s, {"x^2"})});
  CHECK(c.dim() == 3);
  CHECK(c.closed);
  CHECK(format_table(c.c) == "[X1,X2] = X1, [X1,X3] = 2X2, [X2,X3] = X3");
  CHECK(is_antisymmetric(c.c));
  CHECK(satisfies_jacobi(c.c));
  CHECK_FALSE(is_locally_automorphic(c));
}

TEST_CASE("closure: front-wheel generators") {
  FrontWheel fw;
  LieClosure c = bracket_closure({fw.X[0], fw.X[1]});
  REQUIRE(c.dim() == 4);
  CHECK(c.basis[2] == fw.X[2]);
  CHECK(c.basis[3] == fw.X[3]);
  CHECK(c.words[3] == "[X1,[X1,X2]]");
  CHECK(format_table(c.c) == "[X1,X2] = X3, [X1,X3] = X4");
  CHECK(is_locally_automorphic(c));
}

TEST_CASE("closure: small cases") {
  auto s = make_space({"x", "y"});
  LieClosure one_field = bracket_closure({field(s, {"y", "x"})});
  CHECK(one_field.dim() == 1);
  CHECK(format_table(one_field.c).empty());
  // dependent generators are dropped
  LieClosure dup = bracket_closure({field(s, {"1", "0"}), field(s, {"2", "0"}), field(s, {"0", "1"})});
  CHECK(dup.dim() == 2);
  CHECK(dup.words[1] == "X3");
  // d/dx and x^3 d/dx generate an infinite-dimensional algebra
  CHECK(code_of([&] { bracket_closure({field(s, {"1", "0"}), field(s, {"x^3", "0"})}, 8); }) == Errc::NotClosed);
  CHECK(code_of([&] { bracket_closure({field(s, {"1", "0"}), field(s, {"x^3", "0"})}, 64, 3); }) == Errc::NotClosed);
  // function coefficients that agree at few points but differ symbolically
  LieClosure c = bracket_closure({field(s, {"x*(x-1)*(x+1)*y", "0"}), field(s, {"0", "1"})});
  CHECK(c.dim() > 2);
}

TEST_CASE("closure: control and Brockett-3") {
  Control c;
  LieClosure cl = bracket_closure(c.X);
  CHECK(cl.dim() == 5);
  CHECK(format_table(cl.c) == "[X1,X2] = X3, [X1,X3] = 2X4, [X2,X3] = 2X5");
  CHECK(is_locally_automorphic(cl));

  auto s = make_space({"x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8"});
  VectorField X1 = field(s, {"1", "0", "0", "x3", "0", "x4", "0", "0"});
  VectorField X2 = field(s, {"0", "1", "x1", "0", "x3", "0", "x4", "x5"});
  LieClosure b = bracket_closure({X1, X2});
  REQUIRE(b.dim() == 8);
  CHECK(b.basis[2] == field(s, {"0", "0", "1", "-x1", "0", "0", "x3", "0"}));
  CHECK(b.basis[7] == field(s, {"0", "0", "0", "0", "0", "0", "0", "1"}));
  CHECK(format_table(b.c) ==
        "[X1,X2] = X3, [X1,X3] = X4, [X1,X4] = X6, [X1,X5] = X7, [X2,X3] = X5, [X2,X4] = X7, [X2,X5] = X8");
  CHECK(is_locally_automorphic(b));
  CHECK(satisfies_jacobi(b.c));
}

TEST_CASE("structure constants of a given basis") {
  Control c;
  auto k = structure_constants(c.Y);
  CHECK(format_table(k) == "[X1,X2] = -X3, [X1,X3] = -2X4, [X2,X3] = -2X5");
  CHECK(code_of([&] { structure_constants({c.X[0], c.X[1]}); }) == Errc::NotClosed);
  CHECK(code_of([&] { structure_constants({c.X[0], c.X[0]}); }) == Errc::InvalidInput);
}

TEST_CASE("dual coframes") {
  Control c;
  std::vector<VectorField> id;
  for (std::size_t i = 0; i < 5; ++i) id.push_back(VectorField::coordinate(c.s, i));
  auto dx = dual_coframe(id);
  for (std::size_t i = 0; i < 5; ++i) CHECK(dx[i] == DiffForm::dx(c.s, i));

  auto U = dual_coframe(c.Y);
  CHECK(U[4] == one(c.s, {"-x2^2", "-2*x3", "0", "0", "1"}));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(U[i].evaluate({c.Y[j]}) == Expr(i == j ? 1 : 0));

  auto s = make_space({"x1", "v1", "x2", "v2"});
  std::vector<VectorField> Y{field(s, {"x2", "v2", "0", "0"}), field(s, {"-x1/2", "-v1/2", "x2/2", "v2/2"}),
                             field(s, {"0", "0", "-x1", "-v1"}), field(s, {"x1", "v1", "x2", "v2"})};
  auto W = dual_coframe(Y);
  Expr D = parse_expr("v1*x2 - x1*v2", s);
  CHECK(W[3] == (Expr(1) / (Expr(2) * D)) * ext_deriv(DiffForm::function(s, D)));
  CHECK(ext_deriv(W[3]).is_zero());
  CHECK(ext_deriv(W[1]) == Expr(2) * wedge(W[0], W[2]));

  CHECK(code_of([&] { dual_coframe({c.Y[0], c.Y[0], c.Y[2], c.Y[3], c.Y[4]}); }) == Errc::DegenerateFrame);
  CHECK(code_of([&] { dual_coframe({c.Y[0]}); }) == Errc::DegenerateFrame);
}

TEST_CASE("Maurer-Cartan identities") {
  Control c;
  auto U = dual_coframe(c.Y);
  auto k = structure_constants(c.Y);
  CHECK(maurer_cartan_check(U, k).holds);
  CHECK(ext_deriv(U[2]) == wedge(U[0], U[1]));
  // the X constants have the opposite sign
  auto kx = structure_constants(c.X);
  auto bad = maurer_cartan_check(U, kx);
  CHECK_FALSE(bad.holds);
  CHECK(bad.failing == std::size_t(2));

  std::vector<VectorField> id;
  for (std::size_t i = 0; i < 5; ++i) id.push_back(VectorField::coordinate(c.s, i));
  CHECK(maurer_cartan_check(dual_coframe(id), structure_constants(id)).holds);
}

TEST_CASE("projectability") {
  Control c;
  KContactForm ctx(c.eta);
  Projectability p = projectability_check(c.X, ctx);
  CHECK(p.projectable);
  CHECK(p.hamiltonians[0] == kf(c.s, {"2*x3", "x2^2"}));

  KContactForm ctx3(c.eta3);
  Projectability p3 = projectability_check(c.X, ctx3);
  CHECK_FALSE(p3.projectable);
  CHECK(apply(c.X[2], p3.hamiltonians[1]) == kf(c.s, {"0", "0", "2"}));

  CHECK(projectability_check(ctx.reeb(), ctx).projectable);
  CHECK(code_of([&] { projectability_check({VectorField::coordinate(c.s, 1)}, ctx); }) == Errc::NotHamiltonianInput);
}

TEST_CASE("diagonal prolongation") {
  Jet j;
  Prolongation p0 = diagonal_prolongation(j.X, j.eta, 0);
  CHECK(p0.space == j.s);
  CHECK(p0.fields[4] == j.X[4]);

  Prolongation p = diagonal_prolongation(j.X, j.eta, 1);
  CHECK(p.space->dim() == 10);
  CHECK(p.space->vars()[6] == "z1_1");
  CHECK(p.eta.k() == 4);
  KContactForm ctx(p.eta);
  CHECK(ctx.reeb().size() == 4);
  CHECK(ctx.report().rank_ker_deta == 4);
  CHECK(p.eta[2] == one(p.space, {"0", "0", "0", "0", "0", "-p1_1", "1", "0", "0", "0"}));
  CHECK(p.hamiltonians[2] == kf(p.space, {"p1_0", "p2_0", "p1_1", "p2_1"}));
  CHECK(structure_constants(p.fields) == structure_constants(j.X));

  auto s = make_space({"x", "y", "z"});
  VecForm bad({DiffForm::dx(s, 2), DiffForm::dx(s, 2)});
  CHECK(code_of([&] { diagonal_prolongation({}, bad, 1); }) == Errc::NotKContact);
}

TEST_CASE("companion system: front-wheel") {
  FrontWheel fw;
  KContactForm ctx(fw.eta);
  std::vector<KFunction> h;
  for (const auto& X : fw.X) h.push_back(hamiltonian_of(X, ctx));
  CHECK(code_of([&] { companion_system(fw.X, h, ctx, {1, 0}); }) == Errc::DependentProjections);
  CompanionSystem cs = companion_system(fw.X, h, ctx, {1, 0}, {"b1", "b2", "0", "0"}, true);
  CHECK(cs.dependent);
  CHECK(format_table(cs.c, "h", "{", "}") == "{h1,h2} = -h3, {h1,h3} = -h4");
  Expr b2 = Expr::symbol(cs.space, "b2");
  // I = <h1, θ> + f3 <h3, θ> with f3' = b2
  CHECK(cs.M(2, 0) == b2);
  CHECK(cs.M(0, 0).is_zero());
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t g = 0; g < 4; ++g) CHECK(cs.lambda[a][b][g] == 0);
  REQUIRE(cs.nilpotency_order);
  CHECK(*cs.nilpotency_order == 2);
}

TEST_CASE("companion system: control system derivatives vanish at third order") {
  Control c;
  KContactForm ctx(c.eta);
  std::vector<KFunction> h;
  for (const auto& X : c.X) h.push_back(hamiltonian_of(X, ctx));
  for (std::vector<mpq_class> theta : {std::vector<mpq_class>{1, 0}, std::vector<mpq_class>{0, 1}}) {
    CompanionSystem cs = companion_system(c.X, h, ctx, theta, {"b1", "b2", "0", "0", "0"}, true);
    REQUIRE(cs.nilpotency_order);
    CHECK(*cs.nilpotency_order <= 3);
  }
  CompanionSystem full = companion_system(c.X, h, ctx, {1, 0}, {}, true);
  CHECK(full.coeffs.size() == 5);
  CHECK(full.space->find("b5"));
}

TEST_CASE("companion system: abelian and failures") {
  auto s = make_space({"x", "p", "z"});
  KContactForm ctx(VecForm({one(s, {"-p", "0", "1"})}));
  VectorField R = ctx.reeb()[0];
  CompanionSystem cs = companion_system({R}, {kf(s, {"-1"})}, ctx, {1});
  CHECK(cs.M(0, 0).is_zero());
  CHECK(cs.nilpotency_order == std::size_t(1));
  CHECK_FALSE(cs.dependent);

  // R_{h} h = h for h = z with X_h = -p d_p - z d_z: λ = 1 is constant
  VectorField X = field(s, {"0", "-p", "-z"});
  CompanionSystem cz = companion_system({X}, {kf(s, {"z"})}, ctx, {1});
  CHECK(cz.lambda[0][0][0] == 1);
  // h = z^2: R_h h = z^2 * 2z, not a constant multiple
  VectorField Xsq = field(s, {"0", "-2*p*z", "-z^2"});
  CHECK(hamiltonian_of(Xsq, ctx) == kf(s, {"z^2"}));
  CHECK(code_of([&] { companion_system({Xsq}, {kf(s, {"z^2"})}, ctx, {1}); }) == Errc::LambdaNotConstant);
}

TEST_CASE("momentum map zero level") {
  Jet j;
  KContactForm ctx(j.eta);
  std::vector<VectorField> B{j.X[2], j.X[3], j.X[4]};
  std::vector<KFunction> h;
  for (const auto& X : B) h.push_back(hamiltonian_of(X, ctx));
  std::vector<std::map<std::string, PointValue>> samples;
  for (int i = 0; i < 20; ++i)
    samples.push_back({{"q", mpq_class(i - 7, 3)}, {"z1", mpq_class(2 * i + 1, 5)}, {"z2", mpq_class(0)},
                       {"p1", mpq_class(5 - i, 2)}, {"p2", mpq_class(0)}});
  MomentumReport r = momentum_invariance(B, h, {0, 1}, ctx, samples);
  CHECK(r.invariant);
  CHECK(r.samples == 20);
  CHECK(r.max_level == 0);
  CHECK(r.max_reeb == 0);
  CHECK(r.max_flow == 0);

  CHECK(momentum_invariance(B, h, {0, 0}, ctx, samples).invariant);
  samples[3].insert_or_assign("p2", PointValue(1e-3));
  CHECK(code_of([&] { momentum_invariance(B, h, {0, 1}, ctx, samples); }) == Errc::SampleNotOnZeroSet);
  // θ = e1 zero set p1 = 0, z1 = 0 also works; a point off it does not
  CHECK(code_of([&] { momentum_invariance(B, h, {1, 0}, ctx, {samples[0]}); }) == Errc::SampleNotOnZeroSet);
}

TEST_CASE("PDE integrability") {
  auto s = make_space({"t1", "t2", "x", "y"});
  CHECK(pde_integrability(KVectorField{{field(s, {"0", "0", "1", "0"}), field(s, {"0", "0", "0", "1"})}}, {"t1", "t2"}));
  CHECK_FALSE(
      pde_integrability(KVectorField{{field(s, {"0", "0", "1", "0"}), field(s, {"0", "0", "t1", "0"})}}, {"t1", "t2"}));
  auto u = make_space({"t", "x"});
  CHECK(pde_integrability(KVectorField{{field(u, {"0", "x^2 + t"})}}, {"t"}));
  CHECK_THROWS_AS(pde_integrability(KVectorField{{field(u, {"0", "x"})}}, {"s"}), Error);
}
