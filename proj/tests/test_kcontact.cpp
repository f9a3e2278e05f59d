#include "doctest.h"
#include "kontact/error.hpp"
#include "kontact/kcontact.hpp"
#include "util.hpp"

using namespace kontact;
using kontact::testing::field;
using kontact::testing::kf;
using kontact::testing::one;

namespace {

struct Jet {
  SpacePtr s = make_space({"q", "z1", "z2", "p1", "p2"});
  VecForm eta{{one(s, {"-p1", "1", "0", "0", "0"}), one(s, {"-p2", "0", "1", "0", "0"})}};
  std::vector<VectorField> X{field(s, {"0", "1", "0", "0", "0"}), field(s, {"0", "0", "1", "0", "0"}),
                             field(s, {"1", "0", "0", "0", "0"}), field(s, {"q", "0", "0", "-p1", "-p2"}),
                             field(s, {"1/2*q", "z1", "1/4*z2", "1/2*p1", "-1/4*p2"})};
  std::vector<KFunction> h{kf(s, {"-1", "0"}), kf(s, {"0", "-1"}), kf(s, {"p1", "p2"}), kf(s, {"q*p1", "q*p2"}),
                           kf(s, {"-z1 + q*p1/2", "-z2/4 + q*p2/2"})};
};

// second-degree control system with η = Υ4 e1 + Υ5 e2
struct Control {
  SpacePtr s;
  VecForm eta;
  std::vector<VectorField> X;
  std::vector<KFunction> h;
  explicit Control(std::vector<std::string> consts = {})
      : s(make_space({"x1", "x2", "x3", "x4", "x5"}, consts)),
        eta({one(s, {"-2*x3", "0", "0", "1", "0"}), one(s, {"-x2^2", "-2*x3", "0", "0", "1"})}),
        X{field(s, {"1", "0", "0", "0", "0"}), field(s, {"0", "1", "x1", "x1^2", "2*x1*x2"}),
          field(s, {"0", "0", "1", "2*x1", "2*x2"}), field(s, {"0", "0", "0", "1", "0"}),
          field(s, {"0", "0", "0", "0", "1"})},
        h{kf(s, {"2*x3", "x2^2"}), kf(s, {"-x1^2", "2*x3 - 2*x1*x2"}), kf(s, {"-2*x1", "-2*x2"}), kf(s, {"-1", "0"}),
          kf(s, {"0", "-1"})} {}
};

struct Isotropic {
  SpacePtr s = make_space({"x1", "v1", "x2", "v2"});
  std::string D = "(v1*x2 - x1*v2)";
  VecForm eta{{one(s, {"v2/" + D, "-x2/" + D, "v1/" + D, "-x1/" + D}),
               one(s, {"-v2/(2*" + D + ")", "x2/(2*" + D + ")", "v1/(2*" + D + ")", "-x1/(2*" + D + ")"})}};
  std::vector<VectorField> X{field(s, {"v1", "0", "v2", "0"}), field(s, {"x1/2", "-v1/2", "x2/2", "-v2/2"}),
                             field(s, {"0", "-x1", "0", "-x2"}), field(s, {"x1", "v1", "x2", "v2"})};
  std::vector<VectorField> Y{field(s, {"x2", "v2", "0", "0"}), field(s, {"-x1/2", "-v1/2", "x2/2", "v2/2"}),
                             field(s, {"0", "0", "-x1", "-v1"}), field(s, {"x1", "v1", "x2", "v2"})};
  std::vector<KFunction> h{kf(s, {"-2*v2*v1/" + D, "0"}), kf(s, {"1 - 2*v1*x2/" + D, "0"}),
                           kf(s, {"-2*x2*x1/" + D, "0"}), kf(s, {"0", "-1"})};
};

struct FrontWheel {
  SpacePtr s = make_space({"x1", "x2", "x3", "x4"});
  std::vector<VectorField> X{field(s, {"1", "0", "x2", "x3"}), field(s, {"0", "1", "0", "0"}),
                             field(s, {"0", "0", "-1", "0"}), field(s, {"0", "0", "0", "1"})};
  std::vector<VectorField> Y{field(s, {"1", "0", "0", "0"}), field(s, {"0", "1", "x1", "x1^2/2"})};
  VecForm eta{{one(s, {"0", "x1", "-1", "0"}), one(s, {"0", "-x1^2/2", "0", "1"})}};
  std::vector<KFunction> h{kf(s, {"x2", "-x3"}), kf(s, {"-x1", "x1^2/2"}), kf(s, {"-1", "0"}), kf(s, {"0", "-1"})};
};

}  // namespace

TEST_CASE("verify: jet two-contact form") {
  Jet j;
  KContactReport r = verify_kcontact(j.eta);
  CHECK(r.is_kcontact);
  CHECK(r.rank_ker_eta == 3);
  CHECK(r.rank_ker_deta == 2);
  CHECK(r.rank_intersection == 0);
  REQUIRE(r.reeb);
  CHECK((*r.reeb)[0] == j.X[0]);
  CHECK((*r.reeb)[1] == j.X[1]);
}

TEST_CASE("verify: control form has Reeb fields X4, X5") {
  Control c;
  auto R = reeb_fields(c.eta);
  CHECK(R[0] == c.X[3]);
  CHECK(R[1] == c.X[4]);
}

TEST_CASE("verify: three-contact control form") {
  Control c;
  VecForm eta({one(c.s, {"-x2", "0", "1", "0", "0"}), one(c.s, {"2*(x1*x2 - x3)", "0", "-2*x1", "1", "0"}),
               one(c.s, {"x2^2", "-2*x3", "-2*x2", "0", "1"})});
  auto R = reeb_fields(eta);
  CHECK(R[0] == c.X[2]);
  CHECK(R[1] == c.X[3]);
  CHECK(R[2] == c.X[4]);
}

TEST_CASE("verify: failures") {
  auto s = make_space({"x", "y", "z"});
  VecForm dz({DiffForm::dx(s, 2), DiffForm::dx(s, 2)});
  KContactReport r = verify_kcontact(dz);
  CHECK_FALSE(r.is_kcontact);
  CHECK(r.failure_reason == FailureReason::CorankMismatch);
  CHECK_FALSE(r.reeb);
  CHECK_THROWS_AS(KContactForm{dz}, Error);
  try {
    reeb_fields(dz);
    FAIL("expected NotKContact");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotKContact);
  }
  // dz alone is closed: ker dη is everything
  VecForm closed({DiffForm::dx(s, 2)});
  CHECK(verify_kcontact(closed).failure_reason == FailureReason::ReebRankMismatch);
  // dz - y dx on R^4: ker dη = <d_z, d_w> has rank 2 instead of 1
  auto t = make_space({"x", "y", "z", "w"});
  VecForm e4({one(t, {"-y", "0", "1", "0"})});
  CHECK(verify_kcontact(e4).failure_reason == FailureReason::ReebRankMismatch);
}

TEST_CASE("verify: canonical contact form") {
  auto s = make_space({"x", "p", "z"});
  auto R = reeb_fields(VecForm({one(s, {"-p", "0", "1"})}));
  CHECK(R[0] == VectorField::coordinate(s, 2));
}

TEST_CASE("verify: isotropic oscillator form has Reeb fields Y2, Y4") {
  Isotropic iso;
  KContactForm ctx(iso.eta);
  CHECK(ctx.reeb()[0] == iso.Y[1]);
  CHECK(ctx.reeb()[1] == iso.Y[3]);
  CHECK_FALSE(ctx.report().locus.empty());
}

TEST_CASE("hamiltonian functions") {
  Control c;
  KContactForm ctx(c.eta);
  for (std::size_t i = 0; i < 5; ++i) {
    HamiltonianCheck hc = hamiltonian_check(c.X[i], ctx);
    CHECK(hc.is_hamiltonian);
    CHECK(hc.h == c.h[i]);
  }
  auto hz = hamiltonian_of(VectorField::zero(c.s), ctx);
  CHECK(hz.is_zero());
  // d_x2 moves the kernel: not Hamiltonian
  HamiltonianCheck bad = hamiltonian_check(VectorField::coordinate(c.s, 1), ctx);
  CHECK_FALSE(bad.is_hamiltonian);
  CHECK_THROWS_AS(hamiltonian_of(VectorField::coordinate(c.s, 1), ctx), Error);

  Isotropic iso;
  KContactForm ictx(iso.eta);
  for (std::size_t i = 0; i < 4; ++i) CHECK(hamiltonian_of(iso.X[i], ictx) == iso.h[i]);

  Jet j;
  KContactForm jctx(j.eta);
  for (std::size_t i = 0; i < 5; ++i) CHECK(hamiltonian_of(j.X[i], jctx) == j.h[i]);
}

TEST_CASE("brackets") {
  FrontWheel fw;
  KContactForm ctx(fw.eta);
  CHECK(kcontact_bracket(fw.h[0], fw.h[1], ctx, fw.X[0], fw.X[1]) == -fw.h[2]);
  CHECK(kcontact_bracket(fw.h[0], fw.h[2], ctx, fw.X[0], fw.X[2]) == -fw.h[3]);
  CHECK(kcontact_bracket(fw.h[1], fw.h[2], ctx, fw.X[1], fw.X[2]).is_zero());

  Isotropic iso;
  KContactForm ictx(iso.eta);
  CHECK(kcontact_bracket(iso.h[0], iso.h[1], ictx, iso.X[0], iso.X[1]) == -iso.h[0]);
  CHECK(kcontact_bracket(iso.h[0], iso.h[2], ictx, iso.X[0], iso.X[2]) == Expr(-2) * iso.h[1]);
  CHECK(kcontact_bracket(iso.h[1], iso.h[2], ictx, iso.X[1], iso.X[2]) == -iso.h[2]);
  for (std::size_t i = 0; i < 4; ++i) CHECK(kcontact_bracket(iso.h[i], iso.h[i], ictx, iso.X[i], iso.X[i]).is_zero());

  Jet j;
  KContactForm jctx(j.eta);
  CHECK(kcontact_bracket(j.h[0], j.h[4], jctx, j.X[0], j.X[4]) == -j.h[0]);
  CHECK(kcontact_bracket(j.h[1], j.h[4], jctx, j.X[1], j.X[4]) == Expr(mpq_class(-1, 4)) * j.h[1]);
  CHECK(kcontact_bracket(j.h[2], j.h[3], jctx, j.X[2], j.X[3]) == -j.h[2]);
  CHECK(kcontact_bracket(j.h[2], j.h[4], jctx, j.X[2], j.X[4]) == Expr(mpq_class(-1, 2)) * j.h[2]);

  // mismatched function and field
  CHECK_THROWS_AS(kcontact_bracket(j.h[0], j.h[1], jctx, j.X[1], j.X[1]), Error);
}

TEST_CASE("reeb derivation") {
  Jet j;
  KContactForm ctx(j.eta);
  CHECK(reeb_derivation(j.h[2], ctx) == field(j.s, {"0", "p1", "p2", "0", "0"}));
  // R_{h5} h5 = (-z1 + q p1/2) R_1 h5 + ...
  CHECK(reeb_apply(j.h[4], j.h[4], ctx) == kf(j.s, {"z1 - q*p1/2", "z2/16 - q*p2/8"}));
  CHECK_THROWS_AS(reeb_derivation(kf(j.s, {"1"}), ctx), Error);
}

TEST_CASE("dissipated quantities") {
  Control c({"b1", "b2"});
  VecForm eta({one(c.s, {"-x2", "0", "1", "0", "0"}), one(c.s, {"2*(x1*x2 - x3)", "0", "-2*x1", "1", "0"}),
               one(c.s, {"x2^2", "-2*x3", "-2*x2", "0", "1"})});
  KContactForm ctx(eta);
  KFunction h1 = kf(c.s, {"x2", "-2*(x1*x2 - x3)", "-x2^2"});
  KFunction h2 = kf(c.s, {"-x1", "x1^2", "2*x3"});
  Expr b1 = Expr::symbol(c.s, "b1"), b2 = Expr::symbol(c.s, "b2");
  CHECK(hamiltonian_of(c.X[0], ctx) == h1);
  CHECK(hamiltonian_of(c.X[1], ctx) == h2);
  KFunction h = b1 * h1 + b2 * h2;
  VectorField Xh = b1 * c.X[0] + b2 * c.X[1];
  KFunction h4 = kf(c.s, {"0", "-1", "0"});
  CHECK(is_dissipated(h4, h, ctx, Xh, c.X[3]));

  Jet j;
  KContactForm jctx(j.eta);
  CHECK_FALSE(is_dissipated(j.h[4], j.h[0], jctx, j.X[0], j.X[4]));
  CHECK_FALSE(is_dissipated(j.h[0], j.h[4], jctx, j.X[4], j.X[0]));
  // h2 is a first integral of X1 and of the Reeb fields
  CHECK(is_dissipated(j.h[1], j.h[0], jctx, j.X[0], j.X[1]));
}

TEST_CASE("maximal non-integrability") {
  auto s = make_space({"x", "y", "z"});
  Distribution flat{s, {VectorField::coordinate(s, 0), VectorField::coordinate(s, 1)}};
  CHECK_FALSE(max_nonintegrable(flat));
  Distribution cont{s, {VectorField::coordinate(s, 0), field(s, {"0", "1", "x"})}};
  CHECK(max_nonintegrable(cont));
  CHECK(annihilator(cont).size() == 1);

  FrontWheel fw;
  CHECK(max_nonintegrable(Distribution{fw.s, fw.Y}));

  Control c;
  Distribution ker{c.s, {field(c.s, {"1", "0", "x2", "2*x3", "x2^2"}), field(c.s, {"0", "1", "0", "0", "2*x3"}),
                         field(c.s, {"0", "0", "1", "0", "0"})}};
  CHECK(generic_rank(ker) == 3);
  CHECK(max_nonintegrable(ker));

  Distribution all{s, {VectorField::coordinate(s, 0), VectorField::coordinate(s, 1), VectorField::coordinate(s, 2)}};
  try {
    max_nonintegrable(all);
    FAIL("expected NoAnnihilator");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoAnnihilator);
  }
}

TEST_CASE("build k-contact forms") {
  FrontWheel fw;
  VecForm eta = build_kcontact(Distribution{fw.s, fw.Y}, {fw.X[2], fw.X[3]});
  CHECK(eta[0] == fw.eta[0]);
  CHECK(eta[1] == fw.eta[1]);
  KContactForm ctx(eta);
  CHECK(ctx.reeb()[0] == fw.X[2]);
  CHECK(ctx.reeb()[1] == fw.X[3]);
  for (std::size_t i = 0; i < 4; ++i) CHECK(hamiltonian_of(fw.X[i], ctx) == fw.h[i]);

  // degree-three Brockett system: D = <Y1, Y2>, symmetries X3..X8
  auto s = make_space({"x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8"});
  VectorField Y1 = field(s, {"1", "0", "x2", "x1*x2 - x3", "x2^2/2", "(x1*(x1*x2 - x3) - x4)/2", "x3*x2 - 2*x5",
                             "x2^3/6"});
  VectorField Y2 = field(s, {"0", "1", "0", "0", "0", "0", "0", "0"});
  std::vector<VectorField> S{field(s, {"0", "0", "1", "-x1", "0", "0", "x3", "0"}),
                             field(s, {"0", "0", "0", "-2", "0", "x1", "0", "0"}),
                             field(s, {"0", "0", "0", "0", "-1", "0", "2*x1", "0"}),
                             field(s, {"0", "0", "0", "0", "0", "3", "0", "0"}),
                             field(s, {"0", "0", "0", "0", "0", "0", "2", "0"}),
                             field(s, {"0", "0", "0", "0", "0", "0", "0", "1"})};
  VecForm b3 = build_kcontact(Distribution{s, {Y1, Y2}}, S);
  CHECK(b3.k() == 6);
  CHECK(b3[0] == one(s, {"-x2", "0", "1", "0", "0", "0", "0", "0"}));
  CHECK(b3[1] == one(s, {"x1*x2 - x3/2", "0", "-x1/2", "-1/2", "0", "0", "0", "0"}));
  CHECK(b3[5] == one(s, {"-x2^3/6", "0", "0", "0", "0", "0", "0", "1"}));
  KContactForm bctx(b3);
  for (std::size_t a = 0; a < 6; ++a) CHECK(bctx.reeb()[a] == S[a]);

  // too few symmetries
  try {
    build_kcontact(Distribution{fw.s, fw.Y}, {fw.X[3]});
    FAIL("expected SpanFailure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SpanFailure);
  }
  // X1 does not commute with X3
  try {
    build_kcontact(Distribution{fw.s, {fw.Y[1], fw.X[3]}}, {fw.X[0], fw.X[2]});
    FAIL("expected SymmetryFailure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SymmetryFailure);
  }
  // integrable distribution
  auto t = make_space({"x", "y", "z"});
  try {
    build_kcontact(Distribution{t, {VectorField::coordinate(t, 0), VectorField::coordinate(t, 1)}},
                   {VectorField::coordinate(t, 2)});
    FAIL("expected NotMaxNonintegrable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotMaxNonintegrable);
  }
}

TEST_CASE("Hamilton-De Donder-Weyl combination") {
  Jet j;
  KContactForm ctx(j.eta);
  auto [Xs, h] = combine_hamiltonians(KVectorField{{j.X[2], j.X[3]}}, ctx, {j.h[2], j.h[3]});
  CHECK(h == parse_expr("p1 + p2*q", j.s));
  CHECK(verify_hdw(Xs, h, ctx));
  CHECK_FALSE(verify_hdw(KVectorField{{j.X[3], j.X[2]}}, h, ctx));
  CHECK_THROWS_AS(combine_hamiltonians(KVectorField{{j.X[2]}}, ctx, {j.h[2]}), Error);
}

TEST_CASE("presymplectic projection") {
  Isotropic iso;
  KContactForm ictx(iso.eta);
  Presymplectic p = presymplectic_project(ictx, {1, 0}, iso.h[0], iso.X[0]);
  CHECK(p.f_theta == parse_expr("-2*v2*v1/" + iso.D, iso.s));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      CHECK(bracket_compatible(ictx, {1, 0}, iso.h[i], iso.X[i], iso.h[j], iso.X[j]));

  Control c;
  KContactForm ctx(c.eta);
  CHECK(pairing(kcontact_bracket(c.h[0], c.h[1], ctx, c.X[0], c.X[1]), {1, 0}) == parse_expr("2*x1", c.s));
  CHECK(bracket_compatible(ctx, {1, 0}, c.h[0], c.X[0], c.h[1], c.X[1]));
  CHECK(bracket_compatible(ctx, {2, -3}, c.h[0], c.X[0], c.h[2], c.X[2]));

  Jet j;
  KContactForm jctx(j.eta);
  try {
    presymplectic_project(jctx, {1, 0}, j.h[4], j.X[4]);
    FAIL("expected NotProjectable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotProjectable);
  }
  try {
    presymplectic_project(jctx, {1, 0}, j.h[3], j.X[4]);
    FAIL("expected NotHamiltonianInput");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotHamiltonianInput);
  }
  CHECK_THROWS_AS(presymplectic_project(jctx, {1}, j.h[2], j.X[2]), Error);
}

TEST_CASE("presymplectic extension") {
  Jet j;
  KContactForm ctx(j.eta);
  PresymplecticExtension e = presymplectic_extend(ctx, j.h[4], j.X[4]);
  REQUIRE(e.fibre == std::vector<std::string>{"w1", "w2"});
  CHECK(e.space->dim() == 7);
  CHECK(e.hamiltonian == parse_expr("w1*(-z1 + q*p1/2) + w2*(-z2/4 + q*p2/2)", e.space));
  CHECK(e.field[5] == parse_expr("-w1", e.space));
  CHECK(e.field[6] == parse_expr("-w2/4", e.space));
  CHECK(lie_derivative(e.field, e.omega).is_zero());

  auto s = make_space({"x", "p", "z"});
  KContactForm c1(VecForm({one(s, {"-p", "0", "1"})}));
  VectorField X = field(s, {"0", "-p", "-z"});  // Hamiltonian for h = z
  KFunction h = hamiltonian_of(X, c1);
  CHECK(h == kf(s, {"z"}));
  PresymplecticExtension e1 = presymplectic_extend(c1, h, X);
  CHECK(e1.fibre == std::vector<std::string>{"z1"});
  CHECK(e1.field[3] == parse_expr("z1", e1.space));
  // ω = d(z1 (dz - p dx)) is symplectic on R^4
  CHECK(ext_deriv(e1.omega).is_zero());
}
