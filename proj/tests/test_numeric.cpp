#include <cmath>

#include "doctest.h"
#include "kontact/error.hpp"
#include "kontact/numeric.hpp"
#include "util.hpp"

using namespace kontact;
using kontact::testing::field;
using kontact::testing::kf;
using kontact::testing::one;

namespace {

template <class F>
Errc code_of(F f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Internal;
}

struct FrontWheel {
  SpacePtr s = make_space({"x1", "x2", "x3", "x4"});
  std::vector<VectorField> X{field(s, {"1", "0", "x2", "x3"}), field(s, {"0", "1", "0", "0"}),
                             field(s, {"0", "0", "-1", "0"}), field(s, {"0", "0", "0", "1"})};
  VecForm eta{{one(s, {"0", "x1", "-1", "0"}), one(s, {"0", "-x1^2/2", "0", "1"})}};
};

struct Isotropic {
  SpacePtr s = make_space({"x1", "v1", "x2", "v2"});
  std::string D = "(v1*x2 - x1*v2)";
  VecForm eta{{one(s, {"v2/" + D, "-x2/" + D, "v1/" + D, "-x1/" + D}),
               one(s, {"-v2/(2*" + D + ")", "x2/(2*" + D + ")", "v1/(2*" + D + ")", "-x1/(2*" + D + ")"})}};
  std::vector<VectorField> X{field(s, {"v1", "0", "v2", "0"}), field(s, {"x1/2", "-v1/2", "x2/2", "-v2/2"}),
                             field(s, {"0", "-x1", "0", "-x2"}), field(s, {"x1", "v1", "x2", "v2"})};
};

struct Control {
  SpacePtr s = make_space({"x1", "x2", "x3", "x4", "x5"});
  VecForm eta{{one(s, {"-2*x3", "0", "0", "1", "0"}), one(s, {"-x2^2", "-2*x3", "0", "0", "1"})}};
  std::vector<VectorField> X{field(s, {"1", "0", "0", "0", "0"}), field(s, {"0", "1", "x1", "x1^2", "2*x1*x2"}),
                             field(s, {"0", "0", "1", "2*x1", "2*x2"}), field(s, {"0", "0", "0", "1", "0"}),
                             field(s, {"0", "0", "0", "0", "1"})};
};

Trajectory run_frontwheel(const FrontWheel& fw, const Profile& b2, std::vector<double> x0) {
  IntegrationSetup st;
  st.fields = {fw.X[0], fw.X[1]};
  st.profiles = {Profile::constant(1), b2};
  st.quadratures = {1};
  return integrate(st, x0, 0, 1, 1e-3);
}

}  // namespace

TEST_CASE("profiles") {
  CHECK(Profile::parse("0.5")(3) == 0.5);
  Profile p = Profile::parse("poly:1,0,2");
  CHECK(p(2) == doctest::Approx(9));
  CHECK(p.integral(0, 1) == doctest::Approx(1 + 2.0 / 3));
  Profile s = Profile::parse("sin:2,3,0.1", 0, 1);
  CHECK(s.kind() == Profile::Kind::Table);
  CHECK(std::fabs(s(0.3337) - 2 * std::sin(3 * 0.3337 + 0.1)) < 1e-9);
  CHECK_FALSE(s.covers(0, 2));
  CHECK(code_of([] { Profile::parse("poly:1,x"); }) == Errc::InvalidInput);
  CHECK(code_of([] { Profile::parse("fast"); }) == Errc::InvalidInput);
  CHECK(code_of([] { Profile::table({0, 0}, {1, 2}); }) == Errc::InvalidInput);
}

TEST_CASE("integrate: zero field is constant") {
  auto s = make_space({"x", "y"});
  IntegrationSetup st;
  st.fields = {field(s, {"0", "0"})};
  st.profiles = {Profile::constant(1)};
  Trajectory tr = integrate(st, {0.25, -3}, 0, 1, 0.1);
  CHECK(tr.times.size() == 11);
  CHECK(tr.times.back() == 1);
  for (const auto& y : tr.states) {
    CHECK(y[0] == 0.25);
    CHECK(y[1] == -3);
  }
}

TEST_CASE("integrate: front-wheel straight line") {
  FrontWheel fw;
  Trajectory tr = run_frontwheel(fw, Profile::constant(0), {0, 0, 0, 0});
  const auto& y = tr.states.back();
  CHECK(std::fabs(y[0] - 1) < 1e-10);
  CHECK(std::fabs(y[2]) < 1e-10);
  CHECK(std::fabs(y[3]) < 1e-10);
  CHECK(tr.names.back() == "int_b2");
}

TEST_CASE("integrate: Riccati tangent") {
  auto s = make_space({"x"});
  IntegrationSetup st;
  st.fields = {field(s, {"1 + x^2"})};
  st.profiles = {Profile::constant(1)};
  Trajectory tr = integrate(st, {0}, 0, 0.5, 1e-3);
  CHECK(std::fabs(tr.states.back()[0] - std::tan(0.5)) < 1e-8);
}

TEST_CASE("integrate: pole guard and bad input") {
  auto s = make_space({"x"});
  IntegrationSetup st;
  st.fields = {field(s, {"-1/x"})};
  st.profiles = {Profile::constant(1)};
  // x x' = -1 reaches x = 0 at t = 1/2
  CHECK(code_of([&] { integrate(st, {1}, 0, 1, 1e-3); }) == Errc::PoleEncountered);
  CHECK(code_of([&] { integrate(st, {1, 2}, 0, 1, 1e-3); }) == Errc::LengthMismatch);
  st.profiles = {Profile::sine_table(1, 1, 0, 0, 0.5)};
  CHECK(code_of([&] { integrate(st, {5}, 0, 1, 1e-3); }) == Errc::InvalidInput);
  auto c = make_space({"x"}, {"a"});
  st.fields = {field(c, {"a*x"})};
  st.profiles = {Profile::constant(1)};
  CHECK(code_of([&] { integrate(st, {1}, 0, 1, 1e-2); }) == Errc::UnboundSymbol);
  st.consts["a"] = -1;
  CHECK(std::fabs(integrate(st, {1}, 0, 1, 1e-3).states.back()[0] - std::exp(-1.0)) < 1e-12);
}

TEST_CASE("property: RK4 is fourth order") {
  auto s = make_space({"x", "y"});
  IntegrationSetup st;
  st.fields = {field(s, {"1 + x^2", "x*y"})};
  st.profiles = {Profile::parse("poly:1,0.5")};
  for (double h : {0.05, 0.02}) {
    Trajectory ref = integrate(st, {0, 1}, 0, 1, h / 10);
    Trajectory a = integrate(st, {0, 1}, 0, 1, h), b = integrate(st, {0, 1}, 0, 1, h / 2);
    auto err = [&](const Trajectory& t) {
      double e = 0;
      for (std::size_t j = 0; j < t.times.size(); ++j) {
        std::size_t r = j * (ref.times.size() - 1) / (t.times.size() - 1);
        for (std::size_t i = 0; i < 2; ++i) e = std::max(e, std::fabs(t.states[j][i] - ref.states[r][i]));
      }
      return e;
    };
    CHECK(err(a) / err(b) >= 12);
  }
}

TEST_CASE("check_constant: front-wheel integral minus x2") {
  FrontWheel fw;
  for (const char* spec : {"0", "0.5", "poly:0,0,1"}) {
    Trajectory tr = run_frontwheel(fw, Profile::parse(spec), {0.3, -0.2, 0.1, 0.7});
    Expr I = parse_expr("int_b2 - x2", trajectory_space(tr));
    ConstantReport r = check_constant(tr, I, 1e-6);
    CHECK(r.pass);
    CHECK(r.max_drift < 1e-9);
    CHECK(r.initial == doctest::Approx(0.2));
  }
  Trajectory tr = run_frontwheel(fw, Profile::constant(0.5), {0, 0, 0, 0});
  CHECK(check_constant(tr, Expr(17), 1e-6).max_drift == 0);
  // x1 is not constant
  CHECK_FALSE(check_constant(tr, parse_expr("x1", trajectory_space(tr)), 1e-6).pass);
  // explicit time dependence: b2 t - x2 with b2 = 0.5
  CHECK(check_constant(tr, parse_expr("t/2 - x2", trajectory_space(tr)), 1e-6).pass);
}

TEST_CASE("check_constant: isotropic invariant") {
  Isotropic iso;
  KContactForm ctx(iso.eta);
  KFunction h1 = hamiltonian_of(iso.X[0], ctx), h2 = hamiltonian_of(iso.X[1], ctx), h3 = hamiltonian_of(iso.X[2], ctx);
  Expr I = h1[0] * h3[0] - h2[0] * h2[0];
  IntegrationSetup st;
  st.fields = {iso.X[0], iso.X[2]};
  st.profiles = {Profile::constant(1), Profile::constant(1)};  // ν = 1
  Trajectory tr = integrate(st, {1, 0.3, 0.2, 1}, 0, 1, 1e-3);
  Expr It = I.rebase(trajectory_space(tr));
  ConstantReport r = check_constant(tr, It, 1e-6);
  CHECK(r.pass);
  // h2 alone is not conserved along this flow
  CHECK_FALSE(check_constant(tr, h2[0].rebase(trajectory_space(tr)), 1e-6).pass);
}

TEST_CASE("Riccati superposition") {
  auto zero = Profile::constant(0), one_ = Profile::constant(1);
  RiccatiReport a = riccati_superposition_check(one_, zero, zero, {-1, -0.5, 0}, 2, 0, 1, 1e-3);
  CHECK(a.x4_initial == doctest::Approx(-1.0 / 3));
  CHECK(a.max_deviation < 1e-12);
  RiccatiReport b = riccati_superposition_check(one_, zero, one_, {-1, -0.5, 0}, 2, 0, 1, 1e-3);
  CHECK(b.pass);
  CHECK(b.max_deviation < 1e-6);
  RiccatiReport c = riccati_superposition_check(Profile::parse("poly:0.2,1"), Profile::parse("sin:1,3,0", 0, 1), one_,
                                                {-1, 0.5, 0.1}, 0.3, 0, 1, 1e-3);
  CHECK(c.pass);
  CHECK(code_of([&] { riccati_superposition_check(one_, zero, one_, {0, 0, 1}, 2, 0, 1, 1e-3); }) ==
        Errc::DegenerateSeeds);
}

TEST_CASE("fd_validate") {
  auto s = make_space({"x"});
  FdReport r = fd_validate(parse_expr("x^2", s), "x", {{"x", 3}});
  CHECK(r.symbolic == 6);
  CHECK(r.pass);
  CHECK(code_of([&] { fd_validate(parse_expr("1/x", s), "x", {{"x", 1e-7}}); }) == Errc::PoleEncountered);
  CHECK(code_of([&] { fd_validate(parse_expr("x", s), "y", {{"x", 1}}); }) == Errc::UnknownSymbol);
  auto v = make_space({"v1", "v2", "v3", "v4", "v5", "v6"});
  Expr x15 = parse_expr("3/2*(2*v4*v5*v6 + (v5^2 - v6^2)*v3)/(v3^2 + v4^2)", v);
  std::map<std::string, double> pt{{"v1", 0.4}, {"v2", -1.1}, {"v3", 0.7}, {"v4", -0.6}, {"v5", 1.3}, {"v6", 0.2}};
  for (const auto& var : v->vars()) CHECK(fd_validate(x15, var, pt).pass);
}

TEST_CASE("Hamiltonian spot checks") {
  Isotropic iso;
  KContactForm ctx(iso.eta);
  for (const auto& X : iso.X) CHECK(hamiltonian_spot_check(X, ctx) < 1e-9);
  Control c;
  KContactForm cc(c.eta);
  for (const auto& X : c.X) CHECK(hamiltonian_spot_check(X, cc, 7) < 1e-9);
}

TEST_CASE("companion system keeps the pairing constant") {
  FrontWheel fw;
  KContactForm ctx(fw.eta);
  std::vector<KFunction> h;
  for (const auto& X : fw.X) h.push_back(hamiltonian_of(X, ctx));
  CompanionSystem cs = companion_system(fw.X, h, ctx, {1, 0}, {"b1", "b2", "0", "0"}, true);
  for (const char* b2 : {"0.5", "poly:0,0,1", "sin:1,2,0"}) {
    CompanionRun run = companion_check(cs, fw.X, {Profile::constant(1), Profile::parse(b2, 0, 1)},
                                       {0.3, -0.2, 0.1, 0.7}, {1, 0, 0, 0}, 0, 1, 1e-3);
    CHECK(run.pass);
    CHECK(run.max_drift < 1e-6);
  }
}

TEST_CASE("third differences of control pairings vanish") {
  Control c;
  KContactForm ctx(c.eta);
  IntegrationSetup st;
  st.fields = {c.X[0], c.X[1]};
  st.profiles = {Profile::constant(0.7), Profile::constant(-1.3)};
  Trajectory tr = integrate(st, {0.1, 0.2, -0.3, 0.4, 0.5}, 0, 1, 1e-3);
  for (std::size_t a = 0; a < 5; ++a) {
    KFunction h = hamiltonian_of(c.X[a], ctx);
    for (std::size_t th = 0; th < 2; ++th) CHECK(third_difference(tr, h[th].rebase(trajectory_space(tr)), 1e-2) < 1e-4);
  }
  // x1^4 is not cubic in t
  CHECK(third_difference(tr, parse_expr("x1^4", trajectory_space(tr)), 1e-2) > 1e-2);
}
