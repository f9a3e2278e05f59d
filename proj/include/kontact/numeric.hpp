#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kontact/kcontact.hpp"
#include "kontact/liesys.hpp"

namespace kontact {

// Numeric time function b(t).
class Profile {
 public:
  enum class Kind { Constant, Polynomial, Table };
  static Profile constant(double c);
  static Profile polynomial(std::vector<double> ascending);
  // Cubic Hermite (Catmull-Rom) through the samples; times strictly increasing.
  static Profile table(std::vector<double> times, std::vector<double> values);
  // a*sin(w t + phi) tabulated on n+1 points of [t0, t1].
  static Profile sine_table(double a, double w, double phi, double t0, double t1, std::size_t n = 4096);
  // "0.5", "poly:c0,c1,...", "sin:a,w,phi" (tabulated on [t0, t1]).
  static Profile parse(const std::string& spec, double t0 = 0, double t1 = 1);

  double operator()(double t) const;
  // Exact antiderivative from t0 where available (constant and polynomial).
  bool has_integral() const { return kind_ != Kind::Table; }
  double integral(double t0, double t1) const;
  Kind kind() const { return kind_; }
  bool covers(double t0, double t1) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::Constant;
  std::vector<double> c_;      // polynomial coefficients (constant: one)
  std::vector<double> t_, v_;  // table
  std::string label_;
};

struct Trajectory {
  std::vector<std::string> names;  // chart variables then "int_<profile>" quadratures
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  double step = 0;
  std::string method = "RK4";
};

// dx/dt = sum_b profiles[b](t) fields[b](x). quadratures name profiles (by index)
// whose running integrals are carried as extra states "int_<label>".
struct IntegrationSetup {
  std::vector<VectorField> fields;
  std::vector<Profile> profiles;
  std::vector<std::string> labels;   // profile labels, default b1, b2, ...
  std::map<std::string, double> consts;
  std::vector<std::size_t> quadratures;
};

// PoleEncountered when a denominator drops below 1e-12 in magnitude.
Trajectory integrate(const IntegrationSetup& setup, const std::vector<double>& x0, double t0, double t1, double step);

// Space for expressions evaluated along a trajectory: its state names, then "t".
SpacePtr trajectory_space(const Trajectory& traj, const std::vector<std::string>& consts = {});

struct ConstantReport {
  double max_drift = 0;
  double initial = 0;
  bool pass = false;
};
ConstantReport check_constant(const Trajectory& traj, const Expr& I, double tol,
                              const std::map<std::string, double>& consts = {});

// max |Δ³ I| / H³ over consecutive windows of stride H (a multiple of the step).
double third_difference(const Trajectory& traj, const Expr& I, double H,
                        const std::map<std::string, double>& consts = {});

struct RiccatiReport {
  double k = 0;
  double x4_initial = 0;
  double max_deviation = 0;
  bool pass = false;
};
// Three seed solutions and a fourth started at the superposition value for k.
// DegenerateSeeds when two seeds coincide or the formula is singular at t0.
RiccatiReport riccati_superposition_check(const Profile& b1, const Profile& b2, const Profile& b3,
                                          const std::vector<double>& seeds, double k, double t0, double t1,
                                          double step, double tol = 1e-6);

struct FdReport {
  double symbolic = 0, numeric = 0, rel_error = 0;
  bool pass = false;
};
// Central difference against the symbolic derivative. PoleEncountered when a
// denominator vanishes on or changes sign across the stencil.
FdReport fd_validate(const Expr& e, const std::string& var, const std::map<std::string, double>& point,
                     double h = 1e-5, double tol = 1e-6);

// Largest numeric residual of the Hamiltonian equations of X at seeded random points.
double hamiltonian_spot_check(const VectorField& X, const KContactForm& ctx, std::uint64_t seed = kDefaultSeed,
                              int points = 10, const std::map<std::string, double>& consts = {});

struct CompanionRun {
  Trajectory traj;          // chart states then f^1..f^r
  double max_drift = 0;     // of sum_a f^a <h_a, θ>
  bool pass = false;
};
// Integrates the base system with coefficients b_i(t) alongside df/dt = M(t) f.
CompanionRun companion_check(const CompanionSystem& cs, const std::vector<VectorField>& basis,
                             const std::vector<Profile>& profiles, const std::vector<double>& x0,
                             const std::vector<double>& f0, double t0, double t1, double step, double tol = 1e-6,
                             const std::map<std::string, double>& consts = {});

}  // namespace kontact
