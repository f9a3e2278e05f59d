#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kontact/kcontact.hpp"

namespace kontact {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

// c[a][b][g]: [X_a, X_b] = sum_g c[a][b][g] X_g
using StructureConstants = std::vector<std::vector<std::vector<mpq_class>>>;

struct LieClosure {
  SpacePtr space;
  std::vector<VectorField> basis;
  std::vector<std::string> words;  // "X1", "[X1,X2]", ...
  StructureConstants c;
  bool closed = false;
  std::size_t dim() const { return basis.size(); }
};

// Generators that are linearly dependent on earlier ones are dropped.
LieClosure bracket_closure(const std::vector<VectorField>& generators, std::size_t max_dim = 64,
                           std::size_t max_depth = 16, std::uint64_t seed = kDefaultSeed);
// Structure constants of an already closed basis (NotClosed otherwise, or if the basis is dependent).
StructureConstants structure_constants(const std::vector<VectorField>& basis, std::uint64_t seed = kDefaultSeed);
bool is_antisymmetric(const StructureConstants& c);
bool satisfies_jacobi(const StructureConstants& c);
// Nonzero entries as "[X1,X2] = X3, [X1,X3] = 2X4" with the given symbol.
std::string format_table(const StructureConstants& c, const std::string& symbol = "X", const std::string& open = "[",
                         const std::string& close = "]");

bool is_locally_automorphic(const LieClosure& closure);

// One-forms with Υ^i(Y_j) = δ^i_j. DegenerateFrame when the frame is not a basis.
std::vector<DiffForm> dual_coframe(const std::vector<VectorField>& frame);

struct MaurerCartanResult {
  bool holds = true;
  std::optional<std::size_t> failing;  // first index i with dΥ^i != -1/2 c Υ^Υ
};
MaurerCartanResult maurer_cartan_check(const std::vector<DiffForm>& coframe, const StructureConstants& frame_c);

struct Projectability {
  bool projectable = true;
  std::vector<KFunction> hamiltonians;
  // (reeb index, basis index) pairs where R h != 0
  std::vector<std::pair<std::size_t, std::size_t>> offending;
};
// NotHamiltonianInput when a basis field is not Hamiltonian.
Projectability projectability_check(const std::vector<VectorField>& basis, const KContactForm& ctx);

struct Prolongation {
  SpacePtr space;  // variables "<v>_<copy>", copy-major; constants shared
  std::vector<VectorField> fields;
  VecForm eta;     // component a*k + b is copy a of η^b
  std::vector<KFunction> hamiltonians;
};
// Copies 0..l of the chart. NotKContact if eta fails.
Prolongation diagonal_prolongation(const std::vector<VectorField>& fields, const VecForm& eta, std::size_t l);

struct CompanionSystem {
  SpacePtr space;                // chart plus the coefficient constants
  std::vector<Expr> coeffs;      // X = sum_b coeffs[b] X_b
  std::vector<mpq_class> theta;
  StructureConstants c;          // bracket constants of the k-functions
  StructureConstants lambda;     // <R_{h_a} h_b, θ> = sum_g lambda[a][b][g] <h_g, θ>
  Matrix M;                      // df/dt = M f
  std::vector<Expr> h_theta;
  bool dependent = false;        // the <h_a, θ> are linearly dependent
  std::optional<std::size_t> nilpotency_order;  // smallest m with X^m <h_a,θ> = 0 for all a
};
// coeffs: one expression per basis element in the constants b1..br (plus the
// chart constants); empty means X = sum b_i X_i.
// LambdaNotConstant, DependentProjections (unless allow_dependent), NotClosed.
CompanionSystem companion_system(const std::vector<VectorField>& basis, const std::vector<KFunction>& hams,
                                 const KContactForm& ctx, const std::vector<mpq_class>& theta,
                                 const std::vector<std::string>& coeffs = {}, bool allow_dependent = false,
                                 std::uint64_t seed = kDefaultSeed);

struct MomentumReport {
  bool invariant = true;
  double max_level = 0, max_reeb = 0, max_flow = 0;
  std::size_t samples = 0;
};
// SampleNotOnZeroSet when some |<h_a, θ>| >= tol at a sample.
MomentumReport momentum_invariance(const std::vector<VectorField>& basis, const std::vector<KFunction>& hams,
                                   const std::vector<mpq_class>& theta, const KContactForm& ctx,
                                   const std::vector<std::map<std::string, PointValue>>& samples, double tol = 1e-9);

// [d_{t_a} + X_a, d_{t_b} + X_b] = 0 for all pairs; tvars are chart variables.
bool pde_integrability(const KVectorField& Xs, const std::vector<std::string>& tvars);

}  // namespace kontact
