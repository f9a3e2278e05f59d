#pragma once

#include <optional>
#include <vector>

#include "kontact/exterior.hpp"
#include "kontact/matrix.hpp"

namespace kontact {

enum class FailureReason { None, CorankMismatch, ReebRankMismatch, NontrivialIntersection };
const char* failure_name(FailureReason r);

struct KContactReport {
  bool is_kcontact = false;
  std::size_t rank_ker_eta = 0, rank_ker_deta = 0, rank_intersection = 0;
  std::size_t k = 0, dim = 0;
  std::optional<std::vector<VectorField>> reeb;
  FailureReason failure_reason = FailureReason::None;
  std::vector<Expr> locus;  // pivots of the Reeb solve
};

KContactReport verify_kcontact(const VecForm& eta);
// NotKContact unless verify passes.
std::vector<VectorField> reeb_fields(const VecForm& eta);

// A verified k-contact form with dη and the Reeb fields cached.
class KContactForm {
 public:
  explicit KContactForm(VecForm eta);  // NotKContact on failure
  const VecForm& eta() const { return eta_; }
  const VecForm& deta() const { return deta_; }
  const std::vector<VectorField>& reeb() const { return reeb_; }
  std::size_t k() const { return eta_.k(); }
  const SpacePtr& space() const { return eta_.space(); }
  const KContactReport& report() const { return report_; }

 private:
  VecForm eta_, deta_;
  std::vector<VectorField> reeb_;
  KContactReport report_;
};

// sum_alpha h^alpha R_alpha
VectorField reeb_derivation(const KFunction& h, const KContactForm& ctx);
// Componentwise R_g f = sum_mu g^mu R_mu(f).
KFunction reeb_apply(const KFunction& g, const KFunction& f, const KContactForm& ctx);

struct HamiltonianCheck {
  bool is_hamiltonian = false;
  KFunction h;
  std::vector<DiffForm> residuals;
};

HamiltonianCheck hamiltonian_check(const VectorField& X, const KContactForm& ctx);
// The k-function of X; NotHamiltonianInput when X is not Hamiltonian.
KFunction hamiltonian_of(const VectorField& X, const KContactForm& ctx);

// η([X_f, X_g]), cross-checked against -X_f g - R_g f.
KFunction kcontact_bracket(const KFunction& f, const KFunction& g, const KContactForm& ctx, const VectorField& Xf,
                           const VectorField& Xg);
bool is_dissipated(const KFunction& f, const KFunction& h, const KContactForm& ctx, const VectorField& Xh,
                   const VectorField& Xf);

struct Distribution {
  SpacePtr space;
  std::vector<VectorField> spanning;
};

std::size_t generic_rank(const Distribution& D);
// Coefficient rows of one-forms annihilating D (dim - rank D of them).
std::vector<std::vector<Expr>> annihilator(const Distribution& D);
bool max_nonintegrable(const Distribution& D, const std::vector<std::vector<Expr>>* zeta = nullptr);
// η with ker η = D and ι_{S_i} η^j = δ_i^j.
VecForm build_kcontact(const Distribution& D, const std::vector<VectorField>& S);

// (X_1..X_k) with h = sum_alpha h_alpha^alpha; HDW equations asserted.
std::pair<KVectorField, Expr> combine_hamiltonians(const KVectorField& Xs, const KContactForm& ctx,
                                                   const std::vector<KFunction>& hs);
bool verify_hdw(const KVectorField& Xs, const Expr& h, const KContactForm& ctx);

struct Presymplectic {
  DiffForm omega;
  Expr f_theta;
};
Presymplectic presymplectic_project(const KContactForm& ctx, const std::vector<mpq_class>& theta, const KFunction& f,
                                    const VectorField& Xf);
// <{f,g}, θ> == ω_θ(X_f, X_g); both arguments must be projectable.
bool bracket_compatible(const KContactForm& ctx, const std::vector<mpq_class>& theta, const KFunction& f,
                        const VectorField& Xf, const KFunction& g, const VectorField& Xg);

struct PresymplecticExtension {
  SpacePtr space;            // chart followed by the fresh fibre coordinates
  std::vector<std::string> fibre;
  DiffForm omega;            // d(sum z_alpha η^alpha)
  VectorField field;
  Expr hamiltonian;          // sum z_alpha h^alpha, with ι_field ω = d(hamiltonian)
};
PresymplecticExtension presymplectic_extend(const KContactForm& ctx, const KFunction& h, const VectorField& Xh);

}  // namespace kontact
