#include "kontact/kcontact.hpp"

#include "kontact/error.hpp"

namespace kontact {

const char* failure_name(FailureReason r) {
  switch (r) {
    case FailureReason::None: return "None";
    case FailureReason::CorankMismatch: return "CorankMismatch";
    case FailureReason::ReebRankMismatch: return "ReebRankMismatch";
    case FailureReason::NontrivialIntersection: return "NontrivialIntersection";
  }
  return "None";
}

namespace {

Matrix eta_matrix(const VecForm& eta) {
  std::size_t n = eta.space()->dim();
  Matrix a(eta.k(), n);
  for (std::size_t al = 0; al < eta.k(); ++al) {
    auto c = eta[al].one_form_coeffs();
    for (std::size_t j = 0; j < n; ++j) a(al, j) = c[j];
  }
  return a;
}

// Row (alpha, i), column j holds dη^alpha(d_j, d_i): v lies in ker dη iff the stack kills it.
Matrix omega_stack(const VecForm& deta) {
  std::size_t n = deta.space()->dim();
  Matrix m(deta.k() * n, n);
  for (std::size_t al = 0; al < deta.k(); ++al)
    for (const auto& [idx, e] : deta[al].terms()) {
      std::size_t a = idx[0], b = idx[1];
      m(al * n + b, a) = e;
      m(al * n + a, b) = -e;
    }
  return m;
}

Matrix rows_of(const std::vector<VectorField>& fs, std::size_t n) {
  Matrix m(fs.size(), n);
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = fs[i][j];
  return m;
}

Expr eval_one(const DiffForm& w, const VectorField& X) { return w.evaluate({X}); }

void require_hamiltonian(const VectorField& X, const KFunction& f, const KContactForm& ctx) {
  HamiltonianCheck hc = hamiltonian_check(X, ctx);
  if (!hc.is_hamiltonian) fail(Errc::NotHamiltonianInput, "vector field is not η-Hamiltonian");
  if (hc.h != f) fail(Errc::NotHamiltonianInput, "k-function differs from -ι_X η");
}

}  // namespace

KContactReport verify_kcontact(const VecForm& eta) {
  if (eta.degree() != 1) fail(Errc::InvalidInput, "k-contact form must be a one-form");
  KContactReport r;
  r.k = eta.k();
  r.dim = eta.space()->dim();
  if (r.k < 1 || r.k >= r.dim)
    fail(Errc::InvalidInput, "need 1 <= k < dim, got k = " + std::to_string(r.k) + ", dim = " + std::to_string(r.dim));
  VecForm deta = ext_deriv_k(eta);
  Matrix a = eta_matrix(eta);
  Matrix om = omega_stack(deta);
  Matrix both = a.stack(om);
  r.rank_ker_eta = r.dim - rank(a);
  r.rank_ker_deta = r.dim - rank(om);
  r.rank_intersection = r.dim - rank(both);
  if (r.rank_ker_eta != r.dim - r.k)
    r.failure_reason = FailureReason::CorankMismatch;
  else if (r.rank_ker_deta != r.k)
    r.failure_reason = FailureReason::ReebRankMismatch;
  else if (r.rank_intersection != 0)
    r.failure_reason = FailureReason::NontrivialIntersection;
  r.is_kcontact = r.failure_reason == FailureReason::None;
  if (!r.is_kcontact) return r;

  Matrix rhs(both.rows(), r.k);
  for (std::size_t al = 0; al < r.k; ++al) rhs(al, al) = Expr(1);
  Matrix sol;
  try {
    sol = solve(both, rhs, &r.locus);
  } catch (const Error& e) {
    if (e.code() == Errc::SingularSolve) fail(Errc::Internal, std::string("Reeb system degenerate after verify: ") + e.what());
    throw;
  }
  std::vector<VectorField> reeb;
  for (std::size_t al = 0; al < r.k; ++al) reeb.emplace_back(eta.space(), sol.col(al));
  for (std::size_t al = 0; al < r.k; ++al)
    for (std::size_t be = al + 1; be < r.k; ++be)
      if (!lie_bracket(reeb[al], reeb[be]).is_zero()) fail(Errc::Internal, "Reeb fields do not commute");
  r.reeb = std::move(reeb);
  return r;
}

std::vector<VectorField> reeb_fields(const VecForm& eta) {
  KContactReport r = verify_kcontact(eta);
  if (!r.is_kcontact) fail(Errc::NotKContact, failure_name(r.failure_reason));
  return *r.reeb;
}

KContactForm::KContactForm(VecForm eta) : eta_(std::move(eta)) {
  report_ = verify_kcontact(eta_);
  if (!report_.is_kcontact) fail(Errc::NotKContact, failure_name(report_.failure_reason));
  deta_ = ext_deriv_k(eta_);
  reeb_ = *report_.reeb;
}

VectorField reeb_derivation(const KFunction& h, const KContactForm& ctx) {
  if (h.k() != ctx.k()) fail(Errc::LengthMismatch, "k-function length differs from k");
  VectorField r = VectorField::zero(ctx.space());
  for (std::size_t a = 0; a < h.k(); ++a)
    if (!h[a].is_zero()) r = r + h[a] * ctx.reeb()[a];
  return r;
}

KFunction reeb_apply(const KFunction& g, const KFunction& f, const KContactForm& ctx) {
  return apply(reeb_derivation(g, ctx), f);
}

HamiltonianCheck hamiltonian_check(const VectorField& X, const KContactForm& ctx) {
  HamiltonianCheck hc;
  const SpacePtr& s = ctx.space();
  std::vector<Expr> h(ctx.k());
  for (std::size_t a = 0; a < ctx.k(); ++a) h[a] = -eval_one(ctx.eta()[a], X);
  hc.h = KFunction(s, h);
  hc.is_hamiltonian = true;
  for (std::size_t a = 0; a < ctx.k(); ++a) {
    DiffForm res = interior(X, ctx.deta()[a]) - ext_deriv(DiffForm::function(s, h[a]));
    for (std::size_t b = 0; b < ctx.k(); ++b) {
      Expr rb = ctx.reeb()[b].apply(h[a]);
      if (!rb.is_zero()) res = res + rb * ctx.eta()[b];
    }
    if (!res.is_zero()) hc.is_hamiltonian = false;
    hc.residuals.push_back(std::move(res));
  }
  return hc;
}

KFunction hamiltonian_of(const VectorField& X, const KContactForm& ctx) {
  HamiltonianCheck hc = hamiltonian_check(X, ctx);
  if (!hc.is_hamiltonian) fail(Errc::NotHamiltonianInput, "vector field is not η-Hamiltonian");
  return hc.h;
}

KFunction kcontact_bracket(const KFunction& f, const KFunction& g, const KContactForm& ctx, const VectorField& Xf,
                           const VectorField& Xg) {
  require_hamiltonian(Xf, f, ctx);
  require_hamiltonian(Xg, g, ctx);
  VectorField b = lie_bracket(Xf, Xg);
  std::vector<Expr> c(ctx.k());
  for (std::size_t a = 0; a < ctx.k(); ++a) c[a] = eval_one(ctx.eta()[a], b);
  KFunction out(ctx.space(), c);
  KFunction alt = -apply(Xf, g) - reeb_apply(g, f, ctx);
  if (alt != out) fail(Errc::Internal, "bracket formulas disagree");
  return out;
}

bool is_dissipated(const KFunction& f, const KFunction& h, const KContactForm& ctx, const VectorField& Xh,
                   const VectorField& Xf) {
  require_hamiltonian(Xh, h, ctx);
  require_hamiltonian(Xf, f, ctx);
  bool direct = apply(Xh, f) == -reeb_apply(f, h, ctx);
  bool via_bracket = kcontact_bracket(h, f, ctx, Xh, Xf).is_zero();
  if (direct != via_bracket) fail(Errc::Internal, "dissipation criteria disagree");
  return direct;
}

std::size_t generic_rank(const Distribution& D) {
  if (D.spanning.empty()) fail(Errc::InvalidInput, "empty distribution");
  return rank(rows_of(D.spanning, D.space->dim()));
}

std::vector<std::vector<Expr>> annihilator(const Distribution& D) {
  if (D.spanning.empty()) fail(Errc::InvalidInput, "empty distribution");
  auto z = null_space(rows_of(D.spanning, D.space->dim()));
  if (z.empty()) fail(Errc::NoAnnihilator, "distribution spans the tangent space");
  return z;
}

bool max_nonintegrable(const Distribution& D, const std::vector<std::vector<Expr>>* zeta) {
  std::size_t n = D.space->dim();
  std::vector<std::vector<Expr>> own;
  if (!zeta) {
    own = annihilator(D);
    zeta = &own;
  } else {
    if (zeta->empty()) fail(Errc::NoAnnihilator, "empty annihilator");
    for (const auto& z : *zeta) {
      if (z.size() != n) fail(Errc::LengthMismatch, "annihilator length");
      for (const auto& Y : D.spanning) {
        Expr v;
        for (std::size_t i = 0; i < n; ++i) v += z[i] * Y[i];
        if (!v.is_zero()) fail(Errc::InvalidInput, "supplied annihilator does not kill the distribution");
      }
    }
  }
  std::size_t r = generic_rank(D), m = D.spanning.size();
  Matrix B(m * zeta->size(), m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      VectorField br = lie_bracket(D.spanning[i], D.spanning[j]);
      for (std::size_t a = 0; a < zeta->size(); ++a) {
        Expr v;
        for (std::size_t c = 0; c < n; ++c) v += (*zeta)[a][c] * br[c];
        B(j * zeta->size() + a, i) = v;
      }
    }
  return rank(B) == r;
}

VecForm build_kcontact(const Distribution& D, const std::vector<VectorField>& S) {
  std::size_t n = D.space->dim(), k = S.size();
  if (k == 0) fail(Errc::SpanFailure, "no complementary symmetries given");
  std::size_t r = generic_rank(D);
  Matrix dm = rows_of(D.spanning, n);
  if (r + k != n || rank(dm.stack(rows_of(S, n))) != n)
    fail(Errc::SpanFailure, "rank D = " + std::to_string(r) + " and " + std::to_string(k) +
                                " symmetries do not span a " + std::to_string(n) + "-dimensional tangent space");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (!lie_bracket(S[i], S[j]).is_zero())
        fail(Errc::SymmetryFailure, "symmetries " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " do not commute");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < D.spanning.size(); ++j) {
      VectorField b = lie_bracket(S[i], D.spanning[j]);
      if (b.is_zero()) continue;
      if (rank(dm.stack(rows_of({b}, n))) != r)
        fail(Errc::SymmetryFailure, "symmetry " + std::to_string(i + 1) + " does not preserve the distribution");
    }
  if (!max_nonintegrable(D)) fail(Errc::NotMaxNonintegrable, "distribution is not maximally non-integrable");

  // Frame: an independent subset of D followed by S; the dual coframe rows after r give η.
  std::vector<VectorField> frame;
  for (const auto& Y : D.spanning) {
    frame.push_back(Y);
    if (rank(rows_of(frame, n)) < frame.size()) frame.pop_back();
    if (frame.size() == r) break;
  }
  for (const auto& s : S) frame.push_back(s);
  Matrix inv;
  try {
    inv = inverse(rows_of(frame, n).transpose());
  } catch (const Error& e) {
    if (e.code() == Errc::SingularSolve) fail(Errc::SpanFailure, "frame is degenerate");
    throw;
  }
  std::vector<DiffForm> comps;
  for (std::size_t a = 0; a < k; ++a) comps.push_back(DiffForm::one_form(D.space, inv.row(r + a)));
  VecForm eta(std::move(comps));
  KContactReport rep = verify_kcontact(eta);
  if (!rep.is_kcontact) fail(Errc::NotKContact, std::string("constructed form fails: ") + failure_name(rep.failure_reason));
  return eta;
}

std::pair<KVectorField, Expr> combine_hamiltonians(const KVectorField& Xs, const KContactForm& ctx,
                                                   const std::vector<KFunction>& hs) {
  if (Xs.k() != ctx.k() || hs.size() != ctx.k()) fail(Errc::LengthMismatch, "need k fields and k k-functions");
  Expr h;
  for (std::size_t a = 0; a < ctx.k(); ++a) {
    require_hamiltonian(Xs.fields[a], hs[a], ctx);
    h += hs[a][a];
  }
  if (!verify_hdw(Xs, h, ctx)) fail(Errc::Internal, "combined k-vector field fails the HDW equations");
  return {Xs, h};
}

bool verify_hdw(const KVectorField& Xs, const Expr& h, const KContactForm& ctx) {
  if (Xs.k() != ctx.k()) fail(Errc::LengthMismatch, "need k fields");
  const SpacePtr& s = ctx.space();
  DiffForm lhs(s, 1);
  Expr contr;
  for (std::size_t a = 0; a < ctx.k(); ++a) {
    lhs = lhs + interior(Xs.fields[a], ctx.deta()[a]);
    contr += eval_one(ctx.eta()[a], Xs.fields[a]);
  }
  DiffForm rhs = ext_deriv(DiffForm::function(s, h));
  for (std::size_t a = 0; a < ctx.k(); ++a) {
    Expr rh = ctx.reeb()[a].apply(h);
    if (!rh.is_zero()) rhs = rhs - rh * ctx.eta()[a];
  }
  return lhs == rhs && contr == -h;
}

Presymplectic presymplectic_project(const KContactForm& ctx, const std::vector<mpq_class>& theta, const KFunction& f,
                                    const VectorField& Xf) {
  if (theta.size() != ctx.k()) fail(Errc::LengthMismatch, "covector length differs from k");
  require_hamiltonian(Xf, f, ctx);
  for (std::size_t a = 0; a < ctx.k(); ++a)
    for (std::size_t b = 0; b < ctx.k(); ++b)
      if (!ctx.reeb()[a].apply(f[b]).is_zero())
        fail(Errc::NotProjectable, "R_" + std::to_string(a + 1) + " f^" + std::to_string(b + 1) + " != 0");
  const SpacePtr& s = ctx.space();
  DiffForm omega(s, 2);
  for (std::size_t a = 0; a < ctx.k(); ++a)
    if (theta[a] != 0) omega = omega + Expr(theta[a]) * ctx.deta()[a];
  Expr ft = pairing(f, theta);
  if (interior(Xf, omega) != ext_deriv(DiffForm::function(s, ft)))
    fail(Errc::Internal, "projected Hamiltonian equation fails");
  return {omega, ft};
}

bool bracket_compatible(const KContactForm& ctx, const std::vector<mpq_class>& theta, const KFunction& f,
                        const VectorField& Xf, const KFunction& g, const VectorField& Xg) {
  Presymplectic pf = presymplectic_project(ctx, theta, f, Xf);
  presymplectic_project(ctx, theta, g, Xg);
  Expr lhs = pairing(kcontact_bracket(f, g, ctx, Xf, Xg), theta);
  return lhs == pf.omega.evaluate({Xf, Xg});
}

PresymplecticExtension presymplectic_extend(const KContactForm& ctx, const KFunction& h, const VectorField& Xh) {
  require_hamiltonian(Xh, h, ctx);
  const SpacePtr& s = ctx.space();
  std::size_t k = ctx.k(), n = s->dim();
  std::vector<std::string> fibre;
  for (const char* prefix : {"z", "w", "zeta", "ext_z"}) {
    fibre.clear();
    bool clash = false;
    for (std::size_t a = 0; a < k; ++a) {
      std::string name = prefix + std::to_string(a + 1);
      if (s->find(name)) clash = true;
      fibre.push_back(name);
    }
    if (!clash) break;
    fibre.clear();
  }
  if (fibre.empty()) fail(Errc::InvalidInput, "no free names for the fibre coordinates");
  std::vector<std::string> vars = s->vars();
  vars.insert(vars.end(), fibre.begin(), fibre.end());
  SpacePtr e = make_space(vars, s->consts());
  std::vector<std::size_t> map(s->nsymbols());
  for (std::size_t i = 0; i < n; ++i) map[i] = i;
  for (std::size_t i = n; i < s->nsymbols(); ++i) map[i] = i + k;
  auto lift = [&](const Expr& x) { return x.remap(map, e); };
  auto lift_form = [&](const DiffForm& w) {
    DiffForm out(e, w.degree());
    for (const auto& [idx, c] : w.terms()) out.add(idx, lift(c));
    return out;
  };

  DiffForm theta(e, 1);
  Expr H;
  std::vector<Expr> fc(n + k);
  for (std::size_t i = 0; i < n; ++i) fc[i] = lift(Xh[i]);
  for (std::size_t a = 0; a < k; ++a) {
    Expr z = Expr::symbol(e, n + a);
    theta = theta + z * lift_form(ctx.eta()[a]);
    H += z * lift(h[a]);
    for (std::size_t b = 0; b < k; ++b) {
      Expr rb = ctx.reeb()[b].apply(h[a]);
      if (!rb.is_zero()) fc[n + b] += z * lift(rb);
    }
  }
  PresymplecticExtension out{e, fibre, ext_deriv(theta), VectorField(e, fc), H};
  if (!lie_derivative(out.field, out.omega).is_zero()) fail(Errc::Internal, "extended field does not preserve ω");
  if (interior(out.field, out.omega) != ext_deriv(DiffForm::function(e, H)))
    fail(Errc::Internal, "extended field is not Hamiltonian for z·h");
  return out;
}

}  // namespace kontact
