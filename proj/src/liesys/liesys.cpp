#include <cmath>

#include "kontact/error.hpp"
#include "kontact/liesys.hpp"
#include "span.hpp"

namespace kontact {

std::vector<DiffForm> dual_coframe(const std::vector<VectorField>& frame) {
  if (frame.empty()) fail(Errc::DegenerateFrame, "empty frame");
  SpacePtr s = frame[0].space();
  for (const auto& Y : frame) s = common_space(s, Y.space());
  std::size_t n = s->dim();
  if (frame.size() != n)
    fail(Errc::DegenerateFrame, std::to_string(frame.size()) + " fields on a " + std::to_string(n) + "-dimensional chart");
  Matrix ft(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t c = 0; c < n; ++c) ft(c, j) = frame[j][c];
  Matrix inv;
  try {
    inv = inverse(ft);
  } catch (const Error& e) {
    if (e.code() == Errc::SingularSolve) fail(Errc::DegenerateFrame, "frame determinant vanishes identically");
    throw;
  }
  std::vector<DiffForm> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(DiffForm::one_form(s, inv.row(i)));
  return out;
}

MaurerCartanResult maurer_cartan_check(const std::vector<DiffForm>& coframe, const StructureConstants& frame_c) {
  std::size_t n = coframe.size();
  if (frame_c.size() != n) fail(Errc::LengthMismatch, "structure constants do not match the coframe");
  MaurerCartanResult res;
  for (std::size_t i = 0; i < n; ++i) {
    DiffForm lhs = ext_deriv(coframe[i]);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (frame_c[j][k][i] != 0) lhs = lhs + Expr(frame_c[j][k][i]) * wedge(coframe[j], coframe[k]);
    if (!lhs.is_zero()) {
      res.holds = false;
      res.failing = i;
      return res;
    }
  }
  return res;
}

Projectability projectability_check(const std::vector<VectorField>& basis, const KContactForm& ctx) {
  Projectability p;
  for (const auto& X : basis) p.hamiltonians.push_back(hamiltonian_of(X, ctx));
  for (std::size_t b = 0; b < ctx.k(); ++b)
    for (std::size_t a = 0; a < basis.size(); ++a) {
      bool reeb_kills = apply(ctx.reeb()[b], p.hamiltonians[a]).is_zero();
      bool commutes = lie_bracket(ctx.reeb()[b], basis[a]).is_zero();
      if (reeb_kills != commutes) fail(Errc::Internal, "R h = 0 and [R, X] = 0 disagree");
      if (!reeb_kills) {
        p.projectable = false;
        p.offending.emplace_back(b, a);
      }
    }
  return p;
}

Prolongation diagonal_prolongation(const std::vector<VectorField>& fields, const VecForm& eta, std::size_t l) {
  KContactForm base(eta);
  std::vector<KFunction> hs;
  for (const auto& X : fields) hs.push_back(hamiltonian_of(X, base));
  if (l == 0) return {eta.space(), fields, eta, hs};

  const SpacePtr& s = eta.space();
  std::size_t n = s->dim(), k = eta.k(), copies = l + 1;
  std::vector<std::string> vars;
  for (std::size_t a = 0; a < copies; ++a)
    for (const auto& v : s->vars()) vars.push_back(v + "_" + std::to_string(a));
  SpacePtr p = make_space(vars, s->consts());
  auto map_for = [&](std::size_t a) {
    std::vector<std::size_t> m(s->nsymbols());
    for (std::size_t i = 0; i < n; ++i) m[i] = a * n + i;
    for (std::size_t i = n; i < s->nsymbols(); ++i) m[i] = copies * n + (i - n);
    return m;
  };
  Prolongation out;
  out.space = p;
  for (const auto& X : fields) {
    std::vector<Expr> c(copies * n);
    for (std::size_t a = 0; a < copies; ++a) {
      auto m = map_for(a);
      for (std::size_t i = 0; i < n; ++i) c[a * n + i] = X[i].remap(m, p);
    }
    out.fields.emplace_back(p, c);
  }
  std::vector<DiffForm> comps;
  for (std::size_t a = 0; a < copies; ++a) {
    auto m = map_for(a);
    for (std::size_t b = 0; b < k; ++b) {
      DiffForm w(p, 1);
      for (const auto& [idx, e] : eta[b].terms()) w.add(FormIndex{static_cast<uint8_t>(idx[0] + a * n)}, e.remap(m, p));
      comps.push_back(std::move(w));
    }
  }
  out.eta = VecForm(std::move(comps));
  KContactForm ctx(out.eta);
  for (std::size_t f = 0; f < fields.size(); ++f) {
    std::vector<Expr> h(copies * k);
    for (std::size_t a = 0; a < copies; ++a) {
      auto m = map_for(a);
      for (std::size_t b = 0; b < k; ++b) h[a * k + b] = hs[f][b].remap(m, p);
    }
    KFunction expect(p, h);
    if (hamiltonian_of(out.fields[f], ctx) != expect) fail(Errc::Internal, "prolonged Hamiltonian is not the sum of copies");
    out.hamiltonians.push_back(std::move(expect));
  }
  return out;
}

namespace {

std::vector<Expr> comps_of(const KFunction& h) {
  std::vector<Expr> v;
  for (std::size_t a = 0; a < h.k(); ++a) v.push_back(h[a]);
  return v;
}

std::string pair_name(std::size_t a, std::size_t b) {
  return "h" + std::to_string(a + 1) + ", h" + std::to_string(b + 1);
}

}  // namespace

CompanionSystem companion_system(const std::vector<VectorField>& basis, const std::vector<KFunction>& hams,
                                 const KContactForm& ctx, const std::vector<mpq_class>& theta,
                                 const std::vector<std::string>& coeffs, bool allow_dependent, std::uint64_t seed) {
  std::size_t r = basis.size(), k = ctx.k();
  if (hams.size() != r) fail(Errc::LengthMismatch, "one k-function per basis field");
  if (theta.size() != k) fail(Errc::LengthMismatch, "covector length differs from k");
  if (!coeffs.empty() && coeffs.size() != r) fail(Errc::LengthMismatch, "one coefficient per basis field");
  const SpacePtr& s = ctx.space();
  CompanionSystem out;
  out.theta = theta;

  detail::ExprSpan hspan(s, k, seed);
  for (std::size_t a = 0; a < r; ++a)
    if (hspan.add(comps_of(hams[a]))) fail(Errc::InvalidInput, "k-functions are linearly dependent");
  out.c.assign(r, std::vector<std::vector<mpq_class>>(r, std::vector<mpq_class>(r)));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b) {
      auto co = hspan.express(comps_of(kcontact_bracket(hams[a], hams[b], ctx, basis[a], basis[b])));
      if (!co) fail(Errc::NotClosed, "{" + pair_name(a, b) + "} leaves the span");
      for (std::size_t g = 0; g < r; ++g) {
        out.c[a][b][g] = (*co)[g];
        out.c[b][a][g] = -(*co)[g];
      }
    }

  detail::ExprSpan tspan(s, 1, seed);
  std::vector<std::size_t> indep;
  for (std::size_t a = 0; a < r; ++a) {
    out.h_theta.push_back(pairing(hams[a], theta));
    if (!tspan.add({out.h_theta.back()})) indep.push_back(a);
  }
  out.dependent = indep.size() < r;
  if (out.dependent && !allow_dependent)
    fail(Errc::DependentProjections, "the θ-projections span only " + std::to_string(indep.size()) + " of " +
                                         std::to_string(r) + " dimensions");

  out.lambda.assign(r, std::vector<std::vector<mpq_class>>(r, std::vector<mpq_class>(r)));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) {
      Expr v = pairing(reeb_apply(hams[a], hams[b], ctx), theta);
      auto co = tspan.express({v});
      if (!co)
        fail(Errc::LambdaNotConstant,
             "<R_h" + std::to_string(a + 1) + " h" + std::to_string(b + 1) + ", θ> = " + v.str() +
                 " is not a constant combination of the projections");
      for (std::size_t i = 0; i < indep.size(); ++i) out.lambda[a][b][indep[i]] = (*co)[i];
    }

  std::vector<std::string> consts = s->consts();
  std::vector<std::string> texts = coeffs;
  if (texts.empty())
    for (std::size_t b = 0; b < r; ++b) texts.push_back("b" + std::to_string(b + 1));
  for (std::size_t b = 0; b < r; ++b) {
    std::string name = "b" + std::to_string(b + 1);
    if (s->find_var(name)) fail(Errc::InvalidInput, "coefficient name '" + name + "' is a chart variable");
    if (!s->find(name)) consts.push_back(name);
  }
  out.space = make_space(s->vars(), consts);
  for (const auto& t : texts) {
    Expr e = parse_expr(t, out.space);
    for (std::size_t v = 0; v < s->dim(); ++v)
      if (e.uses(v)) fail(Errc::InvalidInput, "coefficient '" + t + "' depends on the chart");
    out.coeffs.push_back(e);
  }

  out.M = Matrix(r, r);
  for (std::size_t al = 0; al < r; ++al)
    for (std::size_t nu = 0; nu < r; ++nu) {
      Expr m;
      for (std::size_t be = 0; be < r; ++be) {
        mpq_class d = out.c[nu][be][al] - out.lambda[nu][be][al];
        if (d != 0) m -= out.coeffs[be] * Expr(d);
      }
      out.M(al, nu) = m;
    }

  // θ-projected orbit: w_a = sum_n h^θ_n (M^m)_{n a}; X^m h^θ_a = (-1)^m w_a.
  VectorField X = VectorField::zero(out.space);
  for (std::size_t b = 0; b < r; ++b) {
    std::vector<Expr> lifted;
    for (const auto& e : basis[b].coeffs()) lifted.push_back(e.rebase(out.space));
    X = X + out.coeffs[b] * VectorField(out.space, lifted);
  }
  std::vector<Expr> w, direct;
  for (const auto& h : out.h_theta) {
    w.push_back(h.rebase(out.space));
    direct.push_back(w.back());
  }
  for (std::size_t m = 1; m <= r + 1; ++m) {
    std::vector<Expr> nw(r);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t nu = 0; nu < r; ++nu) nw[a] += w[nu] * out.M(nu, a);
    w = std::move(nw);
    bool zero = true;
    for (std::size_t a = 0; a < r; ++a) {
      direct[a] = X.apply(direct[a]);
      Expr want = (m % 2 ? -w[a] : w[a]);
      if (direct[a] != want) fail(Errc::Internal, "companion matrix disagrees with the flow on the projections");
      zero = zero && w[a].is_zero();
    }
    if (zero) {
      out.nilpotency_order = m;
      break;
    }
  }
  return out;
}

MomentumReport momentum_invariance(const std::vector<VectorField>& basis, const std::vector<KFunction>& hams,
                                   const std::vector<mpq_class>& theta, const KContactForm& ctx,
                                   const std::vector<std::map<std::string, PointValue>>& samples, double tol) {
  if (basis.size() != hams.size()) fail(Errc::LengthMismatch, "one k-function per basis field");
  std::size_t r = basis.size();
  for (std::size_t a = 0; a < r; ++a)
    if (hamiltonian_of(basis[a], ctx) != hams[a]) fail(Errc::NotHamiltonianInput, "k-function differs from -ι_X η");
  std::vector<Expr> ht;
  for (const auto& h : hams) ht.push_back(pairing(h, theta));
  std::vector<std::vector<Expr>> reeb(r, std::vector<Expr>(r)), flow(r, std::vector<Expr>(r));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) {
      reeb[a][b] = reeb_derivation(hams[b], ctx).apply(ht[a]);
      flow[a][b] = basis[b].apply(ht[a]);
    }
  MomentumReport rep;
  for (const auto& pt : samples) {
    for (std::size_t a = 0; a < r; ++a) {
      double lv = std::fabs(eval(ht[a], pt));
      rep.max_level = std::max(rep.max_level, lv);
      if (!(lv < tol))
        fail(Errc::SampleNotOnZeroSet, "sample " + std::to_string(rep.samples + 1) + ": |<h" + std::to_string(a + 1) +
                                           ", θ>| = " + std::to_string(lv));
      for (std::size_t b = 0; b < r; ++b) {
        rep.max_reeb = std::max(rep.max_reeb, std::fabs(eval(reeb[a][b], pt)));
        rep.max_flow = std::max(rep.max_flow, std::fabs(eval(flow[a][b], pt)));
      }
    }
    ++rep.samples;
  }
  rep.invariant = rep.max_reeb < tol && rep.max_flow < tol;
  return rep;
}

bool pde_integrability(const KVectorField& Xs, const std::vector<std::string>& tvars) {
  if (Xs.fields.empty()) fail(Errc::InvalidInput, "empty k-vector field");
  if (tvars.size() != Xs.k()) fail(Errc::LengthMismatch, "need one time variable per component");
  SpacePtr s = Xs.fields[0].space();
  for (const auto& X : Xs.fields) s = common_space(s, X.space());
  std::vector<VectorField> Z;
  for (std::size_t a = 0; a < Xs.k(); ++a) {
    auto i = s->find_var(tvars[a]);
    if (!i) fail(Errc::UnknownSymbol, "'" + tvars[a] + "' is not a chart variable");
    Z.push_back(VectorField::coordinate(s, *i) + VectorField(s, Xs.fields[a].coeffs()));
  }
  for (std::size_t a = 0; a < Z.size(); ++a)
    for (std::size_t b = a + 1; b < Z.size(); ++b)
      if (!lie_bracket(Z[a], Z[b]).is_zero()) return false;
  return true;
}

}  // namespace kontact
