#include "kontact/error.hpp"
#include "kontact/liesys.hpp"
#include "span.hpp"

namespace kontact {

namespace {

std::vector<mpq_class> pad(std::vector<mpq_class> v, std::size_t n) {
  v.resize(n);
  return v;
}

}  // namespace

LieClosure bracket_closure(const std::vector<VectorField>& generators, std::size_t max_dim, std::size_t max_depth,
                           std::uint64_t seed) {
  if (generators.empty()) fail(Errc::InvalidInput, "no generators");
  if (max_dim > 64) fail(Errc::InvalidInput, "max_dim above 64");
  LieClosure out;
  out.space = generators[0].space();
  for (const auto& g : generators) out.space = common_space(out.space, g.space());
  std::size_t n = out.space->dim();
  detail::ExprSpan span(out.space, n, seed);
  std::vector<std::size_t> depth;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (span.add(generators[i].coeffs())) continue;
    if (out.basis.size() == max_dim) fail(Errc::NotClosed, "generators exceed max_dim");
    out.basis.push_back(generators[i]);
    out.words.push_back("X" + std::to_string(i + 1));
    depth.push_back(1);
  }
  std::vector<std::vector<std::vector<mpq_class>>> raw;  // raw[j][i] for i < j
  for (std::size_t j = 0; j < out.basis.size(); ++j) {
    raw.emplace_back();
    for (std::size_t i = 0; i < j; ++i) {
      VectorField b = lie_bracket(out.basis[i], out.basis[j]);
      auto co = span.add(b.coeffs());
      if (co) {
        raw[j].push_back(*co);
        continue;
      }
      std::string word = "[" + out.words[i] + "," + out.words[j] + "]";
      std::size_t d = depth[i] + depth[j];
      if (out.basis.size() == max_dim) fail(Errc::NotClosed, word + " leaves a " + std::to_string(max_dim) + "-dimensional span");
      if (d > max_depth) fail(Errc::NotClosed, word + " exceeds bracket depth " + std::to_string(max_depth));
      std::vector<mpq_class> unit(out.basis.size() + 1);
      unit.back() = 1;
      raw[j].push_back(unit);
      out.basis.push_back(std::move(b));
      out.words.push_back(word);
      depth.push_back(d);
    }
  }
  std::size_t r = out.basis.size();
  out.c.assign(r, std::vector<std::vector<mpq_class>>(r, std::vector<mpq_class>(r)));
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      auto v = pad(raw[j][i], r);
      for (std::size_t g = 0; g < r; ++g) {
        out.c[i][j][g] = v[g];
        out.c[j][i][g] = -v[g];
      }
    }
  out.closed = true;
  return out;
}

StructureConstants structure_constants(const std::vector<VectorField>& basis, std::uint64_t seed) {
  LieClosure cl = bracket_closure(basis, basis.size(), 64, seed);
  if (cl.dim() != basis.size()) fail(Errc::InvalidInput, "basis is linearly dependent");
  return cl.c;
}

bool is_antisymmetric(const StructureConstants& c) {
  for (std::size_t a = 0; a < c.size(); ++a)
    for (std::size_t b = 0; b < c.size(); ++b)
      for (std::size_t g = 0; g < c.size(); ++g)
        if (c[a][b][g] != -c[b][a][g]) return false;
  return true;
}

bool satisfies_jacobi(const StructureConstants& c) {
  std::size_t r = c.size();
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t d = 0; d < r; ++d)
        for (std::size_t e = 0; e < r; ++e) {
          mpq_class s = 0;
          for (std::size_t m = 0; m < r; ++m)
            s += c[a][b][m] * c[m][d][e] + c[b][d][m] * c[m][a][e] + c[d][a][m] * c[m][b][e];
          if (s != 0) return false;
        }
  return true;
}

std::string format_table(const StructureConstants& c, const std::string& symbol, const std::string& open,
                         const std::string& close) {
  std::string out;
  for (std::size_t a = 0; a < c.size(); ++a)
    for (std::size_t b = a + 1; b < c.size(); ++b) {
      std::string rhs;
      for (std::size_t g = 0; g < c.size(); ++g) {
        const mpq_class& q = c[a][b][g];
        if (q == 0) continue;
        mpq_class m = abs(q);
        if (rhs.empty())
          rhs += q < 0 ? "-" : "";
        else
          rhs += q < 0 ? " - " : " + ";
        if (m != 1) rhs += m.get_den() == 1 ? rational_str(m) : "(" + rational_str(m) + ")";
        rhs += symbol + std::to_string(g + 1);
      }
      if (rhs.empty()) continue;
      if (!out.empty()) out += ", ";
      out += open + symbol + std::to_string(a + 1) + "," + symbol + std::to_string(b + 1) + close + " = " + rhs;
    }
  return out;
}

bool is_locally_automorphic(const LieClosure& closure) {
  std::size_t n = closure.space->dim();
  if (closure.dim() != n) return false;
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = closure.basis[i][j];
  return rank(m) == n;
}

}  // namespace kontact
