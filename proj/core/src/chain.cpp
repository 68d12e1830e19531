#include "pgt/chain.hpp"

#include <stdexcept>

namespace pgt {

ChainSpec::ChainSpec(unsigned n, Rational j, Regime r) : n_sites(n), j2(std::move(j)), regime(r) {
  if (n_sites < 2) throw std::invalid_argument("ChainSpec: n_sites >= 2 required");
  if (regime == Regime::Finite && j2 <= 0)
    throw std::invalid_argument("ChainSpec: J2 > 0 required in the finite regime");
  this->j2.canonicalize();
}

SolvabilityClass classify_length(unsigned n_sites) {
  if (n_sites < 2) throw std::invalid_argument("classify_length: N >= 2 required");
  SolvabilityClass c;
  unsigned long alpha = n_sites;
  unsigned k = 0;
  while (alpha % 2 == 0) {
    alpha /= 2;
    ++k;
  }
  if (alpha == 1) {
    // pure power of two: N = 2 * 2^(k-1)
    c.alpha = 2;
    c.k = k - 1;
    c.alpha_in_catalog = true;
    c.exactly_solvable = true;
    return c;
  }
  c.alpha = alpha;
  c.k = k;
  unsigned long rest = alpha;
  for (unsigned long p : {3UL, 5UL, 17UL, 257UL, 65537UL})
    if (rest % p == 0) {
      rest /= p;
      if (rest % p == 0) { rest = 0; break; }  // square factor: not in catalog
    }
  c.alpha_in_catalog = (rest == 1);
  c.exactly_solvable = c.alpha_in_catalog && k >= 1;
  return c;
}

Rational TridiagonalMatrix::trace() const {
  Rational t = 0;
  for (const auto& d : diag) t += d;
  return t;
}

bool TridiagonalMatrix::centrosymmetric() const {
  unsigned n = size();
  for (unsigned i = 0; i < n; ++i)
    if (diag[i] != diag[n - 1 - i]) return false;
  for (unsigned i = 0; i + 1 < n; ++i)
    if (offdiag[i] != offdiag[n - 2 - i]) return false;
  return true;
}

std::vector<HighReal> TridiagonalMatrix::diag_at(unsigned prec) const {
  std::vector<HighReal> out;
  out.reserve(diag.size());
  for (const auto& d : diag) out.emplace_back(d, prec);
  return out;
}

std::vector<HighReal> TridiagonalMatrix::offdiag_at(unsigned prec) const {
  std::vector<HighReal> out;
  out.reserve(offdiag.size());
  for (const auto& d : offdiag) out.emplace_back(d, prec);
  return out;
}

Rational endpoint_diagonal(unsigned n_sites, const Rational& j2) {
  long half = static_cast<long>(n_sites) / 2;
  return Rational(-(half - 2)) - Rational(half - 1) * j2;
}

TridiagonalMatrix build_single_excitation_matrix(const ChainSpec& spec) {
  if (spec.n_sites % 2 != 0)
    throw std::invalid_argument("staggered builder: N must be even");
  if (spec.regime != Regime::Finite)
    throw std::invalid_argument("staggered builder: finite regime required");
  const unsigned n = spec.n_sites;
  const Rational d = endpoint_diagonal(n, spec.j2);
  TridiagonalMatrix m;
  m.diag.assign(n, d + 2 * spec.j2);
  m.diag.front() = d;
  m.diag.back() = d;
  m.offdiag.resize(n - 1);
  for (unsigned i = 0; i + 1 < n; ++i)
    m.offdiag[i] = (i % 2 == 0) ? Rational(-2) : Rational(-2) * spec.j2;
  return m;
}

TridiagonalMatrix shift_matrix(const TridiagonalMatrix& m, const ChainSpec& spec) {
  const Rational s = endpoint_diagonal(spec.n_sites, spec.j2) + 2 * spec.j2;
  TridiagonalMatrix out = m;
  for (auto& d : out.diag) d -= s;
  out.shift_applied = m.shift_applied + s;
  return out;
}

BisymmetricSplit split_bisymmetric(const TridiagonalMatrix& m) {
  const unsigned n = m.size();
  if (n % 2 != 0) throw std::invalid_argument("split_bisymmetric: even size required");
  if (!m.centrosymmetric()) throw std::invalid_argument("split_bisymmetric: matrix not centrosymmetric");
  const unsigned h = n / 2;
  BisymmetricSplit s;
  // corner constants by parity of N/2; they are just the continuation of the
  // alternating off-diagonal pattern at positions h-1 and h
  s.corner_a = h >= 2 ? m.offdiag[h - 2] : Rational(0);
  s.corner_b = m.offdiag[h - 1];
  std::vector<std::vector<Rational>> A(h, std::vector<Rational>(h, Rational(0)));
  for (unsigned i = 0; i < h; ++i) A[i][i] = m.diag[i];
  for (unsigned i = 0; i + 1 < h; ++i) {
    A[i][i + 1] = m.offdiag[i];
    A[i + 1][i] = m.offdiag[i];
  }
  s.a_plus = A;
  s.a_minus = A;
  // B*S has the single entry b at (h-1, h-1)
  s.a_plus[h - 1][h - 1] += s.corner_b;
  s.a_minus[h - 1][h - 1] -= s.corner_b;
  return s;
}

}  // namespace pgt
