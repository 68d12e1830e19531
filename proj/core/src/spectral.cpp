#include "pgt/spectral.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "pgt/radicals.hpp"

namespace pgt {

namespace {

// Reduce cos(m pi / den) to lowest terms with angle in [0, pi]; returns the
// rational value when the cosine is rational (Niven: 0, +-1/2, +-1).
struct ReducedAngle {
  long num;
  unsigned long den;
  std::optional<Rational> rational_value;
};

ReducedAngle reduce_angle(long m, unsigned long den) {
  BigInt mm(m);
  BigInt two_n = BigInt(2) * BigInt(den);
  BigInt mr;
  mpz_mod(mr.get_mpz_t(), mm.get_mpz_t(), two_n.get_mpz_t());
  if (mr > BigInt(den)) mr = two_n - mr;
  unsigned long a = mr.get_ui(), b = den;
  if (a != 0) {
    unsigned long g = std::gcd(a, b);
    a /= g;
    b /= g;
  } else {
    b = 1;
  }
  ReducedAngle out{static_cast<long>(a), b, std::nullopt};
  if (a == 0) out.rational_value = Rational(1);
  else if (b == 1) out.rational_value = Rational(-1);  // a == 1
  else if (b == 2) out.rational_value = Rational(0);
  else if (b == 3) out.rational_value = Rational(a == 1 ? 1 : -1, 2);
  return out;
}

Rational sqrt_exact_or_zero(const Rational& r, bool* ok) {
  BigInt np, dp;
  *ok = is_perfect_square(r.get_num(), &np) && is_perfect_square(r.get_den(), &dp);
  if (!*ok) return Rational(0);
  return Rational(np, dp);
}

}  // namespace

HighReal SurdAtom::eval(unsigned prec) const {
  switch (kind) {
    case Kind::None:
      return HighReal(0L, prec);
    case Kind::SqrtRational:
      return HighReal(r, prec + 8).sqrt();
    case Kind::BranchRadical: {
      CosineValue c = cos_rational_pi(BigInt(cos_num), cos_den, prec + 16);
      return eval_branch_eigenvalue(HighReal(j2, prec + 16), c.value, +1, prec);
    }
    case Kind::CosAngle: {
      CosineValue c = cos_rational_pi(BigInt(cos_num), cos_den, prec + 8);
      return c.value * 2L;
    }
    case Kind::NumericEig: {
      auto e = sturm_eigenvalues(*matrix, prec);
      return e.at(eig_index);
    }
  }
  throw std::logic_error("SurdAtom::eval: bad kind");
}

std::string SurdAtom::key() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::None: return "1";
    case Kind::SqrtRational: os << "sqrt:" << r.get_str(); break;
    case Kind::BranchRadical:
      os << "branch:" << j2.get_str() << ":" << cos_num << "/" << cos_den;
      break;
    case Kind::CosAngle: os << "cos:" << cos_num << "/" << cos_den; break;
    case Kind::NumericEig:
      os << "eig:" << matrix.get() << ":" << eig_index;
      break;
  }
  return os.str();
}

std::string SurdAtom::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::None: return "1";
    case Kind::SqrtRational: os << "sqrt(" << r.get_str() << ")"; break;
    case Kind::BranchRadical:
      os << "2*sqrt(1+J2^2+2*J2*cos(" << cos_num << "*pi/" << cos_den << ")), J2=" << j2.get_str();
      break;
    case Kind::CosAngle: os << "2*cos(" << cos_num << "*pi/" << cos_den << ")"; break;
    case Kind::NumericEig: os << "eigenvalue[" << eig_index << "] (numeric)"; break;
  }
  return os.str();
}

HighReal EnergyExpr::eval(unsigned prec) const {
  if (is_rational()) return HighReal(shift, prec);
  unsigned wp = prec + 8;
  HighReal v = HighReal(shift, wp) + HighReal(coef, wp) * atom.eval(wp);
  HighReal out(prec);
  mpfr_set(out.raw(), v.raw(), MPFR_RNDN);
  return out;
}

std::string EnergyExpr::describe() const {
  if (is_rational()) return shift.get_str();
  std::string s = shift == 0 ? "" : shift.get_str() + " + ";
  return s + coef.get_str() + "*" + atom.describe();
}

EnergyExpr EnergyExpr::rational(const Rational& value) {
  EnergyExpr e;
  e.shift = value;
  return e;
}

EnergyExpr EnergyExpr::branch(const Rational& j2, long cos_m, unsigned long cos_den, int sign,
                              const Rational& shift) {
  ReducedAngle a = reduce_angle(cos_m, cos_den);
  EnergyExpr e;
  e.shift = shift;
  if (a.rational_value) {
    // radicand rational: 1 + J2^2 + 2 J2 c; fold perfect squares to rationals
    Rational rad = 1 + j2 * j2 + 2 * j2 * (*a.rational_value);
    bool sq = false;
    Rational root = sqrt_exact_or_zero(rad, &sq);
    if (sq) {
      e.shift += Rational(2 * sign) * root;
      return e;
    }
    e.coef = Rational(sign);
    e.atom.kind = SurdAtom::Kind::SqrtRational;
    e.atom.r = 4 * rad;
    return e;
  }
  e.coef = Rational(sign);
  e.atom.kind = SurdAtom::Kind::BranchRadical;
  e.atom.j2 = j2;
  e.atom.cos_num = a.num;
  e.atom.cos_den = a.den;
  return e;
}

EnergyExpr EnergyExpr::scl_cos(long num, unsigned long den, const Rational& shift) {
  ReducedAngle a = reduce_angle(num, den);
  EnergyExpr e;
  e.shift = shift;
  if (a.rational_value) {
    e.shift += 2 * (*a.rational_value);
    return e;
  }
  // 2 cos(a pi/b) with a/b in (0,1); canonical positive atom has angle < pi/2
  bool flip = 2 * static_cast<unsigned long>(a.num) > a.den;
  long num_c = flip ? static_cast<long>(a.den) - a.num : a.num;
  e.coef = flip ? -1 : 1;
  e.atom.kind = SurdAtom::Kind::CosAngle;
  e.atom.cos_num = num_c;
  e.atom.cos_den = a.den;
  return e;
}

EnergyExpr EnergyExpr::sqrt_term(const Rational& shift, const Rational& coef,
                                 const Rational& radicand) {
  EnergyExpr e;
  e.shift = shift;
  if (coef == 0 || radicand == 0) return e;
  if (radicand < 0) throw std::invalid_argument("EnergyExpr::sqrt_term: negative radicand");
  bool sq = false;
  Rational root = sqrt_exact_or_zero(radicand, &sq);
  if (sq) {
    e.shift += coef * root;
    return e;
  }
  e.coef = coef;
  e.atom.kind = SurdAtom::Kind::SqrtRational;
  e.atom.r = radicand;
  return e;
}

EnergyExpr EnergyExpr::numeric(std::shared_ptr<const TridiagonalMatrix> m, unsigned index) {
  EnergyExpr e;
  e.coef = 1;
  e.atom.kind = SurdAtom::Kind::NumericEig;
  e.atom.matrix = std::move(m);
  e.atom.eig_index = index;
  return e;
}

// ---------------------------------------------------------------------------
// Sturm bisection

namespace {

// number of eigenvalues strictly below x, by the signs of the LDL^T pivots
unsigned sturm_count(const std::vector<HighReal>& d, const std::vector<HighReal>& b2,
                     const HighReal& x, const HighReal& tiny) {
  unsigned n = static_cast<unsigned>(d.size());
  unsigned count = 0;
  HighReal t = d[0] - x;
  if (t.is_zero()) t = -tiny;
  if (t.sign() < 0) ++count;
  for (unsigned i = 1; i < n; ++i) {
    t = d[i] - x - b2[i - 1] / t;
    if (t.is_zero()) t = -tiny;
    if (t.sign() < 0) ++count;
  }
  return count;
}

}  // namespace

std::vector<HighReal> sturm_eigenvalues(const TridiagonalMatrix& m, unsigned prec) {
  const unsigned n = m.size();
  const unsigned wp = prec + 32;
  auto d = m.diag_at(wp);
  auto off = m.offdiag_at(wp);
  std::vector<HighReal> b2;
  b2.reserve(off.size());
  for (auto& b : off) b2.push_back(b * b);

  // Gershgorin bounds, exact in rationals
  Rational lo_q = m.diag[0], hi_q = m.diag[0];
  for (unsigned i = 0; i < n; ++i) {
    Rational radius = 0;
    if (i > 0) radius += abs(m.offdiag[i - 1]);
    if (i + 1 < n) radius += abs(m.offdiag[i]);
    Rational lo_i = m.diag[i] - radius, hi_i = m.diag[i] + radius;
    if (lo_i < lo_q) lo_q = lo_i;
    if (hi_i > hi_q) hi_q = hi_i;
  }
  HighReal lo0(lo_q - 1, wp), hi0(hi_q + 1, wp);
  Rational la = abs(lo_q), ha = abs(hi_q);
  HighReal scale((la > ha ? la : ha) + 1, wp);
  HighReal tiny = HighReal::pow2(-static_cast<long>(wp) + 4, wp) * scale;
  HighReal tol = HighReal::pow2(-static_cast<long>(prec) - 8, wp) * scale;

  const unsigned max_iter = 8 * wp + 256;
  std::vector<HighReal> out;
  out.reserve(n);
  for (unsigned k = 0; k < n; ++k) {
    HighReal lo = lo0, hi = hi0;
    unsigned it = 0;
    while ((hi - lo) > tol) {
      if (++it > max_iter) {
        std::ostringstream os;
        os << "sturm_eigenvalues: no convergence for index " << k << " in ["
           << lo.str(20) << ", " << hi.str(20) << "]";
        throw std::runtime_error(os.str());
      }
      HighReal mid = (lo + hi) / 2L;
      if (sturm_count(d, b2, mid, tiny) > k)
        hi = mid;
      else
        lo = mid;
    }
    out.push_back((lo + hi) / 2L);
  }
  return out;
}

// ---------------------------------------------------------------------------
// inverse iteration

namespace {

// Solve (T - sigma I) x = rhs by Gaussian elimination with partial pivoting.
std::vector<HighReal> shifted_solve(const std::vector<HighReal>& d,
                                    const std::vector<HighReal>& off, const HighReal& sigma,
                                    std::vector<HighReal> rhs) {
  const unsigned n = static_cast<unsigned>(d.size());
  // band storage: sub[i] (row i+1), dia[i], sup1[i], sup2[i] (fill-in)
  std::vector<HighReal> sub(n), dia(n), sup1(n), sup2(n);
  HighReal zero(0L, sigma.prec());
  for (unsigned i = 0; i < n; ++i) {
    dia[i] = d[i] - sigma;
    sup1[i] = (i + 1 < n) ? off[i] : zero;
    sub[i] = (i + 1 < n) ? off[i] : zero;
    sup2[i] = zero;
  }
  for (unsigned i = 0; i + 1 < n; ++i) {
    HighReal below = sub[i];
    if (below.abs() > dia[i].abs()) {
      std::swap(dia[i], sub[i]);
      HighReal t = sup1[i];
      sup1[i] = dia[i + 1];
      dia[i + 1] = t;
      HighReal old_sup2 = sup2[i];  // may be nonzero after a previous swap
      sup2[i] = (i + 2 < n) ? sup1[i + 1] : zero;
      if (i + 2 < n) sup1[i + 1] = old_sup2;
      std::swap(rhs[i], rhs[i + 1]);
      below = sub[i];
    }
    if (dia[i].is_zero()) dia[i] = HighReal::pow2(-static_cast<long>(sigma.prec()), sigma.prec());
    HighReal f = below / dia[i];
    dia[i + 1] -= f * sup1[i];
    if (i + 2 < n) sup1[i + 1] -= f * sup2[i];
    rhs[i + 1] -= f * rhs[i];
  }
  if (dia[n - 1].is_zero())
    dia[n - 1] = HighReal::pow2(-static_cast<long>(sigma.prec()), sigma.prec());
  std::vector<HighReal> x(n, zero);
  for (int i = static_cast<int>(n) - 1; i >= 0; --i) {
    HighReal s = rhs[i];
    if (i + 1 < static_cast<int>(n)) s -= sup1[i] * x[i + 1];
    if (i + 2 < static_cast<int>(n)) s -= sup2[i] * x[i + 2];
    x[i] = s / dia[i];
  }
  return x;
}

void normalize(std::vector<HighReal>& v) {
  HighReal s(0L, v[0].prec());
  for (auto& c : v) s += c * c;
  s = s.sqrt();
  for (auto& c : v) c = c / s;
}

std::vector<HighReal> eigvec(const std::vector<HighReal>& d, const std::vector<HighReal>& off,
                             const HighReal& e, unsigned wp) {
  // shift perturbed off the exact eigenvalue to keep the solve regular
  HighReal sigma = e + HighReal::pow2(-static_cast<long>(wp) / 2, wp);
  // deterministic start with no accidental symmetry: a plain ones vector is
  // exactly orthogonal to the antisymmetric eigenvectors of bisymmetric input
  std::vector<HighReal> v;
  std::uint64_t s = 0x9E3779B97F4A7C15ULL;
  for (size_t i = 0; i < d.size(); ++i) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    v.emplace_back(0.25 + static_cast<double>(s >> 11) / 9007199254740992.0, wp);
  }
  normalize(v);
  for (int pass = 0; pass < 3; ++pass) {
    v = shifted_solve(d, off, sigma, std::move(v));
    normalize(v);
  }
  // canonical sign: last component positive
  int s = 0;
  for (int i = static_cast<int>(v.size()) - 1; i >= 0 && s == 0; --i) s = v[i].sign();
  if (s < 0)
    for (auto& c : v) c = -c;
  return v;
}

}  // namespace

std::vector<std::vector<HighReal>> full_eigenvectors(const TridiagonalMatrix& m,
                                                     const std::vector<HighReal>& energies,
                                                     unsigned prec) {
  const unsigned wp = prec + 32;
  auto d = m.diag_at(wp);
  auto off = m.offdiag_at(wp);
  // reject eigenvalue pairs closer than the regularization scale
  HighReal min_gap = HighReal::pow2(-static_cast<long>(wp) / 2 + 8, wp);
  for (size_t i = 0; i + 1 < energies.size(); ++i)
    if ((energies[i + 1] - energies[i]).abs() < min_gap)
      throw std::runtime_error(
          "full_eigenvectors: near-degenerate eigenvalues; raise the working precision");
  std::vector<std::vector<HighReal>> out;
  out.reserve(energies.size());
  for (const auto& e : energies) {
    HighReal ew(wp);
    mpfr_set(ew.raw(), e.raw(), MPFR_RNDN);
    out.push_back(eigvec(d, off, ew, wp));
  }
  return out;
}

std::pair<std::vector<HighReal>, std::vector<HighReal>> endpoint_amplitudes(
    const TridiagonalMatrix& m, const std::vector<HighReal>& energies, unsigned prec) {
  auto vecs = full_eigenvectors(m, energies, prec);
  std::vector<HighReal> first, last;
  first.reserve(vecs.size());
  last.reserve(vecs.size());
  for (auto& v : vecs) {
    first.push_back(v.front());
    last.push_back(v.back());
  }
  return {std::move(first), std::move(last)};
}

// ---------------------------------------------------------------------------
// spectra

namespace {

void sort_spectrum(SpectralData& sd, unsigned prec) {
  const unsigned n = sd.size();
  std::vector<unsigned> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](unsigned a, unsigned b) {
    int c = mpfr_cmp(sd.energies[a].raw(), sd.energies[b].raw());
    if (c != 0) return c < 0;
    return sd.exprs[a].coef < sd.exprs[b].coef;  // minus branch first
  });
  SpectralData s2 = sd;
  for (unsigned i = 0; i < n; ++i) {
    sd.energies[i] = s2.energies[idx[i]];
    sd.exprs[i] = s2.exprs[idx[i]];
  }
  HighReal tie_tol = HighReal::pow2(-static_cast<long>(prec) + 16, 32);
  for (unsigned i = 0; i + 1 < n; ++i)
    if ((sd.energies[i + 1] - sd.energies[i]).abs() <= tie_tol) sd.ties.push_back(i);
}

}  // namespace

SpectralData closed_form_spectrum(const ChainSpec& spec, unsigned prec, unsigned amp_prec) {
  if (spec.n_sites % 2 != 0)
    throw std::invalid_argument("closed_form_spectrum: N must be even");
  const unsigned n = spec.n_sites;
  const Rational shift = endpoint_diagonal(n, spec.j2) + 2 * spec.j2;
  SpectralData sd;
  sd.source = SpectralSource::ClosedForm;
  for (unsigned m = 0; m < n / 2; ++m)
    sd.exprs.push_back(EnergyExpr::branch(spec.j2, 2 * static_cast<long>(m), n, -1, shift));
  for (unsigned m = 1; m < n / 2; ++m)
    sd.exprs.push_back(EnergyExpr::branch(spec.j2, 2 * static_cast<long>(m), n, +1, shift));
  // m = N/2: the radical formula collapses to 2|1-J2| and drops the sign;
  // the eigenvalue is 2 - 2 J2 for every J2 > 0.
  sd.exprs.push_back(EnergyExpr::rational(shift + 2 - 2 * spec.j2));
  for (const auto& e : sd.exprs) sd.energies.push_back(e.eval(prec));
  sort_spectrum(sd, prec);
  auto h = build_single_excitation_matrix(spec);
  std::tie(sd.amp_first, sd.amp_last) = endpoint_amplitudes(h, sd.energies, amp_prec);
  return sd;
}

SpectralData numeric_spectrum(const TridiagonalMatrix& m, unsigned prec, unsigned amp_prec) {
  SpectralData sd;
  sd.source = SpectralSource::NumericOracle;
  sd.energies = sturm_eigenvalues(m, prec);
  auto shared = std::make_shared<TridiagonalMatrix>(m);
  for (unsigned i = 0; i < sd.energies.size(); ++i)
    sd.exprs.push_back(EnergyExpr::numeric(shared, i));
  std::tie(sd.amp_first, sd.amp_last) = endpoint_amplitudes(m, sd.energies, amp_prec);
  return sd;
}

SpectralData n4_exact(const Rational& j2, unsigned prec) {
  if (j2 <= 0) throw std::invalid_argument("n4_exact: J2 > 0 required");
  SpectralData sd;
  sd.source = SpectralSource::N4Exact;
  // E1 = -2-J2, E2 = J2-2 sqrt(1+J2^2), E3 = 2-J2, E4 = J2+2 sqrt(1+J2^2)
  sd.exprs.push_back(EnergyExpr::rational(Rational(-2) - j2));
  sd.exprs.push_back(EnergyExpr::branch(j2, 1, 2, -1, j2));
  sd.exprs.push_back(EnergyExpr::rational(Rational(2) - j2));
  sd.exprs.push_back(EnergyExpr::branch(j2, 1, 2, +1, j2));
  for (const auto& e : sd.exprs) sd.energies.push_back(e.eval(prec));
  sort_spectrum(sd, prec);
  // amplitudes from the closed eigenvectors: C_{2,4} = 1/(2 sqrt(1+J2^2 -+ J2 sqrt(1+J2^2)))
  unsigned wp = prec + 16;
  HighReal j(j2, wp);
  HighReal s = (HighReal(1L, wp) + j * j).sqrt();
  HighReal c2 = HighReal(1L, wp) / ((HighReal(1L, wp) + j * j - j * s).sqrt() * 2L);
  HighReal c4 = HighReal(1L, wp) / ((HighReal(1L, wp) + j * j + j * s).sqrt() * 2L);
  HighReal half(Rational(1, 2), wp);
  // order in sd follows ascending energies; map by expr identity
  for (unsigned i = 0; i < 4; ++i) {
    const auto& e = sd.exprs[i];
    if (e.is_rational() && e.shift == Rational(-2) - j2) {
      sd.amp_first.push_back(half);
      sd.amp_last.push_back(half);
    } else if (e.is_rational()) {
      sd.amp_first.push_back(half);
      sd.amp_last.push_back(half);
    } else if (e.coef < 0) {
      sd.amp_first.push_back(-c2);
      sd.amp_last.push_back(c2);
    } else {
      sd.amp_first.push_back(-c4);
      sd.amp_last.push_back(c4);
    }
  }
  return sd;
}

SCLSpectrum scl_spectrum(unsigned n_sites) {
  if (n_sites % 2 != 0 || n_sites < 4)
    throw std::invalid_argument("scl_spectrum: even N >= 4 required");
  SCLSpectrum s;
  s.n = n_sites / 2;
  s.j2_multiplier = Rational(-(static_cast<long>(s.n) - 1));
  Rational base = Rational(2) - static_cast<long>(s.n);
  for (unsigned i = 1; i <= s.n + 1; ++i)
    s.offsets.push_back(EnergyExpr::scl_cos(static_cast<long>(i) - 1, s.n, base));
  for (unsigned i = 1; i <= s.n + 1; ++i)
    s.weights_sq.push_back((i == 1 || i == s.n + 1) ? Rational(1, n_sites)
                                                    : Rational(1, s.n));
  s.deg_less = s.n + 1;
  s.deg_greater = s.n - 1;
  return s;
}

std::vector<unsigned long> a3_sequence(unsigned count) {
  std::vector<unsigned long> out;
  out.reserve(count);
  for (unsigned m = 0; m < count; ++m) {
    long sgn = (m % 2 == 0) ? 1 : -1;
    out.push_back(static_cast<unsigned long>(((6L * m + 1 - sgn) / 2) + 1));
  }
  return out;
}

std::vector<unsigned long> a5_sequence(unsigned count) {
  std::vector<unsigned long> out;
  for (unsigned long v = 1; out.size() < count; v += 2)
    if (v % 5 != 0) out.push_back(v);
  return out;
}

std::vector<EnergyExpr> alpha3_minus_branch(unsigned k, const Rational& j2) {
  if (k < 2) throw std::invalid_argument("alpha3_minus_branch: k >= 2 required");
  std::vector<EnergyExpr> out;
  unsigned long p = 1UL << (k - 1);
  for (unsigned long m = 0; m < p / 2; ++m)
    for (int sign : {-1, +1})
      out.push_back(EnergyExpr::branch(j2, static_cast<long>(2 * m + 1), p, sign, Rational(0)));
  auto a3 = a3_sequence(static_cast<unsigned>(p));
  for (unsigned long m = 0; m < p; ++m)
    for (int sign : {-1, +1})
      out.push_back(
          EnergyExpr::branch(j2, static_cast<long>(a3[m]), 3 * p, sign, Rational(0)));
  return out;
}

std::vector<EnergyExpr> alpha5_minus_branch(unsigned k, const Rational& j2) {
  if (k < 2) throw std::invalid_argument("alpha5_minus_branch: k >= 2 required");
  std::vector<EnergyExpr> out;
  unsigned long p = 1UL << (k - 1);
  for (unsigned long m = 0; m < p / 2; ++m)
    for (int sign : {-1, +1})
      out.push_back(EnergyExpr::branch(j2, static_cast<long>(2 * m + 1), p, sign, Rational(0)));
  auto a5 = a5_sequence(static_cast<unsigned>(2 * p));
  for (unsigned long m = 0; m < 2 * p; ++m)
    for (int sign : {-1, +1})
      out.push_back(
          EnergyExpr::branch(j2, static_cast<long>(a5[m]), 5 * p, sign, Rational(0)));
  return out;
}

TridiagonalMatrix tridiagonal_from_dense(const std::vector<std::vector<Rational>>& a) {
  const unsigned n = static_cast<unsigned>(a.size());
  TridiagonalMatrix m;
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j)
      if (j > i + 1 && a[i][j] != 0)
        throw std::invalid_argument("tridiagonal_from_dense: matrix has entries off the band");
  for (unsigned i = 0; i < n; ++i) m.diag.push_back(a[i][i]);
  for (unsigned i = 0; i + 1 < n; ++i) {
    if (a[i][i + 1] != a[i + 1][i])
      throw std::invalid_argument("tridiagonal_from_dense: not symmetric");
    m.offdiag.push_back(a[i][i + 1]);
  }
  return m;
}

}  // namespace pgt
