#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pgt/chain.hpp"
#include "pgt/highreal.hpp"

namespace pgt {

// One irrational building block of an eigenvalue, re-evaluable at any
// precision. Atoms are canonically positive; signs live in EnergyExpr::coef.
struct SurdAtom {
  enum class Kind { None, SqrtRational, BranchRadical, CosAngle, NumericEig };
  Kind kind = Kind::None;
  Rational r;                 // SqrtRational: value = sqrt(r)
  Rational j2;                // BranchRadical parameters
  long cos_num = 0;           // BranchRadical / CosAngle angle = cos_num*pi/cos_den
  unsigned long cos_den = 1;
  std::shared_ptr<const TridiagonalMatrix> matrix;  // NumericEig
  unsigned eig_index = 0;

  HighReal eval(unsigned prec) const;
  std::string key() const;
  std::string describe() const;
  bool operator==(const SurdAtom& o) const { return key() == o.key(); }
};

// energy = shift + coef * atom
struct EnergyExpr {
  Rational shift = 0;
  Rational coef = 0;
  SurdAtom atom;

  bool is_rational() const { return atom.kind == SurdAtom::Kind::None || coef == 0; }
  HighReal eval(unsigned prec) const;
  std::string describe() const;

  // 2*sqrt(1 + j2^2 + 2 j2 cos(m pi / den)) * sign + shift, normalized so that
  // rational cosines collapse to SqrtRational and square radicands to
  // rational values.
  static EnergyExpr branch(const Rational& j2, long cos_m, unsigned long cos_den, int sign,
                           const Rational& shift);
  // 2*cos(num pi / den) * sign + shift (strong-coupling level offsets)
  static EnergyExpr scl_cos(long num, unsigned long den, const Rational& shift);
  static EnergyExpr rational(const Rational& value);
  static EnergyExpr numeric(std::shared_ptr<const TridiagonalMatrix> m, unsigned index);
  // shift + coef*sqrt(radicand), collapsing perfect squares to rationals
  static EnergyExpr sqrt_term(const Rational& shift, const Rational& coef,
                              const Rational& radicand);
};

enum class SpectralSource { ClosedForm, NumericOracle, SCLFirstOrder, N4Exact };

struct SpectralData {
  std::vector<HighReal> energies;   // ascending eigenvalues of h
  std::vector<EnergyExpr> exprs;    // aligned with energies
  std::vector<HighReal> amp_first;  // <1|E_i>
  std::vector<HighReal> amp_last;   // <N|E_i>, sign convention amp_last >= 0
  SpectralSource source = SpectralSource::NumericOracle;
  std::vector<unsigned> ties;       // indices whose order needed the branch-label tiebreak

  unsigned size() const { return static_cast<unsigned>(energies.size()); }
};

// First-order strong-coupling data: E_i = -J2 (n-1) + offset_i + O(1/J2).
struct SCLSpectrum {
  unsigned n = 0;                    // N/2
  Rational j2_multiplier = 0;        // -(n-1)
  std::vector<EnergyExpr> offsets;   // -n+2+2cos((i-1)pi/n), i = 1..n+1
  std::vector<Rational> weights_sq;  // 1/N at the ends, 1/n inside
  unsigned deg_less = 0, deg_greater = 0;
};

// Full spectrum of h^(N) assembled from the two branch families (plus the
// m = N/2 eigenvalue 2-2J2, whose sign the square root would lose for J2<1).
SpectralData closed_form_spectrum(const ChainSpec& spec, unsigned prec,
                                  unsigned amp_prec = 96);

// Sturm-sequence bisection oracle; certified brackets, amplitudes by inverse
// iteration. Works for any symmetric tridiagonal with rational entries.
SpectralData numeric_spectrum(const TridiagonalMatrix& m, unsigned prec,
                              unsigned amp_prec = 96);

// Eigenvalues only (used by the frequency handles for re-evaluation).
std::vector<HighReal> sturm_eigenvalues(const TridiagonalMatrix& m, unsigned prec);

// (amp_first, amp_last) for certified eigenvalues of m.
std::pair<std::vector<HighReal>, std::vector<HighReal>> endpoint_amplitudes(
    const TridiagonalMatrix& m, const std::vector<HighReal>& energies, unsigned prec = 96);

// Full eigenvector matrix (column i = eigenvector of energies[i]).
std::vector<std::vector<HighReal>> full_eigenvectors(const TridiagonalMatrix& m,
                                                     const std::vector<HighReal>& energies,
                                                     unsigned prec = 96);

// The four closed N=4 eigenpairs with the paper's sign conventions.
SpectralData n4_exact(const Rational& j2, unsigned prec = 128);

SCLSpectrum scl_spectrum(unsigned n_sites);

// Index generators for the A_- branch index sets (ascending odd non-multiples).
std::vector<unsigned long> a3_sequence(unsigned count);  // closed formula
std::vector<unsigned long> a5_sequence(unsigned count);  // sieve (formula is its oracle)

// Recursive A_- branch eigenvalue content for N = alpha*2^k, alpha in {3,5}, k >= 2.
std::vector<EnergyExpr> alpha3_minus_branch(unsigned k, const Rational& j2);
std::vector<EnergyExpr> alpha5_minus_branch(unsigned k, const Rational& j2);

TridiagonalMatrix tridiagonal_from_dense(const std::vector<std::vector<Rational>>& a);

}  // namespace pgt
