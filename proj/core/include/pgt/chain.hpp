#pragma once

#include <vector>

#include "pgt/highreal.hpp"

namespace pgt {

enum class Regime { Finite, StrongCouplingLimit };

// Staggered centrosymmetric chain: J(odd bonds)=1, J(even bonds)=J2.
// J2 is always carried as an exact rational so every downstream frequency
// stays re-evaluable at arbitrary precision.
struct ChainSpec {
  unsigned n_sites = 0;
  Rational j2 = 1;
  Regime regime = Regime::Finite;

  ChainSpec() = default;
  ChainSpec(unsigned n, Rational j, Regime r = Regime::Finite);
  HighReal j2_at(unsigned prec) const { return HighReal(j2, prec); }
};

// N = alpha * 2^k, alpha odd (pure powers of two use the paper convention
// alpha=2, k=log2(N)-1). Exactly solvable iff alpha is 2 or a squarefree
// product of Fermat primes {3,5,17,257,65537}.
struct SolvabilityClass {
  unsigned long alpha = 0;
  unsigned k = 0;
  bool exactly_solvable = false;
  bool alpha_in_catalog = false;
};

SolvabilityClass classify_length(unsigned n_sites);

// Symmetric tridiagonal matrix with exact rational entries.
struct TridiagonalMatrix {
  std::vector<Rational> diag;
  std::vector<Rational> offdiag;
  Rational shift_applied = 0;

  unsigned size() const { return static_cast<unsigned>(diag.size()); }
  Rational trace() const;
  bool centrosymmetric() const;
  std::vector<HighReal> diag_at(unsigned prec) const;
  std::vector<HighReal> offdiag_at(unsigned prec) const;
};

// Half-size blocks A +- B*S of a shifted bisymmetric tridiagonal.
struct BisymmetricSplit {
  std::vector<std::vector<Rational>> a_plus;
  std::vector<std::vector<Rational>> a_minus;
  Rational corner_a;
  Rational corner_b;
};

// h^(N) per the staggered construction: endpoints d^(N), interior d^(N)+2J2,
// off-diagonals alternating -2, -2J2, ..., -2. Rejects odd N.
TridiagonalMatrix build_single_excitation_matrix(const ChainSpec& spec);

// h - (d^(N) + 2 J2) I, with the shift recorded for recovery.
TridiagonalMatrix shift_matrix(const TridiagonalMatrix& m, const ChainSpec& spec);

// Split of the shifted matrix; eig(a_plus) + eig(a_minus) = eig(input), and
// a_plus equals the shifted N/2 matrix entrywise when N/2 is even.
BisymmetricSplit split_bisymmetric(const TridiagonalMatrix& m);

// d^(N) = -(N/2-2) - (N/2-1) J2
Rational endpoint_diagonal(unsigned n_sites, const Rational& j2);

}  // namespace pgt
