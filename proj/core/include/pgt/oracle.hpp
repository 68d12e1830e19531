#pragma once

#include <vector>

#include "pgt/chain.hpp"
#include "pgt/highreal.hpp"

namespace pgt {
namespace oracle {

// Dense single-excitation block built straight from the sigma.sigma algebra.
// Deliberately shares no code with the chain/spectral modules.
struct DenseHermitian {
  unsigned n = 0;
  std::vector<Rational> entries;  // row-major, symmetric

  Rational& at(unsigned i, unsigned j) { return entries[i * n + j]; }
  const Rational& at(unsigned i, unsigned j) const { return entries[i * n + j]; }
};

// <i|H|j> for H = -sum_k J_k sigma_k.sigma_{k+1} restricted to one spin up:
// diagonal -sum J + 2(J_{i-1}+J_i), hopping -2 J_bond.
DenseHermitian dense_from_hamiltonian(const std::vector<Rational>& couplings);

// Staggered convenience wrapper (couplings 1, J2, 1, ...).
DenseHermitian dense_from_spec(const ChainSpec& spec);

// Cyclic Jacobi eigensolver; returns ascending eigenvalues and the matching
// eigenvector columns.
struct EigenSystem {
  std::vector<HighReal> values;
  std::vector<std::vector<HighReal>> vectors;  // vectors[k] = k-th eigenvector
};
EigenSystem jacobi_eigensystem(const DenseHermitian& m, unsigned prec);

// P(t) = |<1|exp(-iHt)|N>|^2 by full spectral decomposition. Small-time
// cross-check oracle; |E_max * t| <= 1e6.
HighReal evolve_direct(const DenseHermitian& m, const HighReal& t, unsigned digits);

// Ascending odd integers not divisible by `divisor` (3 or 5).
std::vector<unsigned long> sieve_odd_nonmultiples(unsigned divisor, unsigned count);

}  // namespace oracle
}  // namespace pgt
