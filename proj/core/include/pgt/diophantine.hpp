#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pgt/dynamics.hpp"

namespace pgt {
namespace dio {

// A positive real re-evaluable at arbitrary precision.
using RealHandle = std::function<HighReal(unsigned prec)>;

RealHandle handle_sqrt(const Rational& r);
RealHandle handle_atom(const SurdAtom& atom, const Rational& scale);

struct Convergent {
  BigInt p;
  BigInt q;
  int order = 0;
  HighReal residual;  // |q x - p|
};

// First `depth` continued-fraction convergents, certified by expanding the
// lower and upper interval endpoints and keeping the common prefix; precision
// escalates until the prefix is long enough or the cap is hit (partial list).
std::vector<Convergent> continued_fraction(const RealHandle& x, unsigned depth,
                                           unsigned prec_cap = 1u << 18);

// a0=1, a_{j+1} = a_j/2 + 1/a_j in exact rationals.
Convergent newton_raphson_sqrt2(unsigned j);

enum class Parity { Even, Odd, Free };

struct SimultaneousHit {
  BigInt q;
  std::vector<BigInt> numerators;
  std::vector<HighReal> residuals;
  int level = 0;
  bool parity_ok = true;
  bool certified = true;  // max residual < 1/M
};

// Exhaustive scan over q (default 1..M^m): nearest integers, residual test
// |q x_i - p_i| < 1/M, parity filter. Hits sorted by q ascending. A fast
// double-precision prefilter proposes candidates; every reported hit is
// verified in exact-precision arithmetic.
std::vector<SimultaneousHit> simultaneous_approx(
    const std::vector<RealHandle>& xs, const std::vector<Parity>& parities, const BigInt& M,
    std::optional<std::pair<BigInt, BigInt>> q_range = std::nullopt,
    std::uint64_t work_budget = 1000000000ULL);

// Best parity-satisfying candidate (smallest max residual) with q in (lo, hi];
// certified marks max residual < 1/M. Level searches use windows
// (M_{j-1}^m, M_j^m] with M_j = 2^j.
std::optional<SimultaneousHit> window_best(const std::vector<RealHandle>& xs,
                                           const std::vector<Parity>& parities,
                                           std::uint64_t lo, std::uint64_t hi, const BigInt& M,
                                           unsigned q_stride = 1, unsigned q_offset = 0);

// ---------------------------------------------------------------------------
// Parity requirements for PGT candidate times t = q * lattice_unit * pi.

struct SurdTarget {
  SurdAtom atom;
  Rational scale;           // Dirichlet variable y = scale * atom
  Parity base = Parity::Free;
  bool flips_with_q = false;  // required parity = base XOR (q mod 2)
};

struct ParityPlan {
  Rational lattice_unit = 1;  // t = q * lattice_unit * pi
  Parity q_parity = Parity::Free;
  std::vector<SurdTarget> targets;
  std::vector<std::string> auto_satisfied;
  std::vector<std::string> dropped;  // zero-weight frequencies
  bool solvable = true;
  std::string note;
};

// Coarsest lattice unit making every rational pair-frequency of the series an
// integer multiple of pi.
Rational derive_lattice(const CosineSumSeries& series);

// Solve the mod-2 system that drives every pair cosine to the sign of its
// weight product at t = q * unit * pi. If every solution forces q even the
// lattice is coarsened and the solve repeated.
ParityPlan parity_requirements(const CosineSumSeries& series, const Rational& lattice_unit);
ParityPlan parity_requirements(const CosineSumSeries& series);  // derive lattice first

}  // namespace dio
}  // namespace pgt
