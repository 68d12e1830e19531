#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgt/spectral.hpp"

namespace pgt {

// Exact time t = q * pi / pi_den. Times are never collapsed to decimals: at
// q ~ 1e24 any fixed-precision t would destroy the phase information.
struct TimePoint {
  BigInt q = 0;
  unsigned long pi_den = 1;

  TimePoint() = default;
  TimePoint(BigInt qq, unsigned long den) : q(std::move(qq)), pi_den(den) {
    if (pi_den == 0) throw std::invalid_argument("TimePoint: zero pi denominator");
  }
  static TimePoint pi_multiple(long k) { return TimePoint(BigInt(k), 1); }
  Rational in_pi_units() const { return Rational(q, BigInt(pi_den)); }
  HighReal decimal(unsigned prec) const;
  std::string str() const;
};

// P(t) = |sum_i w_i e^{-i E_i t}|^2 with exact frequency handles.
struct CosineSumSeries {
  std::vector<HighReal> weights;   // amp_first[i] * amp_last[i]
  std::vector<EnergyExpr> exprs;   // E_i
  bool shift_invariant = true;

  unsigned size() const { return static_cast<unsigned>(weights.size()); }
};

CosineSumSeries build_series(const SpectralData& sd);

// Strong-coupling series for P_infty: weights (-1)^i w_i^2, frequencies
// 2cos((i-1)pi/n).
CosineSumSeries scl_series(unsigned n_sites);

struct PrecisionCapError : std::runtime_error {
  explicit PrecisionCapError(const std::string& what, std::string freq)
      : std::runtime_error(what), offending_frequency(std::move(freq)) {}
  std::string offending_frequency;
};

struct EvalOptions {
  unsigned precision_cap = 16384;
};

// P at t with absolute error below 10^-target_digits; the working precision
// ladder starts at bits(q) + ceil(3.33 digits) + 64 and doubles until two
// consecutive evaluations agree.
HighReal evaluate_p(const CosineSumSeries& series, const TimePoint& t, unsigned target_digits,
                    const EvalOptions& opts = {});

// Same series evaluated at an explicit real time (grid scans, maximizer).
HighReal evaluate_p_at(const CosineSumSeries& series, const HighReal& t, unsigned prec);

// The explicit six-cosine N=4 closed form.
HighReal p4_closed(const Rational& j2, const TimePoint& t, unsigned target_digits,
                   const EvalOptions& opts = {});
HighReal p4_closed_at(const Rational& j2, const HighReal& t, unsigned prec);

// First-order strong-coupling transmission probability.
HighReal p_infty(unsigned n_sites, const TimePoint& t, unsigned target_digits,
                 const EvalOptions& opts = {});

struct SclGap {
  HighReal p_finite;
  HighReal p_inf;
  HighReal gap;
};
SclGap scl_limit_check(unsigned n_sites, const Rational& j2_large, const TimePoint& t,
                       unsigned digits = 12);

// l_alpha^(i) = |<E_alpha|i>|^2; rows sum to 1 by normalization, columns by
// completeness. 256-bit eigenvectors so both hold to ~1e-30.
std::vector<std::vector<HighReal>> localization(const TridiagonalMatrix& m, unsigned prec = 256);

struct ParityObstruction {
  std::array<BigInt, 4> s;   // a+b+c, |a+b-c|, |a-b+c|, |a-b-c|
  std::array<int, 4> v2_s;   // 2-adic valuations
  int v2_a = 0;
  bool unsatisfiable = false;
  std::string reason;
};

struct PeriodicityReport {
  bool is_periodic = false;
  bool supported = true;  // false for J2 = b/a with b < a (not developed in the paper)
  std::optional<std::array<BigInt, 3>> triple;
  std::optional<Rational> period_pi;    // period = period_pi * pi
  std::optional<HighReal> p_max;
  std::optional<HighReal> t_max;
  std::optional<Rational> upper_bound;  // sign-replacement bound on P
  std::optional<ParityObstruction> obstruction;
  std::string note;
};

// Pythagorean analysis of J2 = b/a: periodic iff a^2+b^2 is a perfect square.
PeriodicityReport periodicity_analysis(const Rational& j2);

}  // namespace pgt
