#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pgt/diophantine.hpp"
#include "pgt/dynamics.hpp"

namespace pgt {

struct PgtRecord {
  TimePoint time;
  BigInt lattice_q;  // q before the lattice unit is folded into the time
  HighReal p_value;
  HighReal epsilon;  // 1 - P
  int search_level = 0;
  bool improving = false;
};

enum class Verdict { PGTObserved, Stagnated, StagnatedAtBudget, CertifiedNoPGT };

std::string verdict_name(Verdict v);

struct PowerLawFit {
  double c = 0;         // t = c / eps^f
  double exponent = 0;  // f
  double r2 = 0;
  unsigned points = 0;
};

struct PgtCurve {
  std::vector<PgtRecord> records;    // every evaluated candidate, by time
  std::vector<PgtRecord> staircase;  // strictly improving subsequence
  std::optional<PowerLawFit> fit;
  Verdict verdict = Verdict::Stagnated;
  dio::ParityPlan plan;
  std::optional<PeriodicityReport> certificate;
  std::string note;
};

struct SearchOptions {
  std::uint64_t work_budget = 400000000ULL;  // residual evaluations per level scan
  unsigned stagnation_window = 4;            // levels with <10% relative improvement
  double improvement_factor = 0.90;
  double pgt_decades = 3.0;  // orders of magnitude of eps improvement to declare PGT
};

// Derive frequencies and parity targets, search candidate times level by
// level, evaluate P exactly, and classify the outcome.
PgtCurve pgt_search(const ChainSpec& spec, unsigned max_level, unsigned target_digits,
                    const SearchOptions& opts = {});

// Pareto frontier: minimum time achieving each epsilon, strictly improving.
std::vector<PgtRecord> epsilon_curve(const std::vector<PgtRecord>& records);

// Least squares of log t against log eps over the improving records past the
// first decade. Throws std::runtime_error when fewer than 4 points or less
// than 3 decades of eps remain.
PowerLawFit fit_power_law(const std::vector<PgtRecord>& staircase);

struct CrossoverPoint {
  Rational j2;
  HighReal p;
};
struct CrossoverScan {
  std::vector<CrossoverPoint> points;
  HighReal asymptote;  // P_infty(N, t)
};
CrossoverScan crossover_scan(unsigned n_sites, const TimePoint& t, const Rational& j2_min,
                             const Rational& j2_max, unsigned points, bool log_spaced = true,
                             unsigned digits = 10);

struct EquivalenceReport {
  unsigned n_double = 0;
  std::vector<std::string> scl_frequencies;     // irrational targets, SCL at N
  std::vector<std::string> finite_frequencies;  // irrational targets, J2=1 at N/2
  bool sets_match = false;     // equal up to rational factors
  bool scl_perfect_transfer = false;
  std::optional<double> exponent_scl;
  std::optional<double> exponent_finite;
  bool exponents_agree = false;
};

// Compare the irrational frequency content (and fitted exponents) of the SCL
// chain of length n_double against the homogeneous J2=1 chain of half length.
EquivalenceReport scl_wcl_equivalence(unsigned n_double, unsigned max_level = 9,
                                      unsigned target_digits = 20);

}  // namespace pgt
