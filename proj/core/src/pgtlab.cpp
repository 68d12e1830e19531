#include "pgt/pgtlab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace pgt {

namespace {

using dio::Parity;
using dio::ParityPlan;

double log10_of(const HighReal& x) {
  if (x.sign() <= 0) return -400.0;
  return x.log().to_double() / std::log(10.0);
}

TimePoint lattice_time(const BigInt& q, const Rational& unit) {
  Rational t = Rational(q) * unit;
  t.canonicalize();
  if (!t.get_den().fits_ulong_p())
    throw std::runtime_error("lattice_time: pi denominator overflow");
  return TimePoint(t.get_num(), t.get_den().get_ui());
}

bool parity_ok_for(const BigInt& p, Parity base, bool flips, const BigInt& q) {
  if (base == Parity::Free) return true;
  bool want_odd = base == Parity::Odd;
  if (flips && mpz_odd_p(q.get_mpz_t())) want_odd = !want_odd;
  return (mpz_odd_p(p.get_mpz_t()) != 0) == want_odd;
}

struct ScanSetup {
  std::vector<double> ys;              // scaled atom values
  std::vector<std::vector<double>> m;  // per-atom, per-live-expr multiple
  std::vector<double> absw;            // |w_i| of live exprs
  std::vector<int> q_class;            // allowed q mod 2 values
};

ScanSetup scan_setup(const CosineSumSeries& series, const ParityPlan& plan) {
  ScanSetup s;
  std::vector<unsigned> live;
  HighReal wtol = HighReal::pow2(-80, 32);
  for (unsigned i = 0; i < series.size(); ++i)
    if (series.weights[i].abs() >= wtol) live.push_back(i);
  for (unsigned i : live) s.absw.push_back(series.weights[i].abs().to_double());
  for (const auto& t : plan.targets) {
    s.ys.push_back((HighReal(t.scale, 96) * t.atom.eval(96)).to_double());
    std::vector<double> row;
    for (unsigned i : live) {
      const auto& e = series.exprs[i];
      if (!e.is_rational() && e.atom == t.atom) {
        Rational m = e.coef * plan.lattice_unit / t.scale;
        row.push_back(m.get_d());
      } else {
        row.push_back(0.0);
      }
    }
    s.m.push_back(std::move(row));
  }
  if (plan.q_parity == Parity::Free) s.q_class = {0, 1};
  else if (plan.q_parity == Parity::Odd) s.q_class = {1};
  else s.q_class = {0};
  return s;
}

// second-order estimate of 1-P: weighted variance of the phase errors
double eps_estimate(const ScanSetup& s, const std::vector<double>& deltas) {
  const size_t nlive = s.absw.size();
  double mean = 0, sq = 0;
  for (size_t i = 0; i < nlive; ++i) {
    double theta = 0;
    for (size_t k = 0; k < s.ys.size(); ++k) theta += s.m[k][i] * deltas[k];
    theta *= M_PI;
    mean += s.absw[i] * theta;
    sq += s.absw[i] * theta * theta;
  }
  return sq - mean * mean;
}

struct Candidate {
  std::uint64_t q = 0;
  double est = 1e300;
};

// best parity-satisfying candidates in (lo, hi], ranked by estimated epsilon
std::vector<Candidate> scan_window(const ScanSetup& s, const ParityPlan& plan, std::uint64_t lo,
                                   std::uint64_t hi, unsigned keep) {
  std::vector<Candidate> top;
  std::vector<double> deltas(s.ys.size());
  for (std::uint64_t q = lo + 1; q <= hi; ++q) {
    int qp = static_cast<int>(q & 1);
    if (std::find(s.q_class.begin(), s.q_class.end(), qp) == s.q_class.end()) continue;
    bool ok = true;
    for (size_t k = 0; k < s.ys.size(); ++k) {
      double v = s.ys[k] * static_cast<double>(q);
      double p = std::nearbyint(v);
      deltas[k] = v - p;
      const auto& t = plan.targets[k];
      if (t.base == Parity::Free) continue;
      bool want_odd = t.base == Parity::Odd;
      if (t.flips_with_q && qp) want_odd = !want_odd;
      bool is_odd = std::fmod(std::abs(p), 2.0) > 0.5;
      if (is_odd != want_odd) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    double est = eps_estimate(s, deltas);
    if (top.size() < keep) {
      top.push_back({q, est});
      std::sort(top.begin(), top.end(), [](auto& a, auto& b) { return a.est < b.est; });
    } else if (est < top.back().est) {
      top.back() = {q, est};
      std::sort(top.begin(), top.end(), [](auto& a, auto& b) { return a.est < b.est; });
    }
  }
  return top;
}

}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::PGTObserved: return "PGTObserved";
    case Verdict::Stagnated: return "Stagnated";
    case Verdict::StagnatedAtBudget: return "StagnatedAtBudget";
    case Verdict::CertifiedNoPGT: return "CertifiedNoPGT";
  }
  return "?";
}

PgtCurve pgt_search(const ChainSpec& spec, unsigned max_level, unsigned target_digits,
                    const SearchOptions& opts) {
  PgtCurve curve;

  // Pythagorean couplings are certified periodic: no PGT on any lattice.
  if (spec.regime == Regime::Finite && spec.n_sites == 4) {
    PeriodicityReport rep = periodicity_analysis(spec.j2);
    if (rep.is_periodic && rep.supported && rep.upper_bound &&
        *rep.upper_bound < Rational(1) - Rational(1, 1000000)) {
      curve.certificate = std::move(rep);
      curve.verdict = Verdict::CertifiedNoPGT;
      curve.note = "periodic transmission; upper bound " + curve.certificate->upper_bound->get_str();
      return curve;
    }
    if (rep.is_periodic) curve.certificate = std::move(rep);
  }

  CosineSumSeries series;
  if (spec.regime == Regime::StrongCouplingLimit) {
    series = scl_series(spec.n_sites);
  } else {
    auto sd = closed_form_spectrum(spec, 192);
    series = build_series(sd);
  }
  curve.plan = dio::parity_requirements(series);
  const ParityPlan& plan = curve.plan;

  HighReal one(1L, 128);
  auto push_record = [&](const BigInt& q, int level, HighReal p) {
    PgtRecord r;
    r.time = lattice_time(q, plan.lattice_unit);
    r.lattice_q = q;
    r.p_value = p;
    r.epsilon = one - p;
    r.search_level = level;
    curve.records.push_back(std::move(r));
  };

  if (plan.targets.empty()) {
    // no irrational constraints: the first allowed lattice point transfers
    // perfectly (strong-coupling N=4 case)
    if (!plan.solvable) {
      curve.verdict = Verdict::Stagnated;
      curve.note = "parity system inconsistent and no irrational freedom: " + plan.note;
      return curve;
    }
    BigInt q = (plan.q_parity == Parity::Even) ? 2 : 1;
    push_record(q, 0, evaluate_p(series, lattice_time(q, plan.lattice_unit), target_digits));
    curve.staircase = epsilon_curve(curve.records);
    curve.verdict = Verdict::PGTObserved;
    curve.note = "perfect transfer on the candidate lattice";
    return curve;
  }

  if (!plan.solvable) curve.note = "parity-free search: " + plan.note;

  const unsigned m = static_cast<unsigned>(plan.targets.size());
  bool budget_cut = false;

  if (m == 1 && plan.solvable) {
    // single irrational: continued-fraction convergents of the scaled surd
    auto y = dio::handle_atom(plan.targets[0].atom, plan.targets[0].scale);
    auto convs = dio::continued_fraction(y, max_level);
    for (const auto& c : convs) {
      if (plan.q_parity != Parity::Free &&
          ((plan.q_parity == Parity::Odd) != (mpz_odd_p(c.q.get_mpz_t()) != 0)))
        continue;
      if (!parity_ok_for(c.p, plan.targets[0].base, plan.targets[0].flips_with_q, c.q)) continue;
      push_record(c.q, c.order, evaluate_p(series, lattice_time(c.q, plan.lattice_unit),
                                           target_digits));
    }
  } else {
    // level schedule M_j = 2^j covers q <= M_j^m; scanned in octaves of q so
    // the staircase gets several points per decade
    ScanSetup setup = scan_setup(series, plan);
    const unsigned max_octave = max_level * m;
    for (unsigned o = 1; o <= max_octave; ++o) {
      if ((o >= 63) || ((1ULL << o) > opts.work_budget)) {
        budget_cut = true;
        break;
      }
      std::uint64_t lo = (o == 1) ? 0 : (1ULL << (o - 1));
      std::uint64_t hi = 1ULL << o;
      auto top = scan_window(setup, plan, lo, hi, 3);
      if (top.empty()) continue;
      HighReal best_p(0L, 64);
      BigInt best_q;
      for (const auto& cand : top) {
        BigInt q(static_cast<unsigned long>(cand.q));
        HighReal p = evaluate_p(series, lattice_time(q, plan.lattice_unit), target_digits);
        if (p > best_p) {
          best_p = p;
          best_q = q;
        }
      }
      push_record(best_q, static_cast<int>((o + m - 1) / m), best_p);
    }
  }

  curve.staircase = epsilon_curve(curve.records);
  for (auto& r : curve.records)
    for (const auto& s : curve.staircase)
      if (r.lattice_q == s.lattice_q) r.improving = true;

  try {
    curve.fit = fit_power_law(curve.staircase);
  } catch (const std::exception&) {
    curve.fit = std::nullopt;
  }

  // verdict
  if (curve.staircase.size() >= 2) {
    double span = log10_of(curve.staircase.front().epsilon) -
                  log10_of(curve.staircase.back().epsilon);
    if (span >= opts.pgt_decades) {
      curve.verdict = Verdict::PGTObserved;
      return curve;
    }
  }
  // count trailing levels without meaningful improvement
  unsigned flat = 0;
  double best = 1e300;
  std::vector<double> level_eps;
  for (const auto& r : curve.records) {
    double e = std::pow(10.0, log10_of(r.epsilon));
    level_eps.push_back(e);
  }
  for (double e : level_eps) {
    if (e < best * opts.improvement_factor) {
      best = e;
      flat = 0;
    } else {
      ++flat;
    }
  }
  if (budget_cut && flat < opts.stagnation_window)
    curve.verdict = Verdict::StagnatedAtBudget;
  else
    curve.verdict = Verdict::Stagnated;
  return curve;
}

std::vector<PgtRecord> epsilon_curve(const std::vector<PgtRecord>& records) {
  // dedupe by time keeping the best P
  std::map<Rational, PgtRecord> by_time;
  for (const auto& r : records) {
    Rational key = r.time.in_pi_units();
    auto it = by_time.find(key);
    if (it == by_time.end() || r.p_value > it->second.p_value) by_time[key] = r;
  }
  std::vector<PgtRecord> out;
  HighReal best_eps(2L, 64);
  for (auto& [key, r] : by_time) {
    if (r.epsilon < best_eps) {
      best_eps = r.epsilon;
      r.improving = true;
      out.push_back(r);
    }
  }
  return out;
}

PowerLawFit fit_power_law(const std::vector<PgtRecord>& staircase) {
  if (staircase.empty()) throw std::runtime_error("fit_power_law: no records");
  double e0 = log10_of(staircase.front().epsilon);
  std::vector<std::pair<double, double>> pts;  // (log10 eps, log10 t)
  for (const auto& r : staircase) {
    double le = log10_of(r.epsilon);
    if (le > e0 - 1.0) continue;  // skip the pre-asymptotic first decade
    double lt = std::log10(std::abs(r.time.decimal(64).to_double()));
    pts.emplace_back(le, lt);
  }
  if (pts.size() < 4) throw std::runtime_error("fit_power_law: fewer than 4 usable records");
  double span = pts.front().first - pts.back().first;
  if (span < 3.0) throw std::runtime_error("fit_power_law: epsilon span below 3 decades");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double n = static_cast<double>(pts.size());
  for (auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0, ybar = sy / n;
  for (auto& [x, y] : pts) {
    double f = slope * x + intercept;
    ss_res += (y - f) * (y - f);
    ss_tot += (y - ybar) * (y - ybar);
  }
  PowerLawFit fit;
  fit.exponent = -slope;
  fit.c = std::pow(10.0, intercept);
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.points = static_cast<unsigned>(pts.size());
  return fit;
}

CrossoverScan crossover_scan(unsigned n_sites, const TimePoint& t, const Rational& j2_min,
                             const Rational& j2_max, unsigned points, bool log_spaced,
                             unsigned digits) {
  if (points < 2) throw std::invalid_argument("crossover_scan: points >= 2");
  CrossoverScan out;
  double lo = j2_min.get_d(), hi = j2_max.get_d();
  for (unsigned i = 0; i < points; ++i) {
    double f = static_cast<double>(i) / (points - 1);
    double v = log_spaced ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
    Rational j2(v);
    j2.canonicalize();
    ChainSpec spec(n_sites, j2);
    auto sd = closed_form_spectrum(spec, 192);
    out.points.push_back({j2, evaluate_p(build_series(sd), t, digits)});
  }
  out.asymptote = p_infty(n_sites, t, digits);
  return out;
}

namespace {

bool rationally_dependent(const dio::RealHandle& ha, const dio::RealHandle& hb) {
  dio::RealHandle ratio = [ha, hb](unsigned prec) { return ha(prec + 16) / hb(prec + 16); };
  auto convs = dio::continued_fraction(ratio, 12, 1u << 12);
  for (const auto& c : convs) {
    if (c.q > 10000 || c.q == 0) continue;
    HighReal r = ratio(320);
    HighReal diff = (r * HighReal(c.q, 320) - HighReal(c.p, 320)).abs();
    if (diff < HighReal::pow2(-260, 64)) return true;
  }
  return false;
}

}  // namespace

EquivalenceReport scl_wcl_equivalence(unsigned n_double, unsigned max_level,
                                      unsigned target_digits) {
  if (n_double % 4 != 0)
    throw std::invalid_argument("scl_wcl_equivalence: N divisible by 4 required");
  EquivalenceReport rep;
  rep.n_double = n_double;

  CosineSumSeries scl = scl_series(n_double);
  auto scl_plan = dio::parity_requirements(scl);
  std::vector<HighReal> scl_vals;
  for (const auto& t : scl_plan.targets) {
    scl_vals.push_back(HighReal(t.scale, 256) * t.atom.eval(256));
    rep.scl_frequencies.push_back(scl_vals.back().str(12) + " = " + t.scale.get_str() + "*" +
                                  t.atom.describe());
  }
  rep.scl_perfect_transfer = scl_plan.targets.empty();

  ChainSpec half(n_double / 2, Rational(1));
  auto sd = closed_form_spectrum(half, 192);
  CosineSumSeries fin = build_series(sd);
  auto fin_plan = dio::parity_requirements(fin);
  std::vector<HighReal> fin_vals;
  for (const auto& t : fin_plan.targets) {
    fin_vals.push_back(HighReal(t.scale, 256) * t.atom.eval(256));
    rep.finite_frequencies.push_back(fin_vals.back().str(12) + " = " + t.scale.get_str() + "*" +
                                     t.atom.describe());
  }

  rep.sets_match = scl_vals.size() == fin_vals.size();
  if (rep.sets_match) {
    std::vector<bool> used(fin_vals.size(), false);
    for (size_t j = 0; j < scl_vals.size(); ++j) {
      bool found = false;
      for (size_t i = 0; i < fin_vals.size(); ++i) {
        if (used[i]) continue;
        auto ha = dio::handle_atom(scl_plan.targets[j].atom, scl_plan.targets[j].scale);
        auto hb = dio::handle_atom(fin_plan.targets[i].atom, fin_plan.targets[i].scale);
        if (rationally_dependent(ha, hb)) {
          used[i] = true;
          found = true;
          break;
        }
      }
      if (!found) {
        rep.sets_match = false;
        break;
      }
    }
  }

  if (!rep.scl_perfect_transfer) {
    ChainSpec scl_spec(n_double, Rational(1), Regime::StrongCouplingLimit);
    PgtCurve a = pgt_search(scl_spec, max_level, target_digits);
    PgtCurve b = pgt_search(half, max_level, target_digits);
    if (a.fit) rep.exponent_scl = a.fit->exponent;
    if (b.fit) rep.exponent_finite = b.fit->exponent;
    rep.exponents_agree = a.fit && b.fit &&
                          std::abs(a.fit->exponent - b.fit->exponent) <= 0.1;
  }
  return rep;
}

}  // namespace pgt
