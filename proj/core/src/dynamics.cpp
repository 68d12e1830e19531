#include "pgt/dynamics.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace pgt {

namespace {

// x mod 2 for exact rationals, result in [0,2)
Rational mod2(const Rational& x) {
  BigInt fl;
  mpz_fdiv_q(fl.get_mpz_t(), BigInt(x.get_num()).get_mpz_t(),
             BigInt(x.get_den() * 2).get_mpz_t());
  Rational r = x - 2 * Rational(fl);
  r.canonicalize();
  return r;
}

// z mod 2 in HighReal, result in [0,2)
HighReal mod2(const HighReal& z) {
  HighReal half = z / 2L;
  return z - (half.floor() * 2L);
}

// phase of expr * t in pi units, reduced mod 2; rational parts reduce exactly
HighReal phase_mod2(const EnergyExpr& e, const Rational& t_pi, unsigned prec) {
  Rational rat = mod2(e.shift * t_pi);
  HighReal out(rat, prec);
  if (!e.is_rational()) {
    HighReal z = HighReal(e.coef * t_pi, prec) * e.atom.eval(prec);
    out = mod2(out + mod2(z));
  }
  return out;
}

}  // namespace

HighReal TimePoint::decimal(unsigned prec) const {
  return HighReal(in_pi_units(), prec) * HighReal::pi(prec);
}

std::string TimePoint::str() const {
  std::ostringstream os;
  os << q.get_str() << "pi";
  if (pi_den != 1) os << "/" << pi_den;
  return os.str();
}

CosineSumSeries build_series(const SpectralData& sd) {
  if (sd.amp_first.size() != sd.size())
    throw std::invalid_argument("build_series: spectral data has no amplitudes");
  CosineSumSeries s;
  s.exprs = sd.exprs;
  for (unsigned i = 0; i < sd.size(); ++i) s.weights.push_back(sd.amp_first[i] * sd.amp_last[i]);
  return s;
}

CosineSumSeries scl_series(unsigned n_sites) {
  SCLSpectrum sc = scl_spectrum(n_sites);
  CosineSumSeries s;
  for (unsigned i = 1; i <= sc.n + 1; ++i) {
    Rational w = sc.weights_sq[i - 1];
    if (i % 2 == 1) w = -w;
    s.weights.emplace_back(w, 96);
    s.exprs.push_back(EnergyExpr::scl_cos(static_cast<long>(i) - 1, sc.n, Rational(0)));
  }
  return s;
}

namespace {

HighReal eval_p_fixed(const CosineSumSeries& series, const Rational& t_pi, unsigned prec) {
  HighReal pi = HighReal::pi(prec);
  HighReal re(0L, prec), im(0L, prec);
  for (unsigned i = 0; i < series.size(); ++i) {
    HighReal ph = phase_mod2(series.exprs[i], t_pi, prec) * pi;
    HighReal w(prec);
    mpfr_set(w.raw(), series.weights[i].raw(), MPFR_RNDN);
    re += w * ph.cos();
    im -= w * ph.sin();
  }
  return re * re + im * im;
}

std::string worst_frequency(const CosineSumSeries& series, const Rational& t_pi) {
  double worst = -1;
  std::string out = "none";
  for (const auto& e : series.exprs) {
    double mag = std::abs(e.eval(64).to_double()) * std::abs(Rational(t_pi).get_d());
    if (mag > worst) {
      worst = mag;
      out = e.describe();
    }
  }
  return out;
}

}  // namespace

HighReal evaluate_p(const CosineSumSeries& series, const TimePoint& t, unsigned target_digits,
                    const EvalOptions& opts) {
  if (target_digits < 1) throw std::invalid_argument("evaluate_p: target_digits >= 1");
  Rational t_pi = t.in_pi_units();
  unsigned qbits = static_cast<unsigned>(mpz_sizeinbase(BigInt(t_pi.get_num()).get_mpz_t(), 2));
  unsigned prec = qbits + static_cast<unsigned>(3.33 * target_digits) + 64;
  HighReal tol = HighReal(Rational(1, 2), 64);
  for (unsigned d = 0; d < target_digits; ++d) tol = tol / 10L;
  HighReal prev = eval_p_fixed(series, t_pi, prec);
  while (true) {
    unsigned next = prec * 2;
    if (next > opts.precision_cap)
      throw PrecisionCapError("evaluate_p: precision cap exceeded at " + t.str(),
                              worst_frequency(series, t_pi));
    HighReal cur = eval_p_fixed(series, t_pi, next);
    if ((cur - prev).abs() < tol) return cur;
    prev = cur;
    prec = next;
  }
}

HighReal evaluate_p_at(const CosineSumSeries& series, const HighReal& t, unsigned prec) {
  HighReal re(0L, prec), im(0L, prec);
  for (unsigned i = 0; i < series.size(); ++i) {
    HighReal ph = series.exprs[i].eval(prec) * t;
    HighReal w(prec);
    mpfr_set(w.raw(), series.weights[i].raw(), MPFR_RNDN);
    re += w * ph.cos();
    im -= w * ph.sin();
  }
  return re * re + im * im;
}

// ---------------------------------------------------------------------------
// N=4 closed form

namespace {

// P(J2;t) as constant + sum_k c_k cos(f_k t); coefficients are O(1) reals,
// frequencies exact shift+coef*sqrt(1+J2^2) expressions.
struct N4Form {
  Rational j2;
  std::vector<EnergyExpr> freqs;  // 4, 4s, 2(1+J2-s), 2(1-J2+s), 2(1+J2+s), 2(1-J2-s)
  HighReal coeff(unsigned k, unsigned prec) const {
    HighReal j(j2, prec), one(1L, prec);
    HighReal s = (one + j * j).sqrt();
    HighReal eighth = HighReal(Rational(1, 8), prec);
    switch (k) {
      case 0: return eighth;
      case 1: return eighth / (one + j * j);
      case 2:
      case 3: return -eighth / (one + j * j - j * s);
      default: return -eighth / (one + j * j + j * s);
    }
  }
  HighReal constant(unsigned prec) const {
    HighReal j(j2, prec);
    return (HighReal(2L, prec) + 3L * j * j) / ((HighReal(1L, prec) + j * j) * 8L);
  }
};

N4Form n4_form(const Rational& j2) {
  N4Form f;
  f.j2 = j2;
  Rational rad = 1 + j2 * j2;
  auto term = [&](const Rational& shift, const Rational& coef) {
    return EnergyExpr::sqrt_term(shift, coef, rad);
  };
  f.freqs.push_back(EnergyExpr::rational(Rational(4)));
  f.freqs.push_back(term(0, 4));
  f.freqs.push_back(term(2 + 2 * j2, -2));
  f.freqs.push_back(term(2 - 2 * j2, 2));
  f.freqs.push_back(term(2 + 2 * j2, 2));
  f.freqs.push_back(term(2 - 2 * j2, -2));
  return f;
}

HighReal n4_eval_fixed(const N4Form& f, const Rational& t_pi, unsigned prec) {
  HighReal pi = HighReal::pi(prec);
  HighReal acc = f.constant(prec);
  for (unsigned k = 0; k < 6; ++k) {
    HighReal ph = phase_mod2(f.freqs[k], t_pi, prec) * pi;
    acc += f.coeff(k, prec) * ph.cos();
  }
  return acc;
}

}  // namespace

HighReal p4_closed(const Rational& j2, const TimePoint& t, unsigned target_digits,
                   const EvalOptions& opts) {
  if (j2 <= 0) throw std::invalid_argument("p4_closed: J2 > 0 required");
  N4Form f = n4_form(j2);
  Rational t_pi = t.in_pi_units();
  unsigned qbits = static_cast<unsigned>(mpz_sizeinbase(BigInt(t_pi.get_num()).get_mpz_t(), 2));
  unsigned prec = qbits + static_cast<unsigned>(3.33 * target_digits) + 64;
  HighReal tol = HighReal(Rational(1, 2), 64);
  for (unsigned d = 0; d < target_digits; ++d) tol = tol / 10L;
  HighReal prev = n4_eval_fixed(f, t_pi, prec);
  while (true) {
    unsigned next = prec * 2;
    if (next > opts.precision_cap)
      throw PrecisionCapError("p4_closed: precision cap exceeded at " + t.str(),
                              "4*sqrt(1+J2^2)");
    HighReal cur = n4_eval_fixed(f, t_pi, next);
    if ((cur - prev).abs() < tol) return cur;
    prev = cur;
    prec = next;
  }
}

HighReal p4_closed_at(const Rational& j2, const HighReal& t, unsigned prec) {
  N4Form f = n4_form(j2);
  HighReal acc = f.constant(prec);
  for (unsigned k = 0; k < 6; ++k) {
    HighReal ph = f.freqs[k].eval(prec) * t;
    acc += f.coeff(k, prec) * ph.cos();
  }
  return acc;
}

HighReal p_infty(unsigned n_sites, const TimePoint& t, unsigned target_digits,
                 const EvalOptions& opts) {
  if (n_sites % 2 != 0 || n_sites < 4)
    throw std::invalid_argument("p_infty: even N >= 4 required");
  return evaluate_p(scl_series(n_sites), t, target_digits, opts);
}

SclGap scl_limit_check(unsigned n_sites, const Rational& j2_large, const TimePoint& t,
                       unsigned digits) {
  if (j2_large < 10) throw std::invalid_argument("scl_limit_check: J2 >= 10 expected");
  ChainSpec spec(n_sites, j2_large);
  auto sd = closed_form_spectrum(spec, 192);
  SclGap g{evaluate_p(build_series(sd), t, digits), p_infty(n_sites, t, digits), HighReal()};
  g.gap = (g.p_finite - g.p_inf).abs();
  return g;
}

std::vector<std::vector<HighReal>> localization(const TridiagonalMatrix& m, unsigned prec) {
  auto energies = sturm_eigenvalues(m, prec);
  auto vecs = full_eigenvectors(m, energies, prec);
  std::vector<std::vector<HighReal>> l;
  l.reserve(vecs.size());
  for (auto& v : vecs) {
    std::vector<HighReal> row;
    row.reserve(v.size());
    for (auto& c : v) row.push_back(c * c);
    l.push_back(std::move(row));
  }
  return l;
}

// ---------------------------------------------------------------------------
// Pythagorean periodicity

namespace {

struct RationalCosSeries {
  Rational constant;
  std::vector<Rational> coeffs;
  std::vector<Rational> freqs;  // all > 0

  HighReal value(const HighReal& t, unsigned prec) const {
    HighReal acc(constant, prec);
    for (size_t k = 0; k < freqs.size(); ++k)
      acc += HighReal(coeffs[k], prec) * (HighReal(freqs[k], prec) * t).cos();
    return acc;
  }
  HighReal derivative(const HighReal& t, unsigned prec) const {
    HighReal acc(0L, prec);
    for (size_t k = 0; k < freqs.size(); ++k)
      acc -= HighReal(coeffs[k] * freqs[k], prec) * (HighReal(freqs[k], prec) * t).sin();
    return acc;
  }
};

// merge the six cosine terms of the closed form at rational sqrt(1+J2^2)=c/a
RationalCosSeries pythagorean_series(const Rational& j2, const Rational& s) {
  Rational one(1);
  Rational d0 = one + j2 * j2;
  Rational dm = d0 - j2 * s;
  Rational dp = d0 + j2 * s;
  std::vector<std::pair<Rational, Rational>> terms = {
      {Rational(4), Rational(1, 8)},
      {4 * s, Rational(1, 8) / d0},
      {2 * (1 + j2 - s), Rational(-1, 8) / dm},
      {2 * (1 - j2 + s), Rational(-1, 8) / dm},
      {2 * (1 + j2 + s), Rational(-1, 8) / dp},
      {2 * (1 - j2 - s), Rational(-1, 8) / dp},
  };
  RationalCosSeries out;
  out.constant = (2 + 3 * j2 * j2) / (8 * d0);
  std::map<Rational, Rational> merged;
  for (auto& [f, c] : terms) {
    Rational fa = abs(f);
    if (fa == 0)
      out.constant += c;
    else
      merged[fa] += c;
  }
  for (auto& [f, c] : merged) {
    if (c == 0) continue;
    out.freqs.push_back(f);
    out.coeffs.push_back(c);
  }
  return out;
}

}  // namespace

PeriodicityReport periodicity_analysis(const Rational& j2) {
  if (j2 <= 0) throw std::invalid_argument("periodicity_analysis: J2 > 0 required");
  Rational j = j2;
  j.canonicalize();
  BigInt b = j.get_num(), a = j.get_den();
  PeriodicityReport rep;
  rep.supported = b > a;
  if (!rep.supported)
    rep.note = "J2 = b/a with b < a; periodicity computed but the no-PGT parity "
               "argument is not developed for this case";
  BigInt c2 = a * a + b * b, c;
  if (!is_perfect_square(c2, &c)) {
    rep.is_periodic = false;
    return rep;
  }
  rep.is_periodic = true;
  rep.triple = {a, b, c};
  Rational s(c, a);  // sqrt(1+J2^2)
  RationalCosSeries series = pythagorean_series(j, s);

  Rational g = 0;
  for (const auto& f : series.freqs) g = rational_gcd(g, f);
  rep.period_pi = Rational(2) / g;

  Rational ub = series.constant;
  for (const auto& cf : series.coeffs) ub += abs(cf);
  rep.upper_bound = ub;

  // certified maximization over one period: dense grid, then golden-section
  const unsigned prec = 256;
  HighReal period = HighReal(*rep.period_pi, prec) * HighReal::pi(prec);
  const unsigned grid = 100000;
  HighReal best(-1.0, prec), best_t(0L, prec);
  HighReal step = period / static_cast<long>(grid);
  for (unsigned i = 0; i <= grid; ++i) {
    HighReal t = step * static_cast<long>(i);
    HighReal v = series.value(t, 64);  // coarse scan, refined below
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  HighReal lo = best_t - step, hi = best_t + step;
  const HighReal inv_phi(0.6180339887498949, prec);
  HighReal width_target = HighReal::pow2(-120, prec);
  while ((hi - lo) > width_target) {
    HighReal d = (hi - lo) * inv_phi;
    HighReal x1 = hi - d, x2 = lo + d;
    if (series.value(x1, prec) < series.value(x2, prec))
      lo = x1;
    else
      hi = x2;
  }
  HighReal tm = (lo + hi) / 2L;
  // derivative changes sign across the bracket
  if (!(series.derivative(lo - width_target * 4L, prec).sign() >= 0 &&
        series.derivative(hi + width_target * 4L, prec).sign() <= 0))
    rep.note += (rep.note.empty() ? "" : "; ") + std::string("maximum bracket not certified");
  rep.p_max = series.value(tm, prec);
  rep.t_max = tm;

  // parity obstruction; gcd(a,b)=1 makes the triple primitive
  ParityObstruction ob;
  ob.s = {a + b + c, abs(a + b - c), abs(a - b + c), abs(a - b - c)};
  for (int i = 0; i < 4; ++i) ob.v2_s[i] = valuation2(ob.s[i]);
  ob.v2_a = valuation2(a);
  bool all_equal = true;
  for (int i = 1; i < 4; ++i) all_equal &= (ob.v2_s[i] == ob.v2_s[0]);
  bool negative_need = ob.v2_a < *std::max_element(ob.v2_s.begin(), ob.v2_s.end());
  ob.unsatisfiable = !all_equal || negative_need;
  if (!all_equal)
    ob.reason = "the four parity equations require v2(q) = v2(a) - v2(s_i) with distinct v2(s_i)";
  else if (negative_need)
    ob.reason = "the parity equations require a negative 2-adic valuation for q";
  if (rep.supported) rep.obstruction = ob;
  return rep;
}

}  // namespace pgt
