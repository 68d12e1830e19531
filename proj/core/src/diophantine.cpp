#include "pgt/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace pgt {
namespace dio {

RealHandle handle_sqrt(const Rational& r) {
  return [r](unsigned prec) { return HighReal(r, prec + 8).sqrt(); };
}

RealHandle handle_atom(const SurdAtom& atom, const Rational& scale) {
  return [atom, scale](unsigned prec) { return HighReal(scale, prec + 8) * atom.eval(prec + 8); };
}

// ---------------------------------------------------------------------------
// continued fractions

namespace {

// exact CF expansion of a rational, at most `depth` quotients
std::vector<BigInt> cf_of_rational(Rational x, unsigned depth) {
  std::vector<BigInt> out;
  for (unsigned i = 0; i < depth; ++i) {
    BigInt fl;
    mpz_fdiv_q(fl.get_mpz_t(), BigInt(x.get_num()).get_mpz_t(), BigInt(x.get_den()).get_mpz_t());
    out.push_back(fl);
    Rational frac = x - Rational(fl);
    if (frac == 0) break;
    x = Rational(1) / frac;
  }
  return out;
}

}  // namespace

std::vector<Convergent> continued_fraction(const RealHandle& x, unsigned depth,
                                           unsigned prec_cap) {
  std::vector<BigInt> quotients;
  for (unsigned prec = 128; prec <= prec_cap; prec *= 2) {
    HighReal v = x(prec);
    // conservative evaluation error: 2^(-prec+16)
    BigInt den(1);
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), prec - 16);
    Rational err(BigInt(1), den);
    Rational center = v.to_rational();
    auto lo = cf_of_rational(center - err, depth);
    auto hi = cf_of_rational(center + err, depth);
    quotients.clear();
    for (size_t i = 0; i < std::min(lo.size(), hi.size()); ++i) {
      if (lo[i] != hi[i]) break;
      quotients.push_back(lo[i]);
    }
    if (quotients.size() >= depth) break;
  }
  if (quotients.size() > depth) quotients.resize(depth);
  std::vector<Convergent> out;
  BigInt p0 = 1, q0 = 0, p1, q1;
  HighReal xv = x(256 + 2 * static_cast<unsigned>(depth) * 8);
  for (size_t i = 0; i < quotients.size(); ++i) {
    if (i == 0) {
      p1 = quotients[0];
      q1 = 1;
    } else {
      BigInt p2 = quotients[i] * p1 + p0;
      BigInt q2 = quotients[i] * q1 + q0;
      p0 = p1;
      q0 = q1;
      p1 = p2;
      q1 = q2;
    }
    Convergent c;
    c.p = p1;
    c.q = q1;
    c.order = static_cast<int>(i) + 1;
    unsigned rp = 64 + static_cast<unsigned>(mpz_sizeinbase(q1.get_mpz_t(), 2));
    HighReal xq = x(rp);
    c.residual = (HighReal(q1, rp) * xq - HighReal(p1, rp)).abs();
    out.push_back(std::move(c));
  }
  return out;
}

Convergent newton_raphson_sqrt2(unsigned j) {
  Rational a(1);
  for (unsigned i = 0; i < j; ++i) a = a / 2 + 1 / a;
  a.canonicalize();
  Convergent c;
  c.p = a.get_num();
  c.q = a.get_den();
  c.order = static_cast<int>(j);
  unsigned rp = 64 + static_cast<unsigned>(mpz_sizeinbase(c.q.get_mpz_t(), 2));
  c.residual = (HighReal(c.p, rp) - HighReal(c.q, rp) * HighReal(2L, rp).sqrt()).abs();
  return c;
}

// ---------------------------------------------------------------------------
// simultaneous approximation

namespace {

bool parity_matches(const BigInt& p, Parity want) {
  if (want == Parity::Free) return true;
  bool odd = mpz_odd_p(p.get_mpz_t());
  return want == Parity::Odd ? odd : !odd;
}

SimultaneousHit certify(const std::vector<RealHandle>& xs, const std::vector<Parity>& parities,
                        const BigInt& q) {
  SimultaneousHit h;
  h.q = q;
  unsigned prec = 96 + static_cast<unsigned>(mpz_sizeinbase(q.get_mpz_t(), 2));
  for (size_t i = 0; i < xs.size(); ++i) {
    HighReal v = xs[i](prec) * HighReal(q, prec);
    BigInt p = v.round_nearest();
    h.numerators.push_back(p);
    h.residuals.push_back((v - HighReal(p, prec)).abs());
    if (!parity_matches(p, parities[i])) h.parity_ok = false;
  }
  return h;
}

}  // namespace

std::vector<SimultaneousHit> simultaneous_approx(
    const std::vector<RealHandle>& xs, const std::vector<Parity>& parities, const BigInt& M,
    std::optional<std::pair<BigInt, BigInt>> q_range, std::uint64_t work_budget) {
  if (xs.empty()) throw std::invalid_argument("simultaneous_approx: empty irrational list");
  if (xs.size() != parities.size())
    throw std::invalid_argument("simultaneous_approx: parity list size mismatch");
  if (M < 2) throw std::invalid_argument("simultaneous_approx: M >= 2 required");
  BigInt lo = 1, hi;
  mpz_pow_ui(hi.get_mpz_t(), M.get_mpz_t(), static_cast<unsigned long>(xs.size()));
  if (q_range) {
    lo = q_range->first;
    hi = q_range->second;
  }
  if (lo < 1) lo = 1;
  if (!hi.fits_ulong_p() && hi > BigInt(work_budget))
    hi = BigInt(work_budget);  // range overflow guard; budget caps the scan
  std::uint64_t lo_u = lo.get_ui(), hi_u = hi.get_ui();
  if (hi_u - lo_u + 1 > work_budget) hi_u = lo_u + work_budget - 1;

  std::vector<double> xd;
  for (const auto& x : xs) xd.push_back(x(64).to_double());
  const double bound = 1.0 / BigInt(M).get_d();
  std::vector<SimultaneousHit> out;
  for (std::uint64_t q = lo_u; q <= hi_u; ++q) {
    bool cand = true;
    for (double x : xd) {
      double v = x * static_cast<double>(q);
      double r = std::abs(v - std::nearbyint(v));
      // prefilter with slack for double rounding at large q
      if (r >= bound + 4e-15 * static_cast<double>(q)) {
        cand = false;
        break;
      }
    }
    if (!cand) continue;
    SimultaneousHit h = certify(xs, parities, BigInt(static_cast<unsigned long>(q)));
    if (!h.parity_ok) continue;
    HighReal mx(0L, 64);
    for (auto& r : h.residuals)
      if (r > mx) mx = r;
    HighReal b(Rational(1, M), 96);
    h.certified = mx < b;
    if (h.certified) out.push_back(std::move(h));
  }
  return out;
}

std::optional<SimultaneousHit> window_best(const std::vector<RealHandle>& xs,
                                           const std::vector<Parity>& parities,
                                           std::uint64_t lo, std::uint64_t hi, const BigInt& M,
                                           unsigned q_stride, unsigned q_offset) {
  std::vector<double> xd;
  for (const auto& x : xs) xd.push_back(x(64).to_double());
  double best = 1e9;
  std::uint64_t best_q = 0;
  std::uint64_t q0 = lo + 1;
  if (q_stride > 1 && q0 % q_stride != q_offset)
    q0 += (q_offset + q_stride - q0 % q_stride) % q_stride;
  for (std::uint64_t q = q0; q <= hi; q += q_stride) {
    double mx = 0;
    bool ok = true;
    for (size_t i = 0; i < xd.size(); ++i) {
      double v = xd[i] * static_cast<double>(q);
      double p = std::nearbyint(v);
      if (parities[i] != Parity::Free) {
        bool odd = std::fmod(std::abs(p), 2.0) > 0.5;
        if ((parities[i] == Parity::Odd) != odd) {
          ok = false;
          break;
        }
      }
      mx = std::max(mx, std::abs(v - p));
    }
    if (ok && mx < best) {
      best = mx;
      best_q = q;
    }
  }
  if (best_q == 0) return std::nullopt;
  SimultaneousHit h = certify(xs, parities, BigInt(static_cast<unsigned long>(best_q)));
  HighReal mx(0L, 64);
  for (auto& r : h.residuals)
    if (r > mx) mx = r;
  h.certified = mx < HighReal(Rational(1, M), 96);
  return h;
}

// ---------------------------------------------------------------------------
// parity plans

namespace {

struct AtomOcc {
  SurdAtom atom;
  Rational scale;            // gcd of |coef * unit| over occurrences
  std::vector<long> mult;    // per-expr integer multiple (0 for other atoms)
};

struct Gf2Eq {
  unsigned q_coef;                 // coefficient of q parity
  std::vector<unsigned> x_coefs;   // per atom variable
  unsigned rhs;
  std::string label;
};

}  // namespace

Rational derive_lattice(const CosineSumSeries& series) {
  Rational g = 0;
  const unsigned n = series.size();
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j) {
      Rational d = series.exprs[i].shift - series.exprs[j].shift;
      if (d != 0) g = rational_gcd(g, abs(d));
    }
  if (g == 0) return Rational(1);
  return Rational(1) / g;
}

ParityPlan parity_requirements(const CosineSumSeries& series) {
  return parity_requirements(series, derive_lattice(series));
}

ParityPlan parity_requirements(const CosineSumSeries& series, const Rational& lattice_unit) {
  ParityPlan plan;
  plan.lattice_unit = lattice_unit;
  HighReal wtol = HighReal::pow2(-80, 32);

  for (unsigned fold = 0; fold < 12; ++fold) {
    plan.targets.clear();
    plan.auto_satisfied.clear();
    plan.dropped.clear();

    // usable frequencies and their weight signs
    std::vector<unsigned> live;
    for (unsigned i = 0; i < series.size(); ++i) {
      if (series.weights[i].abs() < wtol) {
        plan.dropped.push_back(series.exprs[i].describe());
        continue;
      }
      live.push_back(i);
    }

    // atom occurrence table
    std::vector<AtomOcc> atoms;
    auto atom_index = [&](const SurdAtom& a) -> size_t {
      for (size_t k = 0; k < atoms.size(); ++k)
        if (atoms[k].atom == a) return k;
      atoms.push_back({a, Rational(0), std::vector<long>(series.size(), 0)});
      return atoms.size() - 1;
    };
    for (unsigned i : live) {
      const auto& e = series.exprs[i];
      if (e.is_rational()) continue;
      size_t k = atom_index(e.atom);
      atoms[k].scale = rational_gcd(atoms[k].scale, abs(e.coef * plan.lattice_unit));
    }
    for (unsigned i : live) {
      const auto& e = series.exprs[i];
      if (e.is_rational()) continue;
      size_t k = atom_index(e.atom);
      Rational m = e.coef * plan.lattice_unit / atoms[k].scale;
      if (m.get_den() != 1)
        throw std::logic_error("parity_requirements: non-integer atom multiple");
      atoms[k].mult[i] = m.get_num().get_si();
    }
    const size_t K = atoms.size();
    if (K > 20)
      throw std::runtime_error("parity_requirements: too many distinct surds to enumerate");

    // pair equations
    std::vector<Gf2Eq> eqs;
    bool contradiction = false;
    for (size_t ii = 0; ii < live.size() && !contradiction; ++ii)
      for (size_t jj = ii + 1; jj < live.size(); ++jj) {
        unsigned i = live[ii], j = live[jj];
        Rational rho = (series.exprs[i].shift - series.exprs[j].shift) * plan.lattice_unit;
        if (rho.get_den() != 1)
          throw std::logic_error("parity_requirements: lattice does not clear rational parts");
        Gf2Eq eq;
        eq.q_coef = static_cast<unsigned>(mpz_odd_p(BigInt(rho.get_num()).get_mpz_t()));
        eq.x_coefs.assign(K, 0);
        for (size_t k = 0; k < K; ++k)
          eq.x_coefs[k] = static_cast<unsigned>((std::abs(atoms[k].mult[i] - atoms[k].mult[j])) % 2);
        eq.rhs = (series.weights[i].sign() * series.weights[j].sign() > 0) ? 0 : 1;
        bool trivial = eq.q_coef == 0 &&
                       std::all_of(eq.x_coefs.begin(), eq.x_coefs.end(),
                                   [](unsigned c) { return c == 0; });
        std::ostringstream lbl;
        lbl << "(" << series.exprs[i].describe() << ") - (" << series.exprs[j].describe() << ")";
        eq.label = lbl.str();
        if (trivial) {
          if (eq.rhs == 0)
            plan.auto_satisfied.push_back(eq.label);
          else
            contradiction = true;  // even rational difference must hit an odd target
          continue;
        }
        eqs.push_back(std::move(eq));
      }

    // enumerate solutions of the K+1 variable system
    std::vector<std::vector<unsigned>> sols;  // [qp, x_0..x_{K-1}]
    if (!contradiction) {
      for (unsigned mask = 0; mask < (1u << (K + 1)); ++mask) {
        unsigned qp = mask & 1u;
        bool ok = true;
        for (const auto& eq : eqs) {
          unsigned acc = eq.q_coef * qp;
          for (size_t k = 0; k < K; ++k) acc ^= eq.x_coefs[k] & ((mask >> (k + 1)) & 1u);
          if ((acc & 1u) != eq.rhs) {
            ok = false;
            break;
          }
        }
        if (ok) {
          std::vector<unsigned> s{qp};
          for (size_t k = 0; k < K; ++k) s.push_back((mask >> (k + 1)) & 1u);
          sols.push_back(std::move(s));
        }
      }
    }

    if (sols.empty()) {
      plan.solvable = false;
      plan.note = contradiction
                      ? "a rational pair frequency demands an odd multiple of pi it can never reach"
                      : "parity system inconsistent on this lattice";
      // expose the surds anyway so an unconstrained search can still run
      for (const auto& a : atoms)
        plan.targets.push_back({a.atom, a.scale, Parity::Free, false});
      plan.q_parity = Parity::Free;
      return plan;
    }

    bool any_even = false, any_odd = false;
    for (auto& s : sols) (s[0] ? any_odd : any_even) = true;
    if (!any_odd) {
      // every solution forces q even: fold the factor 2 into the lattice
      plan.lattice_unit *= 2;
      continue;
    }
    plan.q_parity = any_even ? Parity::Free : Parity::Odd;

    // per-atom targets: constant / q-conditional / free
    for (size_t k = 0; k < K; ++k) {
      std::set<unsigned> v0, v1;
      for (auto& s : sols) (s[0] ? v1 : v0).insert(s[k + 1]);
      SurdTarget t;
      t.atom = atoms[k].atom;
      t.scale = atoms[k].scale;
      if ((v0.size() > 1) || (v1.size() > 1)) {
        t.base = Parity::Free;
      } else if (any_even && any_odd) {
        unsigned c0 = *v0.begin(), c1 = *v1.begin();
        t.flips_with_q = c0 != c1;
        t.base = c0 ? Parity::Odd : Parity::Even;
      } else {
        unsigned c1 = *v1.begin();
        t.base = c1 ? Parity::Odd : Parity::Even;
      }
      plan.targets.push_back(std::move(t));
    }
    return plan;
  }
  throw std::logic_error("parity_requirements: lattice folding did not terminate");
}

}  // namespace dio
}  // namespace pgt
