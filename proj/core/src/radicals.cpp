#include "pgt/radicals.hpp"

#include <numeric>
#include <stdexcept>

namespace pgt {

namespace {

HighReal half_angle_step(const HighReal& c) {
  // cos(x/2) = sqrt((1+c)/2) for x in [0,pi]
  return ((c + 1L) / 2L).sqrt();
}

struct SeedTable {
  // cos(a*pi/alpha) for a = 0..alpha, exact algebraic values
  static HighReal value(unsigned long alpha, unsigned long a, unsigned prec) {
    if (a == 0) return HighReal(1L, prec);
    if (a == alpha) return HighReal(-1L, prec);
    if (alpha == 2) return HighReal(0L, prec);
    if (alpha == 3) return HighReal(Rational(a == 1 ? 1 : -1, 2), prec);
    if (alpha == 5) {
      HighReal s5 = HighReal(5L, prec).sqrt();
      switch (a) {
        case 1: return (s5 + 1L) / 4L;
        case 2: return (s5 - 1L) / 4L;
        case 3: return -((s5 - 1L) / 4L);
        case 4: return -((s5 + 1L) / 4L);
      }
    }
    throw std::logic_error("SeedTable: unsupported alpha");
  }
  static std::string text(unsigned long alpha, unsigned long a) {
    if (a == 0) return "1";
    if (a == alpha) return "-1";
    if (alpha == 2) return "0";
    if (alpha == 3) return a == 1 ? "1/2" : "-1/2";
    switch (a) {
      case 1: return "(1+sqrt(5))/4";
      case 2: return "(sqrt(5)-1)/4";
      case 3: return "-(sqrt(5)-1)/4";
      default: return "-(1+sqrt(5))/4";
    }
  }
};

// cos(a*pi/b) for reduced a/b in [0,1], b = alpha*2^j with alpha in {1,2,3,5}.
// Returns the value and its nested-radical text.
std::pair<HighReal, std::string> algebraic_cos(unsigned long a, unsigned long b,
                                               unsigned long alpha, unsigned prec) {
  if (b == alpha || (alpha == 1 && b <= 2)) {
    unsigned long al = (alpha == 1 && b == 2) ? 2 : (alpha == 1 ? 1 : alpha);
    return {SeedTable::value(al, a, prec), SeedTable::text(al, a)};
  }
  // child angle 2a/b over denominator b/2, folded back into [0,1]
  unsigned long cb = b / 2;
  bool negate = 2 * a > b;  // parent angle past pi/2
  unsigned long ca = negate ? (b - a) : a;
  auto [cv, ct] = algebraic_cos(ca, cb, alpha, prec + 8);
  HighReal val = half_angle_step(cv);
  if (negate) val = -val;
  // (1/2)sqrt(2 + 2c); when the child is itself (1/2)sqrt(T) this nests cleanly
  std::string inner;
  if (ct.size() > 8 && ct.compare(0, 5, "sqrt(") == 0 && ct.compare(ct.size() - 3, 3, ")/2") == 0)
    inner = "2+" + ct.substr(0, ct.size() - 2);
  else if (ct == "1/2")
    inner = "3";
  else if (ct == "-1/2")
    inner = "1";
  else if (ct == "0")
    inner = "2";
  else if (!ct.empty() && ct[0] == '-')
    inner = "2-2*" + ct.substr(1);
  else
    inner = "2+2*" + ct;
  std::string txt = "sqrt(" + inner + ")/2";
  if (negate) txt = "-" + txt;
  HighReal out(prec);
  mpfr_set(out.raw(), val.raw(), MPFR_RNDN);
  return {out, txt};
}

}  // namespace

CosineValue cos_pi_over_pow2(unsigned k, unsigned prec) {
  if (k < 1) throw std::invalid_argument("cos_pi_over_pow2: k >= 1 required");
  HighReal c(0L, prec + 16);
  std::string txt = "0";
  for (unsigned i = 0; i < k; ++i) {
    c = half_angle_step(c);
    txt = (i == 0) ? "sqrt(2)/2" : "sqrt(2+" + txt.substr(0, txt.size() - 2) + ")/2";
  }
  CosineValue out;
  out.num = 1;
  out.den = 1UL << (k + 1);
  out.value = HighReal(prec);
  mpfr_set(out.value.raw(), c.raw(), MPFR_RNDN);
  out.radical_form = txt;
  return out;
}

CosineValue sin_pi_over_pow2(unsigned k, unsigned prec) {
  if (k < 1) throw std::invalid_argument("sin_pi_over_pow2: k >= 1 required");
  // sin(pi/2^(k+1)) = sqrt((1 - cos(pi/2^k))/2)
  HighReal c(0L, prec + 16);
  std::string inner = "0";
  for (unsigned i = 0; i + 1 < k; ++i) {
    c = half_angle_step(c);
    inner = (i == 0) ? "sqrt(2)" : "sqrt(2+" + inner + ")";
  }
  HighReal s = ((HighReal(1L, prec + 16) - c) / 2L).sqrt();
  CosineValue out;
  out.num = 1;
  out.den = 1UL << (k + 1);
  out.value = HighReal(prec);
  mpfr_set(out.value.raw(), s.raw(), MPFR_RNDN);
  out.radical_form = (k == 1) ? "sqrt(2)/2" : "sqrt(2-" + inner + ")/2";
  return out;
}

CosineValue cos_rational_pi(const BigInt& m, unsigned long n, unsigned prec) {
  if (n == 0) throw std::invalid_argument("cos_rational_pi: zero denominator");
  CosineValue out;
  out.num = m;
  out.den = n;
  // reduce mod 2pi, fold into [0, pi]
  BigInt two_n = BigInt(2) * BigInt(static_cast<unsigned long>(n));
  BigInt mr;
  mpz_mod(mr.get_mpz_t(), m.get_mpz_t(), two_n.get_mpz_t());
  if (mr > BigInt(static_cast<unsigned long>(n))) mr = two_n - mr;
  unsigned long a = mr.get_ui();
  unsigned long b = n;
  if (a != 0) {
    unsigned long g = std::gcd(a, b);
    a /= g;
    b /= g;
  }
  // b = alpha * 2^j
  unsigned long alpha = b;
  while (alpha % 2 == 0) alpha /= 2;
  if (a == 0) {
    out.value = HighReal(1L, prec);
    out.radical_form = "1";
    return out;
  }
  if (alpha == 1 || alpha == 3 || alpha == 5) {
    auto [val, txt] = algebraic_cos(a, b, alpha, prec);
    out.value = val;
    out.radical_form = txt;
    return out;
  }
  unsigned wp = prec + 32;
  HighReal arg = HighReal::pi(wp) * HighReal(Rational(static_cast<long>(a), static_cast<long>(b)), wp);
  HighReal c = arg.cos();
  out.value = HighReal(prec);
  mpfr_set(out.value.raw(), c.raw(), MPFR_RNDN);
  return out;
}

HighReal eval_branch_eigenvalue(const HighReal& j2, const HighReal& c, int sign, unsigned prec) {
  unsigned wp = prec + 16;
  HighReal one(1L, wp);
  HighReal rad = one + j2 * j2 + 2L * j2 * c;
  if (rad.sign() < 0) {
    // exact-zero radicands (j2=1, c=-1) can round just below zero
    HighReal tol = HighReal::pow2(-static_cast<long>(prec) + 8, 32);
    if (mpfr_cmpabs(rad.raw(), tol.raw()) > 0)
      throw std::domain_error("eval_branch_eigenvalue: negative radicand");
    rad = HighReal(0L, wp);
  }
  HighReal r = rad.sqrt() * 2L;
  if (sign < 0) r = -r;
  HighReal out(prec);
  mpfr_set(out.raw(), r.raw(), MPFR_RNDN);
  return out;
}

}  // namespace pgt
