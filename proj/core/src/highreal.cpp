#include "pgt/highreal.hpp"

#include <stdexcept>
#include <vector>

namespace pgt {

namespace {
unsigned max_prec(const HighReal& a, const HighReal& b) {
  return a.prec() > b.prec() ? a.prec() : b.prec();
}
}  // namespace

HighReal HighReal::pi(unsigned prec) {
  HighReal r(prec);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

HighReal HighReal::pow2(long e, unsigned prec) {
  HighReal r(prec);
  mpfr_set_ui_2exp(r.raw(), 1, e, MPFR_RNDN);
  return r;
}

HighReal HighReal::operator-() const {
  HighReal r(prec());
  mpfr_neg(r.raw(), v_, MPFR_RNDN);
  return r;
}

#define PGT_BINOP(name, fn)                                   \
  HighReal HighReal::operator name(const HighReal& o) const { \
    HighReal r(max_prec(*this, o));                           \
    fn(r.raw(), v_, o.v_, MPFR_RNDN);                         \
    return r;                                                 \
  }
PGT_BINOP(+, mpfr_add)
PGT_BINOP(-, mpfr_sub)
PGT_BINOP(*, mpfr_mul)
PGT_BINOP(/, mpfr_div)
#undef PGT_BINOP

#define PGT_BINOP_SI(name, fn)                     \
  HighReal HighReal::operator name(long x) const { \
    HighReal r(prec());                            \
    fn(r.raw(), v_, x, MPFR_RNDN);                 \
    return r;                                      \
  }
PGT_BINOP_SI(+, mpfr_add_si)
PGT_BINOP_SI(-, mpfr_sub_si)
PGT_BINOP_SI(*, mpfr_mul_si)
PGT_BINOP_SI(/, mpfr_div_si)
#undef PGT_BINOP_SI

HighReal operator*(long x, const HighReal& a) { return a * x; }

std::string HighReal::str(int digits) const {
  if (digits < 1) digits = 1;
  mpfr_exp_t e;
  char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
  std::string mant(s);
  mpfr_free_str(s);
  bool neg = !mant.empty() && mant[0] == '-';
  std::string dig = neg ? mant.substr(1) : mant;
  std::string out = neg ? "-" : "";
  if (mpfr_zero_p(v_)) return "0";
  if (e <= 0) {
    out += "0.";
    out.append(static_cast<size_t>(-e), '0');
    out += dig;
  } else if (static_cast<size_t>(e) >= dig.size()) {
    out += dig;
    out.append(static_cast<size_t>(e) - dig.size(), '0');
  } else {
    out += dig.substr(0, static_cast<size_t>(e)) + "." + dig.substr(static_cast<size_t>(e));
  }
  return out;
}

Rational HighReal::to_rational() const {
  if (mpfr_zero_p(v_)) return Rational(0);
  if (!mpfr_number_p(v_)) throw std::domain_error("HighReal::to_rational: non-finite");
  mpz_class m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
  Rational q(m);
  Rational two(2);
  if (e >= 0) {
    mpz_class p2;
    mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(e));
    q *= Rational(p2);
  } else {
    mpz_class p2;
    mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(-e));
    q /= Rational(p2);
  }
  q.canonicalize();
  return q;
}

BigInt HighReal::round_nearest() const {
  HighReal t(prec());
  mpfr_rint(t.raw(), v_, MPFR_RNDN);
  BigInt z;
  mpfr_get_z(z.get_mpz_t(), t.raw(), MPFR_RNDN);
  return z;
}

HighReal HighReal::floor() const {
  HighReal r(prec());
  mpfr_floor(r.raw(), v_);
  return r;
}

HighReal HighReal::abs() const {
  HighReal r(prec());
  mpfr_abs(r.raw(), v_, MPFR_RNDN);
  return r;
}

HighReal HighReal::sqrt() const {
  if (mpfr_sgn(v_) < 0) throw std::domain_error("HighReal::sqrt of negative value");
  HighReal r(prec());
  mpfr_sqrt(r.raw(), v_, MPFR_RNDN);
  return r;
}

HighReal HighReal::cos() const {
  HighReal r(prec());
  mpfr_cos(r.raw(), v_, MPFR_RNDN);
  return r;
}

HighReal HighReal::sin() const {
  HighReal r(prec());
  mpfr_sin(r.raw(), v_, MPFR_RNDN);
  return r;
}

HighReal HighReal::log() const {
  HighReal r(prec());
  mpfr_log(r.raw(), v_, MPFR_RNDN);
  return r;
}

HighReal HighReal::dist_to_integer() const {
  HighReal n(BigInt(round_nearest()), prec());
  return (*this - n).abs();
}

bool HighReal::equal_within(const HighReal& a, const HighReal& b, long bits) {
  HighReal d = (a - b).abs();
  HighReal tol = HighReal::pow2(-bits, 32);
  return mpfr_cmp(d.raw(), tol.raw()) <= 0;
}

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational q(s);
    q.canonicalize();
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    return q;
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    Rational q(s);
    q.canonicalize();
    return q;
  }
  std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
  if (tail.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("bad decimal literal: " + s);
  bool neg = !head.empty() && head[0] == '-';
  if (neg) head = head.substr(1);
  if (head.empty()) head = "0";
  mpz_class ip(head), fp(tail.empty() ? "0" : tail), den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, tail.size());
  Rational q(ip * den + fp, den);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

Rational rational_gcd(const Rational& a, const Rational& b) {
  Rational aa = abs(a), bb = abs(b);
  if (aa == 0) return bb;
  if (bb == 0) return aa;
  // gcd(p1/q1, p2/q2) = gcd(p1 q2, p2 q1) / (q1 q2)
  BigInt n;
  mpz_gcd(n.get_mpz_t(), BigInt(aa.get_num() * bb.get_den()).get_mpz_t(),
          BigInt(bb.get_num() * aa.get_den()).get_mpz_t());
  Rational g(n, aa.get_den() * bb.get_den());
  g.canonicalize();
  return g;
}

int valuation2(const BigInt& z) {
  if (z == 0) return -1;
  return static_cast<int>(mpz_scan1(z.get_mpz_t(), 0));
}

bool is_perfect_square(const BigInt& z, BigInt* root) {
  if (z < 0) return false;
  if (!mpz_perfect_square_p(z.get_mpz_t())) return false;
  if (root) mpz_sqrt(root->get_mpz_t(), z.get_mpz_t());
  return true;
}

}  // namespace pgt
