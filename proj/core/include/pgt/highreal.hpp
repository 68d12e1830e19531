#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

namespace pgt {

using BigInt = mpz_class;
using Rational = mpq_class;

// Arbitrary-precision real backed by MPFR, with the working precision carried
// on the value. Arithmetic allocates the result at the larger operand
// precision and rounds to nearest; the accumulated error stays within a few
// ulp per operation, so comparisons against transcendental results must go
// through equal_within().
class HighReal {
 public:
  HighReal() { mpfr_init2(v_, 64); mpfr_set_nan(v_); }
  explicit HighReal(unsigned prec) { mpfr_init2(v_, clamp(prec)); mpfr_set_nan(v_); }
  HighReal(double x, unsigned prec) { mpfr_init2(v_, clamp(prec)); mpfr_set_d(v_, x, MPFR_RNDN); }
  HighReal(long x, unsigned prec) { mpfr_init2(v_, clamp(prec)); mpfr_set_si(v_, x, MPFR_RNDN); }
  HighReal(const Rational& q, unsigned prec) {
    mpfr_init2(v_, clamp(prec));
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }
  HighReal(const BigInt& z, unsigned prec) {
    mpfr_init2(v_, clamp(prec));
    mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
  }

  HighReal(const HighReal& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  HighReal(HighReal&& o) noexcept { mpfr_init2(v_, 2); mpfr_swap(v_, o.v_); }
  HighReal& operator=(const HighReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  HighReal& operator=(HighReal&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~HighReal() { mpfr_clear(v_); }

  unsigned prec() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }
  const mpfr_t& raw() const { return v_; }
  mpfr_t& raw() { return v_; }

  static HighReal pi(unsigned prec);
  static HighReal pow2(long e, unsigned prec);  // 2^e

  HighReal operator-() const;
  HighReal operator+(const HighReal& o) const;
  HighReal operator-(const HighReal& o) const;
  HighReal operator*(const HighReal& o) const;
  HighReal operator/(const HighReal& o) const;
  HighReal& operator+=(const HighReal& o) { return *this = *this + o; }
  HighReal& operator-=(const HighReal& o) { return *this = *this - o; }
  HighReal& operator*=(const HighReal& o) { return *this = *this * o; }

  HighReal operator+(long x) const;
  HighReal operator-(long x) const;
  HighReal operator*(long x) const;
  HighReal operator/(long x) const;

  bool operator<(const HighReal& o) const { return mpfr_cmp(v_, o.v_) < 0; }
  bool operator>(const HighReal& o) const { return mpfr_cmp(v_, o.v_) > 0; }
  bool operator<=(const HighReal& o) const { return mpfr_cmp(v_, o.v_) <= 0; }
  bool operator>=(const HighReal& o) const { return mpfr_cmp(v_, o.v_) >= 0; }
  bool is_zero() const { return mpfr_zero_p(v_); }
  bool is_nan() const { return mpfr_nan_p(v_); }
  int sign() const { return mpfr_sgn(v_); }
  int cmp(double x) const { return mpfr_cmp_d(v_, x); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  // Decimal string with the given number of significant digits.
  std::string str(int digits) const;
  // Exact dyadic rational equal to the stored value.
  Rational to_rational() const;

  BigInt round_nearest() const;
  HighReal floor() const;
  HighReal abs() const;
  HighReal sqrt() const;
  HighReal cos() const;
  HighReal sin() const;
  HighReal log() const;
  // |x - round(x)|, the distance to the nearest integer.
  HighReal dist_to_integer() const;

  // true when |a-b| <= 2^(-bits)
  static bool equal_within(const HighReal& a, const HighReal& b, long bits);

 private:
  static unsigned clamp(unsigned prec) { return prec < 2 ? 2 : prec; }
  mpfr_t v_;
};

HighReal operator*(long x, const HighReal& a);

// Parses "4/3", "-7", "0.125" into an exact rational.
Rational parse_rational(const std::string& s);

// Lowest-terms gcd of two non-negative rationals: largest g with a/g, b/g integer.
Rational rational_gcd(const Rational& a, const Rational& b);

// 2-adic valuation; v2(0) is defined here as -1 to signal "divides forever".
int valuation2(const BigInt& z);

bool is_perfect_square(const BigInt& z, BigInt* root = nullptr);

}  // namespace pgt
