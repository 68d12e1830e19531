#pragma once

#include <optional>
#include <string>

#include "pgt/highreal.hpp"

namespace pgt {

// cos(num*pi/den) together with its provenance. radical_form is set when the
// value was produced by the nested-radical / half-angle route (denominators
// of the form alpha*2^j with algebraic seed alpha in {1,2,3,5}).
struct CosineValue {
  BigInt num;
  unsigned long den = 1;
  HighReal value;
  std::optional<std::string> radical_form;
};

// cos(pi/2^(k+1)) via the k-fold half-angle recursion c <- sqrt((1+c)/2)
// seeded at cos(pi/2)=0.
CosineValue cos_pi_over_pow2(unsigned k, unsigned prec);

// sin(pi/2^(k+1)) = sqrt((1-cos(pi/2^k))/2); leading inner sign flipped
// relative to the cosine tower.
CosineValue sin_pi_over_pow2(unsigned k, unsigned prec);

// cos(m*pi/n) for any integers m, n>0. Denominators alpha*2^j with
// alpha in {1,2,3,5} go through exact seeds plus half-angle recursion;
// everything else takes the certified transcendental route (pi at guarded
// precision, then mpfr cosine). Guard constant <= 16 bits.
CosineValue cos_rational_pi(const BigInt& m, unsigned long n, unsigned prec);

// sign * 2*sqrt(1 + j2^2 + 2*j2*c)
HighReal eval_branch_eigenvalue(const HighReal& j2, const HighReal& c, int sign, unsigned prec);

}  // namespace pgt
