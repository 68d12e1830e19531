#include "pgt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pgt {
namespace oracle {

DenseHermitian dense_from_hamiltonian(const std::vector<Rational>& couplings) {
  const unsigned n = static_cast<unsigned>(couplings.size()) + 1;
  if (n < 2) throw std::invalid_argument("dense_from_hamiltonian: need at least one bond");
  DenseHermitian m;
  m.n = n;
  m.entries.assign(static_cast<size_t>(n) * n, Rational(0));
  Rational total = 0;
  for (const auto& j : couplings) total += j;
  for (unsigned i = 0; i < n; ++i) {
    Rational touching = 0;
    if (i > 0) touching += couplings[i - 1];
    if (i < n - 1) touching += couplings[i];
    m.at(i, i) = -(total - 2 * touching);
  }
  for (unsigned i = 0; i + 1 < n; ++i) {
    m.at(i, i + 1) = -2 * couplings[i];
    m.at(i + 1, i) = m.at(i, i + 1);
  }
  return m;
}

DenseHermitian dense_from_spec(const ChainSpec& spec) {
  std::vector<Rational> couplings;
  for (unsigned i = 0; i + 1 < spec.n_sites; ++i)
    couplings.push_back(i % 2 == 0 ? Rational(1) : spec.j2);
  return dense_from_hamiltonian(couplings);
}

EigenSystem jacobi_eigensystem(const DenseHermitian& m, unsigned prec) {
  const unsigned n = m.n;
  const unsigned wp = prec + 32;
  std::vector<std::vector<HighReal>> a(n, std::vector<HighReal>(n, HighReal(0L, wp)));
  std::vector<std::vector<HighReal>> v(n, std::vector<HighReal>(n, HighReal(0L, wp)));
  for (unsigned i = 0; i < n; ++i) {
    v[i][i] = HighReal(1L, wp);
    for (unsigned j = 0; j < n; ++j) a[i][j] = HighReal(m.at(i, j), wp);
  }
  HighReal norm(0L, wp);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) norm += a[i][j] * a[i][j];
  HighReal thresh = norm.sqrt() * HighReal::pow2(-static_cast<long>(prec) - 8, wp);

  const unsigned max_sweeps = 64 + prec / 2;
  for (unsigned sweep = 0; sweep < max_sweeps; ++sweep) {
    HighReal off(0L, wp);
    for (unsigned p = 0; p < n; ++p)
      for (unsigned q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off.sqrt() < thresh) {
      EigenSystem es;
      std::vector<unsigned> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(),
                [&](unsigned x, unsigned y) { return a[x][x] < a[y][y]; });
      for (unsigned k : idx) {
        es.values.push_back(a[k][k]);
        std::vector<HighReal> col(n, HighReal(0L, wp));
        for (unsigned i = 0; i < n; ++i) col[i] = v[i][k];
        es.vectors.push_back(std::move(col));
      }
      return es;
    }
    for (unsigned p = 0; p < n; ++p)
      for (unsigned q = p + 1; q < n; ++q) {
        if (a[p][q].is_zero()) continue;
        HighReal theta = (a[q][q] - a[p][p]) / (a[p][q] * 2L);
        // t = sgn(theta) / (|theta| + sqrt(theta^2+1))
        HighReal t = HighReal(1L, wp) / (theta.abs() + (theta * theta + 1L).sqrt());
        if (theta.sign() < 0) t = -t;
        HighReal c = HighReal(1L, wp) / (t * t + 1L).sqrt();
        HighReal s = t * c;
        for (unsigned i = 0; i < n; ++i) {
          HighReal aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (unsigned i = 0; i < n; ++i) {
          HighReal api = a[p][i], aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = s * api + c * aqi;
        }
        for (unsigned i = 0; i < n; ++i) {
          HighReal vip = v[i][p], viq = v[i][q];
          v[i][p] = c * vip - s * viq;
          v[i][q] = s * vip + c * viq;
        }
      }
  }
  throw std::runtime_error("jacobi_eigensystem: sweep cap reached without convergence");
}

HighReal evolve_direct(const DenseHermitian& m, const HighReal& t, unsigned digits) {
  const unsigned prec = 64 + static_cast<unsigned>(3.33 * digits) + 32;
  EigenSystem es = jacobi_eigensystem(m, prec);
  const unsigned n = m.n;
  HighReal re(0L, prec), im(0L, prec);
  for (unsigned k = 0; k < n; ++k) {
    HighReal w = es.vectors[k][0] * es.vectors[k][n - 1];
    HighReal phase = es.values[k] * t;
    re += w * phase.cos();
    im -= w * phase.sin();
  }
  return re * re + im * im;
}

std::vector<unsigned long> sieve_odd_nonmultiples(unsigned divisor, unsigned count) {
  if (divisor != 3 && divisor != 5)
    throw std::invalid_argument("sieve_odd_nonmultiples: divisor must be 3 or 5");
  std::vector<unsigned long> out;
  for (unsigned long v = 1; out.size() < count; v += 2)
    if (v % divisor != 0) out.push_back(v);
  return out;
}

}  // namespace oracle
}  // namespace pgt
