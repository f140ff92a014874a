#include "support/oracles.hpp"

#include <cmath>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace wsd::testing {

double g2_multiprecision(std::uint64_t n11, std::uint64_t n12, std::uint64_t n21, std::uint64_t n22) {
  using real = boost::multiprecision::cpp_dec_float_50;
  const real o[4] = {real(n11), real(n12), real(n21), real(n22)};
  const real r1 = o[0] + o[1], r2 = o[2] + o[3];
  const real c1 = o[0] + o[2], c2 = o[1] + o[3];
  const real n = r1 + r2;
  if (n == 0) return 0.0;
  const real e[4] = {r1 * c1 / n, r1 * c2 / n, r2 * c1 / n, r2 * c2 / n};
  real sum = 0;
  for (int i = 0; i < 4; ++i) {
    if (o[i] > 0) sum += o[i] * log(o[i] / e[i]);
  }
  return static_cast<double>(2 * sum);
}

double g2_naive(double n11, double n12, double n21, double n22) {
  const double o[4] = {n11, n12, n21, n22};
  const double r1 = n11 + n12, r2 = n21 + n22, c1 = n11 + n21, c2 = n12 + n22;
  const double n = r1 + r2;
  if (n == 0) return 0.0;
  const double e[4] = {r1 * c1 / n, r1 * c2 / n, r2 * c1 / n, r2 * c2 / n};
  double sum = 0;
  for (int i = 0; i < 4; ++i) {
    if (o[i] > 0) sum += o[i] * std::log(o[i] / e[i]);
  }
  return 2 * sum;
}

}  // namespace wsd::testing
