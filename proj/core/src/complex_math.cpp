#include "latstab/complex_math.hpp"

#include <cmath>

namespace latstab {

cplx principal_power(cplx z, double gamma) {
  if (z == cplx{0.0, 0.0}) return {0.0, 0.0};
  return std::polar(std::pow(std::abs(z), gamma), gamma * std::arg(z));
}

cplx one_minus_expi(double t) {
  const double s = std::sin(0.5 * t);
  return {2.0 * s * s, -std::sin(t)};
}

cplx expm1(cplx z) {
  const double x = z.real();
  const double y = z.imag();
  const double sy2 = std::sin(0.5 * y);
  // Re: e^x cos y - 1 = expm1(x) cos y - 2 sin^2(y/2)
  const double re = std::expm1(x) * std::cos(y) - 2.0 * sy2 * sy2;
  const double im = std::exp(x) * std::sin(y);
  return {re, im};
}

cplx ipow(cplx z, std::uint64_t n) {
  cplx result{1.0, 0.0};
  while (n != 0) {
    if (n & 1u) result *= z;
    z *= z;
    n >>= 1u;
  }
  return result;
}

}  // namespace latstab
