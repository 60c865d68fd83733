#pragma once

#include <complex>
#include <cstdint>

namespace latstab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

/// z^gamma on the principal branch (cut along the negative real axis).
/// principal_power(0, gamma) is 0 for every gamma > 0.
cplx principal_power(cplx z, double gamma);

/// 1 - e^{it}, computed as 2 sin^2(t/2) - i sin t so that small t keeps
/// full relative precision.
cplx one_minus_expi(double t);

/// e^z - 1 without cancellation near z = 0.
cplx expm1(cplx z);

/// z^n by repeated squaring; n >= 0.
cplx ipow(cplx z, std::uint64_t n);

}  // namespace latstab
