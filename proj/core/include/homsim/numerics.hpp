#pragma once

#include <complex>
#include <span>

namespace homsim::num {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

/// sin(x)/x continued through x = 0 with value 1. Below |x| = 1e-4 a short
/// series keeps full precision where the direct quotient would cancel.
double sinc(double x);

/// 1 - sinc(x) evaluated without cancellation for small |x|.
double one_minus_sinc(double x);

/// Triangular window: 1 - |x| on [-1, 1], zero outside.
double tri(double x);

/// Reduce an angle to [0, 2*pi). pi maps to itself exactly.
double reduce_phase(double x);

/// exp(i * phase).
std::complex<double> cis(double phase);

/// Nodes and weights of the 16-point Gauss-Legendre rule on [-1, 1].
std::span<const double, 16> gl16_nodes();
std::span<const double, 16> gl16_weights();

} // namespace homsim::num
