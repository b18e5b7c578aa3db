// Scalar special functions and closed-form heat/resolvent densities.
//
// All functions are pure. Arguments outside the documented domain raise
// std::domain_error; nothing is clamped silently.
#pragma once

namespace sticky {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kSqrtPi = 1.77245385090551602730;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

/// Complementary error function. Rational Chebyshev approximations
/// (Cody 1969) on three intervals; relative accuracy near 1e-16.
double erfc(double x);

/// Scaled complementary error function exp(x^2) * erfc(x).
/// Finite for x >= -26.6; overflows to +inf below that.
double erfcx(double x);

/// Gaussian heat kernel with variance t: (2 pi t)^{-1/2} exp(-(x-y)^2 / 2t).
double gauss_heat(double t, double x, double y);

/// Heat kernel on (0, inf) killed at 0, by the image method.
double dirichlet_heat(double t, double x, double y);

/// (1/gamma) exp(2x/gamma + 2t/gamma^2) erfc(x/sqrt(2t) + sqrt(2t)/gamma),
/// evaluated as (1/gamma) erfcx(z) exp(-x^2/2t) so that no intermediate
/// overflows.
double sticky_g(double t, double x, double gamma);

/// Resolvent density of Brownian motion (generator 1/2 d^2/dx^2) on (0, inf)
/// killed at 0.
double dirichlet_resolvent(double lambda, double x, double y);

/// Smooth cutoff: 1 on [0, 1], quintic descent to 0 on [1, 2], 0 beyond.
/// Twice continuously differentiable.
double cutoff(double x);
double cutoff_derivative(double x);
double cutoff_second_derivative(double x);
/// int_0^x cutoff(s) ds.
double cutoff_integral(double x);

/// P(lo < Z < hi) for a standard normal Z, computed from whichever tail
/// avoids cancellation.
double normal_interval(double lo, double hi);

}  // namespace sticky
