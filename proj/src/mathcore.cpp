#include "sticky/mathcore.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sticky {
namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string(what) + ": non-finite argument");
  }
}

void require_positive_time(double t, const char* what) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::domain_error(std::string(what) + ": time must be finite and > 0");
  }
}

// exp(-y*y) without losing the low bits of y*y: split y at 1/16 resolution.
double exp_neg_square(double y) {
  const double head = std::trunc(y * 16.0) / 16.0;
  const double del = (y - head) * (y + head);
  return std::exp(-head * head) * std::exp(-del);
}

enum class Variant { complement, scaled };

// Cody's rational approximations. Returns erfc(|x|) or erfcx(|x|) for x >= 0
// on the three intervals [0, 0.46875], (0.46875, 4], (4, inf).
double cody_positive(double y, Variant v) {
  static constexpr std::array<double, 5> a = {3.1611237438705656, 113.864154151050156,
                                              377.485237685302021, 3209.37758913846947,
                                              .185777706184603153};
  static constexpr std::array<double, 4> b = {23.6012909523441209, 244.024637934444173,
                                              1282.61652607737228, 2844.23683343917062};
  static constexpr std::array<double, 9> c = {
      .564188496988670089, 8.88314979438837594, 66.1191906371416295,
      298.635138197400131, 881.95222124176909,  1712.04761263407058,
      2051.07837782607147, 1230.33935479799725, 2.15311535474403846e-8};
  static constexpr std::array<double, 8> d = {15.7449261107098347, 117.693950891312499,
                                              537.181101862009858, 1621.38957456669019,
                                              3290.79923573345963, 4362.61909014324716,
                                              3439.36767414372164, 1230.33935480374942};
  static constexpr std::array<double, 6> p = {.305326634961232344, .360344899949804439,
                                              .125781726111229246, .0160837851487422766,
                                              6.58749161529837803e-4, .0163153871373020978};
  static constexpr std::array<double, 5> q = {2.56852019228982242, 1.87295284992346047,
                                              .527905102951428412, .0605183413124413191,
                                              .00233520497626869185};
  constexpr double inv_sqrt_pi = 0.56418958354775628695;
  constexpr double xsmall = 1.11e-16;
  constexpr double xbig = 26.543;
  constexpr double xhuge = 6.71e7;

  if (y <= 0.46875) {
    const double ysq = y > xsmall ? y * y : 0.0;
    double num = a[4] * ysq;
    double den = ysq;
    for (int i = 0; i < 3; ++i) {
      num = (num + a[i]) * ysq;
      den = (den + b[i]) * ysq;
    }
    const double erfc_y = 1.0 - y * (num + a[3]) / (den + b[3]);
    return v == Variant::scaled ? std::exp(ysq) * erfc_y : erfc_y;
  }

  double scaled;
  if (y <= 4.0) {
    double num = c[8] * y;
    double den = y;
    for (int i = 0; i < 7; ++i) {
      num = (num + c[i]) * y;
      den = (den + d[i]) * y;
    }
    scaled = (num + c[7]) / (den + d[7]);
  } else {
    if (y >= xbig) {
      if (v == Variant::complement) return 0.0;
      if (y >= xhuge) return inv_sqrt_pi / y;
    }
    const double ysq = 1.0 / (y * y);
    double num = p[5] * ysq;
    double den = ysq;
    for (int i = 0; i < 4; ++i) {
      num = (num + p[i]) * ysq;
      den = (den + q[i]) * ysq;
    }
    const double r = ysq * (num + p[4]) / (den + q[4]);
    scaled = (inv_sqrt_pi - r) / y;
  }
  return v == Variant::scaled ? scaled : exp_neg_square(y) * scaled;
}

}  // namespace

double erfc(double x) {
  require_finite(x, "erfc");
  const double r = cody_positive(std::fabs(x), Variant::complement);
  return x < 0.0 ? 2.0 - r : r;
}

double erfcx(double x) {
  require_finite(x, "erfcx");
  if (x >= 0.0) return cody_positive(x, Variant::scaled);
  if (x < -26.628) return std::numeric_limits<double>::infinity();
  // erfcx(-y) = 2 exp(y^2) - erfcx(y)
  const double y = -x;
  const double head = std::trunc(y * 16.0) / 16.0;
  const double del = (y - head) * (y + head);
  const double e2 = std::exp(head * head) * std::exp(del);
  return 2.0 * e2 - cody_positive(y, Variant::scaled);
}

double gauss_heat(double t, double x, double y) {
  require_positive_time(t, "gauss_heat");
  require_finite(x, "gauss_heat");
  require_finite(y, "gauss_heat");
  const double d = x - y;
  return kInvSqrt2Pi / std::sqrt(t) * std::exp(-d * d / (2.0 * t));
}

double dirichlet_heat(double t, double x, double y) {
  require_positive_time(t, "dirichlet_heat");
  require_finite(x, "dirichlet_heat");
  require_finite(y, "dirichlet_heat");
  if (x < 0.0 || y < 0.0) throw std::domain_error("dirichlet_heat: positions must be >= 0");
  // p(t,x,y) - p(t,x,-y) = p(t,x,y) (1 - exp(-2xy/t))
  return gauss_heat(t, x, y) * -std::expm1(-2.0 * x * y / t);
}

double sticky_g(double t, double x, double gamma) {
  require_positive_time(t, "sticky_g");
  require_finite(x, "sticky_g");
  if (x < 0.0) throw std::domain_error("sticky_g: x must be >= 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::domain_error("sticky_g: gamma must be finite and > 0");
  }
  const double s = std::sqrt(2.0 * t);
  const double z = x / s + s / gamma;
  return erfcx(z) * std::exp(-x * x / (2.0 * t)) / gamma;
}

double dirichlet_resolvent(double lambda, double x, double y) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("dirichlet_resolvent: lambda must be finite and > 0");
  }
  require_finite(x, "dirichlet_resolvent");
  require_finite(y, "dirichlet_resolvent");
  if (x < 0.0 || y < 0.0) throw std::domain_error("dirichlet_resolvent: positions must be >= 0");
  const double k = std::sqrt(2.0 * lambda);
  return std::exp(-k * std::fabs(x - y)) * -std::expm1(-2.0 * k * std::fmin(x, y)) / k;
}

double cutoff(double x) {
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  const double u = x - 1.0;
  return 1.0 - u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double cutoff_derivative(double x) {
  if (x <= 1.0 || x >= 2.0) return 0.0;
  const double u = x - 1.0;
  return -30.0 * u * u * (1.0 - u) * (1.0 - u);
}

double cutoff_second_derivative(double x) {
  if (x <= 1.0 || x >= 2.0) return 0.0;
  const double u = x - 1.0;
  return -60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
}

double cutoff_integral(double x) {
  if (x <= 1.0) return std::fmax(x, 0.0);
  const double u = std::fmin(x, 2.0) - 1.0;
  return 1.0 + u - u * u * u * u * (2.5 + u * (-3.0 + u));
}

double normal_interval(double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi)) throw std::domain_error("normal_interval: NaN bound");
  if (!(hi > lo)) return 0.0;
  // P(Z > z) = erfc(z / sqrt 2) / 2, valid for infinite z through the guards.
  auto upper = [](double z) {
    if (z == std::numeric_limits<double>::infinity()) return 0.0;
    if (z == -std::numeric_limits<double>::infinity()) return 1.0;
    return 0.5 * erfc(z / kSqrt2);
  };
  if (lo >= 0.0) return upper(lo) - upper(hi);
  if (hi <= 0.0) return upper(-hi) - upper(-lo);
  return 1.0 - upper(-lo) - upper(hi);
}

}  // namespace sticky
