#include "sticky/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "sticky/mathcore.hpp"
#include "sticky/quadrature.hpp"

namespace sticky {

StickyParams::StickyParams(double beta_, std::size_t dim_) : beta(beta_), dim(dim_) {
  validate();
}

void StickyParams::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("StickyParams: beta must be finite and > 0");
  }
  if (dim < 1) throw std::invalid_argument("StickyParams: dim must be >= 1");
}

namespace {

void check_time(double t, const char* what) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::domain_error(std::string(what) + ": t must be finite and > 0");
  }
}

void check_position(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::domain_error(std::string(what) + ": position must be finite and >= 0");
  }
}

void check_lambda(double lambda, const char* what) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error(std::string(what) + ": lambda must be finite and > 0");
  }
}

// Upper end of the effective support of p_t(x, .): beyond it every term of
// the density is below exp(-98) relative to its peak.
double support_bound(double t, double x) { return x + 14.0 * std::sqrt(2.0 * t); }

}  // namespace

double transition_atom(double t, double x, const StickyParams& params, KernelForm form) {
  check_time(t, "transition_atom");
  check_position(x, "transition_atom");
  params.validate();
  const double gamma = kSqrt2 * params.beta;
  const double arg = form == KernelForm::rescaled ? x / kSqrt2 : x;
  return gamma * sticky_g(t, arg, gamma);
}

double transition_density(double t, double x, double y, const StickyParams& params,
                          KernelForm form) {
  check_time(t, "transition_density");
  check_position(x, "transition_density");
  check_position(y, "transition_density");
  params.validate();
  const double gamma = kSqrt2 * params.beta;
  if (form == KernelForm::rescaled) {
    const double a = x / kSqrt2;
    const double v = y / kSqrt2;
    return dirichlet_heat(t, a, v) / kSqrt2 + kSqrt2 * sticky_g(t, a + v, gamma);
  }
  const double v = y / kSqrt2;
  return dirichlet_heat(t, x, v) / kSqrt2 + 2.0 * sticky_g(t, x + v, gamma);
}

KernelDecomposition transition_kernel(double t, double x, const StickyParams& params,
                                      KernelForm form) {
  KernelDecomposition k;
  k.atom = transition_atom(t, x, params, form);
  k.density = [t, x, params, form](double y) {
    return transition_density(t, x, y, params, form);
  };
  return k;
}

double transition_mass(double t, double x, const StickyParams& params, KernelForm form) {
  const KernelDecomposition k = transition_kernel(t, x, params, form);
  // The printed form centres its Gaussian part at sqrt(2) x.
  const double centre = form == KernelForm::rescaled ? x : kSqrt2 * x;
  const double top = support_bound(t, centre);
  QuadOptions opts;
  opts.rel_tol = 1e-12;
  const QuadResult q = integrate_pieces(k.density, {0.0, centre, top}, opts);
  return k.atom + q.value;
}

double kernel_expectation(double t, double x, const std::function<double(double)>& f,
                          const StickyParams& params, std::span<const double> kinks) {
  const double atom = transition_atom(t, x, params);
  const double top = support_bound(t, x);
  std::vector<double> breaks{0.0, x, top};
  for (double k : kinks) {
    if (k > 0.0 && k < top) breaks.push_back(k);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  QuadOptions opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 1e-13;
  const double f0 = f(0.0);
  const double body = integrate_pieces(
                          [&](double y) { return transition_density(t, x, y, params) * f(y); },
                          breaks, opts)
                          .value;
  return atom * f0 + body;
}

// ---------------------------------------------------------------------------
// TransitionLaw

TransitionLaw::TransitionLaw(double t, double x, const StickyParams& params)
    : t_(t), x_(x) {
  check_time(t, "TransitionLaw");
  check_position(x, "TransitionLaw");
  params.validate();
  a_ = x / kSqrt2;
  gamma_ = kSqrt2 * params.beta;
  sqrt_t_ = std::sqrt(t);
  sqrt_2t_ = std::sqrt(2.0 * t);
  atom_ = gamma_ * sticky_g(t, a_, gamma_);
  erfc_a_ = erfc(a_ / sqrt_2t_);
}

double TransitionLaw::density(double y) const {
  const double v = y / kSqrt2;
  return dirichlet_heat(t_, a_, v) / kSqrt2 + kSqrt2 * sticky_g(t_, a_ + v, gamma_);
}

double TransitionLaw::cdf(double y) const {
  if (y < 0.0) return 0.0;
  if (y == std::numeric_limits<double>::infinity()) return 1.0;
  const double v = y / kSqrt2;
  const double w = a_ + v;
  // Absorbed part of the reflected Gaussian, plus the sticky part
  //   2 int_a^w g = gamma (g(w) - g(a)) + erfc(a/sqrt2t) - erfc(w/sqrt2t),
  // plus the atom gamma g(a).
  const double dirichlet = normal_interval(-a_ / sqrt_t_, (v - a_) / sqrt_t_) -
                           normal_interval(a_ / sqrt_t_, (v + a_) / sqrt_t_);
  const double sticky = gamma_ * sticky_g(t_, w, gamma_) + erfc_a_ - erfc(w / sqrt_2t_);
  return std::clamp(dirichlet + sticky, 0.0, 1.0);
}

double TransitionLaw::survival(double y) const {
  if (y < 0.0) return 1.0;
  if (y == std::numeric_limits<double>::infinity()) return 0.0;
  const double v = y / kSqrt2;
  const double w = a_ + v;
  const double z = w / sqrt_2t_;
  const double sticky_tail =
      std::exp(-w * w / (2.0 * t_)) * (erfcx(z) - erfcx(z + sqrt_2t_ / gamma_));
  const double dirichlet_tail = normal_interval((v - a_) / sqrt_t_, (v + a_) / sqrt_t_);
  return std::clamp(sticky_tail + dirichlet_tail, 0.0, 1.0);
}

double TransitionLaw::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("quantile: u must lie in (0, 1)");
  if (u < atom_) return 0.0;
  constexpr double tol = 1e-12;
  const bool upper = u > 0.5;
  const double tail = 1.0 - u;
  // Increasing in y, negative at 0.
  auto excess = [&](double y) { return upper ? tail - survival(y) : cdf(y) - u; };

  // Newton from the free Gaussian quantile, which is already exact up to
  // reflection and sticking corrections when x is many sqrt(t) from 0.
  // [lo, hi] keeps a bracket; hi stays infinite until an overshoot is seen.
  const double z = upper ? kSqrt2 * boost::math::erfc_inv(2.0 * tail)
                         : -kSqrt2 * boost::math::erfc_inv(2.0 * u);
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  double y = std::max(0.0, x_ + sqrt_2t_ * z);
  double step = 8.0 * sqrt_2t_;
  for (int iter = 0; iter < 400; ++iter) {
    const double f = excess(y);
    if (f == 0.0) return y;
    if (f < 0.0) lo = y; else hi = y;
    const double dens = density(y);
    double next = dens > 0.0 ? y - f / dens : std::numeric_limits<double>::quiet_NaN();
    if (std::fabs(next - y) <= tol && next >= lo && next <= hi) return next;
    if (!(next > lo && next < hi)) {
      if (std::isfinite(hi)) {
        next = 0.5 * (lo + hi);
      } else {
        next = lo + step;
        step *= 2.0;
      }
    }
    if (std::fabs(next - y) <= tol || hi - lo <= tol) return next;
    y = next;
  }
  throw std::runtime_error("quantile: no convergence");
}

double transition_cdf(double t, double x, double y, const StickyParams& params) {
  if (std::isnan(y)) throw std::domain_error("transition_cdf: y is NaN");
  return TransitionLaw(t, x, params).cdf(y);
}

double transition_survival(double t, double x, double y, const StickyParams& params) {
  if (std::isnan(y)) throw std::domain_error("transition_survival: y is NaN");
  return TransitionLaw(t, x, params).survival(y);
}

double sample_transition(double t, double x, const StickyParams& params, Rng& rng) {
  const TransitionLaw law(t, x, params);
  return law.quantile(rng.uniform());
}

void product_sample_into(double t, std::span<const double> x, const StickyParams& params,
                         Rng& rng, std::span<double> out) {
  if (x.size() != params.dim || out.size() != params.dim) {
    throw std::invalid_argument("product_sample: dimension mismatch");
  }
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = sample_transition(t, x[i], params, rng);
}

std::vector<double> product_sample(double t, std::span<const double> x,
                                   const StickyParams& params, Rng& rng) {
  std::vector<double> out(x.size());
  product_sample_into(t, x, params, rng, out);
  return out;
}

// ---------------------------------------------------------------------------
// Resolvent. Solving (lambda - d^2/dx^2) u = f on (0, inf) with the boundary
// relation lambda u(0) - u'(0)/beta = f(0) gives
//   r(x, dy) = [G_D(x,y) + exp(-k(x+y)) / (k + beta k^2)] dy
//            + beta exp(-k x) / (k + beta k^2) delta_0(dy),   k = sqrt(lambda),
// where G_D is the Dirichlet Green function of lambda - d^2/dx^2.

double resolvent_atom(double lambda, double x, const StickyParams& params) {
  check_lambda(lambda, "resolvent_atom");
  check_position(x, "resolvent_atom");
  params.validate();
  const double k = std::sqrt(lambda);
  return params.beta * std::exp(-k * x) / (k + params.beta * lambda);
}

double resolvent_density(double lambda, double x, double y, const StickyParams& params) {
  check_lambda(lambda, "resolvent_density");
  check_position(x, "resolvent_density");
  check_position(y, "resolvent_density");
  params.validate();
  const double k = std::sqrt(lambda);
  const double killed = dirichlet_resolvent(lambda, x / kSqrt2, y / kSqrt2) / kSqrt2;
  return killed + std::exp(-k * (x + y)) / (k + params.beta * lambda);
}

// ---------------------------------------------------------------------------

double chapman_kolmogorov_residual(double s, double t, double x, const StickyParams& params,
                                   std::span<const double> y_grid) {
  check_time(s, "chapman_kolmogorov_residual");
  check_time(t, "chapman_kolmogorov_residual");
  check_position(x, "chapman_kolmogorov_residual");
  const double first_atom = transition_atom(s, x, params);
  QuadOptions opts;
  opts.rel_tol = 1e-11;
  opts.abs_tol = 1e-15;

  double residual = 0.0;
  {
    const double top = support_bound(s, x);
    const double through_interior =
        integrate_pieces(
            [&](double z) {
              return transition_density(s, x, z, params) * transition_atom(t, z, params);
            },
            {0.0, x, top}, opts)
            .value;
    const double composed = first_atom * transition_atom(t, 0.0, params) + through_interior;
    residual = std::fabs(transition_atom(s + t, x, params) - composed);
  }
  for (double y : y_grid) {
    check_position(y, "chapman_kolmogorov_residual");
    const double top = std::max(support_bound(s, x), support_bound(t, y));
    const double through_interior =
        integrate_pieces(
            [&](double z) {
              return transition_density(s, x, z, params) * transition_density(t, z, y, params);
            },
            {0.0, std::min(x, y), std::max(x, y), top}, opts)
            .value;
    const double composed = first_atom * transition_density(t, 0.0, y, params) + through_interior;
    residual = std::max(residual, std::fabs(transition_density(s + t, x, y, params) - composed));
  }
  return residual;
}

}  // namespace sticky
