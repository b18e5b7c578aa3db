// Transition and resolvent kernels of sticky Brownian motion on [0, inf),
//
//   dX = 1{X>0} sqrt(2) dB + (1/beta) 1{X=0} dt,
//
// and of n independent copies on the orthant. The law p_t(x, dy) is an atom
// at 0 plus a density on (0, inf); both are symmetric with respect to
// dx + beta * delta_0.
//
// The closed forms are obtained from the unit-variance sticky kernel through
// the rescaling X = sqrt(2) Y with stickiness sqrt(2) beta for Y. The
// un-rescaled variant is kept as KernelForm::printed for comparison only; it
// is neither normalized nor symmetric away from x = 0.
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sticky/rng.hpp"

namespace sticky {

struct StickyParams {
  double beta = 1.0;     ///< stickiness, > 0
  std::size_t dim = 1;   ///< number of independent components, >= 1

  StickyParams() = default;
  StickyParams(double beta_, std::size_t dim_ = 1);
  void validate() const;
};

enum class KernelForm { rescaled, printed };

/// Atom plus continuous part of p_t(x, .).
struct KernelDecomposition {
  double atom = 0.0;
  std::function<double(double)> density;
};

double transition_atom(double t, double x, const StickyParams& params,
                       KernelForm form = KernelForm::rescaled);
double transition_density(double t, double x, double y, const StickyParams& params,
                          KernelForm form = KernelForm::rescaled);
KernelDecomposition transition_kernel(double t, double x, const StickyParams& params,
                                      KernelForm form = KernelForm::rescaled);

/// Atom plus adaptive quadrature of the density over (0, inf). Throws
/// QuadratureError on non-convergence.
double transition_mass(double t, double x, const StickyParams& params,
                       KernelForm form = KernelForm::rescaled);

/// p_t f(x) = atom f(0) + int density f, with the quadrature split at x, at
/// the effective support edge and at any caller-supplied kinks of f.
double kernel_expectation(double t, double x, const std::function<double(double)>& f,
                          const StickyParams& params, std::span<const double> kinks = {});

/// P(X_t <= y | X_0 = x) in closed form; y may be +inf.
double transition_cdf(double t, double x, double y, const StickyParams& params);

/// P(X_t > y | X_0 = x) in closed form, accurate in the upper tail.
double transition_survival(double t, double x, double y, const StickyParams& params);

/// The one-dimensional law p_t(x, .) with its invariants precomputed, for
/// repeated cdf/quantile evaluation.
class TransitionLaw {
 public:
  TransitionLaw(double t, double x, const StickyParams& params);

  double atom() const noexcept { return atom_; }
  double density(double y) const;
  double cdf(double y) const;
  double survival(double y) const;

  /// Inverse cdf: 0 when u < atom, otherwise the y with cdf(y) = u, located
  /// by Newton steps safeguarded with bisection to absolute tolerance 1e-12.
  double quantile(double u) const;

 private:
  double t_;
  double x_;
  double a_;          // x / sqrt 2
  double gamma_;      // sqrt(2) beta
  double sqrt_t_;
  double sqrt_2t_;
  double atom_;
  double erfc_a_;     // erfc(a / sqrt(2t))
};

/// Exact draw from p_t(x, .).
double sample_transition(double t, double x, const StickyParams& params, Rng& rng);

/// Componentwise independent draws; x.size() must equal params.dim.
std::vector<double> product_sample(double t, std::span<const double> x,
                                   const StickyParams& params, Rng& rng);
void product_sample_into(double t, std::span<const double> x, const StickyParams& params,
                         Rng& rng, std::span<double> out);

/// Resolvent r_lambda(x, dy) = int_0^inf exp(-lambda t) p_t(x, dy) dt, split
/// into its atom at 0 and its density on (0, inf).
double resolvent_atom(double lambda, double x, const StickyParams& params);
double resolvent_density(double lambda, double x, double y, const StickyParams& params);

/// sup over y_grid (and the atom) of |p_{s+t}(x, .) - int p_s(x, dz) p_t(z, .)|.
double chapman_kolmogorov_residual(double s, double t, double x, const StickyParams& params,
                                   std::span<const double> y_grid);

}  // namespace sticky
