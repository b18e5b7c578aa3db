// Path samplers for sticky Brownian motion and its distorted version:
//  - exact-grid chaining of the transition kernel,
//  - the random time change of reflecting Brownian motion (n = 1),
//  - Lie splitting of the distorted SDE (exact sticky step + drift step).
#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "sticky/kernel.hpp"
#include "sticky/models.hpp"
#include "sticky/rng.hpp"

namespace sticky {

struct TimeGrid {
  std::vector<double> times;  ///< strictly increasing, times[0] == 0

  static TimeGrid uniform(double horizon, std::size_t steps);
  void validate() const;
  std::size_t steps() const noexcept { return times.empty() ? 0 : times.size() - 1; }
  double horizon() const { return times.back(); }
  double dt(std::size_t k) const { return times[k + 1] - times[k]; }
};

/// States, occupation of {0} and optional driving noise on a time grid.
/// All per-time arrays are row-major with `dim` entries per row.
struct PathSample {
  TimeGrid grid;
  std::size_t dim = 1;
  std::vector<double> states;      ///< (steps+1) x dim
  /// Cumulative sum_{k<j} dt_k 1{X^i_{t_k} = 0} (left endpoints), (steps+1) x dim.
  std::vector<double> occupation;
  /// Brownian increments per step, steps x dim; empty when not recorded.
  std::vector<double> noise;
  /// False when `noise` holds diagnostic proxies rather than the true
  /// driving increments.
  bool noise_exact = false;
  /// Time-change sampler only: reflecting local time L at tau(t_j).
  std::vector<double> reflected_local_time;

  std::span<const double> state(std::size_t k) const {
    return {states.data() + k * dim, dim};
  }
  double at(std::size_t k, std::size_t i) const { return states[k * dim + i]; }
  bool has_noise() const noexcept { return !noise.empty(); }
};

/// Kernel chaining: every component advanced by sample_transition on each
/// grid step. Exact in law at the grid times.
PathSample sample_exact_grid(std::span<const double> x0, const TimeGrid& grid,
                             const StickyParams& params, Rng& rng);

/// Piecewise-linear skeleton of the time change for n = 1.
///
/// The reflecting path Xhat = x0 + sqrt2 W + L is built on the internal grid
/// s_k = k tau with L advanced by the exact Brownian-bridge minimum on each
/// step. A(s) = s + beta L(s) is represented with the increment of L on step
/// k placed at s_k: A jumps from A_minus[k] = s_k + beta L_{k-1} to
/// A_plus[k] = s_k + beta L_k. The time-changed path X = Xhat(A^{-1}) sits at
/// 0 while A runs over the open interval (A_minus[k], A_plus[k]).
struct TimeChangeSkeleton {
  double tau = 0.0;
  std::vector<double> xhat;     ///< Xhat(s_k)
  std::vector<double> w;        ///< W(s_k)
  std::vector<double> L;        ///< L(s_k)
  std::vector<double> a_minus;  ///< A(s_k-)
  std::vector<double> a_plus;   ///< A(s_k)

  std::size_t size() const noexcept { return xhat.size(); }
  /// A^{-1}(t) = inf{s : A(s) > t}, clamped to the simulated range.
  double inverse(double t) const;
  double forward(double s) const;
};

/// Simulates the skeleton until A covers `horizon`.
TimeChangeSkeleton build_timechange(double x0, double horizon, double tau,
                                    const StickyParams& params, Rng& rng);

/// Time-change sampler on the uniform output grid j * dt (internal step
/// tau = dt). Records X, occupation, L o A^{-1} and the increments of the
/// Brownian motion W o A^{-1} completed by independent noise over sticking
/// time.
PathSample sample_timechange(double x0, double horizon, double dt, const StickyParams& params,
                             Rng& rng);

/// X_horizon only, without storing the skeleton.
double sample_timechange_terminal(double x0, double horizon, double dt,
                                  const StickyParams& params, Rng& rng);

/// One Lie-splitting step of the distorted SDE per call.
class EulerSplitting {
 public:
  /// `model` must outlive the stepper. `reflect_at` adds a reflecting wall
  /// at R (used only for flat models).
  EulerSplitting(const DensityModel& model, const StickyParams& params, double dt,
                 double reflect_at = std::numeric_limits<double>::infinity());

  /// Advances x in place. Writes Gaussian proxies of the driving increments
  /// into `noise` when it is non-empty. Throws std::runtime_error when the
  /// drift step violates dt * |drift| < 0.5 min(1, beta) or overflows.
  void step(std::span<double> x, Rng& rng, std::span<double> noise = {});

  double dt() const noexcept { return dt_; }

 private:
  const DensityModel& model_;
  StickyParams params_;
  double dt_;
  double reflect_at_;
  double drift_limit_;
  std::vector<double> before_;
  std::vector<double> grad_;
};

/// Splitting integrator on a uniform grid. The grid must be uniform.
PathSample sample_euler_distorted(std::span<const double> x0, const TimeGrid& grid,
                                  const StickyParams& params, const DensityModel& model, Rng& rng,
                                  double reflect_at = std::numeric_limits<double>::infinity());

/// (1/beta) * occupation of {0} by component i at the final time.
double local_time(const PathSample& path, std::size_t i, const StickyParams& params);

/// (1 / 2 eps) int 1{0 < X^i < eps} d<X^i>_s with d<X> = 2 ds, left-endpoint
/// Riemann sum on the path grid.
double epsilon_occupation(const PathSample& path, std::size_t i, double eps);

}  // namespace sticky
