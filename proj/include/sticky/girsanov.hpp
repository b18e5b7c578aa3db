// Girsanov weights turning driftless sticky paths into paths of the
// distorted process, weighted estimators of its semigroup, and the tail and
// Kato-potential probes.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sticky/kernel.hpp"
#include "sticky/models.hpp"
#include "sticky/paths.hpp"

namespace sticky {

/// ln Z_t split as
///   [H(X_0) - H(X_t)] + (1/beta) sum_i int d_iH 1{X^i=0} ds
///   + sum_i int (d_i^2 H - (d_iH)^2) 1{X^i>0} ds.
struct LogWeight {
  double endpoint = 0.0;
  double boundary = 0.0;
  double bulk = 0.0;
  double total() const noexcept { return endpoint + boundary + bulk; }
};

/// Left-endpoint Riemann sums on the path grid; indicators use exact zeros.
/// Throws std::domain_error naming the state when H or a derivative is not
/// finite.
LogWeight logweight_ito(const PathSample& path, const DensityModel& model,
                        const StickyParams& params);

/// sqrt2 sum d_i ln phi 1{X^i>0} dB^i - sum (d_i ln phi)^2 1{X^i>0} dt.
/// Requires recorded noise.
double logweight_integral(const PathSample& path, const DensityModel& model);

struct WeightedOptions {
  std::size_t steps = 200;  ///< exact-grid steps on [0, t]
  unsigned threads = 1;
};

/// Terminal states and log-weights of an ensemble of exact-grid paths.
/// Path p uses Rng::stream(seed, p).
struct WeightedEnsemble {
  std::size_t dim = 1;
  std::vector<double> terminal;    ///< n_paths x dim
  std::vector<double> log_weight;  ///< n_paths
};

WeightedEnsemble simulate_weighted(double t, std::span<const double> x0,
                                   const DensityModel& model, const StickyParams& params,
                                   std::size_t n_paths, std::uint64_t seed,
                                   const WeightedOptions& opts = {});

struct WeightedEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double ess = 0.0;  ///< (sum Z)^2 / sum Z^2
};

using PointFunction = std::function<double(std::span<const double>)>;

/// Plain mean of Z_t f(X_t) (no self-normalization). n_paths >= 100.
WeightedEstimate weighted_expectation(const PointFunction& f, double t,
                                      std::span<const double> x0, const DensityModel& model,
                                      const StickyParams& params, std::size_t n_paths,
                                      std::uint64_t seed, const WeightedOptions& opts = {});

/// n sqrt(t / 2 pi) 4/(k-d) exp(-(k-d)^2 / 2t), k > d >= 0, t > 0.
double tail_bound_C(double k, double d, double t, std::size_t n);

struct TailProbe {
  double estimate = 0.0;         ///< max over probe points of E_x[1{tau_k <= t} Z_t]
  std::vector<double> argmax;    ///< probe point attaining it
  double holder_bound = 0.0;     ///< p = q = 2 bound from the model constants
};

/// Probes the corners and centre of D = [0, box]^n. tau_k is the first grid
/// time at which some component reaches k. Every probe point uses the seeds
/// of the same streams, so estimates for different k share paths.
TailProbe truncated_weight_probe(double t, double box, double k, const DensityModel& model,
                                 const StickyParams& params, std::size_t n_paths,
                                 std::uint64_t seed, const WeightedOptions& opts = {});

/// R_lambda nu(x) = int r_lambda(x, y) 2 (d ln phi(y))^2 1{y>0} dy for n = 1
/// models, by adaptive quadrature. Returns +inf when the integral overflows.
double kato_potential(double lambda, double x, const DensityModel& model,
                      const StickyParams& params);

}  // namespace sticky
