// Small statistics toolbox for the Monte Carlo checks.
#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sticky {

/// Pairwise (cascade) summation; deterministic for a fixed input order.
double pairwise_sum(std::span<const double> v);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0; ///< standard error of the mean
  double variance = 0.0; ///< unbiased sample variance
  std::size_t count = 0;
};

MeanEstimate mean_estimate(std::span<const double> v);

struct KsResult {
  double statistic = 0.0;  ///< sup distance D
  double p_value = 1.0;    ///< asymptotic Kolmogorov tail
  double effective_n = 0.0;
};

/// Kolmogorov limiting survival function Q(lambda) = P(K > lambda).
double kolmogorov_survival(double lambda);

/// One-sample KS test of `samples` against a continuous cdf.
KsResult ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Two-sample KS test.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// z-score of the difference of two binomial proportions (pooled variance).
double two_proportion_z(std::size_t hits_a, std::size_t n_a, std::size_t hits_b, std::size_t n_b);

/// Ordinary least-squares line y = intercept + slope * x.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace sticky
