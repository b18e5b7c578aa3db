// Integration against the product measure mu_n = prod_i (dx_i + beta delta_0)
// on the truncated orthant [0, R]^n, stratum by stratum.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sticky/models.hpp"

namespace sticky {

struct ProductMeasureSpec {
  std::size_t n = 1;
  double beta = 1.0;
  double R = 10.0;              ///< per-coordinate truncation
  std::size_t resolution = 64;  ///< Gauss-Legendre nodes per free axis
  unsigned threads = 1;

  void validate() const;
};

/// Free coordinates B (bit i set = coordinate i free); the rest sit at 0.
struct Stratum {
  std::uint32_t free_mask = 0;
  std::size_t free_count = 0;
  double weight = 1.0;  ///< beta^(n - #B)
};

/// All 2^n strata in increasing mask order.
std::vector<Stratum> enumerate_strata(std::size_t n, double beta);

using OrthantFunction = std::function<double(std::span<const double>)>;

/// sum_B beta^(n-#B) int_{(0,R]^B} f(x_B, 0) dx_B, tensor Gauss-Legendre on
/// each free axis. Throws on non-finite integrand values.
double integrate_mu(const OrthantFunction& f, const ProductMeasureSpec& spec);

/// int F rho dmu / int rho dmu. Throws std::domain_error when the
/// denominator falls below 1e-300.
double stationary_expectation(const OrthantFunction& F, const DensityModel& model,
                              const ProductMeasureSpec& spec);

}  // namespace sticky
