#include "sticky/measure.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sticky/parallel.hpp"
#include "sticky/quadrature.hpp"
#include "sticky/stats.hpp"

namespace sticky {

void ProductMeasureSpec::validate() const {
  if (n < 1) throw std::invalid_argument("ProductMeasureSpec: n must be >= 1");
  if (n > 12) throw std::invalid_argument("ProductMeasureSpec: n > 12 refused (2^n strata)");
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("ProductMeasureSpec: beta must be finite and > 0");
  }
  if (!(R > 0.0) || !std::isfinite(R)) {
    throw std::invalid_argument("ProductMeasureSpec: R must be finite and > 0");
  }
  if (resolution < 2) throw std::invalid_argument("ProductMeasureSpec: resolution must be >= 2");
}

std::vector<Stratum> enumerate_strata(std::size_t n, double beta) {
  if (n > 12) throw std::invalid_argument("enumerate_strata: n > 12 refused");
  std::vector<Stratum> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Stratum s;
    s.free_mask = mask;
    s.free_count = static_cast<std::size_t>(__builtin_popcount(mask));
    s.weight = std::pow(beta, static_cast<double>(n - s.free_count));
    out.push_back(s);
  }
  return out;
}

namespace {

double integrate_stratum(const OrthantFunction& f, const Stratum& s,
                         const ProductMeasureSpec& spec, const GaussRule& rule) {
  const std::size_t n = spec.n;
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < n; ++i) {
    if (s.free_mask & (1u << i)) free.push_back(i);
  }
  const std::size_t m = rule.nodes.size();
  std::size_t total = 1;
  for (std::size_t k = 0; k < free.size(); ++k) total *= m;

  std::vector<double> x(n, 0.0);
  std::vector<std::size_t> idx(free.size(), 0);
  std::vector<double> terms(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    double w = 1.0;
    for (std::size_t k = 0; k < free.size(); ++k) {
      x[free[k]] = rule.nodes[idx[k]];
      w *= rule.weights[idx[k]];
    }
    const double v = f(x);
    if (!std::isfinite(v)) {
      throw std::domain_error("integrate_mu: non-finite integrand value");
    }
    terms[flat] = w * v;
    for (std::size_t k = 0; k < free.size(); ++k) {
      if (++idx[k] < m) break;
      idx[k] = 0;
    }
  }
  return s.weight * pairwise_sum(terms);
}

}  // namespace

double integrate_mu(const OrthantFunction& f, const ProductMeasureSpec& spec) {
  spec.validate();
  const GaussRule rule = gauss_legendre(spec.resolution, 0.0, spec.R);
  const std::vector<Stratum> strata = enumerate_strata(spec.n, spec.beta);
  const std::vector<double> parts = parallel_map<double>(
      strata.size(), spec.threads,
      [&](std::size_t i) { return integrate_stratum(f, strata[i], spec, rule); });
  double total = 0.0;
  for (double p : parts) total += p;
  return total;
}

double stationary_expectation(const OrthantFunction& F, const DensityModel& model,
                              const ProductMeasureSpec& spec) {
  if (model.dim() != spec.n) {
    throw std::invalid_argument("stationary_expectation: model dimension differs from spec.n");
  }
  const double den = integrate_mu([&](std::span<const double> x) { return model.rho(x); }, spec);
  if (!(den >= 1e-300)) {
    throw std::domain_error("stationary_expectation: degenerate measure (normalizer < 1e-300)");
  }
  const double num =
      integrate_mu([&](std::span<const double> x) { return F(x) * model.rho(x); }, spec);
  return num / den;
}

}  // namespace sticky
