#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "sticky/measure.hpp"
#include "sticky/models.hpp"
#include "sticky/rng.hpp"

using namespace sticky;

namespace {

ProductMeasureSpec spec(std::size_t n, double beta, double R, std::size_t res = 64) {
  ProductMeasureSpec s;
  s.n = n;
  s.beta = beta;
  s.R = R;
  s.resolution = res;
  return s;
}

double one(std::span<const double>) { return 1.0; }

}  // namespace

TEST_CASE("strata enumeration") {
  const auto s = enumerate_strata(3, 2.0);
  REQUIRE(s.size() == 8);
  CHECK(s[0].free_count == 0);
  CHECK(s[0].weight == 8.0);
  CHECK(s[7].weight == 1.0);
  CHECK_THROWS_AS(enumerate_strata(13, 1.0), std::invalid_argument);
}

TEST_CASE("product measure arithmetic") {
  CHECK(integrate_mu(one, spec(2, 2.0, 1.0)) == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(integrate_mu([](std::span<const double> x) { return x[0] == 0.0 ? 1.0 : 0.0; },
                     spec(1, 1.7, 3.0)) == doctest::Approx(1.7).epsilon(1e-15));
  CHECK(integrate_mu([](std::span<const double> x) { return std::exp(-x[0] * x[0]); },
                     spec(1, 1.0, 10.0)) ==
        doctest::Approx(1.8862269254527580136).epsilon(1e-13));
  for (std::size_t n = 1; n <= 4; ++n) {
    CHECK(integrate_mu(one, spec(n, 0.7, 2.5, 8)) ==
          doctest::Approx(std::pow(3.2, static_cast<double>(n))).epsilon(1e-13));
  }
}

TEST_CASE("measure spec validation") {
  CHECK_THROWS_AS(integrate_mu(one, spec(13, 1.0, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(integrate_mu(one, spec(1, 1.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(integrate_mu(one, spec(1, 1.0, 1.0, 1)), std::invalid_argument);
  CHECK_THROWS_AS(integrate_mu([](std::span<const double>) { return NAN; }, spec(1, 1.0, 1.0)),
                  std::domain_error);
}

TEST_CASE("stationary expectations") {
  const DensityModel g = gaussian_model(1);
  auto at_zero = [](std::span<const double> x) { return x[0] == 0.0 ? 1.0 : 0.0; };
  CHECK(stationary_expectation(one, g, spec(1, 1.0, 10.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(stationary_expectation(at_zero, g, spec(1, 1.0, 10.0)) ==
        doctest::Approx(0.53015890426861885008).epsilon(1e-13));
  CHECK(stationary_expectation(at_zero, flat_model(1, 4.0), spec(1, 0.5, 4.0)) ==
        doctest::Approx(0.5 / 4.5).epsilon(1e-14));
  const DensityModel steep = scalar_model(
      "steep", [](double) { return 400.0; }, [](double) { return 0.0; },
      [](double) { return 0.0; });
  CHECK_THROWS_AS(stationary_expectation(one, steep, spec(1, 1.0, 1.0)), std::domain_error);
}

TEST_CASE("monotonicity on random step functions") {
  const DensityModel w = wetting_model(2, quadratic_potential());
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = 3.0 * rng.uniform(), b = 3.0 * rng.uniform();
    const double lo = rng.uniform();
    auto F = [=](std::span<const double> x) { return (x[0] < a ? lo : 0.0) + (x[1] < b ? 0.2 : 0.0); };
    auto G = [=](std::span<const double> x) { return F(x) + (x[0] + x[1] < 1.0 ? 0.3 : 0.0); };
    CHECK(stationary_expectation(F, w, spec(2, 1.0, 8.0, 24)) <=
          stationary_expectation(G, w, spec(2, 1.0, 8.0, 24)));
  }
}

TEST_CASE("refinement convergence on smooth integrands") {
  auto f = [](std::span<const double> x) { return std::exp(-x[0] * x[0] - 0.5 * x[1] * x[1]); };
  const double a = integrate_mu(f, spec(2, 1.3, 8.0, 48));
  const double b = integrate_mu(f, spec(2, 1.3, 8.0, 96));
  CHECK(std::fabs(a - b) < 1e-8);
}
