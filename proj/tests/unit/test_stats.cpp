#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sticky/rng.hpp"
#include "sticky/stats.hpp"

using namespace sticky;

TEST_CASE("pairwise sum and mean estimate") {
  std::vector<double> v(1000, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
  const MeanEstimate m = mean_estimate(std::vector<double>{1.0, 2.0, 3.0, 4.0});
  CHECK(m.mean == 2.5);
  CHECK(m.variance == doctest::Approx(5.0 / 3.0));
  CHECK(m.std_error == doctest::Approx(std::sqrt(5.0 / 12.0)));
}

TEST_CASE("Kolmogorov distribution tail") {
  CHECK(kolmogorov_survival(1.3580986393225505) == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(kolmogorov_survival(1.6276236115189502) == doctest::Approx(0.01).epsilon(1e-6));
  CHECK(kolmogorov_survival(0.1) == 1.0);
}

TEST_CASE("KS tests accept matching laws and reject shifted ones") {
  Rng rng(6);
  std::vector<double> a(5000), b(5000), c(5000);
  for (auto& v : a) v = rng.uniform();
  for (auto& v : b) v = rng.uniform();
  for (auto& v : c) v = rng.uniform() + 0.1;
  CHECK(ks_one_sample(a, [](double x) { return std::clamp(x, 0.0, 1.0); }).p_value > 0.01);
  CHECK(ks_two_sample(a, b).p_value > 0.01);
  CHECK(ks_two_sample(a, c).p_value < 1e-6);
}

TEST_CASE("two-proportion z and line fit") {
  CHECK(two_proportion_z(50, 100, 50, 100) == 0.0);
  CHECK(two_proportion_z(60, 100, 40, 100) == doctest::Approx(0.2 / std::sqrt(0.5 * 0.5 * 0.02)));
  const std::vector<double> x{0.0, 1.0, 2.0}, y{1.0, 3.0, 5.0};
  const LineFit f = fit_line(x, y);
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.slope == doctest::Approx(2.0));
}

TEST_CASE("rng streams are reproducible and distinct") {
  Rng a = Rng::stream(42, 3), b = Rng::stream(42, 3), c = Rng::stream(42, 4);
  const double va = a.uniform();
  CHECK(va == b.uniform());
  CHECK(va != c.uniform());
  CHECK(va > 0.0);
  CHECK(va < 1.0);
}
