#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sticky/models.hpp"
#include "sticky/rng.hpp"

using namespace sticky;

namespace {

void check_derivatives(const DensityModel& m, double lo, double hi, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = m.dim();
  std::vector<double> x(n), g(n), c(n), xp, xm, gp(n), gm(n);
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    for (double& v : x) v = lo + (hi - lo) * rng.uniform();
    m.grad_H(x, g);
    m.hess_diag_H(x, c);
    for (std::size_t i = 0; i < n; ++i) {
      xp = x;
      xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (m.H(xp) - m.H(xm)) / (2 * h);
      m.grad_H(xp, gp);
      m.grad_H(xm, gm);
      const double fd2 = (gp[i] - gm[i]) / (2 * h);
      CHECK(std::fabs(fd - g[i]) <= 1e-6 * std::max(1.0, std::fabs(g[i])));
      CHECK(std::fabs(fd2 - c[i]) <= 1e-6 * std::max(1.0, std::fabs(c[i])));
    }
  }
}

}  // namespace

TEST_CASE("Gaussian model") {
  const DensityModel g = gaussian_model(2);
  const std::vector<double> x{2.0, 0.0};
  std::vector<double> d(2);
  g.drift(x, d);
  CHECK(d[0] == -4.0);
  CHECK(d[1] == 0.0);
  const std::vector<double> zero{0.0, 0.0};
  CHECK(g.H(zero) == 0.0);
  CHECK(g.phi(zero) == 1.0);
  check_derivatives(g, 0.0, 5.0, 1);
  const ConditionReport r = verify_conditions(g, 5.0, 41);
  CHECK(r.all_passed());
}

TEST_CASE("wetting model energy") {
  const PairPotential q = quadratic_potential();
  const DensityModel w1 = wetting_model(1, q);
  for (double x : {0.0, 0.7, 3.0}) CHECK(w1.H(std::vector<double>{x}) == doctest::Approx(q.V(x)));
  const DensityModel w2 = wetting_model(2, q);
  CHECK(w2.H(std::vector<double>{1.0, 1.0}) == doctest::Approx(0.5));
  check_derivatives(wetting_model(3, q), 0.0, 5.0, 2);
  check_derivatives(wetting_model(3, soft_convex_potential(0.5)), 0.0, 5.0, 3);
}

TEST_CASE("wetting models satisfy the conditions and push off the wall") {
  for (const DensityModel& m :
       {wetting_model(2, quadratic_potential()), wetting_model(3, soft_convex_potential(0.5))}) {
    const ConditionReport r = verify_conditions(m, 5.0, 21);
    CHECK(r.lower_bound.passed);
    CHECK(r.boundary_slope.passed);
    CHECK(r.curvature.passed);
    CHECK(r.lower_bound.worst_margin >= 0.0);
  }
  const DensityModel w = wetting_model(3, quadratic_potential());
  Rng rng(7);
  std::vector<double> x(3), g(3);
  for (int trial = 0; trial < 200; ++trial) {
    for (double& v : x) v = 5.0 * rng.uniform();
    const std::size_t i = trial % 3;
    x[i] = 0.0;
    w.grad_H(x, g);
    CHECK(g[i] <= 0.0);
  }
}

TEST_CASE("potential validation") {
  CHECK_NOTHROW(validate_potential(quadratic_potential()));
  CHECK_NOTHROW(validate_potential(soft_convex_potential(0.9)));
  PairPotential skew = quadratic_potential();
  skew.V = [](double r) { return 0.5 * r * r + 0.1 * r; };
  CHECK_THROWS_AS(wetting_model(2, skew), std::invalid_argument);
  PairPotential soft = soft_convex_potential(0.5);
  soft.c_minus = 0.9;
  CHECK_THROWS_AS(validate_potential(soft), std::invalid_argument);
  CHECK_THROWS_AS(soft_convex_potential(1.0), std::invalid_argument);
}

TEST_CASE("adversarial energies fail with a witness at the far edge") {
  const DensityModel cubic = scalar_model(
      "x^3", [](double x) { return x * x * x; }, [](double x) { return 3 * x * x; },
      [](double x) { return 6 * x; }, ConditionBounds{0.0, 0.0, 1.0});
  const ConditionReport r = verify_conditions(cubic, 2.0, 201);
  CHECK(r.lower_bound.passed);
  CHECK(r.boundary_slope.passed);
  CHECK_FALSE(r.curvature.passed);
  REQUIRE(r.curvature.witness.size() == 1);
  CHECK(r.curvature.witness[0] == doctest::Approx(2.0));

  const DensityModel neg = scalar_model(
      "-x^3", [](double x) { return -x * x * x; }, [](double x) { return -3 * x * x; },
      [](double x) { return -6 * x; }, ConditionBounds{0.0, 0.0, 1.0});
  const ConditionReport rn = verify_conditions(neg, 2.0, 201);
  CHECK_FALSE(rn.lower_bound.passed);
  CHECK(rn.lower_bound.witness[0] == doctest::Approx(2.0));
  CHECK(rn.curvature.passed);
}

TEST_CASE("bounded drift model") {
  const DensityModel b = bounded_drift_model(1.5);
  std::vector<double> d(1);
  b.drift(std::vector<double>{0.5}, d);
  CHECK(d[0] == doctest::Approx(3.0));
  b.drift(std::vector<double>{2.5}, d);
  CHECK(d[0] == 0.0);
  check_derivatives(b, 0.0, 3.0, 4);
  CHECK(verify_conditions(b, 3.0, 601).all_passed());
}

TEST_CASE("declared bounds are required") {
  const DensityModel m("bare", 1, [](std::span<const double>) { return 0.0; },
                       [](std::span<const double>, std::span<double> o) { o[0] = 0; },
                       [](std::span<const double>, std::span<double> o) { o[0] = 0; });
  CHECK_THROWS_AS(verify_conditions(m, 1.0, 3), std::invalid_argument);
}
