#include <doctest.h>

#include <cmath>

#include "sticky/mathcore.hpp"
#include "sticky/quadrature.hpp"

using namespace sticky;

TEST_CASE("adaptive integration of smooth functions") {
  CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 1.0).value ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
  const QuadResult r =
      integrate_pieces([](double x) { return std::exp(-x * x); }, {0.0, 2.0, 10.0});
  CHECK(r.value == doctest::Approx(kSqrtPi / 2.0).epsilon(1e-14));
  CHECK(r.abs_error < 1e-12);
}

TEST_CASE("kinks at panel boundaries") {
  auto f = [](double x) { return std::fabs(x - 0.3); };
  CHECK(integrate_pieces(f, {0.0, 0.3, 1.0}).value ==
        doctest::Approx(0.5 * 0.09 + 0.5 * 0.49).epsilon(1e-14));
}

TEST_CASE("non-convergence is reported with the achieved estimate") {
  QuadOptions tight;
  tight.rel_tol = 1e-15;
  tight.abs_tol = 0.0;
  tight.max_depth = 2;
  auto wild = [](double x) { return std::sin(1.0 / x); };
  try {
    integrate(wild, 1e-4, 1.0, tight);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(std::isfinite(e.achieved().value));
    CHECK(e.achieved().abs_error > 0.0);
  }
}

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (std::size_t n : {2u, 5u, 16u, 64u}) {
    const GaussRule r = gauss_legendre(n, 0.0, 2.0);
    REQUIRE(r.nodes.size() == n);
    const std::size_t degree = 2 * n - 1;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], degree);
    const double exact = std::pow(2.0, degree + 1) / static_cast<double>(degree + 1);
    CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    for (std::size_t i = 1; i < n; ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
  }
}
