#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sticky/mathcore.hpp"
#include "sticky/quadrature.hpp"

using namespace sticky;

namespace {

struct Ref {
  double x;
  double value;
};

// 50-digit references.
constexpr Ref kErfc[] = {
    {-3.0, 1.9999779095030014146},   {-1.5, 1.9661051464753107271},
    {-0.5, 1.5204998778130465377},   {0.0, 1.0},
    {1e-10, 0.99999999988716208329}, {0.1, 0.8875370839817151078},
    {0.46875, 0.50738652678206200841}, {0.5, 0.47950012218695346232},
    {1.0, 0.15729920705028513066},   {2.0, 0.0046777349810472658379},
    {3.5, 7.4309837234141274552e-7}, {4.0, 1.5417257900280018852e-8},
    {5.5, 7.3578479179743980631e-15}, {6.0, 2.1519736712498913117e-17},
    {7.0, 4.1838256077794143986e-23}, {10.0, 2.088487583762544757e-45},
    {15.0, 7.2129941724512066666e-100}, {26.0, 5.6631924088561428465e-296},
};

constexpr Ref kErfcx[] = {
    {0.0, 1.0},
    {0.3, 0.73459933456765514229},
    {1.0, 0.42758357615580700441},
    {3.0, 0.17900115118138995042},
    {10.0, 0.056140992743822585858},
    {50.0, 0.0112815362653237725},
    {1e3, 0.0005641893014533876542},
    {1e6, 5.6418958354747419216e-7},
};

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

}  // namespace

TEST_CASE("erfc matches high-precision references") {
  for (const Ref& r : kErfc) {
    CAPTURE(r.x);
    CHECK(rel(sticky::erfc(r.x), r.value) < 5e-15);
  }
  CHECK(sticky::erfc(30.0) == 0.0);
  CHECK(sticky::erfc(-30.0) == 2.0);
}

TEST_CASE("erfcx matches high-precision references") {
  for (const Ref& r : kErfcx) {
    CAPTURE(r.x);
    CHECK(rel(erfcx(r.x), r.value) < 5e-15);
  }
  CHECK(rel(erfcx(-1.0), 2.0 * std::exp(1.0) - erfcx(1.0)) < 1e-15);
  CHECK(std::isinf(erfcx(-27.0)));
}

TEST_CASE("erfc rejects non-finite input") {
  CHECK_THROWS_AS(sticky::erfc(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  CHECK_THROWS_AS(erfcx(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("erfcx sandwich bounds on a log-spaced grid up to 50") {
  // 2/sqrt(pi) / (x + sqrt(x^2 + 2)) < erfcx(x) <= 2/sqrt(pi) / (x + sqrt(x^2 + 4/pi))
  const double c = 2.0 / kSqrtPi;
  CHECK(erfcx(0.0) <= c / std::sqrt(4.0 / kPi) * (1.0 + 1e-15));
  for (int i = 0; i <= 400; ++i) {
    const double x = 1e-4 * std::pow(10.0, i * std::log10(50.0 / 1e-4) / 400.0);
    CAPTURE(x);
    const double v = erfcx(x);
    CHECK(v > c / (x + std::sqrt(x * x + 2.0)));
    CHECK(v <= c / (x + std::sqrt(x * x + 4.0 / kPi)) * (1.0 + 1e-15));
  }
}

TEST_CASE("sticky_g values and stability") {
  CHECK(rel(sticky_g(1.0, 0.0, 1.0), 0.3362040024463412129) < 1e-14);
  CHECK(sticky_g(1.0, 5.0, 2.0) > 0.0);
  const double at0 = sticky_g(1.0, 0.0, 1.0);
  double prev = at0;
  for (int i = 1; i <= 300; ++i) {
    const double v = sticky_g(1.0, 0.01 * i, 1.0);
    CHECK(v < prev);
    prev = v;
  }
  for (double t : {1e-8, 1e-3, 1.0, 1e3, 1e6}) {
    for (double x : {0.0, 1e-6, 1.0, 40.0, 1e3}) {
      for (double gamma : {1e-6, 1e-2, 1.0, 1e3}) {
        const double v = sticky_g(t, x, gamma);
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
      }
    }
  }
  CHECK_THROWS_AS(sticky_g(0.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(sticky_g(1.0, -1.0, 1.0), std::domain_error);
}

TEST_CASE("dirichlet resolvent") {
  CHECK(dirichlet_resolvent(0.5, 0.0, 1.0) == 0.0);
  CHECK(rel(dirichlet_resolvent(0.5, 1.0, 1.0), 1.0 - std::exp(-2.0)) < 1e-15);
  CHECK(dirichlet_resolvent(1.0, 0.2, 3.0) == doctest::Approx(dirichlet_resolvent(1.0, 3.0, 0.2)).epsilon(1e-15));
  CHECK_THROWS_AS(dirichlet_resolvent(0.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("Gaussian heat kernel semigroup identity") {
  for (double s : {0.3, 1.0}) {
    for (double t : {0.5, 2.0}) {
      for (double x : {-1.0, 0.5}) {
        for (double y : {0.0, 2.0}) {
          const double c = integrate_pieces(
              [&](double z) { return gauss_heat(s, x, z) * gauss_heat(t, z, y); },
              {-40.0, std::min(x, y), std::max(x, y), 40.0}).value;
          CHECK(std::fabs(c - gauss_heat(s + t, x, y)) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("Dirichlet heat kernel loses mass at the boundary") {
  auto mass = [](double t, double x) {
    return integrate_pieces([&](double y) { return dirichlet_heat(t, x, y); },
                            {0.0, x, x + 40.0 * std::sqrt(t)}).value;
  };
  const double m = mass(1.0, 0.5);
  CHECK(m > 0.0);
  CHECK(m < 1.0);
  CHECK(std::fabs(mass(1.0, 50.0) - 1.0) < 1e-6);
  CHECK(dirichlet_heat(1.0, 0.0, 1.0) == 0.0);
}

TEST_CASE("normal_interval") {
  CHECK(normal_interval(-INFINITY, INFINITY) == 1.0);
  CHECK(normal_interval(0.0, INFINITY) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_interval(1.0, 1.0) == 0.0);
  CHECK(rel(normal_interval(10.0, 11.0), 0.5 * (sticky::erfc(10.0 / kSqrt2) - sticky::erfc(11.0 / kSqrt2))) < 1e-14);
}

TEST_CASE("cutoff is C^2 with the stated integral") {
  CHECK(cutoff(0.5) == 1.0);
  CHECK(cutoff(2.5) == 0.0);
  const double h = 1e-6;
  for (double x = 0.9; x < 2.1; x += 0.01) {
    CAPTURE(x);
    CHECK(std::fabs((cutoff(x + h) - cutoff(x - h)) / (2 * h) - cutoff_derivative(x)) < 1e-6);
    CHECK(std::fabs((cutoff_derivative(x + h) - cutoff_derivative(x - h)) / (2 * h) -
                    cutoff_second_derivative(x)) < 1e-4);
    const double q = integrate([](double s) { return cutoff(s); }, 0.0, x).value;
    CHECK(std::fabs(q - cutoff_integral(x)) < 1e-10);
  }
  CHECK(cutoff_integral(5.0) == doctest::Approx(1.5));
}
