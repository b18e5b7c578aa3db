// One-dimensional quadrature used by the kernel, measure and diagnostics
// modules. Adaptive integration is backed by Boost.Math's Gauss-Kronrod
// rule; Gauss-Legendre nodes are generated here for tensor rules.
#pragma once

#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace sticky {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
};

/// Raised when adaptive quadrature stops above its tolerance. Carries the
/// achieved estimate so callers can report it.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, QuadResult achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  const QuadResult& achieved() const noexcept { return achieved_; }

 private:
  QuadResult achieved_;
};

struct QuadOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  unsigned max_depth = 20;
};

/// Adaptive 15-point Gauss-Kronrod integration over [a, b]. Throws
/// QuadratureError when the error estimate exceeds max(abs_tol, rel_tol*|I|)
/// by more than a factor of 100.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {});

/// Integrates over consecutive pieces [b0,b1], [b1,b2], ... and sums. Used to
/// place kinks and peaks of the integrand at panel boundaries. Convergence is
/// judged on the total; breaks closer than 1e-13 of the range are merged.
QuadResult integrate_pieces(const std::function<double(double)>& f,
                            std::span<const double> breaks, const QuadOptions& opts = {});

QuadResult integrate_pieces(const std::function<double(double)>& f,
                            std::initializer_list<double> breaks, const QuadOptions& opts = {});

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b].
GaussRule gauss_legendre(std::size_t n, double a, double b);

}  // namespace sticky
