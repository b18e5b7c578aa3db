#include "sticky/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sticky/mathcore.hpp"

namespace sticky {

namespace {

// One adaptive panel without the convergence verdict.
QuadResult panel(const std::function<double(double)>& f, double a, double b,
                 const QuadOptions& opts) {
  if (!(b > a)) return {};
  // Panels a few ulps wide (a grid point next to a break) cannot be
  // subdivided; Boost's error floor would report them as unconverged.
  if (b - a <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(a), std::fabs(b))) {
    const double v = f(0.5 * (a + b)) * (b - a);
    return {v, std::fabs(v)};
  }
  // A tolerance near the roundoff floor makes Boost subdivide until the summed
  // per-panel floors dominate its estimate; a looser request often does better.
  QuadResult best{0.0, std::numeric_limits<double>::infinity()};
  double tol = opts.rel_tol;
  for (int attempt = 0; attempt < 3; ++attempt, tol *= 100.0) {
    double err = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, opts.max_depth, tol, &err, &l1);
    if (!std::isfinite(value)) {
      throw QuadratureError("integrate: non-finite result", {value, err});
    }
    if (err < best.abs_error) best = {value, err};
    if (err <= std::max(opts.abs_tol, opts.rel_tol * std::fabs(value))) break;
  }
  return best;
}

void verdict(const QuadResult& r, double a, double b, const QuadOptions& opts) {
  const double allowed = std::max(opts.abs_tol, opts.rel_tol * std::fabs(r.value));
  if (r.abs_error > 100.0 * allowed) {
    std::ostringstream msg;
    msg << "integrate: no convergence on [" << a << ", " << b << "], estimate " << r.value
        << " +- " << r.abs_error;
    throw QuadratureError(msg.str(), r);
  }
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts) {
  const QuadResult r = panel(f, a, b, opts);
  verdict(r, a, b, opts);
  return r;
}

QuadResult integrate_pieces(const std::function<double(double)>& f,
                            std::span<const double> breaks, const QuadOptions& opts) {
  std::vector<double> b(breaks.begin(), breaks.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  // Breaks that differ only by rounding would leave sliver panels.
  if (b.size() > 2) {
    const double merge = 1e-13 * (b.back() - b.front());
    std::vector<double> kept{b.front()};
    for (std::size_t i = 1; i + 1 < b.size(); ++i) {
      if (b[i] - kept.back() > merge && b.back() - b[i] > merge) kept.push_back(b[i]);
    }
    kept.push_back(b.back());
    b = std::move(kept);
  }
  QuadResult total;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const QuadResult piece = panel(f, b[i], b[i + 1], opts);
    total.value += piece.value;
    total.abs_error += piece.abs_error;
  }
  if (b.size() > 1) verdict(total, b.front(), b.back(), opts);
  return total;
}

QuadResult integrate_pieces(const std::function<double(double)>& f,
                            std::initializer_list<double> breaks, const QuadOptions& opts) {
  return integrate_pieces(f, std::span<const double>(breaks.begin(), breaks.size()), opts);
}

GaussRule gauss_legendre(std::size_t n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    // Tricomi initial guess, then Newton on P_n via the three-term recurrence.
    double z = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p_prev = 1.0;
      double p = z;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double next = ((2.0 * kk - 1.0) * z * p - (kk - 1.0) * p_prev) / kk;
        p_prev = p;
        p = next;
      }
      if (n == 1) p_prev = 1.0;
      dp = static_cast<double>(n) * (z * p - p_prev) / (z * z - 1.0);
      const double dz = p / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

}  // namespace sticky
