#include "sticky/models.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "sticky/mathcore.hpp"

namespace sticky {

DensityModel::DensityModel(std::string name, std::size_t dim, ScalarField energy,
                           VectorField grad, VectorField hess_diag,
                           std::optional<ConditionBounds> bounds, double truncation)
    : name_(std::move(name)),
      dim_(dim),
      energy_(std::move(energy)),
      grad_(std::move(grad)),
      hess_diag_(std::move(hess_diag)),
      bounds_(bounds),
      truncation_(truncation) {
  if (dim_ < 1) throw std::invalid_argument("DensityModel: dim must be >= 1");
  if (!energy_ || !grad_ || !hess_diag_) {
    throw std::invalid_argument("DensityModel: energy, gradient and Hessian diagonal required");
  }
  if (!(truncation_ > 0.0) || !std::isfinite(truncation_)) {
    throw std::invalid_argument("DensityModel: truncation must be finite and > 0");
  }
}

namespace {

void check_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

}  // namespace

double DensityModel::H(std::span<const double> x) const {
  check_size(x.size(), dim_, "DensityModel::H");
  return energy_(x);
}

void DensityModel::grad_H(std::span<const double> x, std::span<double> out) const {
  check_size(x.size(), dim_, "DensityModel::grad_H");
  check_size(out.size(), dim_, "DensityModel::grad_H");
  grad_(x, out);
}

void DensityModel::hess_diag_H(std::span<const double> x, std::span<double> out) const {
  check_size(x.size(), dim_, "DensityModel::hess_diag_H");
  check_size(out.size(), dim_, "DensityModel::hess_diag_H");
  hess_diag_(x, out);
}

double DensityModel::phi(std::span<const double> x) const { return std::exp(-H(x)); }

double DensityModel::rho(std::span<const double> x) const { return std::exp(-2.0 * H(x)); }

void DensityModel::drift(std::span<const double> x, std::span<double> out) const {
  grad_H(x, out);
  for (double& v : out) v *= -2.0;
}

// ---------------------------------------------------------------------------
// Pair potentials

void validate_potential(const PairPotential& v, double range, std::size_t points) {
  if (!v.V || !v.dV || !v.ddV) {
    throw std::invalid_argument("potential '" + v.name + "': V, V' and V'' required");
  }
  if (!(v.c_minus > 0.0) || v.c_plus < v.c_minus || !(v.b >= 0.0)) {
    throw std::invalid_argument("potential '" + v.name + "': need 0 < c_minus <= c_plus, b >= 0");
  }
  if (points < 2) throw std::invalid_argument("validate_potential: need >= 2 points");
  constexpr double tol = 1e-12;
  if (std::fabs(v.dV(0.0)) > tol) {
    throw std::invalid_argument("potential '" + v.name + "': V'(0) != 0");
  }
  for (std::size_t k = 0; k < points; ++k) {
    const double r = range * static_cast<double>(k) / static_cast<double>(points - 1);
    const double scale = 1.0 + std::fabs(v.V(r));
    if (std::fabs(v.V(r) - v.V(-r)) > tol * scale) {
      throw std::invalid_argument("potential '" + v.name + "': not symmetric at r=" +
                                  std::to_string(r));
    }
    for (double s : {r, -r}) {
      const double c = v.ddV(s);
      if (c < v.c_minus - tol || c > v.c_plus + tol) {
        throw std::invalid_argument("potential '" + v.name + "': V'' outside [c_minus, c_plus] at r=" +
                                    std::to_string(s));
      }
      if (v.V(s) < -v.b - tol) {
        throw std::invalid_argument("potential '" + v.name + "': V < -b at r=" +
                                    std::to_string(s));
      }
    }
  }
}

PairPotential quadratic_potential() {
  PairPotential p;
  p.name = "quadratic";
  p.V = [](double r) { return 0.5 * r * r; };
  p.dV = [](double r) { return r; };
  p.ddV = [](double) { return 1.0; };
  p.c_minus = 1.0;
  p.c_plus = 1.0;
  p.b = 0.0;
  return p;
}

PairPotential soft_convex_potential(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw std::invalid_argument("soft_convex_potential: eps must lie in [0, 1)");
  }
  PairPotential p;
  p.name = "soft-convex";
  p.V = [eps](double r) { return 0.5 * r * r + eps * std::cos(r); };
  p.dV = [eps](double r) { return r - eps * std::sin(r); };
  p.ddV = [eps](double r) { return 1.0 - eps * std::cos(r); };
  p.c_minus = 1.0 - eps;
  p.c_plus = 1.0 + eps;
  p.b = eps;
  return p;
}

// ---------------------------------------------------------------------------
// Models

DensityModel gaussian_model(std::size_t n) {
  if (n < 1) throw std::invalid_argument("gaussian_model: n must be >= 1");
  auto energy = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return 0.5 * s;
  };
  auto grad = [](std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i];
  };
  auto hess = [](std::span<const double>, std::span<double> out) {
    for (double& v : out) v = 1.0;
  };
  // rho = exp(-|x|^2): int_R^inf exp(-x^2) dx < exp(-36)/12 ~ 2e-17 at R = 6.
  return DensityModel("gaussian", n, energy, grad, hess, ConditionBounds{0.0, 0.0, 1.0}, 6.0);
}

DensityModel flat_model(std::size_t n, double truncation) {
  if (n < 1) throw std::invalid_argument("flat_model: n must be >= 1");
  auto energy = [](std::span<const double>) { return 0.0; };
  auto zero = [](std::span<const double>, std::span<double> out) {
    for (double& v : out) v = 0.0;
  };
  return DensityModel("flat", n, energy, zero, zero, ConditionBounds{0.0, 0.0, 0.0}, truncation);
}

DensityModel wetting_model(std::size_t n, const PairPotential& v) {
  if (n < 1) throw std::invalid_argument("wetting_model: n must be >= 1");
  validate_potential(v);
  // Each bond (i, i+1), i = 0..n, appears twice among the ordered neighbour
  // pairs, so H = 1/2 sum_bonds V(x_i - x_{i+1}) with pinned ends.
  auto at = [](std::span<const double> x, std::size_t i) {
    return (i == 0 || i == x.size() + 1) ? 0.0 : x[i - 1];
  };
  auto energy = [V = v.V, at](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i <= x.size(); ++i) s += V(at(x, i) - at(x, i + 1));
    return 0.5 * s;
  };
  auto grad = [dV = v.dV, at](std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 1; i <= x.size(); ++i) {
      out[i - 1] = 0.5 * (dV(x[i - 1] - at(x, i - 1)) + dV(x[i - 1] - at(x, i + 1)));
    }
  };
  auto hess = [ddV = v.ddV, at](std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 1; i <= x.size(); ++i) {
      out[i - 1] = 0.5 * (ddV(x[i - 1] - at(x, i - 1)) + ddV(x[i - 1] - at(x, i + 1)));
    }
  };
  // rho <= e^{(n+1)b} exp(-(c_minus/2) x'Lx) with L the pinned chain Laplacian;
  // each marginal is then dominated by a centred Gaussian of variance
  // 1/(c_minus lambda_min(L)). A 7.5 sigma box (plus margin) leaves < 1e-12.
  const double lambda_min = 2.0 - 2.0 * std::cos(kPi / static_cast<double>(n + 1));
  const double sigma = 1.0 / std::sqrt(v.c_minus * lambda_min);
  const double R = 7.5 * sigma + 1.0;
  const double k1 = static_cast<double>(n) * v.b / 2.0;
  return DensityModel("wetting-" + v.name, n, energy, grad, hess,
                      ConditionBounds{k1, 0.0, v.c_plus}, R);
}

DensityModel scalar_model(std::string name, std::function<double(double)> h,
                          std::function<double(double)> dh, std::function<double(double)> ddh,
                          std::optional<ConditionBounds> bounds, double truncation) {
  if (!h || !dh || !ddh) throw std::invalid_argument("scalar_model: callables required");
  auto energy = [h](std::span<const double> x) { return h(x[0]); };
  auto grad = [dh](std::span<const double> x, std::span<double> out) { out[0] = dh(x[0]); };
  auto hess = [ddh](std::span<const double> x, std::span<double> out) { out[0] = ddh(x[0]); };
  return DensityModel(std::move(name), 1, energy, grad, hess, bounds, truncation);
}

DensityModel bounded_drift_model(double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("bounded_drift_model: c must be finite");
  // d ln phi = c * cutoff, so H = -c * int cutoff.
  auto h = [c](double x) { return -c * cutoff_integral(x); };
  auto dh = [c](double x) { return -c * cutoff(x); };
  auto ddh = [c](double x) { return -c * cutoff_derivative(x); };
  // H >= -1.5 c for c >= 0; |H''| <= 1.875 |c|.
  const ConditionBounds bounds{1.5 * std::fabs(c), std::fmax(-c, 0.0), 1.875 * std::fabs(c)};
  std::ostringstream name;
  name << "bounded-drift(" << c << ")";
  return scalar_model(name.str(), h, dh, ddh, bounds, 10.0);
}

// ---------------------------------------------------------------------------

ConditionReport verify_conditions(const DensityModel& model, double box,
                                  std::size_t grid_resolution) {
  if (!model.bounds()) {
    throw std::invalid_argument("verify_conditions: model '" + model.name() +
                                "' declares no bounds");
  }
  if (!(box > 0.0) || !std::isfinite(box)) {
    throw std::invalid_argument("verify_conditions: box must be finite and > 0");
  }
  if (grid_resolution < 2) throw std::invalid_argument("verify_conditions: resolution >= 2");
  const std::size_t n = model.dim();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > 50'000'000 / grid_resolution) {
      throw std::invalid_argument("verify_conditions: grid too large");
    }
    total *= grid_resolution;
  }
  const ConditionBounds k = *model.bounds();
  const double h = box / static_cast<double>(grid_resolution - 1);
  constexpr double slack = 1e-12;
  const double inf = std::numeric_limits<double>::infinity();

  ConditionReport report;
  report.lower_bound.worst_margin = inf;
  report.boundary_slope.worst_margin = inf;
  report.curvature.worst_margin = inf;

  std::vector<std::size_t> idx(n, 0);
  std::vector<double> x(n), g(n), c(n);
  auto record = [&](ConditionCheck& chk, double margin) {
    if (margin < chk.worst_margin) {
      chk.worst_margin = margin;
      chk.witness = x;
    }
  };
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t r = flat;
    for (std::size_t i = 0; i < n; ++i) {
      idx[i] = r % grid_resolution;
      r /= grid_resolution;
      x[i] = idx[i] == grid_resolution - 1 ? box : h * static_cast<double>(idx[i]);
    }
    const double hv = model.H(x);
    model.grad_H(x, g);
    model.hess_diag_H(x, c);
    if (!std::isfinite(hv)) throw std::domain_error("verify_conditions: non-finite H");
    record(report.lower_bound, hv + k.k1);
    for (std::size_t i = 0; i < n; ++i) {
      if (idx[i] == 0) record(report.boundary_slope, k.k2 - g[i]);
      record(report.curvature, k.k3 - c[i]);
    }
  }
  for (ConditionCheck* chk :
       {&report.lower_bound, &report.boundary_slope, &report.curvature}) {
    chk->passed = chk->worst_margin >= -slack;
  }
  return report;
}

}  // namespace sticky
