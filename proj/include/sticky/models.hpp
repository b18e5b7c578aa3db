// Density models rho = phi^2 = exp(-2H) on the orthant, described through
// the energy H, its gradient and the diagonal of its Hessian.
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sticky {

/// Constants of the sufficient conditions
///   (i)   H >= -K1 everywhere,
///   (ii)  d_i H <= K2 on each face {x_i = 0},
///   (iii) d_i^2 H <= K3 everywhere.
struct ConditionBounds {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
};

using ScalarField = std::function<double(std::span<const double>)>;
using VectorField = std::function<void(std::span<const double>, std::span<double>)>;

/// Immutable after construction; evaluation is pure and thread-safe as long
/// as the supplied callables are.
class DensityModel {
 public:
  DensityModel(std::string name, std::size_t dim, ScalarField energy, VectorField grad,
               VectorField hess_diag, std::optional<ConditionBounds> bounds = std::nullopt,
               double truncation = 10.0);

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::optional<ConditionBounds>& bounds() const noexcept { return bounds_; }
  /// Per-coordinate box bound R beyond which rho is negligible (tail < 1e-12).
  double truncation() const noexcept { return truncation_; }

  double H(std::span<const double> x) const;
  void grad_H(std::span<const double> x, std::span<double> out) const;
  void hess_diag_H(std::span<const double> x, std::span<double> out) const;

  double phi(std::span<const double> x) const;
  double rho(std::span<const double> x) const;
  /// d_i ln rho = -2 d_i H.
  void drift(std::span<const double> x, std::span<double> out) const;

 private:
  std::string name_;
  std::size_t dim_;
  ScalarField energy_;
  VectorField grad_;
  VectorField hess_diag_;
  std::optional<ConditionBounds> bounds_;
  double truncation_;
};

/// Symmetric, convex pair potential V with c_minus <= V'' <= c_plus, V >= -b.
struct PairPotential {
  std::string name;
  std::function<double(double)> V;
  std::function<double(double)> dV;
  std::function<double(double)> ddV;
  double c_minus = 1.0;
  double c_plus = 1.0;
  double b = 0.0;
};

/// Checks symmetry, curvature bounds, the lower bound and V'(0) = 0 on a grid
/// over [-range, range]; throws std::invalid_argument naming the first
/// violated property.
void validate_potential(const PairPotential& v, double range = 20.0, std::size_t points = 4001);

PairPotential quadratic_potential();
/// V(r) = r^2/2 + eps cos r, 0 <= eps < 1.
PairPotential soft_convex_potential(double eps);

/// H = |x|^2 / 2, so phi = exp(-|x|^2/2) and rho = exp(-|x|^2).
DensityModel gaussian_model(std::size_t n);

/// H = 0.
DensityModel flat_model(std::size_t n, double truncation = 10.0);

/// Nearest-neighbour chain pinned at both ends:
/// H(x) = 1/4 sum_{|i-j|=1, i,j in 0..n+1} V(x_i - x_j), x_0 = x_{n+1} = 0.
DensityModel wetting_model(std::size_t n, const PairPotential& v);

/// One-dimensional adapter for a C^2 energy given as three scalar callables.
DensityModel scalar_model(std::string name, std::function<double(double)> h,
                          std::function<double(double)> dh, std::function<double(double)> ddh,
                          std::optional<ConditionBounds> bounds = std::nullopt,
                          double truncation = 10.0);

/// n = 1 model with d ln phi = c on [0, 1], decaying smoothly to 0 on [1, 2]
/// and vanishing beyond: a bounded drift with compact support.
DensityModel bounded_drift_model(double c);

struct ConditionCheck {
  bool passed = true;
  double worst_margin = 0.0;    ///< min over the grid of (bound - value)
  std::vector<double> witness;  ///< grid point attaining worst_margin
};

struct ConditionReport {
  ConditionCheck lower_bound;     ///< (i)
  ConditionCheck boundary_slope;  ///< (ii)
  ConditionCheck curvature;       ///< (iii)
  bool all_passed() const {
    return lower_bound.passed && boundary_slope.passed && curvature.passed;
  }
};

/// Scans [0, box]^n on a grid with `grid_resolution` points per axis.
/// Requires declared bounds.
ConditionReport verify_conditions(const DensityModel& model, double box,
                                  std::size_t grid_resolution);

}  // namespace sticky
