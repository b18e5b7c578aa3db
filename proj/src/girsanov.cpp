#include "sticky/girsanov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sticky/mathcore.hpp"
#include "sticky/parallel.hpp"
#include "sticky/quadrature.hpp"
#include "sticky/rng.hpp"
#include "sticky/stats.hpp"

namespace sticky {
namespace {

[[noreturn]] void non_finite(const char* what, std::span<const double> x) {
  std::ostringstream msg;
  msg << what << ": non-finite energy or derivative at x = (";
  for (std::size_t i = 0; i < x.size(); ++i) msg << (i ? ", " : "") << x[i];
  msg << ")";
  throw std::domain_error(msg.str());
}

// Left-endpoint contribution of one step to the Ito-form log weight.
struct ItoAccumulator {
  const DensityModel& model;
  double inv_beta;
  std::vector<double> g, c;
  double boundary = 0.0;
  double bulk = 0.0;

  ItoAccumulator(const DensityModel& m, const StickyParams& p)
      : model(m), inv_beta(1.0 / p.beta), g(m.dim()), c(m.dim()) {}

  void add(std::span<const double> x, double h) {
    model.grad_H(x, g);
    model.hess_diag_H(x, c);
    double b = 0.0, v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(g[i]) || !std::isfinite(c[i])) non_finite("logweight_ito", x);
      if (x[i] == 0.0) {
        b += g[i];
      } else {
        v += c[i] - g[i] * g[i];
      }
    }
    boundary += inv_beta * b * h;
    bulk += v * h;
  }
};

double energy(const DensityModel& model, std::span<const double> x) {
  const double h = model.H(x);
  if (!std::isfinite(h)) non_finite("logweight_ito", x);
  return h;
}

}  // namespace

LogWeight logweight_ito(const PathSample& path, const DensityModel& model,
                        const StickyParams& params) {
  if (path.dim != model.dim()) throw std::invalid_argument("logweight_ito: dimension mismatch");
  ItoAccumulator acc(model, params);
  const std::size_t steps = path.grid.steps();
  for (std::size_t k = 0; k < steps; ++k) acc.add(path.state(k), path.grid.dt(k));
  LogWeight w;
  w.endpoint = energy(model, path.state(0)) - energy(model, path.state(steps));
  w.boundary = acc.boundary;
  w.bulk = acc.bulk;
  return w;
}

double logweight_integral(const PathSample& path, const DensityModel& model) {
  if (path.dim != model.dim()) {
    throw std::invalid_argument("logweight_integral: dimension mismatch");
  }
  if (!path.has_noise()) throw std::invalid_argument("logweight_integral: path carries no noise");
  const std::size_t n = path.dim;
  std::vector<double> g(n);
  double mart = 0.0, quad = 0.0;
  for (std::size_t k = 0; k < path.grid.steps(); ++k) {
    const auto x = path.state(k);
    model.grad_H(x, g);
    const double h = path.grid.dt(k);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(x[i] > 0.0)) continue;
      const double dlnphi = -g[i];
      if (!std::isfinite(dlnphi)) non_finite("logweight_integral", x);
      mart += dlnphi * path.noise[k * n + i];
      quad += dlnphi * dlnphi * h;
    }
  }
  return kSqrt2 * mart - quad;
}

// ---------------------------------------------------------------------------

WeightedEnsemble simulate_weighted(double t, std::span<const double> x0,
                                   const DensityModel& model, const StickyParams& params,
                                   std::size_t n_paths, std::uint64_t seed,
                                   const WeightedOptions& opts) {
  params.validate();
  if (model.dim() != params.dim || x0.size() != params.dim) {
    throw std::invalid_argument("simulate_weighted: dimension mismatch");
  }
  if (opts.steps < 1) throw std::invalid_argument("simulate_weighted: steps must be >= 1");
  const TimeGrid grid = TimeGrid::uniform(t, opts.steps);
  grid.validate();
  for (double v : x0) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("simulate_weighted: x0 must be finite and >= 0");
    }
  }
  const std::size_t n = params.dim;
  struct Outcome {
    std::vector<double> x;
    double lw = 0.0;
  };
  // Same draws and sums as sample_exact_grid + logweight_ito, without
  // storing the path.
  const auto outcomes = parallel_map<Outcome>(n_paths, opts.threads, [&](std::size_t p) {
    Rng rng = Rng::stream(seed, p);
    ItoAccumulator acc(model, params);
    std::vector<double> x(x0.begin(), x0.end());
    for (std::size_t k = 0; k < grid.steps(); ++k) {
      const double h = grid.dt(k);
      acc.add(x, h);
      for (std::size_t i = 0; i < n; ++i) x[i] = sample_transition(h, x[i], params, rng);
    }
    const double lw = energy(model, x0) - energy(model, x) + acc.boundary + acc.bulk;
    return Outcome{std::move(x), lw};
  });
  WeightedEnsemble e;
  e.dim = n;
  e.terminal.reserve(n_paths * n);
  e.log_weight.reserve(n_paths);
  for (const Outcome& o : outcomes) {
    e.terminal.insert(e.terminal.end(), o.x.begin(), o.x.end());
    e.log_weight.push_back(o.lw);
  }
  return e;
}

WeightedEstimate weighted_expectation(const PointFunction& f, double t,
                                      std::span<const double> x0, const DensityModel& model,
                                      const StickyParams& params, std::size_t n_paths,
                                      std::uint64_t seed, const WeightedOptions& opts) {
  if (n_paths < 100) throw std::invalid_argument("weighted_expectation: n_paths must be >= 100");
  const WeightedEnsemble e = simulate_weighted(t, x0, model, params, n_paths, seed, opts);
  std::vector<double> zf(n_paths), z(n_paths), z2(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p) {
    z[p] = std::exp(e.log_weight[p]);
    z2[p] = z[p] * z[p];
    zf[p] = z[p] * f(std::span<const double>(e.terminal.data() + p * e.dim, e.dim));
  }
  const MeanEstimate m = mean_estimate(zf);
  const double sz = pairwise_sum(z);
  const double sz2 = pairwise_sum(z2);
  return {m.mean, m.std_error, sz2 > 0.0 ? sz * sz / sz2 : 0.0};
}

// ---------------------------------------------------------------------------

double tail_bound_C(double k, double d, double t, std::size_t n) {
  if (!(d >= 0.0) || !(k > d) || !std::isfinite(k)) {
    throw std::domain_error("tail_bound_C: need k > d >= 0");
  }
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("tail_bound_C: t must be > 0");
  const double gap = k - d;
  return static_cast<double>(n) * std::sqrt(t / (2.0 * kPi)) * 4.0 / gap *
         std::exp(-gap * gap / (2.0 * t));
}

TailProbe truncated_weight_probe(double t, double box, double k, const DensityModel& model,
                                 const StickyParams& params, std::size_t n_paths,
                                 std::uint64_t seed, const WeightedOptions& opts) {
  params.validate();
  if (!(box > 0.0) || !(k > box)) {
    throw std::domain_error("truncated_weight_probe: need k > box > 0");
  }
  if (model.dim() != params.dim) {
    throw std::invalid_argument("truncated_weight_probe: dimension mismatch");
  }
  const std::size_t n = params.dim;
  if (n > 10) throw std::invalid_argument("truncated_weight_probe: n > 10 refused");
  std::vector<std::vector<double>> points;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1u ? box : 0.0;
    points.push_back(x);
  }
  points.emplace_back(n, 0.5 * box);

  const TimeGrid grid = TimeGrid::uniform(t, opts.steps);
  TailProbe probe;
  probe.estimate = -1.0;
  for (const auto& x0 : points) {
    const auto values = parallel_map<double>(n_paths, opts.threads, [&](std::size_t p) {
      Rng rng = Rng::stream(seed, p);
      const PathSample path = sample_exact_grid(x0, grid, params, rng);
      const auto& s = path.states;
      if (std::none_of(s.begin(), s.end(), [k](double v) { return v >= k; })) return 0.0;
      return std::exp(logweight_ito(path, model, params).total());
    });
    const double est = mean_estimate(values).mean;
    if (est > probe.estimate) {
      probe.estimate = est;
      probe.argmax = x0;
    }
  }

  double sup_h = -std::numeric_limits<double>::infinity();
  for (const auto& x : points) sup_h = std::max(sup_h, model.H(x));
  if (model.bounds()) {
    const ConditionBounds& K = *model.bounds();
    const double nd = static_cast<double>(n);
    const double expo = sup_h + K.k1 + nd * K.k2 * t / params.beta + nd * K.k3 * t;
    probe.holder_bound = std::exp(expo) * std::sqrt(tail_bound_C(k, box, t, n));
  } else {
    probe.holder_bound = std::numeric_limits<double>::infinity();
  }
  return probe;
}

double kato_potential(double lambda, double x, const DensityModel& model,
                      const StickyParams& params) {
  if (model.dim() != 1) throw std::invalid_argument("kato_potential: n = 1 models only");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("kato_potential: lambda must be finite and > 0");
  }
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::domain_error("kato_potential: x must be finite and >= 0");
  }
  auto integrand = [&](double y) {
    double g = 0.0;
    model.grad_H(std::span<const double>(&y, 1), std::span<double>(&g, 1));
    return resolvent_density(lambda, x, y, params) * 2.0 * g * g;
  };
  // The resolvent decays like exp(-sqrt(lambda) |x - y|); 60 decay lengths
  // beyond max(x, R) leave a negligible tail for polynomially growing drifts.
  const double reach = 60.0 / std::sqrt(lambda);
  const double top = std::max(x, model.truncation()) + reach;
  std::vector<double> breaks{0.0};
  for (double b : {x - reach, x, x + reach, model.truncation()}) {
    if (b > 0.0 && b < top) breaks.push_back(b);
  }
  breaks.push_back(top);
  std::sort(breaks.begin(), breaks.end());
  QuadOptions opts;
  opts.rel_tol = 1e-10;
  opts.abs_tol = 1e-15;
  try {
    const double v = integrate_pieces(integrand, breaks, opts).value;
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  } catch (const QuadratureError& e) {
    if (!std::isfinite(e.achieved().value)) return std::numeric_limits<double>::infinity();
    throw;
  }
}

}  // namespace sticky
