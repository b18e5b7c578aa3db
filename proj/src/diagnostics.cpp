#include "sticky/diagnostics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "sticky/girsanov.hpp"
#include "sticky/mathcore.hpp"
#include "sticky/parallel.hpp"
#include "sticky/quadrature.hpp"
#include "sticky/rng.hpp"
#include "sticky/stats.hpp"

namespace sticky {

using nlohmann::json;

void CheckRecord::decide() {
  if (relation == "<=") {
    passed = statistic <= tolerance;
  } else if (relation == ">=") {
    passed = statistic >= tolerance;
  } else {
    throw std::logic_error("CheckRecord: unknown relation '" + relation + "'");
  }
  if (std::isnan(statistic)) passed = false;
}

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.passed; });
}

json SuiteReport::to_json(bool with_timings) const {
  json out;
  out["suite"] = suite;
  out["seed"] = seed;
  out["passed"] = passed();
  json list = json::array();
  for (const CheckRecord& c : checks) {
    json j;
    j["name"] = c.name;
    j["statistic"] = c.statistic;
    j["relation"] = c.relation;
    j["tolerance"] = c.tolerance;
    j["passed"] = c.passed;
    j["seeds"] = c.seeds;
    if (with_timings) j["runtime_seconds"] = c.runtime_seconds;
    if (!c.details.empty()) j["details"] = c.details;
    list.push_back(std::move(j));
  }
  out["checks"] = std::move(list);
  out["note"] =
      "feller and sampler-agreement checks are falsification probes, not proofs of the "
      "strong Feller property or of uniqueness in law";
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

CheckRecord make_record(std::string name, double statistic, double tolerance,
                        std::string relation = "<=") {
  CheckRecord r;
  r.name = std::move(name);
  r.statistic = statistic;
  r.tolerance = tolerance;
  r.relation = std::move(relation);
  r.decide();
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

CheckRecord ergodic_occupation_check(const DensityModel& model, const StickyParams& params,
                                     const ErgodicOptions& opts) {
  const auto start = Clock::now();
  const std::size_t n = params.dim;
  ProductMeasureSpec spec;
  spec.n = n;
  spec.beta = params.beta;
  spec.R = std::isfinite(opts.reflect_at) ? opts.reflect_at : model.truncation();
  spec.resolution = opts.resolution;
  const double target = stationary_expectation(
      [](std::span<const double> x) { return x[0] == 0.0 ? 1.0 : 0.0; }, model, spec);

  const std::size_t steps = static_cast<std::size_t>(std::llround(opts.horizon / opts.dt));
  if (steps < 1) throw std::invalid_argument("ergodic_occupation_check: horizon < dt");
  EulerSplitting stepper(model, params, opts.dt, opts.reflect_at);
  Rng rng = Rng::stream(opts.seed, 0);
  std::vector<double> x(n, opts.x0);
  std::size_t zero_steps = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    if (x[0] == 0.0) ++zero_steps;
    stepper.step(x, rng);
  }
  const double fraction = static_cast<double>(zero_steps) / static_cast<double>(steps);
  CheckRecord r = make_record("ergodic occupation of {x_1 = 0} (" + model.name() + ")",
                              std::fabs(fraction - target) / target, opts.tolerance);
  r.seeds = {opts.seed};
  r.details = {{"fraction", fraction}, {"target", target},       {"horizon", opts.horizon},
               {"dt", opts.dt},        {"beta", params.beta}};
  r.runtime_seconds = seconds_since(start);
  return r;
}

// ---------------------------------------------------------------------------

std::vector<CheckRecord> martingale_residual(std::span<const PathSample> ensemble,
                                             const DensityModel& model,
                                             const StickyParams& params, double band) {
  if (ensemble.size() < 2) throw std::invalid_argument("martingale_residual: need >= 2 paths");
  const std::size_t n = model.dim();
  std::vector<CheckRecord> out;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> m(ensemble.size()), qv(ensemble.size());
    for (std::size_t p = 0; p < ensemble.size(); ++p) {
      const PathSample& path = ensemble[p];
      if (path.dim != n) throw std::invalid_argument("martingale_residual: dimension mismatch");
      double drift = 0.0, bulk_time = 0.0;
      for (std::size_t k = 0; k < path.grid.steps(); ++k) {
        const auto x = path.state(k);
        if (!(x[i] > 0.0)) continue;
        model.grad_H(x, g);
        drift += -2.0 * g[i] * path.grid.dt(k);
        bulk_time += path.grid.dt(k);
      }
      const std::size_t last = path.grid.steps();
      m[p] = path.at(last, i) - path.at(0, i) - drift - local_time(path, i, params);
      qv[p] = m[p] * m[p] - 2.0 * bulk_time;
    }
    const MeanEstimate em = mean_estimate(m);
    const MeanEstimate eq = mean_estimate(qv);
    auto z_excess = [band](const MeanEstimate& e) {
      return std::max(0.0, std::fabs(e.mean) - band) / e.std_error;
    };
    CheckRecord a = make_record("martingale residual mean, component " + std::to_string(i + 1),
                                z_excess(em), 3.0);
    a.details = {{"mean", em.mean}, {"std_error", em.std_error}, {"band", band}};
    CheckRecord b = make_record(
        "quadratic variation identity, component " + std::to_string(i + 1), z_excess(eq), 3.0);
    b.details = {{"mean", eq.mean}, {"std_error", eq.std_error}, {"band", band}};
    out.push_back(std::move(a));
    out.push_back(std::move(b));
  }
  return out;
}

// ---------------------------------------------------------------------------

WentzellResult wentzell_quotients(const StickyParams& params, std::span<const double> times,
                                  WentzellProbe probe) {
  params.validate();
  if (times.size() < 2) throw std::invalid_argument("wentzell_check: need >= 2 times");
  const double beta = params.beta;
  std::function<double(double)> f;
  WentzellResult r;
  if (probe == WentzellProbe::first_order) {
    f = [beta](double y) { return (y + y * y / (2.0 * beta)) * cutoff(y); };
    r.target = 1.0 / beta;
  } else {
    f = [](double y) { return y * y * y * cutoff(y); };
    r.target = 0.0;
  }
  const double kinks[] = {1.0, 2.0};
  for (double t : times) {
    const double pf = kernel_expectation(t, 0.0, f, params, kinks);
    r.times.push_back(t);
    r.quotients.push_back((pf - f(0.0)) / t);
  }
  r.extrapolated = fit_line(r.times, r.quotients).intercept;
  return r;
}

CheckRecord wentzell_check(const StickyParams& params, std::span<const double> times,
                           WentzellProbe probe, double tolerance) {
  const auto start = Clock::now();
  const WentzellResult w = wentzell_quotients(params, times, probe);
  const bool relative = w.target != 0.0;
  const double err = relative ? std::fabs(w.extrapolated - w.target) / std::fabs(w.target)
                              : std::fabs(w.extrapolated);
  CheckRecord r = make_record(std::string("Wentzell limit, ") +
                                  (probe == WentzellProbe::first_order ? "f = y + y^2/2beta"
                                                                       : "f = y^3") +
                                  ", beta = " + json(params.beta).dump(),
                              err, tolerance);
  r.details = {{"times", w.times},
               {"quotients", w.quotients},
               {"extrapolated", w.extrapolated},
               {"target", w.target},
               {"error", relative ? "relative" : "absolute"}};
  r.runtime_seconds = seconds_since(start);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

double max_increment(std::span<const double> v) {
  double m = 0.0;
  for (std::size_t j = 1; j < v.size(); ++j) m = std::max(m, std::fabs(v[j] - v[j - 1]));
  return m;
}

}  // namespace

FellerProbe feller_probe(double t, const std::function<double(double)>& f,
                         std::span<const double> x_grid, const StickyParams& params,
                         std::span<const double> kinks) {
  FellerProbe p;
  p.x.assign(x_grid.begin(), x_grid.end());
  for (double x : x_grid) p.values.push_back(kernel_expectation(t, x, f, params, kinks));
  p.modulus = max_increment(p.values);
  return p;
}

FellerProbe feller_probe(double t, const std::function<double(double)>& f,
                         std::span<const double> x_grid, const StickyParams& params,
                         const DensityModel& model, std::size_t n_paths, std::uint64_t seed,
                         std::size_t steps, unsigned threads) {
  if (model.dim() != 1 || params.dim != 1) {
    throw std::invalid_argument("feller_probe: n = 1 models only");
  }
  FellerProbe p;
  p.x.assign(x_grid.begin(), x_grid.end());
  WeightedOptions opts;
  opts.steps = steps;
  opts.threads = threads;
  for (double x : x_grid) {
    const double x0[1] = {x};
    const WeightedEstimate e = weighted_expectation(
        [&](std::span<const double> y) { return f(y[0]); }, t, x0, model, params, n_paths, seed,
        opts);
    p.values.push_back(e.estimate);
  }
  p.modulus = max_increment(p.values);
  return p;
}

CheckRecord feller_refinement_check(const std::string& name,
                                    const std::function<FellerProbe(double)>& probe_at_spacing,
                                    double h, double ratio, double limit) {
  const auto start = Clock::now();
  const FellerProbe coarse = probe_at_spacing(h);
  const FellerProbe fine = probe_at_spacing(0.5 * h);
  const double observed = coarse.modulus > 0.0 ? fine.modulus / coarse.modulus : 0.0;
  CheckRecord r = make_record(name, observed, ratio);
  r.passed = r.passed && fine.modulus < limit;
  r.details = {{"spacing", h},
               {"modulus_coarse", coarse.modulus},
               {"modulus_fine", fine.modulus},
               {"fine_modulus_limit", limit},
               {"scope", "continuity smoke test on a finite grid; not a proof"}};
  r.runtime_seconds = seconds_since(start);
  return r;
}

// ---------------------------------------------------------------------------

std::vector<double> draw_terminal(const SamplerSpec& spec, double t, double x0,
                                  const StickyParams& params, std::size_t n_paths,
                                  std::uint64_t seed, unsigned threads) {
  if (params.dim != 1) throw std::invalid_argument("draw_terminal: n must be 1");
  const TimeGrid grid = spec.kind == TerminalSampler::exact_grid
                            ? TimeGrid::uniform(t, spec.steps)
                            : TimeGrid::uniform(t, 1);
  return parallel_map<double>(n_paths, threads, [&](std::size_t p) {
    Rng rng = Rng::stream(seed, p);
    switch (spec.kind) {
      case TerminalSampler::exact:
        return sample_transition(t, x0, params, rng);
      case TerminalSampler::exact_grid: {
        double x = x0;
        for (std::size_t k = 0; k < grid.steps(); ++k) {
          x = sample_transition(grid.dt(k), x, params, rng);
        }
        return x;
      }
      case TerminalSampler::timechange:
        return sample_timechange_terminal(x0, t, spec.dt, params, rng);
    }
    throw std::logic_error("draw_terminal: unknown sampler");
  });
}

std::vector<CheckRecord> sampler_agreement(const std::string& name, std::span<const double> a,
                                           std::span<const double> b, double alpha) {
  std::vector<double> pa, pb;
  std::size_t za = 0, zb = 0;
  for (double v : a) {
    if (v == 0.0) ++za; else pa.push_back(v);
  }
  for (double v : b) {
    if (v == 0.0) ++zb; else pb.push_back(v);
  }
  const KsResult ks = ks_two_sample(pa, pb);
  CheckRecord k = make_record(name + ": KS on continuous parts (p-value)", ks.p_value, alpha, ">=");
  k.details = {{"D", ks.statistic}, {"n_a", pa.size()}, {"n_b", pb.size()}};
  const double z = two_proportion_z(za, a.size(), zb, b.size());
  CheckRecord atom = make_record(name + ": atom frequency z-score", std::fabs(z), 3.0);
  atom.details = {{"freq_a", static_cast<double>(za) / static_cast<double>(a.size())},
                  {"freq_b", static_cast<double>(zb) / static_cast<double>(b.size())}};
  return {k, atom};
}

}  // namespace sticky
