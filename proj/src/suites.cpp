// Named validation suites run by `stickysim validate`. Sample sizes are
// chosen so that each suite finishes in well under a minute on one core.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "sticky/diagnostics.hpp"
#include "sticky/girsanov.hpp"
#include "sticky/mathcore.hpp"
#include "sticky/parallel.hpp"
#include "sticky/quadrature.hpp"
#include "sticky/stats.hpp"

namespace sticky {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Timer {
  Clock::time_point start = Clock::now();
  double seconds() const { return std::chrono::duration<double>(Clock::now() - start).count(); }
};

CheckRecord record(std::string name, double statistic, double tolerance, const Timer& timer,
                   std::string relation = "<=") {
  CheckRecord r;
  r.name = std::move(name);
  r.statistic = statistic;
  r.tolerance = tolerance;
  r.relation = std::move(relation);
  r.decide();
  r.runtime_seconds = timer.seconds();
  return r;
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

constexpr double kGrid[] = {0.1, 1.0, 10.0};
constexpr double kStarts[] = {0.0, 0.5, 5.0};

// e^{t/beta^2} erfc(sqrt(t)/beta) at (t, beta) in kGrid x kGrid, 40-digit reference.
constexpr double kAtomAtZero[3][3] = {
    {0.17057771832597265526, 0.72357843847761549756, 0.9652942200040563267},
    {0.056140992743822585858, 0.42758357615580700441, 0.89645697996912664193},
    {0.017832333888542050408, 0.17057771832597265526, 0.72357843847761549756}};

// int_0^inf e^{-lambda t} g(t) dt with t = u^2 to smooth the sqrt(t)
// behaviour of the kernel near t = 0.
double laplace(double lambda, const std::function<double(double)>& g) {
  QuadOptions opts;
  opts.rel_tol = 1e-10;
  opts.abs_tol = 1e-14;
  const double top = std::sqrt(80.0 / lambda);
  return integrate_pieces(
             [&](double u) {
               if (u == 0.0) return 0.0;
               return 2.0 * u * std::exp(-lambda * u * u) * g(u * u);
             },
             {0.0, 0.25 * top, top}, opts)
      .value;
}

void add(SuiteReport& r, CheckRecord c, std::vector<std::uint64_t> seeds = {}) {
  if (!seeds.empty()) c.seeds = std::move(seeds);
  r.checks.push_back(std::move(c));
}

void add_all(SuiteReport& r, std::vector<CheckRecord> cs, std::vector<std::uint64_t> seeds,
             double runtime) {
  for (CheckRecord& c : cs) {
    c.seeds = seeds;
    c.runtime_seconds = runtime;
    r.checks.push_back(std::move(c));
  }
}

// ---------------------------------------------------------------------------

void kernel_suite(SuiteReport& rep, std::uint64_t seed, unsigned threads) {
  {
    Timer tm;
    double worst = 0.0;
    for (double t : kGrid) {
      for (double beta : kGrid) {
        for (double x : kStarts) {
          worst = std::max(worst, std::fabs(transition_mass(t, x, StickyParams(beta)) - 1.0));
        }
      }
    }
    add(rep, record("conservativeness: max |mass - 1|", worst, 1e-6, tm));
  }
  {
    Timer tm;
    double sym = 0.0, bnd = 0.0;
    for (double t : kGrid) {
      for (double beta : kGrid) {
        const StickyParams p(beta);
        for (double x : kStarts) {
          for (double y : kStarts) {
            sym = std::max(sym, rel_diff(transition_density(t, x, y, p),
                                         transition_density(t, y, x, p)));
          }
          bnd = std::max(bnd, rel_diff(transition_atom(t, x, p),
                                       beta * transition_density(t, 0.0, x, p)));
        }
      }
    }
    add(rep, record("mu-symmetry: density(x,y) vs density(y,x), max relative", sym, 1e-12, tm));
    add(rep, record("mu-symmetry: atom(t,x) vs beta density(t,0,x), max relative", bnd, 1e-12, tm));
  }
  {
    Timer tm;
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        worst = std::max(worst, rel_diff(transition_atom(kGrid[i], 0.0, StickyParams(kGrid[j])),
                                         kAtomAtZero[i][j]));
      }
    }
    add(rep, record("atom at 0 vs e^{t/beta^2} erfc(sqrt t / beta), max relative", worst, 1e-13,
                    tm));
  }
  {
    Timer tm;
    const double ys[] = {0.1, 0.5, 1.0, 2.0, 4.0};
    double worst = 0.0;
    for (double s : {0.5, 1.0}) {
      for (double t : {0.5, 1.0}) {
        for (double x : {0.0, 3.0}) {
          worst = std::max(worst, chapman_kolmogorov_residual(s, t, x, StickyParams(1.0), ys));
        }
      }
    }
    worst = std::max(worst, chapman_kolmogorov_residual(1.0, 2.0, 3.0, StickyParams(0.5), ys));
    add(rep, record("Chapman-Kolmogorov residual", worst, 1e-5, tm));
  }
  {
    Timer tm;
    double worst = 0.0;
    const StickyParams p(1.0);
    for (double lambda : {0.5, 1.0, 2.0}) {
      for (double x : {0.0, 1.0}) {
        const double la = laplace(lambda, [&](double t) { return transition_atom(t, x, p); });
        worst = std::max(worst, std::fabs(la - resolvent_atom(lambda, x, p)));
        for (double y : {0.3, 1.5}) {
          const double ld =
              laplace(lambda, [&](double t) { return transition_density(t, x, y, p); });
          worst = std::max(worst, std::fabs(ld - resolvent_density(lambda, x, y, p)));
        }
      }
    }
    add(rep, record("resolvent vs Laplace transform of the kernel, max abs", worst, 1e-4, tm));
  }
  {
    Timer tm;
    const StickyParams p(1.0);
    const double t = 1.0, x = 0.5;
    const std::size_t n = 10000;
    const auto draws = draw_terminal({TerminalSampler::exact}, t, x, p, n, seed, threads);
    const TransitionLaw law(t, x, p);
    std::vector<double> pos;
    for (double v : draws) {
      if (v > 0.0) pos.push_back(v);
    }
    const double atom = law.atom();
    const KsResult ks = ks_one_sample(
        pos, [&](double y) { return (law.cdf(y) - atom) / (1.0 - atom); });
    CheckRecord c = record("exact sampler vs cdf: KS p-value, continuous part", ks.p_value, 0.01,
                           tm, ">=");
    c.details = {{"D", ks.statistic}, {"samples", n}};
    add(rep, c, {seed});
    const double freq = static_cast<double>(n - pos.size()) / static_cast<double>(n);
    const double z = (freq - atom) / std::sqrt(atom * (1.0 - atom) / static_cast<double>(n));
    CheckRecord a = record("exact sampler: atom frequency z-score", std::fabs(z), 3.0, tm);
    a.details = {{"frequency", freq}, {"atom", atom}};
    add(rep, a, {seed});
  }
}

void sampler_suite(SuiteReport& rep, std::uint64_t seed, unsigned threads) {
  const StickyParams p(1.0);
  {
    Timer tm;
    const std::size_t n = 20000;
    const auto a = draw_terminal({TerminalSampler::exact}, 1.0, 0.0, p, n, seed, threads);
    SamplerSpec tc{TerminalSampler::timechange, 1e-3, 1};
    const auto b = draw_terminal(tc, 1.0, 0.0, p, n, seed + 1, threads);
    add_all(rep, sampler_agreement("exact vs time change (dt 1e-3)", a, b), {seed, seed + 1},
            tm.seconds());
  }
  {
    Timer tm;
    const std::size_t n = 20000;
    const auto a = draw_terminal({TerminalSampler::exact}, 1.0, 0.0, p, n, seed + 2, threads);
    SamplerSpec grid{TerminalSampler::exact_grid, 0.0, 32};
    const auto b = draw_terminal(grid, 1.0, 0.0, p, n, seed + 3, threads);
    add_all(rep, sampler_agreement("single step vs 32-step chaining", a, b), {seed + 2, seed + 3},
            tm.seconds());
  }
  {
    Timer tm;
    const std::size_t n = 100;
    const auto pairs = parallel_map<std::pair<double, double>>(n, threads, [&](std::size_t i) {
      Rng rng = Rng::stream(seed + 4, i);
      const PathSample path = sample_timechange(0.0, 1.0, 1e-4, p, rng);
      return std::pair{local_time(path, 0, p), path.reflected_local_time.back()};
    });
    double ell = 0.0, ref = 0.0;
    for (const auto& [a, b] : pairs) {
      ell += a;
      ref += b;
    }
    CheckRecord c = record("local time vs L o tau on time-change paths, relative",
                           std::fabs(ell - ref) / ref, 0.02, tm);
    c.details = {{"paths", n}, {"dt", 1e-4}, {"sum_local_time", ell}, {"sum_L_tau", ref}};
    add(rep, c, {seed + 4});
  }
  {
    Timer tm;
    const std::size_t n = 2000;
    const TimeGrid grid = TimeGrid::uniform(1.0, 1000);
    const double eps[] = {0.05, 0.02, 0.01};
    struct Row {
      double ell;
      double occ[3];
    };
    const auto rows = parallel_map<Row>(n, threads, [&](std::size_t i) {
      Rng rng = Rng::stream(seed + 5, i);
      const double x0[1] = {0.0};
      const PathSample path = sample_exact_grid(x0, grid, p, rng);
      Row r{local_time(path, 0, p), {}};
      for (int k = 0; k < 3; ++k) r.occ[k] = epsilon_occupation(path, 0, eps[k]);
      return r;
    });
    double ell = 0.0;
    std::vector<double> means(3, 0.0);
    for (const Row& r : rows) {
      ell += r.ell / static_cast<double>(n);
      for (int k = 0; k < 3; ++k) means[k] += r.occ[k] / static_cast<double>(n);
    }
    const double limit = fit_line(eps, means).intercept;
    CheckRecord c = record("epsilon-occupation extrapolated to 0 vs local time, relative",
                           std::fabs(limit - ell) / ell, 0.05, tm);
    c.details = {{"eps", eps}, {"occupation", means}, {"extrapolated", limit}, {"local_time", ell}};
    add(rep, c, {seed + 5});
  }
  {
    Timer tm;
    const std::size_t n = 20000;
    const TimeGrid grid = TimeGrid::uniform(1.0, 200);
    const DensityModel flat = flat_model(1);
    const auto paths = parallel_map<PathSample>(n, threads, [&](std::size_t i) {
      Rng rng = Rng::stream(seed + 6, i);
      const double x0[1] = {0.0};
      return sample_exact_grid(x0, grid, p, rng);
    });
    // Left-endpoint occupation over-counts by about dt/2 per unit of
    // boundary-probability decay; dt = 1/200.
    add_all(rep, martingale_residual(paths, flat, p, 0.005), {seed + 6}, tm.seconds());
  }
}

void girsanov_suite(SuiteReport& rep, std::uint64_t seed, unsigned threads) {
  WeightedOptions opts;
  opts.steps = 100;
  opts.threads = threads;
  struct Case {
    DensityModel model;
    std::vector<double> x0;
  };
  std::vector<Case> cases;
  cases.push_back({gaussian_model(1), {1.0}});
  cases.push_back({wetting_model(2, quadratic_potential()), {1.0, 1.0}});
  std::uint64_t s = seed;
  for (const Case& c : cases) {
    Timer tm;
    const StickyParams p(1.0, c.model.dim());
    const WeightedEstimate e = weighted_expectation(
        [](std::span<const double>) { return 1.0; }, 1.0, c.x0, c.model, p, 10000, s, opts);
    CheckRecord r = record("E[Z_1] = 1 z-score (" + c.model.name() + ")",
                           std::fabs(e.estimate - 1.0) / e.std_error, 3.0, tm);
    r.details = {{"estimate", e.estimate}, {"std_error", e.std_error}, {"ess", e.ess}};
    add(rep, r, {s});
    ++s;
  }
  {
    Timer tm;
    const DensityModel g = gaussian_model(1);
    const StickyParams p(1.0);
    std::vector<double> gaps;
    for (double dt : {1e-2, 1e-3, 1e-4}) {
      const auto diffs = parallel_map<double>(200, threads, [&](std::size_t i) {
        Rng rng = Rng::stream(s, i);
        const PathSample path = sample_timechange(1.0, 1.0, dt, p, rng);
        return std::fabs(logweight_ito(path, g, p).total() - logweight_integral(path, g));
      });
      gaps.push_back(mean_estimate(diffs).mean);
    }
    const bool decreasing = gaps[1] < gaps[0] && gaps[2] < gaps[1];
    CheckRecord r = record("Ito vs stochastic-integral log weight: mean gap at dt 1e-4",
                           gaps[2], 0.05, tm);
    r.passed = r.passed && decreasing;
    r.details = {{"dt", {1e-2, 1e-3, 1e-4}}, {"mean_abs_gap", gaps}, {"decreasing", decreasing}};
    add(rep, r, {s});
    ++s;
  }
  {
    Timer tm;
    const StickyParams p(1.0);
    const DensityModel flat = flat_model(1);
    const double x0[1] = {0.5};
    auto f = [](double y) { return std::exp(-y); };
    const WeightedEstimate e = weighted_expectation(
        [&](std::span<const double> y) { return f(y[0]); }, 1.0, x0, flat, p, 20000, s, opts);
    const double exact = kernel_expectation(1.0, 0.5, f, p);
    CheckRecord r = record("flat model: weighted estimate vs kernel quadrature z-score",
                           std::fabs(e.estimate - exact) / e.std_error, 3.0, tm);
    r.details = {{"estimate", e.estimate}, {"quadrature", exact}};
    add(rep, r, {s});
    ++s;
  }
  {
    Timer tm;
    const DensityModel wet = wetting_model(2, quadratic_potential());
    const StickyParams p(1.0, 2);
    std::vector<double> est;
    for (double k : {4.0, 6.0, 8.0}) {
      est.push_back(truncated_weight_probe(1.0, 2.0, k, wet, p, 2000, s, opts).estimate);
    }
    const bool monotone = est[1] <= est[0] && est[2] <= est[1];
    CheckRecord r = record("tail probe at k = 8 (wetting n = 2, D = [0,2]^2)", est[2], 1e-3, tm);
    r.passed = r.passed && monotone;
    r.details = {{"k", {4, 6, 8}}, {"estimates", est}, {"non_increasing", monotone}};
    add(rep, r, {s});
  }
}

void wentzell_suite(SuiteReport& rep) {
  const double times[] = {1e-2, 1e-3, 1e-4};
  add(rep, wentzell_check(StickyParams(1.0), times, WentzellProbe::first_order));
  add(rep, wentzell_check(StickyParams(0.5), times, WentzellProbe::first_order));
  add(rep, wentzell_check(StickyParams(1.0), times, WentzellProbe::cubic));
}

void ergodic_suite(SuiteReport& rep, std::uint64_t seed) {
  {
    ErgodicOptions o;
    o.horizon = 1e4;
    o.dt = 1e-3;
    o.seed = seed;
    add(rep, ergodic_occupation_check(gaussian_model(1), StickyParams(1.0), o));
  }
  {
    ErgodicOptions o;
    o.horizon = 1e4;
    o.dt = 1e-2;
    o.reflect_at = 1.0;
    o.seed = seed + 1;
    add(rep, ergodic_occupation_check(flat_model(1, 1.0), StickyParams(1.0), o));
  }
}

void kato_suite(SuiteReport& rep) {
  const StickyParams p(1.0);
  {
    Timer tm;
    const DensityModel g = gaussian_model(1);
    std::vector<double> lx, lv;
    for (int i = 0; i <= 10; ++i) {
      const double x = 5.0 * std::pow(10.0, i / 10.0);
      lx.push_back(std::log(x));
      lv.push_back(std::log(kato_potential(1.0, x, g, p)));
    }
    const double slope = fit_line(lx, lv).slope;
    CheckRecord r = record("Gaussian Kato potential growth exponent on [5, 50]", slope, 1.9, tm,
                           ">=");
    add(rep, r);
  }
  {
    Timer tm;
    const double c = 1.0, lambda = 1.0;
    const DensityModel b = bounded_drift_model(c);
    double sup = 0.0;
    for (int i = 0; i <= 200; ++i) sup = std::max(sup, kato_potential(lambda, 0.25 * i, b, p));
    const double bound = 4.0 * c * c / lambda;
    CheckRecord r = record("bounded-drift Kato potential sup over [0, 50]", sup, bound, tm);
    add(rep, r);
    Timer tm2;
    double sup_large = 0.0;
    for (int i = 0; i <= 40; ++i) sup_large = std::max(sup_large, kato_potential(1e4, 0.1 * i, b, p));
    add(rep, record("bounded-drift Kato potential sup at lambda = 1e4", sup_large, 1e-3, tm2));
  }
}

std::vector<double> uniform_points(double lo, double hi, double h) {
  std::vector<double> x;
  const auto m = static_cast<std::size_t>(std::llround((hi - lo) / h));
  for (std::size_t j = 0; j <= m; ++j) x.push_back(lo + h * static_cast<double>(j));
  return x;
}

void feller_suite(SuiteReport& rep) {
  const StickyParams p(1.0);
  auto box = [](double y) { return y <= 1.0 ? 1.0 : 0.0; };
  const double kinks[] = {1.0};
  add(rep, feller_refinement_check(
               "Feller probe: p_1 1_[0,1] modulus ratio under grid halving",
               [&](double h) { return feller_probe(1.0, box, uniform_points(0.0, 3.0, h), p, kinks); },
               0.05));
  {
    Timer tm;
    const auto probe =
        feller_probe(1.0, [](double) { return 1.0; }, uniform_points(0.0, 3.0, 0.1), p);
    double worst = 0.0;
    for (double v : probe.values) worst = std::max(worst, std::fabs(v - 1.0));
    add(rep, record("p_t 1 = 1 on [0, 3]", worst, 1e-9, tm));
  }
  {
    Timer tm;
    auto f = [](double y) { return std::exp(-y) * std::cos(y); };
    std::vector<double> sup;
    const auto xs = uniform_points(0.0, 3.0, 0.1);
    for (double t : {1e-2, 1e-3, 1e-4}) {
      const auto probe = feller_probe(t, f, xs, p);
      double worst = 0.0;
      for (std::size_t j = 0; j < xs.size(); ++j) {
        worst = std::max(worst, std::fabs(probe.values[j] - f(xs[j])));
      }
      sup.push_back(worst);
    }
    const bool shrinking = sup[1] < sup[0] && sup[2] < sup[1];
    CheckRecord r = record("sup |p_t f - f| on [0,3] at t = 1e-4", sup[2], 0.02, tm);
    r.passed = r.passed && shrinking;
    r.details = {{"t", {1e-2, 1e-3, 1e-4}}, {"sup_error", sup}};
    add(rep, r);
  }
}

void models_suite(SuiteReport& rep, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 0);
  struct Named {
    DensityModel model;
    double box;
    std::size_t res;
  };
  std::vector<Named> ms;
  ms.push_back({gaussian_model(2), 5.0, 41});
  ms.push_back({wetting_model(2, quadratic_potential()), 5.0, 41});
  ms.push_back({wetting_model(3, quadratic_potential()), 5.0, 21});
  ms.push_back({wetting_model(3, soft_convex_potential(0.5)), 5.0, 21});
  ms.push_back({bounded_drift_model(1.0), 3.0, 601});
  for (const Named& m : ms) {
    Timer tm;
    const ConditionReport cr = verify_conditions(m.model, m.box, m.res);
    const double worst = std::min({cr.lower_bound.worst_margin, cr.boundary_slope.worst_margin,
                                   cr.curvature.worst_margin});
    CheckRecord r = record("conditions (i)-(iii) worst margin (" + m.model.name() + ")", worst,
                           -1e-12, tm, ">=");
    add(rep, r);
  }
  for (const Named& m : ms) {
    Timer tm;
    const std::size_t n = m.model.dim();
    std::vector<double> x(n), g(n), c(n), xp(n), xm(n), gp(n), gm(n);
    double worst = 0.0;
    constexpr double h = 1e-5;
    for (int trial = 0; trial < 100; ++trial) {
      for (double& v : x) v = 0.1 + 4.8 * rng.uniform();
      m.model.grad_H(x, g);
      m.model.hess_diag_H(x, c);
      for (std::size_t i = 0; i < n; ++i) {
        xp = x;
        xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double fd = (m.model.H(xp) - m.model.H(xm)) / (2.0 * h);
        m.model.grad_H(xp, gp);
        m.model.grad_H(xm, gm);
        const double fd2 = (gp[i] - gm[i]) / (2.0 * h);
        worst = std::max(worst, std::fabs(fd - g[i]) / std::max(1.0, std::fabs(g[i])));
        worst = std::max(worst, std::fabs(fd2 - c[i]) / std::max(1.0, std::fabs(c[i])));
      }
    }
    add(rep, record("finite-difference derivatives (" + m.model.name() + ")", worst, 1e-6, tm),
        {seed});
  }
  {
    Timer tm;
    const DensityModel bad = scalar_model(
        "x^3", [](double x) { return x * x * x; }, [](double x) { return 3 * x * x; },
        [](double x) { return 6 * x; }, ConditionBounds{0.0, 0.0, 1.0});
    const ConditionReport cr = verify_conditions(bad, 2.0, 201);
    const double witness = cr.curvature.witness.empty() ? -1.0 : cr.curvature.witness[0];
    CheckRecord r = record("adversarial H = x^3 on [0,2]: curvature witness location", witness,
                           1.9, tm, ">=");
    r.passed = r.passed && !cr.curvature.passed;
    r.details = {{"curvature_margin", cr.curvature.worst_margin}};
    add(rep, r);
  }
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"kernel-invariants", "samplers", "girsanov", "wentzell",
          "ergodic",           "kato",     "feller",   "models"};
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed, unsigned threads) {
  SuiteReport rep;
  rep.suite = name;
  rep.seed = seed;
  auto run_one = [&](const std::string& n) {
    if (n == "kernel-invariants") {
      kernel_suite(rep, seed, threads);
    } else if (n == "samplers") {
      sampler_suite(rep, seed, threads);
    } else if (n == "girsanov") {
      girsanov_suite(rep, seed, threads);
    } else if (n == "wentzell") {
      wentzell_suite(rep);
    } else if (n == "ergodic") {
      ergodic_suite(rep, seed);
    } else if (n == "kato") {
      kato_suite(rep);
    } else if (n == "feller") {
      feller_suite(rep);
    } else if (n == "models") {
      models_suite(rep, seed);
    } else {
      throw std::invalid_argument("unknown suite '" + n + "'");
    }
  };
  if (name == "all") {
    for (const std::string& n : suite_names()) run_one(n);
  } else {
    run_one(name);
  }
  return rep;
}

}  // namespace sticky
