// Numerical verdicts on structural properties of the sticky and distorted
// processes. Each check yields a CheckRecord with its statistic, threshold
// and seeds; suites bundle checks into a SuiteReport.
//
// The Feller probe and the sampler-agreement test are consistency evidence
// only: a continuity modulus on a finite grid cannot establish the strong
// Feller property, and agreement of two samplers cannot establish
// uniqueness in law.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sticky/kernel.hpp"
#include "sticky/measure.hpp"
#include "sticky/models.hpp"
#include "sticky/paths.hpp"

namespace sticky {

struct CheckRecord {
  std::string name;
  double statistic = 0.0;
  double tolerance = 0.0;
  std::string relation = "<=";  ///< pass iff `statistic relation tolerance`
  bool passed = false;
  std::vector<std::uint64_t> seeds;
  double runtime_seconds = 0.0;
  nlohmann::json details = nlohmann::json::object();

  /// Sets `passed` from statistic, relation and tolerance.
  void decide();
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;

  bool passed() const;
  /// Runtimes are left out unless requested so that reports stay
  /// byte-identical across runs.
  nlohmann::json to_json(bool with_timings = false) const;
};

// --- ergodic occupation ----------------------------------------------------

struct ErgodicOptions {
  double horizon = 1e4;
  double dt = 1e-3;
  double x0 = 0.0;
  double reflect_at = std::numeric_limits<double>::infinity();
  double tolerance = 0.05;  ///< relative
  std::uint64_t seed = 1;
  std::size_t resolution = 128;  ///< quadrature nodes for the target
};

/// (1/T) int 1{X^1_s = 0} ds along one splitting path versus
/// int 1{x_1=0} rho dmu / int rho dmu (truncated at reflect_at when finite,
/// else at the model truncation).
CheckRecord ergodic_occupation_check(const DensityModel& model, const StickyParams& params,
                                     const ErgodicOptions& opts);

// --- martingale residual ---------------------------------------------------

/// For each component, the residual
///   M = X_t - X_0 - int 1{X>0} d ln rho ds - (1/beta) int 1{X=0} ds
/// should have mean 0 and E[M^2] = 2 E[int 1{X>0} ds]. Both are tested by
/// z-scores against 3, widened by `band` for discretization bias.
std::vector<CheckRecord> martingale_residual(std::span<const PathSample> ensemble,
                                             const DensityModel& model,
                                             const StickyParams& params, double band = 0.0);

// --- Wentzell boundary condition -------------------------------------------

enum class WentzellProbe {
  first_order,  ///< f(y) = (y + y^2 / 2 beta) cutoff(y); limit 1/beta
  cubic,        ///< f(y) = y^3 cutoff(y); limit 0
};

struct WentzellResult {
  std::vector<double> times;
  std::vector<double> quotients;  ///< (p_t f(0) - f(0)) / t
  double extrapolated = 0.0;      ///< intercept of a line fit in t
  double target = 0.0;
};

WentzellResult wentzell_quotients(const StickyParams& params, std::span<const double> times,
                                  WentzellProbe probe);

/// Relative error (absolute for the cubic probe) of the extrapolated limit.
CheckRecord wentzell_check(const StickyParams& params, std::span<const double> times,
                           WentzellProbe probe, double tolerance = 0.02);

// --- Feller probe ----------------------------------------------------------

struct FellerProbe {
  std::vector<double> x;
  std::vector<double> values;  ///< p_t f on the grid
  double modulus = 0.0;        ///< max |p_t f(x_{j+1}) - p_t f(x_j)|
};

/// p_t f on x_grid by kernel quadrature (driftless process). `kinks` lists
/// discontinuities of f.
FellerProbe feller_probe(double t, const std::function<double(double)>& f,
                         std::span<const double> x_grid, const StickyParams& params,
                         std::span<const double> kinks = {});

/// p_t f on x_grid for a distorted n = 1 model by Girsanov-weighted Monte
/// Carlo with common random numbers across grid points.
FellerProbe feller_probe(double t, const std::function<double(double)>& f,
                         std::span<const double> x_grid, const StickyParams& params,
                         const DensityModel& model, std::size_t n_paths, std::uint64_t seed,
                         std::size_t steps = 100, unsigned threads = 1);

/// Continuity smoke test on [0, span] at spacing h and h/2: passes when the
/// modulus shrinks by the factor `ratio` and the finer one is below `limit`.
CheckRecord feller_refinement_check(const std::string& name,
                                    const std::function<FellerProbe(double)>& probe_at_spacing,
                                    double h, double ratio = 0.75, double limit = 0.05);

// --- sampler agreement -----------------------------------------------------

enum class TerminalSampler { exact, exact_grid, timechange };

struct SamplerSpec {
  TerminalSampler kind = TerminalSampler::exact;
  double dt = 1e-4;          ///< time-change internal step
  std::size_t steps = 32;    ///< exact_grid steps
};

/// n_paths draws of X_t from x0 (n = 1); path p uses Rng::stream(seed, p).
std::vector<double> draw_terminal(const SamplerSpec& spec, double t, double x0,
                                  const StickyParams& params, std::size_t n_paths,
                                  std::uint64_t seed, unsigned threads = 1);

/// Two-sample KS on the strictly positive parts (level `alpha`) and a
/// two-proportion z-test (|z| <= 3) on the atom frequencies.
std::vector<CheckRecord> sampler_agreement(const std::string& name, std::span<const double> a,
                                           std::span<const double> b, double alpha = 0.01);

// --- suites ----------------------------------------------------------------

/// Known suite names, in the order `all` runs them.
std::vector<std::string> suite_names();

/// Runs a named suite ("kernel-invariants", "samplers", "girsanov",
/// "wentzell", "ergodic", "kato", "feller", "models", "all"). Throws
/// std::invalid_argument for unknown names.
SuiteReport run_suite(const std::string& name, std::uint64_t seed, unsigned threads = 1);

}  // namespace sticky
