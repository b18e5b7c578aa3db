#include "sticky/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sticky/diagnostics.hpp"
#include "sticky/girsanov.hpp"
#include "sticky/kernel.hpp"
#include "sticky/measure.hpp"
#include "sticky/models.hpp"
#include "sticky/parallel.hpp"
#include "sticky/paths.hpp"
#include "sticky/stats.hpp"

namespace sticky {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Kind { real, count, seed, text, reals, flag };

struct Field {
  std::string name;
  Kind kind;
  json fallback;
  std::string help;
  std::vector<std::string> choices = {};
};

const std::vector<std::string> kModels = {"flat", "gaussian", "wetting-quadratic",
                                          "wetting-soft-convex", "bounded-drift"};

std::vector<Field> schema(const std::string& command) {
  std::vector<Field> f = {
      {"seed", Kind::seed, 1, "master seed; path p uses stream p"},
      {"threads", Kind::count, 1, "worker threads (0 = hardware)"},
      {"output", Kind::text, "", "artifact path (relative to $STICKY_OUTPUT_DIR if set)"},
  };
  auto add = [&f](Field x) { f.push_back(std::move(x)); };
  if (command == "kernel") {
    add({"format", Kind::text, "csv", "artifact format", {"csv", "json"}});
    add({"t", Kind::real, 1.0, "time > 0"});
    add({"x", Kind::real, 0.0, "starting point >= 0"});
    add({"beta", Kind::real, 1.0, "stickiness > 0"});
    add({"grid", Kind::text, "0:5:0.01", "y grid lo:hi:step"});
    add({"form", Kind::text, "rescaled", "kernel form", {"rescaled", "printed"}});
  } else if (command == "simulate") {
    add({"format", Kind::text, "json", "csv = full paths, json = summary", {"csv", "json"}});
    add({"sampler", Kind::text, "exact", "path sampler", {"exact", "timechange", "euler"}});
    add({"model", Kind::text, "flat", "density model (euler only)", kModels});
    add({"n", Kind::count, 1, "dimension"});
    add({"beta", Kind::real, 1.0, "stickiness > 0"});
    add({"x0", Kind::reals, json::array({0.0}), "start, one value or one per component"});
    add({"horizon", Kind::real, 1.0, "final time"});
    add({"dt", Kind::real, 0.01, "time step"});
    add({"paths", Kind::count, 1, "number of paths"});
    add({"eps", Kind::real, 0.5, "soft-convex potential parameter"});
    add({"drift", Kind::real, 1.0, "bounded-drift model constant"});
  } else if (command == "girsanov") {
    add({"format", Kind::text, "json", "artifact format", {"json"}});
    add({"model", Kind::text, "gaussian", "density model", kModels});
    add({"n", Kind::count, 1, "dimension"});
    add({"beta", Kind::real, 1.0, "stickiness > 0"});
    add({"t", Kind::real, 1.0, "time > 0"});
    add({"x0", Kind::reals, json::array({1.0}), "start, one value or one per component"});
    add({"f", Kind::text, "exp", "test function", {"one", "exp", "box"}});
    add({"paths", Kind::count, 10000, "number of paths (>= 100)"});
    add({"steps", Kind::count, 200, "exact-grid steps on [0, t]"});
    add({"eps", Kind::real, 0.5, "soft-convex potential parameter"});
    add({"drift", Kind::real, 1.0, "bounded-drift model constant"});
  } else if (command == "validate") {
    add({"format", Kind::text, "json", "artifact format", {"json"}});
    std::vector<std::string> suites = suite_names();
    suites.push_back("all");
    add({"suite", Kind::text, "kernel-invariants", "suite name", suites});
    add({"timings", Kind::flag, false, "include runtimes (breaks byte-identity)"});
  } else if (command == "wetting") {
    add({"format", Kind::text, "json", "artifact format", {"json"}});
    add({"n", Kind::count, 3, "number of sites"});
    add({"potential", Kind::text, "quadratic", "pair potential", {"quadratic", "soft-convex"}});
    add({"eps", Kind::real, 0.5, "soft-convex potential parameter"});
    add({"beta", Kind::real, 1.0, "stickiness > 0"});
    add({"horizon", Kind::real, 1000.0, "path length"});
    add({"dt", Kind::real, 1e-3, "time step"});
    add({"x0", Kind::reals, json::array({1.0}), "start, one value or one per site"});
    add({"resolution", Kind::count, 32, "quadrature nodes per axis for the targets"});
  }
  return f;
}

// --- value parsing ---------------------------------------------------------

double parse_real(const std::string& field, const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw UsageError("field '" + field + "': expected a finite number, got '" + s + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& field, const std::string& s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw UsageError("field '" + field + "': expected a non-negative integer, got '" + s + "'");
  }
  return v;
}

json from_text(const Field& f, const std::string& s) {
  switch (f.kind) {
    case Kind::real:
      return parse_real(f.name, s);
    case Kind::count:
    case Kind::seed:
      return parse_unsigned(f.name, s);
    case Kind::text:
      return s;
    case Kind::reals: {
      json arr = json::array();
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) arr.push_back(parse_real(f.name, item));
      if (arr.empty()) throw UsageError("field '" + f.name + "': empty list");
      return arr;
    }
    case Kind::flag:
      return true;
  }
  throw std::logic_error("unreachable");
}

json from_config(const Field& f, const json& v) {
  auto bad = [&](const char* want) {
    return UsageError("field '" + f.name + "': expected " + want + ", got " + v.dump());
  };
  switch (f.kind) {
    case Kind::real:
      if (!v.is_number() || !std::isfinite(v.get<double>())) throw bad("a finite number");
      return v.get<double>();
    case Kind::count:
    case Kind::seed:
      if (!v.is_number_unsigned()) throw bad("a non-negative integer");
      return v;
    case Kind::text:
      if (!v.is_string()) throw bad("a string");
      return v;
    case Kind::reals:
      if (v.is_number()) return json::array({v.get<double>()});
      if (!v.is_array() || v.empty()) throw bad("a number or a non-empty array of numbers");
      for (const json& e : v) {
        if (!e.is_number()) throw bad("an array of numbers");
      }
      return v;
    case Kind::flag:
      if (!v.is_boolean()) throw bad("a boolean");
      return v;
  }
  throw std::logic_error("unreachable");
}

void check_choice(const Field& f, const json& v) {
  if (f.choices.empty()) return;
  const std::string s = v.get<std::string>();
  for (const auto& c : f.choices) {
    if (c == s) return;
  }
  std::string list;
  for (const auto& c : f.choices) list += (list.empty() ? "" : ", ") + c;
  throw UsageError("field '" + f.name + "': '" + s + "' is not one of {" + list + "}");
}

// --- resolved configuration ------------------------------------------------

class Config {
 public:
  explicit Config(json j) : j_(std::move(j)) {}
  const json& raw() const { return j_; }
  double real(const char* k) const { return j_.at(k).get<double>(); }
  std::uint64_t count(const char* k) const { return j_.at(k).get<std::uint64_t>(); }
  std::string text(const char* k) const { return j_.at(k).get<std::string>(); }
  bool flag(const char* k) const { return j_.at(k).get<bool>(); }
  std::vector<double> reals(const char* k) const { return j_.at(k).get<std::vector<double>>(); }
  unsigned threads() const { return static_cast<unsigned>(count("threads")); }

  double positive(const char* k) const {
    const double v = real(k);
    if (!(v > 0.0)) throw UsageError(std::string("field '") + k + "': must be > 0");
    return v;
  }
  double nonnegative(const char* k) const {
    const double v = real(k);
    if (!(v >= 0.0)) throw UsageError(std::string("field '") + k + "': must be >= 0");
    return v;
  }
  std::size_t at_least(const char* k, std::uint64_t lo) const {
    const std::uint64_t v = count(k);
    if (v < lo) {
      throw UsageError(std::string("field '") + k + "': must be >= " + std::to_string(lo));
    }
    return static_cast<std::size_t>(v);
  }
  std::vector<double> start(const char* k, std::size_t n) const {
    std::vector<double> x = reals(k);
    if (x.size() == 1) x.assign(n, x[0]);
    if (x.size() != n) {
      throw UsageError(std::string("field '") + k + "': expected 1 or " + std::to_string(n) +
                       " values");
    }
    for (double v : x) {
      if (!(v >= 0.0)) throw UsageError(std::string("field '") + k + "': values must be >= 0");
    }
    return x;
  }

 private:
  json j_;
};

json artifact_header(const std::string& command, const Config& cfg) {
  return {{"tool", "stickysim"}, {"version", kVersion}, {"command", command}, {"config", cfg.raw()}};
}

DensityModel make_model(const Config& cfg, std::size_t n) {
  const std::string name = cfg.text("model");
  if (name == "flat") return flat_model(n);
  if (name == "gaussian") return gaussian_model(n);
  if (name == "wetting-quadratic") return wetting_model(n, quadratic_potential());
  if (name == "wetting-soft-convex") {
    const double eps = cfg.real("eps");
    if (!(eps >= 0.0 && eps < 1.0)) throw UsageError("field 'eps': must lie in [0, 1)");
    return wetting_model(n, soft_convex_potential(eps));
  }
  if (n != 1) throw UsageError("field 'n': model 'bounded-drift' requires n = 1");
  return bounded_drift_model(cfg.real("drift"));
}

StickyParams make_params(const Config& cfg, std::size_t n) {
  return StickyParams(cfg.positive("beta"), n);
}

struct Artifact {
  std::string body;
  std::string summary;
  int code = 0;
};

// --- commands ----------------------------------------------------------------

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw UsageError("field 'grid': expected lo:hi:step, got '" + spec + "'");
  const double lo = parse_real("grid", parts[0]);
  const double hi = parse_real("grid", parts[1]);
  const double h = parse_real("grid", parts[2]);
  if (!(lo >= 0.0) || !(hi >= lo) || !(h > 0.0)) {
    throw UsageError("field 'grid': need 0 <= lo <= hi and step > 0");
  }
  const double count = std::floor((hi - lo) / h + 1e-9);
  if (count > 1e6) throw UsageError("field 'grid': more than 1e6 points");
  std::vector<double> ys;
  for (std::size_t j = 0; j <= static_cast<std::size_t>(count); ++j) {
    ys.push_back(lo + h * static_cast<double>(j));
  }
  return ys;
}

Artifact run_kernel(const Config& cfg) {
  const double t = cfg.positive("t");
  const double x = cfg.nonnegative("x");
  const StickyParams p = make_params(cfg, 1);
  const std::vector<double> ys = parse_grid(cfg.text("grid"));
  const KernelForm form = cfg.text("form") == "printed" ? KernelForm::printed : KernelForm::rescaled;
  const double atom = transition_atom(t, x, p, form);
  const double mass = transition_mass(t, x, p, form);

  Artifact a;
  if (cfg.text("format") == "csv") {
    std::ostringstream os;
    os << "# " << artifact_header("kernel", cfg).dump() << '\n';
    os << "# atom=" << format_double(atom) << '\n';
    os << "t,x,y,density,atom,mass\n";
    for (double y : ys) {
      os << format_double(t) << ',' << format_double(x) << ',' << format_double(y) << ','
         << format_double(transition_density(t, x, y, p, form)) << ',' << format_double(atom)
         << ',' << format_double(mass) << '\n';
    }
    a.body = os.str();
  } else {
    json j = artifact_header("kernel", cfg);
    j["atom"] = atom;
    j["mass"] = mass;
    json rows = json::array();
    for (double y : ys) rows.push_back({{"y", y}, {"density", transition_density(t, x, y, p, form)}});
    j["rows"] = std::move(rows);
    a.body = j.dump(2) + "\n";
  }
  a.summary = "kernel: t=" + format_double(t) + " x=" + format_double(x) +
              " beta=" + format_double(p.beta) + " atom=" + format_double(atom) +
              " mass=" + format_double(mass) + " rows=" + std::to_string(ys.size());
  return a;
}

Artifact run_simulate(const Config& cfg) {
  const std::size_t n = cfg.at_least("n", 1);
  const StickyParams p = make_params(cfg, n);
  const std::vector<double> x0 = cfg.start("x0", n);
  const double horizon = cfg.positive("horizon");
  const double dt = cfg.positive("dt");
  if (dt > horizon) throw UsageError("field 'dt': must not exceed horizon");
  const std::size_t paths = cfg.at_least("paths", 1);
  const std::uint64_t seed = cfg.count("seed");
  const std::string sampler = cfg.text("sampler");
  if (sampler == "timechange" && n != 1) {
    throw UsageError("field 'n': sampler 'timechange' requires n = 1");
  }
  const DensityModel model = make_model(cfg, n);
  if (sampler != "euler" && cfg.text("model") != "flat") {
    throw UsageError("field 'model': only sampler 'euler' simulates distorted models");
  }
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  const TimeGrid grid = TimeGrid::uniform(horizon, std::max<std::size_t>(steps, 1));

  const auto ensemble = parallel_map<PathSample>(paths, cfg.threads(), [&](std::size_t i) {
    Rng rng = Rng::stream(seed, i);
    if (sampler == "exact") return sample_exact_grid(x0, grid, p, rng);
    if (sampler == "timechange") return sample_timechange(x0[0], horizon, dt, p, rng);
    return sample_euler_distorted(x0, grid, p, model, rng);
  });

  Artifact a;
  if (cfg.text("format") == "csv") {
    std::ostringstream os;
    os << "# " << artifact_header("simulate", cfg).dump() << '\n';
    os << "path,t";
    for (std::size_t i = 1; i <= n; ++i) os << ",x_" << i;
    for (std::size_t i = 1; i <= n; ++i) os << ",occ_" << i;
    os << '\n';
    for (std::size_t q = 0; q < paths; ++q) {
      const PathSample& path = ensemble[q];
      for (std::size_t k = 0; k <= path.grid.steps(); ++k) {
        os << q << ',' << format_double(path.grid.times[k]);
        for (std::size_t i = 0; i < n; ++i) os << ',' << format_double(path.at(k, i));
        for (std::size_t i = 0; i < n; ++i) os << ',' << format_double(path.occupation[k * n + i]);
        os << '\n';
      }
    }
    a.body = os.str();
  } else {
    json j = artifact_header("simulate", cfg);
    json comps = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> terminal, ell;
      std::size_t zeros = 0;
      for (const PathSample& path : ensemble) {
        const double v = path.at(path.grid.steps(), i);
        terminal.push_back(v);
        ell.push_back(local_time(path, i, p));
        if (v == 0.0) ++zeros;
      }
      const MeanEstimate mt = mean_estimate(terminal);
      const MeanEstimate ml = mean_estimate(ell);
      comps.push_back({{"component", i + 1},
                       {"terminal_mean", mt.mean},
                       {"terminal_std_error", mt.std_error},
                       {"atom_frequency", static_cast<double>(zeros) / static_cast<double>(paths)},
                       {"local_time_mean", ml.mean},
                       {"local_time_std_error", ml.std_error}});
    }
    j["components"] = std::move(comps);
    a.body = j.dump(2) + "\n";
  }
  a.summary = "simulate: sampler=" + sampler + " paths=" + std::to_string(paths) +
              " steps=" + std::to_string(ensemble.front().grid.steps());
  return a;
}

Artifact run_girsanov(const Config& cfg) {
  const std::size_t n = cfg.at_least("n", 1);
  const StickyParams p = make_params(cfg, n);
  const DensityModel model = make_model(cfg, n);
  const std::vector<double> x0 = cfg.start("x0", n);
  const double t = cfg.positive("t");
  const std::size_t paths = cfg.at_least("paths", 100);
  WeightedOptions opts;
  opts.steps = cfg.at_least("steps", 1);
  opts.threads = cfg.threads();
  const std::string fname = cfg.text("f");
  PointFunction f;
  if (fname == "one") {
    f = [](std::span<const double>) { return 1.0; };
  } else if (fname == "exp") {
    f = [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v;
      return std::exp(-s);
    };
  } else {
    f = [](std::span<const double> x) {
      for (double v : x) {
        if (v > 1.0) return 0.0;
      }
      return 1.0;
    };
  }
  const WeightedEstimate e =
      weighted_expectation(f, t, x0, model, p, paths, cfg.count("seed"), opts);
  json j = artifact_header("girsanov", cfg);
  j["estimate"] = e.estimate;
  j["stderr"] = e.std_error;
  j["ess"] = e.ess;
  Artifact a;
  a.body = j.dump(2) + "\n";
  a.summary = "girsanov: model=" + model.name() + " estimate=" + format_double(e.estimate) +
              " stderr=" + format_double(e.std_error) + " ess=" + format_double(e.ess);
  return a;
}

Artifact run_validate(const Config& cfg) {
  const std::string suite = cfg.text("suite");
  const SuiteReport rep = run_suite(suite, cfg.count("seed"), cfg.threads());
  json j = artifact_header("validate", cfg);
  j["report"] = rep.to_json(cfg.flag("timings"));
  Artifact a;
  a.body = j.dump(2) + "\n";
  std::size_t ok = 0;
  for (const auto& c : rep.checks) ok += c.passed ? 1 : 0;
  a.summary = "validate " + suite + ": " + std::to_string(ok) + "/" +
              std::to_string(rep.checks.size()) + " checks passed";
  a.code = rep.passed() ? 0 : 1;
  return a;
}

Artifact run_wetting(const Config& cfg) {
  const std::size_t n = cfg.at_least("n", 1);
  if (n > 6) throw UsageError("field 'n': at most 6 sites (stationary targets use 2^n strata)");
  const StickyParams p = make_params(cfg, n);
  const PairPotential v = cfg.text("potential") == "quadratic"
                              ? quadratic_potential()
                              : soft_convex_potential(cfg.real("eps"));
  const DensityModel model = wetting_model(n, v);
  const std::vector<double> x0 = cfg.start("x0", n);
  const double horizon = cfg.positive("horizon");
  const double dt = cfg.positive("dt");
  if (dt > horizon) throw UsageError("field 'dt': must not exceed horizon");
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));

  EulerSplitting stepper(model, p, dt);
  Rng rng = Rng::stream(cfg.count("seed"), 0);
  std::vector<double> x = x0;
  std::vector<std::size_t> zeros(n, 0);
  std::vector<double> mean(n, 0.0);
  for (std::size_t k = 0; k < steps; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 0.0) ++zeros[i];
      mean[i] += x[i];
    }
    stepper.step(x, rng);
  }

  ProductMeasureSpec spec;
  spec.n = n;
  spec.beta = p.beta;
  spec.R = model.truncation();
  spec.resolution = cfg.at_least("resolution", 2);
  spec.threads = cfg.threads();
  json sites = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const double target = stationary_expectation(
        [i](std::span<const double> y) { return y[i] == 0.0 ? 1.0 : 0.0; }, model, spec);
    sites.push_back({{"site", i + 1},
                     {"occupation_fraction",
                      static_cast<double>(zeros[i]) / static_cast<double>(steps)},
                     {"stationary_fraction", target},
                     {"time_mean_height", mean[i] / static_cast<double>(steps)}});
  }
  json j = artifact_header("wetting", cfg);
  j["potential"] = v.name;
  j["steps"] = steps;
  j["sites"] = std::move(sites);
  Artifact a;
  a.body = j.dump(2) + "\n";
  a.summary = "wetting: n=" + std::to_string(n) + " steps=" + std::to_string(steps);
  return a;
}

std::filesystem::path output_path(const std::string& requested) {
  std::filesystem::path path(requested);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("STICKY_OUTPUT_DIR"); dir && *dir) {
      path = std::filesystem::path(dir) / path;
    }
  }
  return path;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sticky Brownian motion toolkit", "stickysim"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> described = {
      {"kernel", "tabulate the transition atom and density on a grid"},
      {"simulate", "sample sticky paths with the exact, time-change or Euler sampler"},
      {"girsanov", "weighted estimate of E[f(X_t)] under a density model"},
      {"validate", "run a diagnostic suite and report each check"},
      {"wetting", "occupation statistics of the wetting chain against quadrature targets"}};
  std::vector<std::string> commands;
  for (const auto& d : described) commands.push_back(d.first);
  std::map<std::string, std::map<std::string, std::string>> text_values;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;
  std::map<std::string, std::string> config_paths;
  std::map<std::string, bool> flag_values;
  for (const auto& [cmd, description] : described) {
    CLI::App* sub = app.add_subcommand(cmd, description);
    sub->add_option("--config", config_paths[cmd], "JSON configuration; flags override it");
    for (const Field& f : schema(cmd)) {
      if (f.kind == Kind::flag) {
        options[cmd][f.name] = sub->add_flag("--" + f.name, flag_values[cmd + "." + f.name], f.help);
      } else {
        std::string help = f.help;
        for (std::size_t i = 0; i < f.choices.size(); ++i) {
          help += (i == 0 ? " {" : "|") + f.choices[i] + (i + 1 == f.choices.size() ? "}" : "");
        }
        options[cmd][f.name] = sub->add_option("--" + f.name, text_values[cmd][f.name], help);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "stickysim: " << e.what() << '\n';
    return 2;
  }

  std::string command;
  for (const auto& cmd : commands) {
    if (app.got_subcommand(cmd)) command = cmd;
  }

  Artifact artifact;
  std::string output;
  try {
    const std::vector<Field> fields = schema(command);
    json resolved = json::object();
    for (const Field& f : fields) resolved[f.name] = f.fallback;

    if (!config_paths[command].empty()) {
      std::ifstream in(config_paths[command]);
      if (!in) throw UsageError("cannot read config file '" + config_paths[command] + "'");
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::parse_error& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
      }
      if (!doc.is_object()) throw UsageError("config must be a JSON object");
      for (const auto& [key, value] : doc.items()) {
        if (key == "command") {
          if (value != command) {
            throw UsageError("field 'command': config is for '" + value.dump() + "', not '" +
                             command + "'");
          }
          continue;
        }
        auto it = std::find_if(fields.begin(), fields.end(),
                               [&](const Field& f) { return f.name == key; });
        if (it == fields.end()) throw UsageError("unknown config field '" + key + "'");
        resolved[key] = from_config(*it, value);
      }
    }
    for (const Field& f : fields) {
      if (options[command][f.name]->count() == 0) continue;
      resolved[f.name] =
          f.kind == Kind::flag ? json(true) : from_text(f, text_values[command][f.name]);
    }
    for (const Field& f : fields) {
      if (f.kind == Kind::text) check_choice(f, resolved[f.name]);
    }

    const Config cfg(resolved);
    output = cfg.text("output");
    if (command == "kernel") {
      artifact = run_kernel(cfg);
    } else if (command == "simulate") {
      artifact = run_simulate(cfg);
    } else if (command == "girsanov") {
      artifact = run_girsanov(cfg);
    } else if (command == "validate") {
      artifact = run_validate(cfg);
    } else {
      artifact = run_wetting(cfg);
    }
  } catch (const UsageError& e) {
    err << "stickysim " << command << ": " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "stickysim " << command << ": " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "stickysim " << command << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "stickysim " << command << ": " << e.what() << '\n';
    return 1;
  }

  if (output.empty()) {
    out << artifact.body;
    err << artifact.summary << '\n';
  } else {
    const std::filesystem::path path = output_path(output);
    std::ofstream file(path, std::ios::binary);
    if (!file) {
      err << "stickysim " << command << ": cannot write '" << path.string() << "'\n";
      return 2;
    }
    file << artifact.body;
    out << artifact.summary << " -> " << path.string() << '\n';
  }
  return artifact.code;
}

}  // namespace sticky
