#include "sticky/paths.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sticky/mathcore.hpp"

namespace sticky {

TimeGrid TimeGrid::uniform(double horizon, std::size_t steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("TimeGrid::uniform: horizon must be finite and > 0");
  }
  if (steps < 1) throw std::invalid_argument("TimeGrid::uniform: steps must be >= 1");
  TimeGrid g;
  g.times.resize(steps + 1);
  const double h = horizon / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) g.times[k] = h * static_cast<double>(k);
  g.times[steps] = horizon;
  return g;
}

void TimeGrid::validate() const {
  if (times.size() < 2) throw std::invalid_argument("TimeGrid: need at least two times");
  if (times.front() != 0.0) throw std::invalid_argument("TimeGrid: must start at 0");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!std::isfinite(times[k]) || !(times[k] > times[k - 1])) {
      throw std::invalid_argument("TimeGrid: times must be finite and strictly increasing");
    }
  }
}

namespace {

void check_start(std::span<const double> x0, std::size_t dim) {
  if (x0.size() != dim) throw std::invalid_argument("path sampler: x0 dimension mismatch");
  for (double v : x0) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("path sampler: x0 must be finite and >= 0");
    }
  }
}

PathSample allocate(const TimeGrid& grid, std::size_t dim, std::span<const double> x0) {
  PathSample p;
  p.grid = grid;
  p.dim = dim;
  p.states.assign((grid.steps() + 1) * dim, 0.0);
  p.occupation.assign((grid.steps() + 1) * dim, 0.0);
  std::copy(x0.begin(), x0.end(), p.states.begin());
  return p;
}

void accumulate_occupation(PathSample& p, std::size_t k) {
  const double h = p.grid.dt(k);
  for (std::size_t i = 0; i < p.dim; ++i) {
    const std::size_t cur = k * p.dim + i;
    p.occupation[cur + p.dim] = p.occupation[cur] + (p.states[cur] == 0.0 ? h : 0.0);
  }
}

}  // namespace

PathSample sample_exact_grid(std::span<const double> x0, const TimeGrid& grid,
                             const StickyParams& params, Rng& rng) {
  params.validate();
  grid.validate();
  check_start(x0, params.dim);
  PathSample p = allocate(grid, params.dim, x0);
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double h = grid.dt(k);
    for (std::size_t i = 0; i < p.dim; ++i) {
      p.states[(k + 1) * p.dim + i] = sample_transition(h, p.states[k * p.dim + i], params, rng);
    }
    accumulate_occupation(p, k);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Time change

namespace {

// Hitting the running level -L is ignored once its bridge probability
// exp(-a b / tau) drops below e^-40.
constexpr double kBridgeCut = 40.0;

struct SkorokhodStep {
  double w;
  double L;
};

// Advances W by one internal step and updates L = max(L, -min Z) over the
// step with the exact minimum of the Brownian bridge of Z = x0 + sqrt2 W.
SkorokhodStep skorokhod_step(double x0, double w_prev, double L_prev, double tau, Rng& rng) {
  const double w = w_prev + std::sqrt(tau) * rng.normal();
  const double za = x0 + kSqrt2 * w_prev;
  const double zb = x0 + kSqrt2 * w;
  const double da = za + L_prev;
  const double db = zb + L_prev;
  if (db > 0.0 && da * db > kBridgeCut * tau) return {w, L_prev};
  const double diff = zb - za;
  const double m = 0.5 * (za + zb - std::sqrt(diff * diff - 4.0 * tau * std::log(rng.uniform())));
  return {w, std::max(L_prev, -m)};
}

void check_timechange_args(double x0, double horizon, double dt, const StickyParams& params) {
  params.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("time change: dt must be finite and > 0");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("time change: horizon must be finite and > 0");
  }
  if (!(x0 >= 0.0) || !std::isfinite(x0)) {
    throw std::invalid_argument("time change: x0 must be finite and >= 0");
  }
}

}  // namespace

double TimeChangeSkeleton::inverse(double t) const {
  if (t <= 0.0) return 0.0;
  const auto it = std::upper_bound(a_plus.begin(), a_plus.end(), t);
  if (it == a_plus.end()) return tau * static_cast<double>(size() - 1);
  const std::size_t k = static_cast<std::size_t>(it - a_plus.begin());
  if (t >= a_minus[k]) return tau * static_cast<double>(k);
  return tau * static_cast<double>(k - 1) + (t - a_plus[k - 1]);
}

double TimeChangeSkeleton::forward(double s) const {
  if (s <= 0.0) return 0.0;
  const double pos = s / tau;
  const std::size_t k = std::min(static_cast<std::size_t>(pos), size() - 1);
  if (k == size() - 1) return a_plus.back();
  const double offset = s - tau * static_cast<double>(k);
  return offset <= 0.0 ? a_plus[k] : a_plus[k] + offset;
}

TimeChangeSkeleton build_timechange(double x0, double horizon, double tau,
                                    const StickyParams& params, Rng& rng) {
  check_timechange_args(x0, horizon, tau, params);
  TimeChangeSkeleton sk;
  sk.tau = tau;
  const std::size_t guess = static_cast<std::size_t>(horizon / tau) + 2;
  for (auto* v : {&sk.xhat, &sk.w, &sk.L, &sk.a_minus, &sk.a_plus}) v->reserve(guess);
  sk.xhat.push_back(x0);
  sk.w.push_back(0.0);
  sk.L.push_back(0.0);
  sk.a_minus.push_back(0.0);
  sk.a_plus.push_back(0.0);
  for (std::size_t k = 1; sk.a_plus.back() < horizon; ++k) {
    const SkorokhodStep st = skorokhod_step(x0, sk.w.back(), sk.L.back(), tau, rng);
    const double s = tau * static_cast<double>(k);
    sk.a_minus.push_back(s + params.beta * sk.L.back());
    sk.a_plus.push_back(s + params.beta * st.L);
    sk.xhat.push_back(std::max(0.0, x0 + kSqrt2 * st.w + st.L));
    sk.w.push_back(st.w);
    sk.L.push_back(st.L);
  }
  return sk;
}

PathSample sample_timechange(double x0, double horizon, double dt, const StickyParams& params,
                             Rng& rng) {
  if (params.dim != 1) throw std::invalid_argument("sample_timechange: n must be 1");
  const TimeChangeSkeleton sk = build_timechange(x0, horizon, dt, params, rng);
  const std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                         std::llround(horizon / dt)));
  const double start[1] = {x0};
  PathSample p = allocate(TimeGrid::uniform(horizon, steps), 1, start);
  p.reflected_local_time.assign(steps + 1, 0.0);
  p.noise.assign(steps, 0.0);
  p.noise_exact = true;

  std::vector<double> w_tau(steps + 1, 0.0), stick(steps + 1, 0.0);
  std::size_t k = 1;
  for (std::size_t j = 0; j <= steps; ++j) {
    const double t = p.grid.times[j];
    while (k + 1 < sk.size() && sk.a_plus[k] <= t) ++k;
    double x, L, w, s;
    if (t > sk.a_minus[k] && t < sk.a_plus[k]) {
      x = 0.0;
      L = sk.L[k - 1] + (t - sk.a_minus[k]) / params.beta;
      w = sk.w[k];
      s = dt * static_cast<double>(k);
    } else {
      const double frac = std::clamp((t - sk.a_plus[k - 1]) / dt, 0.0, 1.0);
      x = sk.xhat[k - 1] + frac * (sk.xhat[k] - sk.xhat[k - 1]);
      L = sk.L[k - 1];
      w = sk.w[k - 1] + frac * (sk.w[k] - sk.w[k - 1]);
      s = dt * static_cast<double>(k - 1) + frac * dt;
    }
    p.states[j] = x;
    p.reflected_local_time[j] = L;
    w_tau[j] = w;
    stick[j] = std::max(0.0, t - s);
  }
  for (std::size_t j = 0; j < steps; ++j) {
    const double extra = std::max(0.0, stick[j + 1] - stick[j]);
    p.noise[j] = (w_tau[j + 1] - w_tau[j]) + (extra > 0.0 ? std::sqrt(extra) * rng.normal() : 0.0);
    accumulate_occupation(p, j);
  }
  return p;
}

double sample_timechange_terminal(double x0, double horizon, double dt,
                                  const StickyParams& params, Rng& rng) {
  check_timechange_args(x0, horizon, dt, params);
  double w = 0.0, L = 0.0, xhat = x0, a_plus = 0.0;
  for (std::size_t k = 1;; ++k) {
    const SkorokhodStep st = skorokhod_step(x0, w, L, dt, rng);
    const double s = dt * static_cast<double>(k);
    const double next_minus = s + params.beta * L;
    const double next_plus = s + params.beta * st.L;
    const double next_xhat = std::max(0.0, x0 + kSqrt2 * st.w + st.L);
    if (next_plus > horizon) {
      if (horizon > next_minus) return 0.0;
      const double frac = std::clamp((horizon - a_plus) / dt, 0.0, 1.0);
      return xhat + frac * (next_xhat - xhat);
    }
    w = st.w;
    L = st.L;
    xhat = next_xhat;
    a_plus = next_plus;
  }
}

// ---------------------------------------------------------------------------
// Splitting integrator

EulerSplitting::EulerSplitting(const DensityModel& model, const StickyParams& params, double dt,
                               double reflect_at)
    : model_(model), params_(params), dt_(dt), reflect_at_(reflect_at) {
  params_.validate();
  if (model.dim() != params.dim) {
    throw std::invalid_argument("EulerSplitting: model dimension differs from params.dim");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("EulerSplitting: dt must be finite and > 0");
  }
  if (!(reflect_at > 0.0)) throw std::invalid_argument("EulerSplitting: reflect_at must be > 0");
  drift_limit_ = 0.5 * std::min(1.0, params.beta);
  before_.resize(params.dim);
  grad_.resize(params.dim);
}

void EulerSplitting::step(std::span<double> x, Rng& rng, std::span<double> noise) {
  const std::size_t n = params_.dim;
  std::copy(x.begin(), x.end(), before_.begin());
  for (std::size_t i = 0; i < n; ++i) x[i] = sample_transition(dt_, x[i], params_, rng);
  if (!noise.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      const double push = before_[i] == 0.0 ? dt_ / params_.beta : 0.0;
      noise[i] = (x[i] - before_[i] - push) / kSqrt2;
    }
  }
  model_.grad_H(x, grad_);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0)) continue;
    const double drift = -2.0 * grad_[i];
    if (!std::isfinite(drift)) {
      throw std::runtime_error("EulerSplitting: non-finite drift at component " +
                               std::to_string(i));
    }
    if (std::fabs(drift) * dt_ >= drift_limit_) {
      throw std::runtime_error("EulerSplitting: step too large, dt*|drift| = " +
                               std::to_string(std::fabs(drift) * dt_) + " >= " +
                               std::to_string(drift_limit_));
    }
    x[i] = std::max(0.0, x[i] + drift * dt_);
    if (x[i] > reflect_at_) x[i] = std::max(0.0, 2.0 * reflect_at_ - x[i]);
  }
}

PathSample sample_euler_distorted(std::span<const double> x0, const TimeGrid& grid,
                                  const StickyParams& params, const DensityModel& model, Rng& rng,
                                  double reflect_at) {
  grid.validate();
  check_start(x0, params.dim);
  const double h = grid.horizon() / static_cast<double>(grid.steps());
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    if (std::fabs(grid.dt(k) - h) > 1e-9 * h) {
      throw std::invalid_argument("sample_euler_distorted: grid must be uniform");
    }
  }
  EulerSplitting stepper(model, params, h, reflect_at);
  PathSample p = allocate(grid, params.dim, x0);
  p.noise.assign(grid.steps() * params.dim, 0.0);
  p.noise_exact = false;
  const std::size_t n = params.dim;
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    std::copy_n(p.states.begin() + static_cast<std::ptrdiff_t>(k * n), n,
                p.states.begin() + static_cast<std::ptrdiff_t>((k + 1) * n));
    stepper.step(std::span<double>(p.states.data() + (k + 1) * n, n), rng,
                 std::span<double>(p.noise.data() + k * n, n));
    accumulate_occupation(p, k);
  }
  return p;
}

double local_time(const PathSample& path, std::size_t i, const StickyParams& params) {
  if (i >= path.dim) throw std::out_of_range("local_time: component index out of range");
  return path.occupation[path.grid.steps() * path.dim + i] / params.beta;
}

double epsilon_occupation(const PathSample& path, std::size_t i, double eps) {
  if (i >= path.dim) throw std::out_of_range("epsilon_occupation: component index out of range");
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon_occupation: eps must be > 0");
  double s = 0.0;
  for (std::size_t k = 0; k < path.grid.steps(); ++k) {
    const double x = path.at(k, i);
    if (x > 0.0 && x < eps) s += path.grid.dt(k);
  }
  return s / eps;
}

}  // namespace sticky
