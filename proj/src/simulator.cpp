#include "sds/simulator.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "sds/constants.hpp"
#include "sds/errors.hpp"

namespace sds {

void ControlLaw::validate() const {
  // An all-zero gain vector is allowed here (u == 0 reproduces the
  // uncontrolled dynamics bit for bit); the designer operations insist on
  // a strictly positive gain separately.
  if (gains.alpha.empty())
    throw SdsError(ErrorCode::ConfigError, "gain vector is empty");
  for (double a : gains.alpha)
    if (a < 0.0) throw SdsError(ErrorCode::ConfigError, "gains must be nonnegative");
  if (!(tau > 0.0)) throw SdsError(ErrorCode::ConfigError, "sampling interval tau must be positive");
  if (tau0 < 0.0) throw SdsError(ErrorCode::ConfigError, "response lag tau0 must be nonnegative");
}

int ControlLaw::observation_periods() const {
  return static_cast<int>(std::floor(tau0 / tau + 1e-12));
}

double ControlLaw::actuation_offset() const {
  return (observation_periods() + 1) * tau - tau0;
}

double nu(double t, double tau) {
  double k = std::floor(t / tau);
  if ((k + 1.0) * tau <= t) k += 1.0;  // t/tau rounded down across a multiple
  if (k * tau > t) k -= 1.0;
  return k * tau;
}

namespace {

// Number of dt steps in `interval`, or -1 when it is off the grid.
long long grid_steps(double interval, double dt) {
  long long s = std::llround(interval / dt);
  double err = std::abs(interval - static_cast<double>(s) * dt);
  double scale = std::max(std::abs(interval), dt);
  if (err > tol::grid_align_rel * scale) return -1;
  return s;
}

void check_config(const SwitchingModel& model, const SimConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw SdsError(ErrorCode::ConfigError, "dt must be positive");
  if (!(cfg.horizon > 0.0)) throw SdsError(ErrorCode::ConfigError, "horizon must be positive");
  if (static_cast<int>(cfg.x0.size()) != model.dim_x)
    throw SdsError(ErrorCode::ConfigError, "x0 dimension does not match the model");
  if (cfg.record_stride < 1)
    throw SdsError(ErrorCode::ConfigError, "record_stride must be at least 1");
  if (!model.drift || !model.diffusion)
    throw SdsError(ErrorCode::ConfigError, "model is missing drift or diffusion");
}

Trajectory run_em(const SwitchingModel& model, const ControlLaw* law,
                  const GeneratorMatrix& gen, const SimConfig& cfg) {
  check_config(model, cfg);
  if (cfg.i0 < 0 || cfg.i0 >= gen.n_states())
    throw SdsError(ErrorCode::ConfigError, "initial mode out of range");

  const int n = model.dim_x;
  const int m = model.dim_w;
  const double dt = cfg.dt;
  const long long n_steps = std::max<long long>(1, std::llround(cfg.horizon / dt));

  long long tau_steps = 0, lag_steps = 0;
  if (law) {
    law->validate();
    tau_steps = grid_steps(law->tau, dt);
    lag_steps = grid_steps(law->tau0, dt);
    if (tau_steps < 1 || lag_steps < 0)
      throw SdsError(ErrorCode::GridMisaligned,
                     "tau = " + std::to_string(law->tau) + ", tau0 = " +
                         std::to_string(law->tau0) + " must be integer multiples of dt = " +
                         std::to_string(dt));
  }

  RngStream chain_stream(cfg.seed, cfg.path_index, StreamRole::ChainJumps);
  RngStream noise_stream(cfg.seed, cfg.path_index, StreamRole::Brownian);
  ModePath path =
      sample_path(gen, cfg.i0, static_cast<double>(n_steps + 1) * dt, chain_stream);

  Trajectory traj;
  traj.dim_x = n;
  std::size_t reserve = static_cast<std::size_t>(n_steps / cfg.record_stride + 2);
  traj.times.reserve(reserve);
  traj.states.reserve(reserve * n);
  traj.modes.reserve(reserve);
  traj.control.reserve(reserve * n);

  std::vector<double> x = cfg.x0;
  std::vector<double> drift(n), control(n, 0.0), noise(n), diffusion(n * m), dw(m);

  // Ring buffer of past grid states for the delayed observation.
  const long long depth = law ? tau_steps + lag_steps + 1 : 1;
  std::vector<double> hist_x(static_cast<std::size_t>(depth) * n);
  std::vector<int> hist_mode(depth);
  std::vector<long long> hist_step(depth, -1);

  std::size_t jump_cursor = 0;
  const auto& jumps = path.jump_times;

  auto record = [&](long long k, int mode) {
    traj.times.push_back(static_cast<double>(k) * dt);
    traj.states.insert(traj.states.end(), x.begin(), x.end());
    traj.modes.push_back(mode);
    traj.control.insert(traj.control.end(), control.begin(), control.end());
  };

  for (long long k = 0; k < n_steps; ++k) {
    double t = static_cast<double>(k) * dt;
    while (jump_cursor + 1 < jumps.size() && jumps[jump_cursor + 1] <= t) ++jump_cursor;
    int mode = path.modes[jump_cursor];

    std::fill(control.begin(), control.end(), 0.0);
    if (law) {
      long long slot = k % depth;
      hist_step[slot] = k;
      hist_mode[slot] = mode;
      std::copy(x.begin(), x.end(), hist_x.begin() + slot * n);

      long long sample_step = (k / tau_steps) * tau_steps;
      long long obs_step = sample_step - lag_steps;
      const double* x_obs;
      int mode_obs;
      if (obs_step < 0) {
        x_obs = cfg.x0.data();
        mode_obs = cfg.i0;
      } else {
        long long obs_slot = obs_step % depth;
        assert(hist_step[obs_slot] == obs_step);
        x_obs = hist_x.data() + obs_slot * n;
        mode_obs = hist_mode[obs_slot];
      }
      double gain = law->gains.alpha[mode_obs];
      // + 0.0 scrubs the signed zero so a zero-gain law is byte-identical
      // to the uncontrolled run, CSV included
      for (int i = 0; i < n; ++i) control[i] = -gain * x_obs[i] + 0.0;
    }

    if (k % cfg.record_stride == 0) record(k, mode);

    model.drift(t, x, mode, drift);
    model.diffusion(t, x, mode, diffusion);
    for (int j = 0; j < m; ++j) dw[j] = std::sqrt(dt) * noise_stream.normal();
    std::fill(noise.begin(), noise.end(), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) noise[i] += diffusion[i * m + j] * dw[j];
    for (int i = 0; i < n; ++i) x[i] += (drift[i] + control[i]) * dt + noise[i];

    bool bad = false;
    for (double xi : x)
      if (!std::isfinite(xi) || std::abs(xi) > tol::blowup_max_norm) bad = true;
    if (bad) {
      traj.blew_up = true;
      traj.blowup_time = static_cast<double>(k + 1) * dt;
      return traj;
    }
  }

  {
    double t_end = static_cast<double>(n_steps) * dt;
    while (jump_cursor + 1 < jumps.size() && jumps[jump_cursor + 1] <= t_end) ++jump_cursor;
    std::fill(control.begin(), control.end(), 0.0);
    record(n_steps, path.modes[jump_cursor]);
  }
  return traj;
}

}  // namespace

Trajectory simulate_uncontrolled(const SwitchingModel& model, const GeneratorMatrix& gen,
                                 const SimConfig& cfg) {
  return run_em(model, nullptr, gen, cfg);
}

Trajectory simulate_controlled(const SwitchingModel& model, const GeneratorMatrix& gen,
                               const ControlLaw& law, const SimConfig& cfg) {
  return run_em(model, &law, gen, cfg);
}

}  // namespace sds
