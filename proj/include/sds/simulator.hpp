#ifndef SDS_SIMULATOR_HPP
#define SDS_SIMULATOR_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sds/chain.hpp"
#include "sds/designer.hpp"

namespace sds {

// Coefficients of the switching diffusion dx = f(x, r, t) dt + g(x, r, t) dB.
// drift fills an n-vector, diffusion an n x m matrix (row-major). Both must
// be total and deterministic.
struct SwitchingModel {
  int dim_x = 1;
  int dim_w = 1;
  std::function<void(double t, std::span<const double> x, int mode, std::span<double> out)>
      drift;
  std::function<void(double t, std::span<const double> x, int mode, std::span<double> out)>
      diffusion;
  std::optional<Bounds> declared_bounds;
};

// Sampled-delay feedback u = -alpha(r(nu(t) - tau0)) x(nu(t) - tau0).
struct ControlLaw {
  ControlGains gains;
  double tau = 0.0;   // sampling interval
  double tau0 = 0.0;  // response lag

  void validate() const;
  int observation_periods() const;  // floor(tau0 / tau)
  double actuation_offset() const;  // (n0 + 1) tau - tau0, in (0, tau]
};

struct SimConfig {
  double dt = 0.0;
  double horizon = 0.0;
  std::vector<double> x0;
  int i0 = 0;  // zero-based mode index
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
  int record_stride = 1;
};

// Recorded grid data; states and control are row-major with one row of
// dim_x per recorded instant.
struct Trajectory {
  int dim_x = 1;
  std::vector<double> times;
  std::vector<double> states;
  std::vector<int> modes;
  std::vector<double> control;
  bool blew_up = false;
  double blowup_time = 0.0;

  std::size_t n_points() const { return times.size(); }
  std::span<const double> state(std::size_t k) const {
    return {states.data() + k * dim_x, static_cast<std::size_t>(dim_x)};
  }
  std::span<const double> control_at(std::size_t k) const {
    return {control.data() + k * dim_x, static_cast<std::size_t>(dim_x)};
  }
};

// Last sampling instant floor(t / tau) * tau, guarded against the usual
// floating-point drift at exact multiples.
double nu(double t, double tau);

// Strong Euler-Maruyama with the mode frozen at the left endpoint of each
// step and the switching signal simulated exactly. Streams are keyed by
// (seed, path_index); identical inputs give identical trajectories.
Trajectory simulate_uncontrolled(const SwitchingModel& model, const GeneratorMatrix& gen,
                                 const SimConfig& cfg);

// Same scheme with the drift augmented by the delayed sampled feedback.
// tau and tau0 must sit on the dt-grid (throws GridMisaligned otherwise;
// no silent snapping). Held observations before t = 0 are (x0, i0).
Trajectory simulate_controlled(const SwitchingModel& model, const GeneratorMatrix& gen,
                               const ControlLaw& law, const SimConfig& cfg);

}  // namespace sds

#endif
