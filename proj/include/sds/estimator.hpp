#ifndef SDS_ESTIMATOR_HPP
#define SDS_ESTIMATOR_HPP

#include <vector>

#include "sds/simulator.hpp"

namespace sds {

// Time-indexed empirical moment curves over a path ensemble. Curves
// average the surviving paths at each instant; blown-up paths drop out
// past their truncation and are counted.
struct EnsembleStats {
  std::vector<double> times;
  std::vector<double> q_list;
  std::vector<std::vector<double>> moment_curves;  // [qi][time]
  std::vector<long long> alive_counts;             // per time
  std::vector<double> per_path_terminal_rates;     // (1/T) log |x(T)|, survivors only
  int n_paths = 0;
  int n_blowups = 0;
};

struct ExponentEstimate {
  double q = 0.0;
  double slope = 0.0;
  double stderr_ = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  int n_paths = 0;
  int n_blowups = 0;
};

// Runs n_paths independent simulations (streams keyed by path index) and
// averages |x(t)|^q in a fixed pairwise-tree order, so the result is
// bit-identical for any worker count. Throws AllPathsBlewUp when no path
// survives.
EnsembleStats run_ensemble(const SwitchingModel& model, const GeneratorMatrix& gen,
                           const ControlLaw* law, const SimConfig& cfg, int n_paths,
                           const std::vector<double>& q_list, int n_threads = 1);

// Least-squares slope of log E|x(t)|^q over the window. The curve must be
// strictly positive there (throws NonpositiveCurve naming the first
// crossing time otherwise).
ExponentEstimate estimate_ms_exponent(const EnsembleStats& stats, double q,
                                      double window_lo, double window_hi);

// Mean per-path terminal log growth rate with its naive standard error.
ExponentEstimate estimate_as_exponent(const EnsembleStats& stats);

struct IntegralMoment {
  double value = 0.0;
  double exponent = 0.0;
  bool tail_convergent = false;
  double tail_slope = 0.0;
};

// Trapezoidal integral of the q = exponent curve plus a log-linear decay
// check over the final tenth of the horizon.
IntegralMoment integral_moment(const EnsembleStats& stats, double exponent);

struct OccupationReport {
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> occupations;  // per seed
  std::vector<double> pi;
  double max_deviation = 0.0;
};

// Long-run occupation fractions against the stationary distribution.
OccupationReport occupation_check(const GeneratorMatrix& gen, double horizon,
                                  const std::vector<std::uint64_t>& seeds);

}  // namespace sds

#endif
