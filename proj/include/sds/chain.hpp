#ifndef SDS_CHAIN_HPP
#define SDS_CHAIN_HPP

#include <vector>

#include "sds/linalg.hpp"
#include "sds/rng.hpp"

namespace sds {

// Validated generator of a conservative, irreducible continuous-time
// Markov chain on {0, ..., N-1}. Construct through validate_generator.
class GeneratorMatrix {
 public:
  int n_states() const { return rates_.rows(); }
  double rate(int i, int j) const { return rates_(i, j); }
  const Mat& rates() const { return rates_; }

  // max_j of the exit rate -gamma_jj.
  double max_exit_rate() const;

 private:
  friend GeneratorMatrix validate_generator(const Mat& raw);
  explicit GeneratorMatrix(Mat rates) : rates_(std::move(rates)) {}
  Mat rates_;
};

// Checks conservativity (rows sum to zero), sign structure and strong
// connectivity of the positive-rate graph. Throws NegativeOffDiagonal,
// NonConservative or Reducible naming the offending entry.
GeneratorMatrix validate_generator(const Mat& raw);

struct StationaryDistribution {
  std::vector<double> pi;

  double dot(const std::vector<double>& c) const;
};

// Unique probability vector with pi * Gamma = 0, solved by dense LU on
// the transposed generator with one equation replaced by normalization.
StationaryDistribution stationary_distribution(const GeneratorMatrix& g);

// One realization of the chain on [0, horizon): piecewise-constant,
// right-continuous. jump_times[0] == 0 carries the initial mode.
struct ModePath {
  std::vector<double> jump_times;
  std::vector<int> modes;
  double horizon = 0.0;

  // Right-continuous lookup; at a jump instant the post-jump mode is
  // returned. Throws OutOfHorizon outside [0, horizon).
  int mode_at(double t) const;

  // Fraction of [0, horizon) spent in each mode.
  std::vector<double> occupation() const;
};

// Exact simulation: holding time in state j is Exponential(-gamma_jj),
// the next state is drawn proportionally to the off-diagonal rates.
// Deterministic given the stream.
ModePath sample_path(const GeneratorMatrix& g, int initial_mode, double horizon,
                     RngStream& stream);

// Transition matrix exp(tau * Gamma) of the embedded discrete-time chain
// observed every tau.
Mat skeleton_transition_matrix(const GeneratorMatrix& g, double tau);

}  // namespace sds

#endif
