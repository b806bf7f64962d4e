#include "sds/chain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sds/constants.hpp"
#include "sds/errors.hpp"

namespace sds {

namespace {

// Depth-first reachability over edges with positive rate.
void reach(const Mat& rates, int start, bool transposed, std::vector<char>& seen) {
  std::vector<int> stack = {start};
  seen.assign(rates.rows(), 0);
  seen[start] = 1;
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    for (int j = 0; j < rates.cols(); ++j) {
      double r = transposed ? rates(j, i) : rates(i, j);
      if (i != j && r > 0.0 && !seen[j]) {
        seen[j] = 1;
        stack.push_back(j);
      }
    }
  }
}

}  // namespace

double GeneratorMatrix::max_exit_rate() const {
  double best = 0.0;
  for (int i = 0; i < n_states(); ++i) best = std::max(best, -rates_(i, i));
  return best;
}

GeneratorMatrix validate_generator(const Mat& raw) {
  const int n = raw.rows();
  if (n < 1 || raw.cols() != n)
    throw SdsError(ErrorCode::NonConservative, "generator must be square with N >= 1");
  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      double v = raw(i, j);
      if (!std::isfinite(v))
        throw SdsError(ErrorCode::NonConservative,
                       "non-finite entry at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      if (i != j && v < 0.0)
        throw SdsError(ErrorCode::NegativeOffDiagonal,
                       "negative off-diagonal rate at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
      row_sum += v;
    }
    if (std::abs(row_sum) > tol::generator_row_sum)
      throw SdsError(ErrorCode::NonConservative,
                     "row " + std::to_string(i) + " sums to " + std::to_string(row_sum));
  }
  if (n > 1) {
    std::vector<char> fwd, bwd;
    reach(raw, 0, false, fwd);
    reach(raw, 0, true, bwd);
    for (int i = 0; i < n; ++i) {
      if (!fwd[i] || !bwd[i])
        throw SdsError(ErrorCode::Reducible,
                       "positive-rate graph is not strongly connected (state " +
                           std::to_string(i) + ")");
    }
  }
  return GeneratorMatrix(raw);
}

double StationaryDistribution::dot(const std::vector<double>& c) const {
  double s = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) s += pi[i] * c[i];
  return s;
}

StationaryDistribution stationary_distribution(const GeneratorMatrix& g) {
  const int n = g.n_states();
  // Gamma^T x = 0 has a one-dimensional kernel; its equations are linearly
  // dependent (they sum to zero), so the last one can carry normalization.
  Mat sys = g.rates().transpose();
  std::vector<double> rhs(n, 0.0);
  for (int j = 0; j < n; ++j) sys(n - 1, j) = 1.0;
  rhs[n - 1] = 1.0;

  std::vector<double> pi = LuFactors(sys).solve(rhs);

  double sum = 0.0;
  for (double p : pi) {
    if (!(p > 0.0))
      throw SdsError(ErrorCode::SingularSystem, "stationary solve produced a non-positive mass");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol::stationary_sum)
    throw SdsError(ErrorCode::SingularSystem, "stationary masses do not normalize");
  std::vector<double> residual = row_times_mat(pi, g.rates());
  for (double r : residual)
    if (std::abs(r) > tol::stationary_residual)
      throw SdsError(ErrorCode::SingularSystem, "stationary residual above tolerance");
  return StationaryDistribution{std::move(pi)};
}

int ModePath::mode_at(double t) const {
  if (t < 0.0 || t >= horizon)
    throw SdsError(ErrorCode::OutOfHorizon,
                   "t = " + std::to_string(t) + " outside [0, " + std::to_string(horizon) + ")");
  auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
  return modes[static_cast<std::size_t>(it - jump_times.begin()) - 1];
}

std::vector<double> ModePath::occupation() const {
  int n_modes = *std::max_element(modes.begin(), modes.end()) + 1;
  std::vector<double> occ(n_modes, 0.0);
  for (std::size_t k = 0; k < jump_times.size(); ++k) {
    double end = (k + 1 < jump_times.size()) ? jump_times[k + 1] : horizon;
    occ[modes[k]] += end - jump_times[k];
  }
  for (double& o : occ) o /= horizon;
  return occ;
}

ModePath sample_path(const GeneratorMatrix& g, int initial_mode, double horizon,
                     RngStream& stream) {
  ModePath path;
  path.horizon = horizon;
  path.jump_times.push_back(0.0);
  path.modes.push_back(initial_mode);

  double t = 0.0;
  int mode = initial_mode;
  for (;;) {
    double exit_rate = -g.rate(mode, mode);
    if (exit_rate <= 0.0) break;  // absorbing: holds forever
    t += stream.exponential(exit_rate);
    if (t >= horizon) break;
    double u = stream.uniform() * exit_rate;
    double acc = 0.0;
    int next = mode;
    for (int j = 0; j < g.n_states(); ++j) {
      if (j == mode) continue;
      acc += g.rate(mode, j);
      if (u <= acc) {
        next = j;
        break;
      }
    }
    if (next == mode) {
      // u landed beyond the accumulated rates by roundoff; take the last
      // positive-rate neighbor.
      for (int j = g.n_states() - 1; j >= 0; --j) {
        if (j != mode && g.rate(mode, j) > 0.0) {
          next = j;
          break;
        }
      }
    }
    path.jump_times.push_back(t);
    path.modes.push_back(next);
    mode = next;
  }
  return path;
}

Mat skeleton_transition_matrix(const GeneratorMatrix& g, double tau) {
  Mat p = expm(tau * g.rates());
  // exp of a generator is stochastic; scrub the roundoff-scale negatives.
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j)
      if (p(i, j) < 0.0) p(i, j) = 0.0;
  return p;
}

}  // namespace sds
