#include "sds/estimator.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "sds/errors.hpp"

namespace sds {

namespace {

struct PathSummary {
  std::vector<double> powers;    // [qi * n_rec + k], valid for k < n_alive
  std::size_t n_alive = 0;       // recorded points before truncation
  bool blew_up = false;
  double terminal_rate = 0.0;
  bool has_terminal_rate = false;
};

PathSummary summarize(const Trajectory& traj, const std::vector<double>& q_list,
                      std::size_t n_rec, double horizon) {
  PathSummary s;
  s.n_alive = std::min(traj.n_points(), n_rec);
  s.blew_up = traj.blew_up;
  s.powers.assign(q_list.size() * n_rec, 0.0);
  for (std::size_t k = 0; k < s.n_alive; ++k) {
    auto x = traj.state(k);
    double norm_sq = 0.0;
    for (double xi : x) norm_sq += xi * xi;
    for (std::size_t qi = 0; qi < q_list.size(); ++qi) {
      double q = q_list[qi];
      double v;
      if (q == 2.0) {
        v = norm_sq;
      } else if (q == 4.0) {
        v = norm_sq * norm_sq;
      } else if (q == 6.0) {
        v = norm_sq * norm_sq * norm_sq;
      } else {
        v = std::pow(norm_sq, 0.5 * q);
      }
      s.powers[qi * n_rec + k] = v;
    }
  }
  if (!traj.blew_up && s.n_alive == n_rec) {
    auto x = traj.state(s.n_alive - 1);
    double norm_sq = 0.0;
    for (double xi : x) norm_sq += xi * xi;
    if (norm_sq > 0.0) {
      s.terminal_rate = std::log(std::sqrt(norm_sq)) / horizon;
      s.has_terminal_rate = true;
    }
  }
  return s;
}

// Fixed-shape pairwise reduction over the path index range [lo, hi):
// the association order never depends on scheduling.
void tree_sum(const std::vector<PathSummary>& paths, std::size_t lo, std::size_t hi,
              std::vector<double>& acc_powers, std::vector<long long>& acc_alive,
              std::size_t n_rec, std::size_t n_q) {
  if (hi - lo == 1) {
    const PathSummary& p = paths[lo];
    acc_powers.assign(n_q * n_rec, 0.0);
    acc_alive.assign(n_rec, 0);
    for (std::size_t qi = 0; qi < n_q; ++qi)
      for (std::size_t k = 0; k < p.n_alive; ++k)
        acc_powers[qi * n_rec + k] = p.powers[qi * n_rec + k];
    for (std::size_t k = 0; k < p.n_alive; ++k) acc_alive[k] = 1;
    return;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  std::vector<double> right_powers;
  std::vector<long long> right_alive;
  tree_sum(paths, lo, mid, acc_powers, acc_alive, n_rec, n_q);
  tree_sum(paths, mid, hi, right_powers, right_alive, n_rec, n_q);
  for (std::size_t i = 0; i < acc_powers.size(); ++i) acc_powers[i] += right_powers[i];
  for (std::size_t k = 0; k < n_rec; ++k) acc_alive[k] += right_alive[k];
}

}  // namespace

EnsembleStats run_ensemble(const SwitchingModel& model, const GeneratorMatrix& gen,
                           const ControlLaw* law, const SimConfig& cfg, int n_paths,
                           const std::vector<double>& q_list, int n_threads) {
  if (n_paths < 1) throw SdsError(ErrorCode::ConfigError, "n_paths must be >= 1");
  if (q_list.empty()) throw SdsError(ErrorCode::ConfigError, "q_list must not be empty");
  for (double q : q_list)
    if (q < 1.0) throw SdsError(ErrorCode::ConfigError, "moment orders must be >= 1");

  const long long n_steps = std::max<long long>(1, std::llround(cfg.horizon / cfg.dt));
  if (n_steps % cfg.record_stride != 0)
    throw SdsError(ErrorCode::ConfigError,
                   "record_stride must divide the step count so all paths share one grid");
  const std::size_t n_rec = static_cast<std::size_t>(n_steps / cfg.record_stride) + 1;

  std::vector<PathSummary> paths(n_paths);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int j = next.fetch_add(1);
      if (j >= n_paths) return;
      SimConfig pc = cfg;
      pc.path_index = static_cast<std::uint64_t>(j);
      Trajectory traj = law ? simulate_controlled(model, gen, *law, pc)
                            : simulate_uncontrolled(model, gen, pc);
      paths[j] = summarize(traj, q_list, n_rec, cfg.horizon);
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  EnsembleStats stats;
  stats.n_paths = n_paths;
  stats.q_list = q_list;
  stats.times.resize(n_rec);
  for (std::size_t k = 0; k < n_rec; ++k)
    stats.times[k] = static_cast<double>(k) * cfg.dt * cfg.record_stride;

  std::vector<double> sums;
  std::vector<long long> alive;
  tree_sum(paths, 0, paths.size(), sums, alive, n_rec, q_list.size());

  for (const PathSummary& p : paths) {
    if (p.blew_up) ++stats.n_blowups;
    if (p.has_terminal_rate) stats.per_path_terminal_rates.push_back(p.terminal_rate);
  }
  if (stats.n_blowups == n_paths)
    throw SdsError(ErrorCode::AllPathsBlewUp, "every path in the ensemble blew up");

  stats.alive_counts = alive;
  stats.moment_curves.assign(q_list.size(), std::vector<double>(n_rec, 0.0));
  for (std::size_t qi = 0; qi < q_list.size(); ++qi)
    for (std::size_t k = 0; k < n_rec; ++k)
      stats.moment_curves[qi][k] =
          alive[k] > 0 ? sums[qi * n_rec + k] / static_cast<double>(alive[k]) : 0.0;
  return stats;
}

namespace {

std::size_t q_index(const EnsembleStats& stats, double q) {
  for (std::size_t qi = 0; qi < stats.q_list.size(); ++qi)
    if (stats.q_list[qi] == q) return qi;
  throw SdsError(ErrorCode::ConfigError,
                 "q = " + std::to_string(q) + " was not recorded in the ensemble");
}

}  // namespace

ExponentEstimate estimate_ms_exponent(const EnsembleStats& stats, double q,
                                      double window_lo, double window_hi) {
  std::size_t qi = q_index(stats, q);
  const auto& curve = stats.moment_curves[qi];

  double sum_t = 0.0, sum_y = 0.0, sum_tt = 0.0, sum_ty = 0.0;
  int n = 0;
  for (std::size_t k = 0; k < stats.times.size(); ++k) {
    double t = stats.times[k];
    if (t < window_lo || t > window_hi) continue;
    if (!(curve[k] > 0.0))
      throw SdsError(ErrorCode::NonpositiveCurve,
                     "moment curve is nonpositive at t = " + std::to_string(t));
    double y = std::log(curve[k]);
    sum_t += t;
    sum_y += y;
    sum_tt += t * t;
    sum_ty += t * y;
    ++n;
  }
  if (n < 3)
    throw SdsError(ErrorCode::ConfigError, "regression window holds fewer than 3 points");

  double sxx = sum_tt - sum_t * sum_t / n;
  double slope = (sum_ty - sum_t * sum_y / n) / sxx;
  double intercept = (sum_y - slope * sum_t) / n;

  double ssr = 0.0;
  for (std::size_t k = 0; k < stats.times.size(); ++k) {
    double t = stats.times[k];
    if (t < window_lo || t > window_hi) continue;
    double r = std::log(stats.moment_curves[qi][k]) - (intercept + slope * t);
    ssr += r * r;
  }

  ExponentEstimate est;
  est.q = q;
  est.slope = slope;
  est.stderr_ = n > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
  est.window_lo = window_lo;
  est.window_hi = window_hi;
  est.n_paths = stats.n_paths;
  est.n_blowups = stats.n_blowups;
  return est;
}

ExponentEstimate estimate_as_exponent(const EnsembleStats& stats) {
  const auto& rates = stats.per_path_terminal_rates;
  if (rates.empty())
    throw SdsError(ErrorCode::NoUsablePaths,
                   "no surviving path with positive terminal state");
  double mean = 0.0;
  for (double r : rates) mean += r;
  mean /= static_cast<double>(rates.size());
  double var = 0.0;
  for (double r : rates) var += (r - mean) * (r - mean);
  var = rates.size() > 1 ? var / static_cast<double>(rates.size() - 1) : 0.0;

  ExponentEstimate est;
  est.q = 1.0;
  est.slope = mean;
  est.stderr_ = std::sqrt(var / static_cast<double>(rates.size()));
  est.window_lo = stats.times.empty() ? 0.0 : stats.times.front();
  est.window_hi = stats.times.empty() ? 0.0 : stats.times.back();
  est.n_paths = stats.n_paths;
  est.n_blowups = stats.n_blowups;
  return est;
}

IntegralMoment integral_moment(const EnsembleStats& stats, double exponent) {
  std::size_t qi = q_index(stats, exponent);
  const auto& curve = stats.moment_curves[qi];
  IntegralMoment out;
  out.exponent = exponent;
  for (std::size_t k = 0; k + 1 < stats.times.size(); ++k)
    out.value += 0.5 * (curve[k] + curve[k + 1]) * (stats.times[k + 1] - stats.times[k]);

  // Tail policy: log-linear fit over the final tenth of the horizon.
  double t_end = stats.times.back();
  double t_lo = 0.9 * t_end;
  try {
    ExponentEstimate tail = estimate_ms_exponent(stats, exponent, t_lo, t_end);
    out.tail_slope = tail.slope;
    out.tail_convergent = tail.slope < 0.0;
  } catch (const SdsError&) {
    // Curve hit zero in the tail: integral is trivially convergent.
    out.tail_slope = -std::numeric_limits<double>::infinity();
    out.tail_convergent = true;
  }
  return out;
}

OccupationReport occupation_check(const GeneratorMatrix& gen, double horizon,
                                  const std::vector<std::uint64_t>& seeds) {
  OccupationReport rep;
  rep.seeds = seeds;
  rep.pi = stationary_distribution(gen).pi;
  for (std::uint64_t seed : seeds) {
    RngStream stream(seed, 0, StreamRole::ChainJumps);
    ModePath path = sample_path(gen, 0, horizon, stream);
    std::vector<double> occ = path.occupation();
    occ.resize(rep.pi.size(), 0.0);
    for (std::size_t i = 0; i < rep.pi.size(); ++i)
      rep.max_deviation = std::max(rep.max_deviation, std::abs(occ[i] - rep.pi[i]));
    rep.occupations.push_back(std::move(occ));
  }
  return rep;
}

}  // namespace sds
