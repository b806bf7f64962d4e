#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sds/errors.hpp"
#include "sds/estimator.hpp"
#include "sds/models.hpp"

using namespace sds;

namespace {

GeneratorMatrix two_mode() {
  Mat g(2, 2);
  g(0, 0) = -10.0;
  g(0, 1) = 10.0;
  g(1, 0) = 20.0;
  g(1, 1) = -20.0;
  return validate_generator(g);
}

GeneratorMatrix single_state() { return validate_generator(Mat(1, 1)); }

SwitchingModel zero_model() {
  SwitchingModel m;
  m.dim_x = 1;
  m.dim_w = 1;
  m.drift = [](double, std::span<const double>, int, std::span<double> out) {
    out[0] = 0.0;
  };
  m.diffusion = [](double, std::span<const double>, int, std::span<double> out) {
    out[0] = 0.0;
  };
  return m;
}

EnsembleStats synthetic_exponential(double coef, double rate, double horizon, double dt) {
  EnsembleStats stats;
  stats.q_list = {2.0};
  stats.n_paths = 1;
  std::size_t n = static_cast<std::size_t>(horizon / dt) + 1;
  stats.times.resize(n);
  stats.moment_curves.assign(1, std::vector<double>(n));
  stats.alive_counts.assign(n, 1);
  for (std::size_t k = 0; k < n; ++k) {
    stats.times[k] = k * dt;
    stats.moment_curves[0][k] = coef * std::exp(rate * stats.times[k]);
  }
  return stats;
}

}  // namespace

TEST_CASE("zero model gives flat moment curves") {
  SimConfig cfg;
  cfg.dt = 0.01;
  cfg.horizon = 1.0;
  cfg.x0 = {2.0};
  cfg.seed = 1;
  EnsembleStats stats =
      run_ensemble(zero_model(), two_mode(), nullptr, cfg, 8, {2.0, 4.0});
  for (std::size_t k = 0; k < stats.times.size(); ++k) {
    CHECK(stats.moment_curves[0][k] == 4.0);
    CHECK(stats.moment_curves[1][k] == 16.0);
  }
  CHECK(stats.n_blowups == 0);
}

TEST_CASE("single deterministic path equals its own ensemble") {
  SwitchingModel decay;
  decay.dim_x = 1;
  decay.dim_w = 1;
  decay.drift = [](double, std::span<const double> x, int, std::span<double> out) {
    out[0] = -x[0];
  };
  decay.diffusion = [](double, std::span<const double>, int, std::span<double> out) {
    out[0] = 0.0;
  };
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.horizon = 1.0;
  cfg.x0 = {1.0};
  cfg.seed = 2;
  EnsembleStats stats = run_ensemble(decay, single_state(), nullptr, cfg, 1, {2.0});
  Trajectory traj = simulate_uncontrolled(decay, single_state(), cfg);
  REQUIRE(stats.times.size() == traj.n_points());
  for (std::size_t k = 0; k < stats.times.size(); ++k) {
    double v = traj.state(k)[0];
    CHECK(stats.moment_curves[0][k] == v * v);
  }
}

TEST_CASE("ms exponent recovers an exact exponential curve") {
  EnsembleStats stats = synthetic_exponential(3.0, -3.0, 10.0, 0.01);
  ExponentEstimate est = estimate_ms_exponent(stats, 2.0, 0.0, 10.0);
  CHECK(est.slope == doctest::Approx(-3.0).epsilon(1e-9));
  CHECK(est.stderr_ < 1e-9);
}

TEST_CASE("ms exponent on the simulated linear decay is near -2") {
  SwitchingModel decay;
  decay.dim_x = 1;
  decay.dim_w = 1;
  decay.drift = [](double, std::span<const double> x, int, std::span<double> out) {
    out[0] = -x[0];
  };
  decay.diffusion = [](double, std::span<const double>, int, std::span<double> out) {
    out[0] = 0.0;
  };
  SimConfig cfg;
  cfg.dt = 1e-4;
  cfg.horizon = 2.0;
  cfg.x0 = {1.0};
  cfg.seed = 3;
  cfg.record_stride = 100;
  EnsembleStats stats = run_ensemble(decay, single_state(), nullptr, cfg, 1, {2.0});
  ExponentEstimate est = estimate_ms_exponent(stats, 2.0, 0.5, 2.0);
  CHECK(est.slope == doctest::Approx(-2.0).epsilon(0.02));
}

TEST_CASE("ms exponent rejects nonpositive curves") {
  EnsembleStats stats = synthetic_exponential(1.0, -1.0, 1.0, 0.1);
  stats.moment_curves[0][5] = 0.0;
  try {
    estimate_ms_exponent(stats, 2.0, 0.0, 1.0);
    FAIL("expected NonpositiveCurve");
  } catch (const SdsError& e) {
    CHECK(e.code() == ErrorCode::NonpositiveCurve);
  }
}

TEST_CASE("as exponent on deterministic decay") {
  SwitchingModel decay;
  decay.dim_x = 1;
  decay.dim_w = 1;
  decay.drift = [](double, std::span<const double> x, int, std::span<double> out) {
    out[0] = -2.0 * x[0];
  };
  decay.diffusion = [](double, std::span<const double>, int, std::span<double> out) {
    out[0] = 0.0;
  };
  SimConfig cfg;
  cfg.dt = 1e-4;
  cfg.horizon = 2.0;
  cfg.x0 = {1.0};
  cfg.seed = 4;
  cfg.record_stride = 100;
  EnsembleStats stats = run_ensemble(decay, single_state(), nullptr, cfg, 5, {2.0});
  ExponentEstimate est = estimate_as_exponent(stats);
  CHECK(est.slope == doctest::Approx(-2.0).epsilon(0.001));
  CHECK(est.stderr_ < 1e-12);  // identical paths
  CHECK(est.n_blowups == 0);
}

TEST_CASE("ensemble statistics are identical across thread counts") {
  BuiltinExample ex = builtin_two_mode_example();
  GeneratorMatrix gen = validate_generator(ex.generator);
  SwitchingModel model = ex.model.build();
  ControlLaw law;
  law.gains = ControlGains{{6.0, 6.0}};
  law.tau = 1e-3;
  law.tau0 = 1.7e-3;
  SimConfig cfg;
  cfg.dt = 1e-4;
  cfg.horizon = 1.0;
  cfg.x0 = {1.0};
  cfg.i0 = 1;
  cfg.seed = 11;
  cfg.record_stride = 10;

  EnsembleStats s1 = run_ensemble(model, gen, &law, cfg, 16, {2.0, 4.0}, 1);
  EnsembleStats s2 = run_ensemble(model, gen, &law, cfg, 16, {2.0, 4.0}, 2);
  EnsembleStats s8 = run_ensemble(model, gen, &law, cfg, 16, {2.0, 4.0}, 8);
  for (std::size_t qi = 0; qi < 2; ++qi)
    for (std::size_t k = 0; k < s1.times.size(); ++k) {
      CHECK(s1.moment_curves[qi][k] == s2.moment_curves[qi][k]);
      CHECK(s1.moment_curves[qi][k] == s8.moment_curves[qi][k]);
    }
  REQUIRE(s1.per_path_terminal_rates.size() == s8.per_path_terminal_rates.size());
  for (std::size_t i = 0; i < s1.per_path_terminal_rates.size(); ++i)
    CHECK(s1.per_path_terminal_rates[i] == s8.per_path_terminal_rates[i]);
}

TEST_CASE("moment curves respect the Lyapunov ordering in q") {
  BuiltinExample ex = builtin_two_mode_example();
  GeneratorMatrix gen = validate_generator(ex.generator);
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.horizon = 2.0;
  cfg.x0 = {1.0};
  cfg.i0 = 1;
  cfg.seed = 12;
  cfg.record_stride = 10;
  EnsembleStats stats =
      run_ensemble(ex.model.build(), gen, nullptr, cfg, 32, {2.0, 4.0});
  for (std::size_t k = 0; k < stats.times.size(); ++k) {
    double m2 = std::pow(stats.moment_curves[0][k], 1.0 / 2.0);
    double m4 = std::pow(stats.moment_curves[1][k], 1.0 / 4.0);
    CHECK(m2 <= m4 * (1.0 + 1e-9));
  }
}

TEST_CASE("all paths blowing up is an error") {
  ScalarPolyModel cubic;
  cubic.drift = {{{1.0, 3.0, false}}};
  cubic.diffusion = {{}};
  SimConfig cfg;
  cfg.dt = 0.1;
  cfg.horizon = 5.0;
  cfg.x0 = {2.0};
  cfg.seed = 13;
  try {
    run_ensemble(cubic.build(), single_state(), nullptr, cfg, 3, {2.0});
    FAIL("expected AllPathsBlewUp");
  } catch (const SdsError& e) {
    CHECK(e.code() == ErrorCode::AllPathsBlewUp);
  }
}

TEST_CASE("mixed blowups are counted and curves stay finite") {
  // mode 0 explodes cubically, mode 1 restores; outcomes differ by path.
  ScalarPolyModel mixed;
  mixed.drift = {{{1.0, 3.0, false}}, {{-1.0, 3.0, false}}};
  mixed.diffusion = {{{0.2, 1.0, false}}, {{0.2, 1.0, false}}};
  Mat slow(2, 2);
  slow(0, 0) = -1.0;
  slow(0, 1) = 1.0;
  slow(1, 0) = 1.0;
  slow(1, 1) = -1.0;
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.horizon = 5.0;
  cfg.x0 = {1.2};
  cfg.i0 = 1;
  cfg.seed = 14;
  cfg.record_stride = 100;
  EnsembleStats stats = run_ensemble(mixed.build(), validate_generator(slow), nullptr,
                                     cfg, 24, {2.0});
  CHECK(stats.n_blowups > 0);
  CHECK(stats.n_blowups < 24);
  for (std::size_t k = 0; k < stats.times.size(); ++k) {
    CHECK(std::isfinite(stats.moment_curves[0][k]));
    CHECK(stats.alive_counts[k] >= 24 - stats.n_blowups);
  }
}

TEST_CASE("integral moment of simple curves") {
  SUBCASE("constant curve integrates to the horizon") {
    SimConfig cfg;
    cfg.dt = 0.01;
    cfg.horizon = 10.0;
    cfg.x0 = {1.0};
    cfg.seed = 15;
    EnsembleStats stats = run_ensemble(zero_model(), two_mode(), nullptr, cfg, 2, {6.0});
    IntegralMoment im = integral_moment(stats, 6.0);
    CHECK(im.value == doctest::Approx(10.0).epsilon(1e-12));
    CHECK_FALSE(im.tail_convergent);  // flat tail has slope 0
  }
  SUBCASE("exponential curve integrates to 1 - e^{-10}") {
    EnsembleStats stats = synthetic_exponential(1.0, -1.0, 10.0, 1e-3);
    IntegralMoment im = integral_moment(stats, 2.0);
    CHECK(im.value == doctest::Approx(1.0 - std::exp(-10.0)).epsilon(1e-6));
    CHECK(im.tail_convergent);
    CHECK(im.tail_slope == doctest::Approx(-1.0).epsilon(1e-6));
  }
}

TEST_CASE("occupation check against the stationary distribution") {
  SUBCASE("two-mode chain over ten seeds") {
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 10; ++s) seeds.push_back(s);
    OccupationReport rep = occupation_check(two_mode(), 1000.0, seeds);
    CHECK(rep.max_deviation <= 0.03);
    REQUIRE(rep.occupations.size() == 10);
  }
  SUBCASE("single state occupies everything") {
    OccupationReport rep = occupation_check(single_state(), 10.0, {1, 2});
    for (const auto& occ : rep.occupations) CHECK(occ[0] == doctest::Approx(1.0));
    CHECK(rep.max_deviation < 1e-12);
  }
  SUBCASE("symmetric chain splits evenly") {
    Mat g(2, 2);
    g(0, 0) = -1.0;
    g(0, 1) = 1.0;
    g(1, 0) = 1.0;
    g(1, 1) = -1.0;
    OccupationReport rep = occupation_check(validate_generator(g), 1000.0, {5, 6, 7});
    CHECK(rep.max_deviation <= 0.03);
  }
}

TEST_CASE("controlled benchmark ensemble: exponent estimates and integrability") {
  BuiltinExample ex = builtin_two_mode_example();
  GeneratorMatrix gen = validate_generator(ex.generator);
  SwitchingModel model = ex.model.build();
  ControlLaw law;
  law.gains = ControlGains{{6.0, 6.0}};
  law.tau = 1e-4;
  law.tau0 = 1.7e-4;
  SimConfig cfg;
  cfg.dt = 1e-5;
  cfg.horizon = 2.0;
  cfg.x0 = {1.0};
  cfg.i0 = 1;
  cfg.seed = 77;
  cfg.record_stride = 100;
  EnsembleStats stats = run_ensemble(model, gen, &law, cfg, 50, {2.0, 6.0});

  // almost-sure rate estimate: comfortably negative (theory bound -1.9172)
  ExponentEstimate as = estimate_as_exponent(stats);
  CHECK(as.slope <= -0.9);
  CHECK(as.n_blowups == 0);

  // one-sided consistency of the mean-square slope with the design bound
  ExponentEstimate ms = estimate_ms_exponent(stats, 2.0, 0.5, 2.0);
  CHECK(ms.slope <= -(5.8345 - 2.0) + 2.0 * ms.stderr_ + 1.0);

  // the rho + theta - 2 = 6 moment integral is finite with a decaying tail
  IntegralMoment im = integral_moment(stats, 6.0);
  CHECK(std::isfinite(im.value));
  CHECK(im.value > 0.0);
  CHECK(im.tail_convergent);
}

TEST_CASE("understrength control leaves the growth estimate positive") {
  // average drift rate 2 against average gain 1: the gap drives growth
  ScalarPolyModel linear;
  linear.drift = {{{2.0, 1.0, false}}, {{2.0, 1.0, false}}};
  linear.diffusion = {{{0.3, 1.0, false}}, {{0.3, 1.0, false}}};
  Mat g(2, 2);
  g(0, 0) = -1.0;
  g(0, 1) = 1.0;
  g(1, 0) = 1.0;
  g(1, 1) = -1.0;
  ControlLaw law;
  law.gains = ControlGains{{1.0, 1.0}};
  law.tau = 1e-2;
  law.tau0 = 0.0;
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.horizon = 10.0;
  cfg.x0 = {1.0};
  cfg.i0 = 0;
  cfg.seed = 16;
  cfg.record_stride = 100;
  EnsembleStats stats =
      run_ensemble(linear.build(), validate_generator(g), &law, cfg, 20, {2.0});
  bool grew = false;
  if (stats.n_blowups > 10) {
    grew = true;
  } else {
    ExponentEstimate as = estimate_as_exponent(stats);
    grew = as.slope > 0.0;
  }
  CHECK(grew);
}
