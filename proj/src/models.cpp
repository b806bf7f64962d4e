#include "sds/models.hpp"

#include <cmath>

#include "sds/errors.hpp"

namespace sds {

namespace {

// x^k for integer k >= 0 by repeated multiplication; the hot simulation
// loop cannot afford std::pow for the common small powers.
double int_pow(double x, int k) {
  double r = 1.0;
  while (k > 0) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}

double pow_fast(double x, double power) {
  double k = std::round(power);
  if (k == power && k >= 0.0 && k <= 64.0) return int_pow(x, static_cast<int>(k));
  double half = std::round(2.0 * power);
  if (half == 2.0 * power && half >= 0.0 && half <= 128.0)
    return int_pow(std::sqrt(x), static_cast<int>(half));
  return std::pow(x, power);
}

}  // namespace

double eval_poly(const std::vector<PolyTerm>& terms, double x) {
  double out = 0.0;
  for (const PolyTerm& t : terms) {
    double base = t.absolute ? std::abs(x) : x;
    if (t.absolute || t.power == std::round(t.power)) {
      out += t.coef * pow_fast(base, t.power);
    } else {
      out += t.coef * std::pow(base, t.power);
    }
  }
  return out;
}

SwitchingModel ScalarPolyModel::build() const {
  if (drift.size() != diffusion.size() || drift.empty())
    throw SdsError(ErrorCode::ConfigError, "per-mode drift/diffusion tables must match");
  SwitchingModel m;
  m.dim_x = 1;
  m.dim_w = 1;
  auto drift_tables = drift;
  auto diff_tables = diffusion;
  m.drift = [drift_tables](double, std::span<const double> x, int mode,
                           std::span<double> out) {
    out[0] = eval_poly(drift_tables[mode], x[0]);
  };
  m.diffusion = [diff_tables](double, std::span<const double> x, int mode,
                              std::span<double> out) {
    out[0] = eval_poly(diff_tables[mode], x[0]);
  };
  return m;
}

BuiltinExample builtin_two_mode_example() {
  BuiltinExample ex;
  ex.generator = Mat(2, 2);
  ex.generator(0, 0) = -10.0;
  ex.generator(0, 1) = 10.0;
  ex.generator(1, 0) = 20.0;
  ex.generator(1, 1) = -20.0;

  ex.model.drift = {
      {{1.0, 1.0, false}, {-3.0, 3.0, false}},
      {{1.0, 1.0, false}, {-2.0, 3.0, false}},
  };
  ex.model.diffusion = {
      {{1.0, 1.5, true}},
      {{1.0, 1.0, false}},
  };

  ex.bounds.k = 3.0;
  ex.bounds.q1 = 3.0;
  ex.bounds.q2 = 1.5;
  ex.bounds.p = 7.0;
  ex.bounds.theta = 4.0;
  ex.bounds.upper_a = {2.5, 4.0};
  ex.bounds.upper_b = {1.5, 2.0};
  ex.bounds.c = 0.0;
  return ex;
}

}  // namespace sds
