#include "sds/designer.hpp"

#include <algorithm>
#include <cmath>

#include "sds/constants.hpp"

namespace sds {

namespace {

double vec_min(const std::vector<double>& v) {
  return *std::min_element(v.begin(), v.end());
}

double vec_max(const std::vector<double>& v) {
  return *std::max_element(v.begin(), v.end());
}

std::vector<double> minus(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

RootRecord solve_root(const std::string& name, BetaFamily family, double target,
                      const BetaParams& params) {
  RootRecord rec;
  rec.name = name;
  rec.family = family;
  rec.target = target;
  if (target == 0.0) {
    rec.root = 0.0;
    rec.residual_rel = 0.0;
    rec.degenerate = true;
    return rec;
  }
  rec.root = solve_threshold(family, target, params);
  rec.residual_rel = std::abs(beta_eval(family, rec.root, params) - target) / target;
  return rec;
}

[[noreturn]] void fail_hypothesis(DesignReport& rep, ErrorCode code,
                                  const std::string& name) {
  rep.hypotheses_ok = false;
  rep.verdict = "hypothesis " + name + " failed";
  throw HypothesisError(code, rep.verdict, rep);
}

// Records lhs > rhs in the checklist; throws with the report attached on
// failure.
void require_gt(DesignReport& rep, ErrorCode code, const std::string& name, double lhs,
                double rhs) {
  bool ok = lhs > rhs;
  rep.hypotheses.push_back({name, lhs, rhs, ok});
  if (!ok) fail_hypothesis(rep, code, name);
}

}  // namespace

double ControlGains::max() const { return vec_max(alpha); }

void ControlGains::validate() const {
  if (alpha.empty())
    throw SdsError(ErrorCode::ConfigError, "gain vector is empty");
  bool any_positive = false;
  for (double a : alpha) {
    if (a < 0.0) throw SdsError(ErrorCode::ConfigError, "gains must be nonnegative");
    any_positive = any_positive || a > 0.0;
  }
  if (!any_positive)
    throw SdsError(ErrorCode::ConfigError, "at least one gain must be positive");
}

double NonlinearBounds::a_max() const { return vec_max(upper_a); }
double NonlinearBounds::a_min() const { return vec_min(upper_a); }
double NonlinearBounds::b_min() const { return vec_min(upper_b); }

void NonlinearBounds::validate() const {
  double q_max = std::max(q1, q2);
  if (q1 < 1.0 || q2 < 1.0)
    throw SdsError(ErrorCode::ConfigError, "growth orders q1, q2 must be >= 1");
  if (theta <= 2.0)
    throw SdsError(ErrorCode::ConfigError, "theta must exceed 2");
  if (theta < q_max + 1.0)
    throw SdsError(ErrorCode::ConfigError, "theta must be >= (q1 v q2) + 1");
  if (p < 2.0 * q_max)
    throw SdsError(ErrorCode::ConfigError, "p must be >= 2(q1 v q2)");
  if (k <= 0.0) throw SdsError(ErrorCode::ConfigError, "growth constant K must be positive");
  if (upper_a.empty() || upper_b.empty() || upper_a.size() != upper_b.size())
    throw SdsError(ErrorCode::ConfigError, "per-mode A and B vectors must match");
  for (double b : upper_b)
    if (b <= 0.0) throw SdsError(ErrorCode::ConfigError, "B_i must be positive");
  if (c < 0.0) throw SdsError(ErrorCode::ConfigError, "offset c must be nonnegative");
}

const char* beta_family_name(BetaFamily f) {
  switch (f) {
    case BetaFamily::Affine1: return "affine1";
    case BetaFamily::Affine2: return "affine2";
    case BetaFamily::Affine3: return "affine3";
    case BetaFamily::Affine4: return "affine4";
    case BetaFamily::Linear1: return "linear1";
    case BetaFamily::Linear2: return "linear2";
    case BetaFamily::Linear3: return "linear3";
    case BetaFamily::Linear4: return "linear4";
    case BetaFamily::Poly1: return "poly1";
    case BetaFamily::Poly2: return "poly2";
    case BetaFamily::Poly3: return "poly3";
  }
  return "unknown";
}

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::QlBounded: return "ql_bounded";
    case Scenario::QlUnbounded: return "ql_unbounded";
    case Scenario::QlStable: return "ql_stable";
    case Scenario::QlUnstable: return "ql_unstable";
    case Scenario::NlStable: return "nl_stable";
    case Scenario::NlStableHighMoment: return "nl_stable_p_ge_theta";
  }
  return "unknown";
}

double beta_eval(BetaFamily family, double y, const BetaParams& p) {
  const double k2 = p.growth_k * p.growth_k;
  const double a = p.alpha_max;
  const double a2 = a * a;
  switch (family) {
    case BetaFamily::Affine1:
      return 2.0 * y * (2.0 * y * (k2 + a2) + k2);
    case BetaFamily::Affine2:
      return 2.0 * a * y * (4.0 * a * y + 1.0);
    case BetaFamily::Affine3:
      return y * (8.0 * a2 * y + 2.0 * a + 1.5 * p.upsilon);
    case BetaFamily::Affine4:
      return y * y *
             (3.0 * y * (k2 + a2) * p.x0_sq + 2.0 * k2 * p.x0_sq + k2 * (3.0 * y + 2.0));
    case BetaFamily::Linear1:
      return y * (3.0 * y * (k2 + a2) + k2);
    case BetaFamily::Linear2:
      return 2.0 * a * y * (3.0 * a * y + 1.0);
    case BetaFamily::Linear3:
      return 2.0 * y * (3.0 * a2 * y + a + p.sigma);
    case BetaFamily::Linear4:
      return y * y * (2.0 * y * (k2 + a2) * p.x0_sq + k2 * p.x0_sq);
    case BetaFamily::Poly1:
      return 2.0 * y * (3.0 * y * (k2 + a2) + 2.0 * k2);
    case BetaFamily::Poly2:
      return k2 * y * (3.0 * y + 2.0);
    case BetaFamily::Poly3:
      return 2.0 * a * y * (1.0 + 6.0 * a * y);
  }
  throw SdsError(ErrorCode::UnknownFamily, "unknown beta family");
}

double solve_threshold(BetaFamily family, double target, const BetaParams& params) {
  if (!(target > 0.0))
    throw SdsError(ErrorCode::ConfigError, "threshold target must be positive");

  double y = 1e-8;
  double f = beta_eval(family, y, params);
  double lo, hi;
  if (f >= target) {
    while (f >= target && y > 1e-300) {
      y *= 0.5;
      f = beta_eval(family, y, params);
    }
    lo = y;
    hi = 2.0 * y;
  } else {
    while (f < target) {
      y *= 2.0;
      f = beta_eval(family, y, params);
      if (!std::isfinite(f))
        throw SdsError(ErrorCode::ConfigError, "beta overflow while bracketing");
    }
    lo = 0.5 * y;
    hi = y;
  }
  for (int it = 0; it < 500 && (hi - lo) > tol::root_rel * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (beta_eval(family, mid, params) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double vartheta(double sigma, double alpha_max, double rho, double a_max) {
  return 0.5 * sigma + alpha_max * alpha_max *
                           ((5.0 * rho + 4.0) * sigma + 8.0 * (rho - 2.0) * a_max) /
                           (sigma * sigma);
}

double vartheta_high_moment(double sigma, double alpha_max, double theta, double a_max,
                            double b_min) {
  return 0.5 * sigma + alpha_max * alpha_max *
                           (theta * b_min + 2.0 * (theta - 2.0) * a_max) /
                           (sigma * b_min);
}

LadderEntry moment_rate(double q, double zeta_value, double sigma, double p, double rho) {
  if (q < 2.0 || q >= p)
    throw SdsError(ErrorCode::QOutOfRange,
                   "moment order q must lie in [2, p); got q = " + std::to_string(q));
  double base = zeta_value - sigma;
  LadderEntry e;
  e.q = q;
  if (q == 2.0) {
    e.rate = -base;
  } else if (q <= rho) {
    e.rate = -(q / rho) * base;
    // The stated branch covers q in (2, rho] only when rho == p; the same
    // interpolation is applied for rho < p and flagged.
    e.extension = (rho < p) && (q < rho);
  } else {
    e.rate = -((p - q) / (p - rho)) * base;
  }
  return e;
}

std::vector<LadderEntry> moment_exponent_ladder(double zeta_value, double sigma, double p,
                                                double rho, const std::vector<double>& qs) {
  std::vector<LadderEntry> out;
  out.reserve(qs.size());
  for (double q : qs) out.push_back(moment_rate(q, zeta_value, sigma, p, rho));
  return out;
}

DesignReport design_ql_bounded(const GeneratorMatrix& g, const ControlGains& gains,
                               const QuasiLinearBounds& bounds, LambdaVariant variant) {
  gains.validate();
  if (!bounds.upper_d || !bounds.upper_e)
    throw SdsError(ErrorCode::ConfigError, "ql_bounded needs the upper coefficients D and E");

  DesignReport rep;
  rep.scenario = Scenario::QlBounded;
  rep.variant = variant;

  StationaryDistribution pi = stationary_distribution(g);
  const std::vector<double>& d = *bounds.upper_d;
  require_gt(rep, ErrorCode::HypothesisViolated, "pi*alpha > pi*D", pi.dot(gains.alpha),
             pi.dot(d));
  double kap = kappa(g, minus(gains.alpha, d));
  require_gt(rep, ErrorCode::HypothesisViolated, "kappa_{alpha-D} > 2", kap, 2.0);
  rep.hypotheses_ok = true;

  double tb = tau_bar(g, gains.alpha, d, 2.0, variant);
  rep.tau_sampling_max = 0.5 * tb;
  rep.spectral = zeta(g, gains.alpha, d, 2.0, rep.tau_sampling_max, variant);
  rep.has_spectral = true;
  double z = rep.spectral.zeta;

  BetaParams params;
  params.growth_k = bounds.k_bar;
  params.alpha_max = gains.max();
  double a2 = params.alpha_max * params.alpha_max;
  rep.roots.push_back(solve_root("y1", BetaFamily::Affine1,
                                 z * z / (2.0 * (8.0 * a2 + z * z)), params));
  rep.roots.push_back(
      solve_root("y2", BetaFamily::Affine2, z * z / (8.0 * a2 + z * z), params));
  rep.tau_plus_lag_max = std::min(rep.roots[0].root, rep.roots[1].root);
  return rep;
}

DesignReport design_ql_unbounded(const GeneratorMatrix& g, const ControlGains& gains,
                                 const QuasiLinearBounds& bounds, double x0_sq) {
  gains.validate();
  if (!bounds.lower_d || !bounds.lower_e)
    throw SdsError(ErrorCode::ConfigError, "ql_unbounded needs the lower coefficients d and e");

  DesignReport rep;
  rep.scenario = Scenario::QlUnbounded;

  StationaryDistribution pi = stationary_distribution(g);
  const std::vector<double>& d = *bounds.lower_d;
  const std::vector<double>& e = *bounds.lower_e;
  double upsilon = pi.dot(d) - pi.dot(gains.alpha);
  require_gt(rep, ErrorCode::HypothesisViolated, "upsilon = pi*d - pi*alpha > 0", upsilon,
             0.0);
  rep.hypotheses_ok = true;

  BetaParams params;
  params.growth_k = bounds.k_bar;
  params.alpha_max = gains.max();
  params.upsilon = upsilon;
  params.x0_sq = x0_sq;
  double a2 = params.alpha_max * params.alpha_max;
  double denom = 2.0 * a2 + upsilon * upsilon;
  double e_min = vec_min(e);
  double d_max = vec_max(d);

  rep.roots.push_back(solve_root(
      "y3", BetaFamily::Affine1, upsilon * std::min(e_min, 0.5 * upsilon) / denom, params));
  rep.roots.push_back(
      solve_root("y4", BetaFamily::Affine3, upsilon * upsilon / denom, params));
  rep.roots.push_back(solve_root(
      "y5", BetaFamily::Affine4, upsilon * (e_min / (2.0 * d_max) + x0_sq) / denom, params));
  rep.tau_plus_lag_max = std::min({rep.roots[0].root, rep.roots[1].root, rep.roots[2].root});
  rep.tau_sampling_max = rep.tau_plus_lag_max;
  rep.divergence_rate = 0.25 * upsilon;
  return rep;
}

DesignReport design_ql_stable(const GeneratorMatrix& g, const ControlGains& gains,
                              const QuasiLinearBounds& bounds, double sigma,
                              LambdaVariant variant, std::optional<double> tau,
                              std::optional<double> tau0) {
  gains.validate();
  if (!bounds.upper_d)
    throw SdsError(ErrorCode::ConfigError, "ql_stable needs the upper coefficients D");

  DesignReport rep;
  rep.scenario = Scenario::QlStable;
  rep.variant = variant;
  rep.sigma = sigma;

  StationaryDistribution pi = stationary_distribution(g);
  const std::vector<double>& d = *bounds.upper_d;
  require_gt(rep, ErrorCode::HypothesisViolated, "pi*alpha > pi*D", pi.dot(gains.alpha),
             pi.dot(d));
  double kap = kappa(g, minus(gains.alpha, d));
  require_gt(rep, ErrorCode::HypothesisViolated, "kappa_{alpha-D} > 2", kap, 2.0);

  double tb = tau_bar(g, gains.alpha, d, 2.0, variant);
  rep.tau_sampling_max = 0.5 * tb;
  rep.spectral = zeta(g, gains.alpha, d, 2.0, rep.tau_sampling_max, variant);
  rep.has_spectral = true;

  {
    bool ok = sigma > 0.0;
    rep.hypotheses.push_back({"sigma > 0", sigma, 0.0, ok});
    if (!ok) fail_hypothesis(rep, ErrorCode::SigmaOutOfRange, "sigma > 0");
  }
  {
    bool ok = sigma < rep.spectral.zeta;
    rep.hypotheses.push_back({"sigma < zeta(tau_max)", sigma, rep.spectral.zeta, ok});
    if (!ok) fail_hypothesis(rep, ErrorCode::SigmaOutOfRange, "sigma < zeta(tau_max)");
  }
  rep.hypotheses_ok = true;

  BetaParams params;
  params.growth_k = bounds.k_bar;
  params.alpha_max = gains.max();
  params.sigma = sigma;
  double a2 = params.alpha_max * params.alpha_max;
  double target = sigma * sigma / (8.0 * a2 + sigma * sigma);
  rep.roots.push_back(solve_root("y6", BetaFamily::Linear1, target, params));
  rep.roots.push_back(solve_root("y7", BetaFamily::Linear2, target, params));
  rep.tau_plus_lag_max = std::min(rep.roots[0].root, rep.roots[1].root);

  double tau_used = tau.value_or(rep.tau_sampling_max);
  rep.chosen_tau = tau_used;
  rep.chosen_tau0 = tau0.value_or(0.0);
  rep.zeta_at_chosen = zeta(g, gains.alpha, d, 2.0, tau_used, variant).zeta;
  rep.chosen_admissible = tau_used <= rep.tau_sampling_max &&
                          tau_used + rep.chosen_tau0 <= rep.tau_plus_lag_max;
  double ms = -(rep.zeta_at_chosen - sigma);
  rep.moment_rates.push_back({2.0, ms, false});
  rep.as_rate = 0.5 * ms;
  return rep;
}

DesignReport design_ql_unstable(const GeneratorMatrix& g, const ControlGains& gains,
                                const QuasiLinearBounds& bounds, double sigma,
                                double x0_sq) {
  gains.validate();
  if (!bounds.lower_d)
    throw SdsError(ErrorCode::ConfigError, "ql_unstable needs the lower coefficients d");

  DesignReport rep;
  rep.scenario = Scenario::QlUnstable;
  rep.sigma = sigma;

  StationaryDistribution pi = stationary_distribution(g);
  const std::vector<double>& d = *bounds.lower_d;
  double gap = pi.dot(d) - pi.dot(gains.alpha);
  require_gt(rep, ErrorCode::HypothesisViolated, "pi*d > pi*alpha", pi.dot(d),
             pi.dot(gains.alpha));
  {
    bool ok = sigma > 0.0 && sigma < gap;
    rep.hypotheses.push_back({"0 < sigma < pi*d - pi*alpha", sigma, gap, ok});
    if (!ok) fail_hypothesis(rep, ErrorCode::SigmaOutOfRange, "0 < sigma < pi*d - pi*alpha");
  }
  rep.hypotheses_ok = true;

  BetaParams params;
  params.growth_k = bounds.k_bar;
  params.alpha_max = gains.max();
  params.sigma = sigma;
  params.x0_sq = x0_sq;
  double a2 = params.alpha_max * params.alpha_max;
  double denom = 2.0 * a2 + sigma * sigma;

  rep.roots.push_back(
      solve_root("y8", BetaFamily::Linear1, sigma * sigma / denom, params));
  rep.roots.push_back(
      solve_root("y9", BetaFamily::Linear3, sigma * sigma / denom, params));
  rep.roots.push_back(
      solve_root("y10", BetaFamily::Linear4, sigma * x0_sq / denom, params));
  rep.tau_plus_lag_max = std::min({rep.roots[0].root, rep.roots[1].root, rep.roots[2].root});
  rep.tau_sampling_max = rep.tau_plus_lag_max;
  rep.degenerate = rep.roots[2].degenerate;  // x0 = 0 makes the bound vacuous
  rep.divergence_rate = 2.0 * (gap - sigma);
  return rep;
}

namespace {

DesignReport design_nl_common(const GeneratorMatrix& g, const ControlGains& gains,
                              const NonlinearBounds& bounds, double sigma,
                              LambdaVariant variant, std::optional<double> tau,
                              std::optional<double> tau0, bool high_moment) {
  gains.validate();
  bounds.validate();
  if (high_moment && bounds.p < bounds.theta)
    throw SdsError(ErrorCode::ConfigError, "the p >= theta variant needs p >= theta");

  DesignReport rep;
  rep.scenario = high_moment ? Scenario::NlStableHighMoment : Scenario::NlStable;
  rep.variant = variant;
  rep.sigma = sigma;

  StationaryDistribution pi = stationary_distribution(g);
  require_gt(rep, ErrorCode::HypothesisViolated, "pi*alpha > pi*A", pi.dot(gains.alpha),
             pi.dot(bounds.upper_a));
  double kap = kappa(g, minus(gains.alpha, bounds.upper_a));
  require_gt(rep, ErrorCode::HypothesisViolated, "kappa_{alpha-A} > 2", kap, 2.0);

  double tb = tau_bar(g, gains.alpha, bounds.upper_a, 2.0, variant);
  rep.tau_sampling_max = 0.5 * tb;
  rep.spectral = zeta(g, gains.alpha, bounds.upper_a, 2.0, rep.tau_sampling_max, variant);
  rep.has_spectral = true;

  double sigma_cap = std::min(rep.spectral.zeta, 2.0 * bounds.b_min());
  {
    bool ok = sigma > 0.0 && sigma < sigma_cap;
    rep.hypotheses.push_back({"0 < sigma < zeta(tau_max) ^ 2*min(B)", sigma, sigma_cap, ok});
    if (!ok)
      fail_hypothesis(rep, ErrorCode::SigmaOutOfRange, "0 < sigma < zeta(tau_max) ^ 2*min(B)");
  }
  rep.hypotheses_ok = true;

  double rho = high_moment ? bounds.theta : bounds.rho();
  double a_max = bounds.a_max();
  double b_min = bounds.b_min();
  rep.lambda_coef = 1.0 + rho + 2.0 * (rho - 2.0) * a_max / sigma;

  BetaParams params;
  params.growth_k = bounds.k;
  params.alpha_max = gains.max();

  if (!high_moment) {
    rep.vartheta = vartheta(sigma, params.alpha_max, rho, a_max);
    rep.roots.push_back(
        solve_root("y1", BetaFamily::Poly1, sigma / (2.0 * rep.vartheta), params));
    rep.roots.push_back(solve_root(
        "y2", BetaFamily::Poly2, rho * (2.0 * b_min - sigma) / (2.0 * rep.vartheta), params));
    rep.roots.push_back(
        solve_root("y3", BetaFamily::Poly3, sigma / (2.0 * rep.vartheta), params));
  } else {
    rep.vartheta =
        vartheta_high_moment(sigma, params.alpha_max, bounds.theta, a_max, b_min);
    rep.roots.push_back(solve_root(
        "y1p", BetaFamily::Poly1,
        sigma * (bounds.theta - 2.0) * a_max / (4.0 * b_min * rep.vartheta), params));
    rep.roots.push_back(solve_root(
        "y2p", BetaFamily::Poly2,
        bounds.theta * (2.0 * b_min - sigma) / (2.0 * rep.vartheta), params));
    rep.roots.push_back(
        solve_root("y3p", BetaFamily::Poly3, sigma / (2.0 * rep.vartheta), params));
  }
  rep.tau_plus_lag_max = std::min({rep.roots[0].root, rep.roots[1].root, rep.roots[2].root});

  double tau_used = tau.value_or(rep.tau_sampling_max);
  rep.chosen_tau = tau_used;
  rep.chosen_tau0 = tau0.value_or(0.0);
  rep.zeta_at_chosen =
      zeta(g, gains.alpha, bounds.upper_a, 2.0, tau_used, variant).zeta;
  rep.chosen_admissible = tau_used <= rep.tau_sampling_max &&
                          tau_used + rep.chosen_tau0 < rep.tau_plus_lag_max;

  // Moment ladder at the chosen tau: q = 2 and rho from the stability criterion, the
  // rest interpolated.
  std::vector<double> qs = {2.0};
  for (double q = 3.0; q < bounds.p; q += 1.0) qs.push_back(q);
  if (rho < bounds.p) qs.push_back(rho);
  double v = 2.0 * std::max(bounds.q1, bounds.q2);
  if (v > 2.0 && v < bounds.p) qs.push_back(v);
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  rep.moment_rates =
      moment_exponent_ladder(rep.zeta_at_chosen, sigma, bounds.p, rho, qs);

  double ms = -(rep.zeta_at_chosen - sigma);
  rep.as_rate = 0.5 * ms;
  if (v >= 2.0 && v < bounds.p)
    rep.as_rate_ladder = moment_rate(v, rep.zeta_at_chosen, sigma, bounds.p, rho).rate;

  rep.integral_moment_exponent = rho + bounds.theta - 2.0;
  rep.integral_moment_finite = true;
  return rep;
}

}  // namespace

DesignReport design_nl_stable(const GeneratorMatrix& g, const ControlGains& gains,
                              const NonlinearBounds& bounds, double sigma,
                              LambdaVariant variant, std::optional<double> tau,
                              std::optional<double> tau0) {
  return design_nl_common(g, gains, bounds, sigma, variant, tau, tau0, false);
}

DesignReport design_nl_stable_p_ge_theta(const GeneratorMatrix& g,
                                         const ControlGains& gains,
                                         const NonlinearBounds& bounds, double sigma,
                                         LambdaVariant variant, std::optional<double> tau,
                                         std::optional<double> tau0) {
  return design_nl_common(g, gains, bounds, sigma, variant, tau, tau0, true);
}

}  // namespace sds
