#include "sds/spectral.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sds/constants.hpp"
#include "sds/errors.hpp"

namespace sds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Mat shifted_generator(const GeneratorMatrix& g, const std::vector<double>& mu, double l) {
  Mat m = g.rates();
  for (int i = 0; i < m.rows(); ++i) m(i, i) -= l * mu[i];
  return m;
}

double max_gain(const std::vector<double>& alpha) {
  double best = 0.0;
  for (double a : alpha) best = std::max(best, a);
  return best;
}

}  // namespace

const char* lambda_variant_name(LambdaVariant v) {
  return v == LambdaVariant::FormulaA ? "formula_a" : "formula_b";
}

double eta(const GeneratorMatrix& g, const std::vector<double>& mu, double l) {
  return -spectral_abscissa(shifted_generator(g, mu, l));
}

double eta(const SpectralQuery& q) { return eta(q.generator, q.mu, q.l); }

double kappa(const GeneratorMatrix& g, const std::vector<double>& mu) {
  StationaryDistribution pi = stationary_distribution(g);
  double pi_mu = pi.dot(mu);
  if (!(pi_mu > 0.0))
    throw SdsError(ErrorCode::HypothesisViolated,
                   "kappa requires pi*mu > 0, got " + std::to_string(pi_mu));

  double mu_min = mu[0];
  for (double m : mu) mu_min = std::min(mu_min, m);
  if (mu_min >= 0.0) return kInf;

  // The sign change lies strictly inside (0, min over negative-mu states
  // of gamma_ii / mu_i).
  double upper = kInf;
  for (int i = 0; i < g.n_states(); ++i)
    if (mu[i] < 0.0) upper = std::min(upper, g.rate(i, i) / mu[i]);

  double lo = 1e-12;
  double hi = upper - 1e-12;
  if (!(eta(g, mu, lo) > 0.0) || !(eta(g, mu, hi) < 0.0))
    throw SdsError(ErrorCode::BracketFailure,
                   "no eta sign change inside (0, " + std::to_string(upper) + ")");
  for (int it = 0; it < 200 && (hi - lo) > tol::kappa_rel * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (eta(g, mu, mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double epsilon_for(double kappa_value, double l) {
  if (std::isinf(kappa_value)) return 1.0;
  return std::min((kappa_value - l) / (2.0 * l), 1.0);
}

double lambda_exponent_coefficient(double l, double alpha_max, double epsilon,
                                   LambdaVariant variant) {
  double c = l * alpha_max * (1.0 + epsilon);
  if (variant == LambdaVariant::FormulaA) c /= epsilon;
  return c;
}

double lambda_tau(double l, double tau, double alpha_max, double max_exit_rate,
                  double epsilon, LambdaVariant variant) {
  double c = lambda_exponent_coefficient(l, alpha_max, epsilon, variant);
  return max_exit_rate * std::expm1(c * tau);
}

double tau_bar(const GeneratorMatrix& g, const std::vector<double>& alpha,
               const std::vector<double>& h, double l, LambdaVariant variant) {
  StationaryDistribution pi = stationary_distribution(g);
  std::vector<double> mu(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) mu[i] = alpha[i] - h[i];
  if (!(pi.dot(alpha) > pi.dot(h)))
    throw SdsError(ErrorCode::HypothesisViolated, "tau_bar requires pi*alpha > pi*h");
  double k = kappa(g, mu);
  if (!(l < k))
    throw SdsError(ErrorCode::HypothesisViolated,
                   "tau_bar requires l < kappa, got l = " + std::to_string(l) +
                       ", kappa = " + std::to_string(k));
  double eps = epsilon_for(k, l);
  double eta_boosted = eta(g, mu, l * (1.0 + eps));
  double gamma_max = g.max_exit_rate();
  if (gamma_max <= 0.0) return kInf;  // single state: no sampling penalty
  double c = lambda_exponent_coefficient(l, max_gain(alpha), eps, variant);
  return std::log1p(eta_boosted / (eps * gamma_max)) / c;
}

ZetaResult zeta(const GeneratorMatrix& g, const std::vector<double>& alpha,
                const std::vector<double>& h, double l, double tau,
                LambdaVariant variant) {
  StationaryDistribution pi = stationary_distribution(g);
  std::vector<double> mu(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) mu[i] = alpha[i] - h[i];
  if (!(pi.dot(alpha) > pi.dot(h)))
    throw SdsError(ErrorCode::HypothesisViolated, "zeta requires pi*alpha > pi*h");
  double k = kappa(g, mu);
  if (!(l < k))
    throw SdsError(ErrorCode::HypothesisViolated,
                   "zeta requires l < kappa, got l = " + std::to_string(l) +
                       ", kappa = " + std::to_string(k));

  ZetaResult r;
  r.variant = variant;
  r.kappa = k;
  r.epsilon = epsilon_for(k, l);
  r.eta_boosted = eta(g, mu, l * (1.0 + r.epsilon));
  double gamma_max = g.max_exit_rate();
  r.lambda_tau = lambda_tau(l, tau, max_gain(alpha), gamma_max, r.epsilon, variant);
  if (gamma_max > 0.0) {
    double c = lambda_exponent_coefficient(l, max_gain(alpha), r.epsilon, variant);
    r.tau_bar = std::log1p(r.eta_boosted / (r.epsilon * gamma_max)) / c;
  } else {
    r.tau_bar = kInf;
  }
  r.zeta = (r.eta_boosted - r.epsilon * r.lambda_tau) / (1.0 + r.epsilon);
  r.positive = r.zeta > 0.0;
  return r;
}

}  // namespace sds
