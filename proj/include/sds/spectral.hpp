#ifndef SDS_SPECTRAL_HPP
#define SDS_SPECTRAL_HPP

#include <vector>

#include "sds/chain.hpp"

namespace sds {

// The exponent in the jump-mismatch bound Lambda_tau(l) exists in two
// readings: FormulaA keeps the 1/epsilon factor of the displayed
// equation, FormulaB drops it. They coincide when epsilon == 1; FormulaB
// reproduces the benchmark two-mode study, so it is the default
// everywhere. Neither is silently corrected into the other.
enum class LambdaVariant { FormulaA, FormulaB };

const char* lambda_variant_name(LambdaVariant v);

struct SpectralQuery {
  const GeneratorMatrix& generator;
  std::vector<double> mu;  // weight vector, typically gains minus drift bound
  double l = 0.0;          // positive exponent parameter
};

// eta_{l,mu}: negative spectral abscissa of Gamma - l*diag(mu). Positive
// eta means E exp(-l int mu(r)) decays at rate eta.
double eta(const SpectralQuery& q);
double eta(const GeneratorMatrix& g, const std::vector<double>& mu, double l);

// Critical exponent kappa_mu: the sign-change point of l -> eta_{l,mu}.
// +infinity when mu is componentwise nonnegative. Requires pi*mu > 0
// (throws HypothesisViolated otherwise); throws BracketFailure when no
// sign change is found in the guaranteed bracket.
double kappa(const GeneratorMatrix& g, const std::vector<double>& mu);

// epsilon = min((kappa - l) / (2l), 1); equals 1 when kappa is infinite.
double epsilon_for(double kappa_value, double l);

// Variant exponent coefficient c so that Lambda_tau = gamma_max *
// (exp(c*tau) - 1).
double lambda_exponent_coefficient(double l, double alpha_max, double epsilon,
                                   LambdaVariant variant);

// Lambda_tau(l): the per-interval penalty for observing the chain only
// every tau. Zero at tau = 0, strictly increasing in tau.
double lambda_tau(double l, double tau, double alpha_max, double max_exit_rate,
                  double epsilon, LambdaVariant variant);

// Largest admissible sampling interval: the unique tau with
// epsilon * gamma_max * (exp(c*tau) - 1) = eta_{l(1+eps), alpha-h},
// solved in closed form. Infinite for a single-state chain.
double tau_bar(const GeneratorMatrix& g, const std::vector<double>& alpha,
               const std::vector<double>& h, double l, LambdaVariant variant);

struct ZetaResult {
  double epsilon = 0.0;
  double kappa = 0.0;
  double eta_boosted = 0.0;  // eta at parameter l*(1+epsilon)
  double lambda_tau = 0.0;
  double tau_bar = 0.0;
  double zeta = 0.0;
  LambdaVariant variant = LambdaVariant::FormulaB;
  bool positive = false;  // zeta > 0 iff tau < tau_bar
};

// Decay exponent zeta = (eta_boosted - epsilon*Lambda_tau) / (1+epsilon).
// For tau >= tau_bar the (non-positive) value is returned with
// positive == false rather than erroring, so a designer can see how far
// out of range a candidate tau sits.
ZetaResult zeta(const GeneratorMatrix& g, const std::vector<double>& alpha,
                const std::vector<double>& h, double l, double tau,
                LambdaVariant variant);

}  // namespace sds

#endif
