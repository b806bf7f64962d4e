#ifndef SDS_DESIGNER_HPP
#define SDS_DESIGNER_HPP

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sds/chain.hpp"
#include "sds/errors.hpp"
#include "sds/spectral.hpp"

namespace sds {

// Per-mode feedback gains of the control u(x, i) = -alpha_i * x.
struct ControlGains {
  std::vector<double> alpha;

  double max() const;
  void validate() const;  // alpha_i >= 0, at least one positive
};

// Growth/Khasminskii coefficients of a quasi-linear system. Which pairs
// are present decides which scenarios apply: (D, E) upper bounds with an
// affine growth envelope, D alone with a linear envelope, and similarly
// (d, e) / d for the lower bounds.
struct QuasiLinearBounds {
  double k_bar = 0.0;
  std::optional<std::vector<double>> upper_d;  // D_i
  std::optional<std::vector<double>> upper_e;  // E_i
  std::optional<std::vector<double>> lower_d;  // d_i
  std::optional<std::vector<double>> lower_e;  // e_i
};

// Coefficients of a highly nonlinear system: growth K(|x| + |x|^q) and
// the one-sided bound A_i|x|^2 - B_i|x|^theta (+ c for systems without an
// equilibrium at the origin).
struct NonlinearBounds {
  double k = 0.0;
  double q1 = 1.0;
  double q2 = 1.0;
  double p = 2.0;
  double theta = 2.0;
  std::vector<double> upper_a;  // A_i
  std::vector<double> upper_b;  // B_i
  double c = 0.0;

  double rho() const { return std::min(p, theta); }
  double a_max() const;
  double a_min() const;
  double b_min() const;
  void validate() const;  // theta >= (q1 v q2) + 1, p >= 2(q1 v q2), theta > 2
};

using Bounds = std::variant<QuasiLinearBounds, NonlinearBounds>;

// The threshold gates are monotone polynomials in y = tau + tau0, one
// family per growth regime: Affine* for the bounded/unbounded criteria
// (envelope K(1+|x|)), Linear* for the stability/instability criteria
// (envelope K|x|) and Poly* for the nonlinear ones.
enum class BetaFamily {
  Affine1,
  Affine2,
  Affine3,
  Affine4,
  Linear1,
  Linear2,
  Linear3,
  Linear4,
  Poly1,
  Poly2,
  Poly3,
};

const char* beta_family_name(BetaFamily f);

struct BetaParams {
  double growth_k = 0.0;   // K-bar or K
  double alpha_max = 0.0;  // max gain
  double upsilon = 0.0;    // average drift-gain gap (Affine3)
  double sigma = 0.0;      // stability margin (Linear3)
  double x0_sq = 0.0;      // |x0|^2 (Affine4, Linear4)
};

// Evaluates the named polynomial; beta(0) = 0 and beta is strictly
// increasing on y > 0 for admissible parameters.
double beta_eval(BetaFamily family, double y, const BetaParams& params);

// Unique y > 0 with beta(y) = target, located by power-of-two bracketing
// followed by bisection to relative tolerance tol::root_rel.
double solve_threshold(BetaFamily family, double target, const BetaParams& params);

// vartheta coefficient of the nonlinear stability criterion.
double vartheta(double sigma, double alpha_max, double rho, double a_max);

// Variant with p >= theta (larger admissible delay bound).
double vartheta_high_moment(double sigma, double alpha_max, double theta, double a_max,
                            double b_min);

struct LadderEntry {
  double q = 0.0;
  double rate = 0.0;
  bool extension = false;  // filled by interpolation outside the stated branches
};

// Moment Lyapunov exponent ladder: decay rate of E|x|^q for q in [2, p).
// Throws QOutOfRange outside that range.
LadderEntry moment_rate(double q, double zeta_value, double sigma, double p, double rho);
std::vector<LadderEntry> moment_exponent_ladder(double zeta_value, double sigma, double p,
                                                double rho, const std::vector<double>& qs);

enum class Scenario {
  QlBounded,
  QlUnbounded,
  QlStable,
  QlUnstable,
  NlStable,
  NlStableHighMoment,
};

const char* scenario_name(Scenario s);

struct HypothesisCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool passed = false;
};

struct RootRecord {
  std::string name;
  BetaFamily family = BetaFamily::Affine1;
  double target = 0.0;
  double root = 0.0;
  double residual_rel = 0.0;
  bool degenerate = false;  // zero target, root pinned at 0
};

struct DesignReport {
  Scenario scenario = Scenario::QlBounded;
  LambdaVariant variant = LambdaVariant::FormulaB;
  double sigma = NAN;

  std::vector<HypothesisCheck> hypotheses;
  bool hypotheses_ok = false;
  std::string verdict = "ok";

  // Spectral intermediates at the design exponent l = 2 (where used).
  ZetaResult spectral{};
  bool has_spectral = false;

  double tau_sampling_max = NAN;  // bound on tau alone
  double tau_plus_lag_max = NAN;  // bound on tau + tau0
  std::vector<RootRecord> roots;

  // Assessment of a user-chosen (tau, tau0), when one was supplied.
  double chosen_tau = NAN;
  double chosen_tau0 = NAN;
  double zeta_at_chosen = NAN;
  bool chosen_admissible = false;

  std::vector<LadderEntry> moment_rates;
  double as_rate = NAN;         // headline almost-sure rate (half the ms rate)
  double as_rate_ladder = NAN;  // the ladder value at v = 2(q1 v q2), shown alongside
  double divergence_rate = NAN;

  double vartheta = NAN;     // nonlinear scenarios
  double lambda_coef = NAN;  // companion Lyapunov weight
  double integral_moment_exponent = NAN;
  bool integral_moment_finite = false;

  bool degenerate = false;
};

// Thrown when a criterion hypothesis (or the sigma range) fails; carries
// the partially filled report so callers can still surface the checklist.
class HypothesisError : public SdsError {
 public:
  HypothesisError(ErrorCode code, const std::string& what, DesignReport report)
      : SdsError(code, what), report_(std::move(report)) {}
  const DesignReport& report() const { return report_; }

 private:
  DesignReport report_;
};

// Mean-square boundedness design: pi*alpha > pi*D and kappa_{alpha-D} > 2
// buy sup E|x|^2 < infinity for tau <= tau_sampling_max and
// tau + tau0 <= tau_plus_lag_max.
DesignReport design_ql_bounded(const GeneratorMatrix& g, const ControlGains& gains,
                               const QuasiLinearBounds& bounds, LambdaVariant variant);

// Sharp converse: when the average drift gap upsilon = pi*d - pi*alpha is
// positive, E|x|^2 diverges at rate >= upsilon/4 for small tau + tau0.
DesignReport design_ql_unbounded(const GeneratorMatrix& g, const ControlGains& gains,
                                 const QuasiLinearBounds& bounds, double x0_sq);

// Exponential mean-square stabilization with margin sigma.
DesignReport design_ql_stable(const GeneratorMatrix& g, const ControlGains& gains,
                              const QuasiLinearBounds& bounds, double sigma,
                              LambdaVariant variant, std::optional<double> tau = {},
                              std::optional<double> tau0 = {});

// Instability counterpart: E|x|^2 grows at rate >= 2(pi*d - pi*alpha - sigma).
DesignReport design_ql_unstable(const GeneratorMatrix& g, const ControlGains& gains,
                                const QuasiLinearBounds& bounds, double sigma,
                                double x0_sq);

// Nonlinear stabilization in 2nd and rho-th moment plus almost surely.
DesignReport design_nl_stable(const GeneratorMatrix& g, const ControlGains& gains,
                              const NonlinearBounds& bounds, double sigma,
                              LambdaVariant variant, std::optional<double> tau = {},
                              std::optional<double> tau0 = {});

// Same conclusions under p >= theta with a different (usually larger)
// delay bound.
DesignReport design_nl_stable_p_ge_theta(const GeneratorMatrix& g,
                                         const ControlGains& gains,
                                         const NonlinearBounds& bounds, double sigma,
                                         LambdaVariant variant,
                                         std::optional<double> tau = {},
                                         std::optional<double> tau0 = {});

}  // namespace sds

#endif
