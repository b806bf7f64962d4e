#include "sds/report_json.hpp"

#include <cmath>

namespace sds {

using nlohmann::json;

json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json to_json(const DesignReport& rep) {
  json j;
  j["scenario"] = scenario_name(rep.scenario);
  j["variant"] = lambda_variant_name(rep.variant);
  j["sigma"] = json_number(rep.sigma);
  j["verdict"] = rep.verdict;
  j["hypotheses_ok"] = rep.hypotheses_ok;

  json hyps = json::array();
  for (const auto& h : rep.hypotheses)
    hyps.push_back({{"name", h.name},
                    {"lhs", json_number(h.lhs)},
                    {"rhs", json_number(h.rhs)},
                    {"passed", h.passed}});
  j["hypotheses"] = hyps;

  if (rep.has_spectral) {
    j["spectral"] = {{"eta", json_number(rep.spectral.eta_boosted)},
                     {"kappa", json_number(rep.spectral.kappa)},
                     {"epsilon", json_number(rep.spectral.epsilon)},
                     {"lambda_tau", json_number(rep.spectral.lambda_tau)},
                     {"tau_bar", json_number(rep.spectral.tau_bar)},
                     {"zeta", json_number(rep.spectral.zeta)},
                     {"variant", lambda_variant_name(rep.spectral.variant)}};
  }

  j["tau_sampling_max"] = json_number(rep.tau_sampling_max);
  j["tau_plus_lag_max"] = json_number(rep.tau_plus_lag_max);

  json roots = json::array();
  for (const auto& r : rep.roots)
    roots.push_back({{"name", r.name},
                     {"family", beta_family_name(r.family)},
                     {"target", json_number(r.target)},
                     {"root", json_number(r.root)},
                     {"residual_rel", json_number(r.residual_rel)},
                     {"degenerate", r.degenerate}});
  j["roots"] = roots;

  if (!std::isnan(rep.chosen_tau)) {
    j["chosen"] = {{"tau", json_number(rep.chosen_tau)},
                   {"tau0", json_number(rep.chosen_tau0)},
                   {"zeta", json_number(rep.zeta_at_chosen)},
                   {"admissible", rep.chosen_admissible}};
  }

  json rates = json::array();
  for (const auto& e : rep.moment_rates)
    rates.push_back(
        {{"q", e.q}, {"rate", json_number(e.rate)}, {"extension", e.extension}});
  j["moment_rates"] = rates;
  j["as_rate"] = json_number(rep.as_rate);
  j["as_rate_ladder"] = json_number(rep.as_rate_ladder);
  j["divergence_rate"] = json_number(rep.divergence_rate);
  j["vartheta"] = json_number(rep.vartheta);
  j["lambda_coef"] = json_number(rep.lambda_coef);
  j["integral_moment_exponent"] = json_number(rep.integral_moment_exponent);
  j["integral_moment_finite"] = rep.integral_moment_finite;
  j["degenerate"] = rep.degenerate;
  return j;
}

json to_json(const ExponentEstimate& est) {
  return {{"q", est.q},
          {"slope", json_number(est.slope)},
          {"stderr", json_number(est.stderr_)},
          {"window", {est.window_lo, est.window_hi}},
          {"n_paths", est.n_paths},
          {"n_blowups", est.n_blowups}};
}

json to_json(const AssumptionReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"name", c.name},
                      {"violations", c.violations},
                      {"samples", c.samples},
                      {"worst_margin", json_number(c.worst_margin)},
                      {"worst_x", c.worst_x},
                      {"worst_mode", c.worst_mode + 1},
                      {"worst_t", c.worst_t}});
  return {{"all_ok", rep.all_ok}, {"checks", checks}};
}

}  // namespace sds
