#include "sds/assumptions.hpp"

#include <cmath>

namespace sds {

namespace {

constexpr double kSlack = 1e-9;  // floating-point headroom on each inequality

struct Sample {
  std::vector<double> x;
  int mode;
  double t;
  double norm;
  double xf;      // x^T f
  double g_sq;    // |g|^2 (trace norm squared)
  double f_norm;  // |f|
};

class Checker {
 public:
  explicit Checker(AssumptionReport& rep) : rep_(rep) {}

  // Registers `lhs <= rhs` at the sample.
  void le(const std::string& name, double lhs, double rhs, const Sample& s) {
    AssumptionCheck& c = find(name);
    ++c.samples;
    double margin = lhs - rhs;
    if (margin > kSlack * std::max(1.0, std::abs(rhs))) {
      ++c.violations;
      rep_.all_ok = false;
    }
    if (margin > c.worst_margin || c.samples == 1) {
      c.worst_margin = margin;
      c.worst_x = s.x;
      c.worst_mode = s.mode;
      c.worst_t = s.t;
    }
  }

 private:
  AssumptionCheck& find(const std::string& name) {
    for (auto& c : rep_.checks)
      if (c.name == name) return c;
    rep_.checks.push_back({name, 0, 0, 0.0, {}, 0, 0.0});
    return rep_.checks.back();
  }

  AssumptionReport& rep_;
};

}  // namespace

AssumptionReport verify_assumptions(const SwitchingModel& model, const Bounds& bounds,
                                    const std::vector<std::vector<double>>& xs,
                                    const std::vector<double>& ts) {
  AssumptionReport rep;
  Checker chk(rep);

  int n_modes = 0;
  if (const auto* ql = std::get_if<QuasiLinearBounds>(&bounds)) {
    if (ql->upper_d) n_modes = static_cast<int>(ql->upper_d->size());
    else if (ql->lower_d) n_modes = static_cast<int>(ql->lower_d->size());
  } else {
    n_modes = static_cast<int>(std::get<NonlinearBounds>(bounds).upper_a.size());
  }

  std::vector<double> f(model.dim_x), g(model.dim_x * model.dim_w);
  for (const auto& x : xs) {
    for (int mode = 0; mode < n_modes; ++mode) {
      for (double t : ts) {
        Sample s;
        s.x = x;
        s.mode = mode;
        s.t = t;
        model.drift(t, x, mode, f);
        model.diffusion(t, x, mode, g);
        s.norm = 0.0;
        s.xf = 0.0;
        s.f_norm = 0.0;
        s.g_sq = 0.0;
        for (int i = 0; i < model.dim_x; ++i) {
          s.norm += x[i] * x[i];
          s.xf += x[i] * f[i];
          s.f_norm += f[i] * f[i];
        }
        for (double gij : g) s.g_sq += gij * gij;
        s.norm = std::sqrt(s.norm);
        s.f_norm = std::sqrt(s.f_norm);
        double g_norm = std::sqrt(s.g_sq);
        double norm_sq = s.norm * s.norm;

        if (const auto* ql = std::get_if<QuasiLinearBounds>(&bounds)) {
          bool affine = ql->upper_e.has_value() || ql->lower_e.has_value();
          double envelope = affine ? ql->k_bar * (1.0 + s.norm) : ql->k_bar * s.norm;
          chk.le("|f| within growth envelope", s.f_norm, envelope, s);
          chk.le("|g| within growth envelope", g_norm, envelope, s);
          if (ql->upper_d) {
            double rhs = (*ql->upper_d)[mode] * norm_sq +
                         (ql->upper_e ? (*ql->upper_e)[mode] : 0.0);
            chk.le("x*f + |g|^2/2 upper bound", s.xf + 0.5 * s.g_sq, rhs, s);
          }
          if (ql->lower_d) {
            double rhs = (*ql->lower_d)[mode] * norm_sq +
                         (ql->lower_e ? (*ql->lower_e)[mode] : 0.0);
            chk.le("x*f + |g|^2/2 lower bound", rhs, s.xf + 0.5 * s.g_sq, s);
          }
        } else {
          const auto& nl = std::get<NonlinearBounds>(bounds);
          chk.le("|f| within growth envelope", s.f_norm,
                 nl.k * (s.norm + std::pow(s.norm, nl.q1)), s);
          chk.le("|g| within growth envelope", g_norm,
                 nl.k * (s.norm + std::pow(s.norm, nl.q2)), s);
          double rhs = nl.c + nl.upper_a[mode] * norm_sq -
                       nl.upper_b[mode] * std::pow(s.norm, nl.theta);
          chk.le("x*f + (p-1)/2 |g|^2 one-sided bound",
                 s.xf + 0.5 * (nl.p - 1.0) * s.g_sq, rhs, s);
        }
      }
    }
  }
  return rep;
}

}  // namespace sds
