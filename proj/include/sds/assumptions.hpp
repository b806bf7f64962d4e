#ifndef SDS_ASSUMPTIONS_HPP
#define SDS_ASSUMPTIONS_HPP

#include <string>
#include <vector>

#include "sds/designer.hpp"
#include "sds/simulator.hpp"

namespace sds {

struct AssumptionCheck {
  std::string name;
  long violations = 0;
  long samples = 0;
  double worst_margin = 0.0;  // positive means violated by that much
  std::vector<double> worst_x;
  int worst_mode = 0;
  double worst_t = 0.0;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  bool all_ok = true;
};

// Numeric spot-check of the declared growth and one-sided inequalities on
// a sample grid; violations are report content, never errors.
AssumptionReport verify_assumptions(const SwitchingModel& model, const Bounds& bounds,
                                    const std::vector<std::vector<double>>& xs,
                                    const std::vector<double>& ts);

}  // namespace sds

#endif
