#ifndef SDS_MODELS_HPP
#define SDS_MODELS_HPP

#include <vector>

#include "sds/simulator.hpp"

namespace sds {

// One monomial of a scalar coefficient: coef * x^power, or
// coef * |x|^power when absolute is set (needed for non-integer powers).
struct PolyTerm {
  double coef = 0.0;
  double power = 1.0;
  bool absolute = false;
};

double eval_poly(const std::vector<PolyTerm>& terms, double x);

// Scalar model assembled from per-mode term tables; covers the polynomial
// drift/diffusion systems the config format can express declaratively.
struct ScalarPolyModel {
  std::vector<std::vector<PolyTerm>> drift;      // per mode
  std::vector<std::vector<PolyTerm>> diffusion;  // per mode

  SwitchingModel build() const;
};

// The built-in two-mode benchmark system:
//   mode 1: f = x(1 - 3x^2), g = |x|^{3/2}
//   mode 2: f = x(1 - 2x^2), g = x
// with generator [[-10, 10], [20, -20]]. Nonlinear coefficients
// K = 3, q1 = 3, q2 = 3/2, p = 7, theta = 4, A = (2.5, 4), B = (1.5, 2).
struct BuiltinExample {
  Mat generator;
  ScalarPolyModel model;
  NonlinearBounds bounds;
};

BuiltinExample builtin_two_mode_example();

}  // namespace sds

#endif
