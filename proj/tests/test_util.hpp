#ifndef SDS_TEST_UTIL_HPP
#define SDS_TEST_UTIL_HPP

#include "sds/chain.hpp"
#include "sds/rng.hpp"

namespace sds::testutil {

// Irreducible generator with off-diagonal rates in [0.1, 2.1).
inline GeneratorMatrix random_generator(RngStream& rng, int n) {
  Mat raw(n, n);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      raw(i, j) = 0.1 + 2.0 * rng.uniform();
      row += raw(i, j);
    }
    raw(i, i) = -row;
  }
  return validate_generator(raw);
}

inline std::vector<double> random_vector(RngStream& rng, int n, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = lo + (hi - lo) * rng.uniform();
  return v;
}

}  // namespace sds::testutil

#endif
