#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "sds/errors.hpp"
#include "sds/linalg.hpp"
#include "sds/rng.hpp"

using namespace sds;

namespace {

Mat from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  int n = static_cast<int>(rows.size());
  int m = static_cast<int>(rows.begin()->size());
  Mat a(n, m);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) a(i, j++) = v;
    ++i;
  }
  return a;
}

Mat random_matrix(RngStream& rng, int n, double scale) {
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = scale * (2.0 * rng.uniform() - 1.0);
  return a;
}

// Independent route to the spectral abscissa of a Metzler matrix: shift
// to a nonnegative matrix and power-iterate its Perron root.
double perron_abscissa(const Mat& m) {
  double shift = 1.0;
  for (int i = 0; i < m.rows(); ++i) shift = std::max(shift, 1.0 - m(i, i));
  Mat b = m;
  for (int i = 0; i < m.rows(); ++i) b(i, i) += shift;
  std::vector<double> x(m.rows(), 1.0);
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    std::vector<double> y(m.rows(), 0.0);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) y[i] += b(i, j) * x[j];
    double norm = 0.0;
    for (double v : y) norm = std::max(norm, std::abs(v));
    for (double& v : y) v /= norm;
    lambda = norm;
    x = std::move(y);
  }
  return lambda - shift;
}

}  // namespace

TEST_CASE("lu solves a known system and reports the determinant") {
  Mat a = from_rows({{2, 1, 1}, {1, 3, 2}, {1, 0, 0}});
  LuFactors lu(a);
  // x = (1, 2, 3): b = A x
  std::vector<double> b = {2 * 1 + 2 + 3, 1 + 6 + 6, 1.0};
  auto x = lu.solve(b);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(x[2] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(lu.determinant() == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("lu rejects singular input") {
  Mat a = from_rows({{1, 2}, {2, 4}});
  CHECK_THROWS_AS(LuFactors{a}, SdsError);
}

TEST_CASE("expm matches closed forms") {
  SUBCASE("zero matrix") {
    Mat z(3, 3);
    CHECK(max_abs_diff(expm(z), Mat::identity(3)) < 1e-15);
  }
  SUBCASE("diagonal") {
    Mat d(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -2.0;
    Mat e = expm(d);
    CHECK(e(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    CHECK(e(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(std::abs(e(0, 1)) < 1e-16);
  }
  SUBCASE("nilpotent") {
    Mat n = from_rows({{0, 1}, {0, 0}});
    Mat e = expm(n);
    CHECK(e(0, 0) == doctest::Approx(1.0));
    CHECK(e(0, 1) == doctest::Approx(1.0));
    CHECK(e(1, 0) == doctest::Approx(0.0));
  }
  SUBCASE("rotation") {
    double th = 0.7;
    Mat r = from_rows({{0, -th}, {th, 0}});
    Mat e = expm(r);
    CHECK(e(0, 0) == doctest::Approx(std::cos(th)).epsilon(1e-14));
    CHECK(e(1, 0) == doctest::Approx(std::sin(th)).epsilon(1e-14));
  }
  SUBCASE("large norm triggers scaling") {
    Mat d(2, 2);
    d(0, 0) = -40.0;
    d(1, 1) = 30.0;
    Mat e = expm(d);
    CHECK(e(0, 0) == doctest::Approx(std::exp(-40.0)).epsilon(1e-10));
    CHECK(e(1, 1) == doctest::Approx(std::exp(30.0)).epsilon(1e-10));
  }
}

TEST_CASE("expm(A) expm(-A) = I on random matrices") {
  RngStream rng(11, 0, StreamRole::Auxiliary);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(rng.uniform() * 5);
    Mat a = random_matrix(rng, n, 2.0);
    Mat prod = expm(a) * expm(-1.0 * a);
    CHECK(max_abs_diff(prod, Mat::identity(n)) < 1e-10);
  }
}

TEST_CASE("eigenvalues of triangular and companion matrices") {
  SUBCASE("upper triangular") {
    Mat a = from_rows({{1, 5, -3}, {0, -2, 7}, {0, 0, 4}});
    auto ev = eigenvalues(a);
    std::vector<double> re;
    for (auto& l : ev) {
      CHECK(std::abs(l.imag()) < 1e-10);
      re.push_back(l.real());
    }
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(re[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(re[2] == doctest::Approx(4.0).epsilon(1e-10));
  }
  SUBCASE("companion of (x-1)(x-2)(x-3)") {
    Mat a = from_rows({{6, -11, 6}, {1, 0, 0}, {0, 1, 0}});
    auto ev = eigenvalues(a);
    std::vector<double> re;
    for (auto& l : ev) re.push_back(l.real());
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(re[1] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(re[2] == doctest::Approx(3.0).epsilon(1e-9));
  }
  SUBCASE("complex pair") {
    Mat a = from_rows({{1, -2, 0}, {2, 1, 0}, {0, 0, 5}});
    auto ev = eigenvalues(a);
    double max_re = -1e300;
    bool saw_pair = false;
    for (auto& l : ev) {
      max_re = std::max(max_re, l.real());
      if (std::abs(l.imag()) > 1.0) saw_pair = true;
    }
    CHECK(saw_pair);
    CHECK(max_re == doctest::Approx(5.0).epsilon(1e-10));
  }
  SUBCASE("repeated defective eigenvalue") {
    Mat a = from_rows({{2, 1, 0}, {0, 2, 1}, {0, 0, 2}});
    for (auto& l : eigenvalues(a)) {
      CHECK(l.real() == doctest::Approx(2.0).epsilon(1e-4));
      CHECK(std::abs(l.imag()) < 1e-3);
    }
  }
}

TEST_CASE("eigenvalue sums and products match trace and determinant") {
  RngStream rng(17, 0, StreamRole::Auxiliary);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + static_cast<int>(rng.uniform() * 7);
    Mat a = random_matrix(rng, n, 3.0);
    auto ev = eigenvalues(a);
    std::complex<double> sum = 0.0, prod = 1.0;
    for (auto& l : ev) {
      sum += l;
      prod *= l;
    }
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += a(i, i);
    CHECK(sum.real() == doctest::Approx(tr).epsilon(1e-8));
    CHECK(std::abs(sum.imag()) < 1e-8);
    CHECK(prod.real() == doctest::Approx(LuFactors(a).determinant()).epsilon(1e-6));
  }
}

TEST_CASE("spectral abscissa agrees with the Perron route on Metzler matrices") {
  RngStream rng(23, 0, StreamRole::Auxiliary);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + static_cast<int>(rng.uniform() * 5);
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        a(i, j) = (i == j) ? -4.0 * rng.uniform() : 2.0 * rng.uniform() + 0.01;
    CHECK(spectral_abscissa(a) == doctest::Approx(perron_abscissa(a)).epsilon(1e-8));
  }
}
