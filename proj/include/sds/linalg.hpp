#ifndef SDS_LINALG_HPP
#define SDS_LINALG_HPP

#include <complex>
#include <vector>

namespace sds {

// Dense row-major matrix, sized for the small systems this project works
// with (N <= 16 states). No expression templates, no views; everything is
// a value.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  static Mat identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return a_[i * cols_ + j]; }
  double operator()(int i, int j) const { return a_[i * cols_ + j]; }

  const std::vector<double>& data() const { return a_; }

  Mat transpose() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

Mat operator*(const Mat& a, const Mat& b);
Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(double s, const Mat& a);

// Max absolute row sum.
double inf_norm(const Mat& a);
// Largest |a_ij - b_ij|.
double max_abs_diff(const Mat& a, const Mat& b);

// pi * A for a row vector pi.
std::vector<double> row_times_mat(const std::vector<double>& pi, const Mat& a);

// LU factorization with partial pivoting. Throws SingularSystem when a
// pivot collapses.
class LuFactors {
 public:
  explicit LuFactors(Mat a);
  std::vector<double> solve(std::vector<double> b) const;
  Mat solve(const Mat& b) const;
  double determinant() const;

 private:
  Mat lu_;
  std::vector<int> perm_;
  int sign_ = 1;
};

// exp(A) by scaling and squaring with a degree-13 Pade approximant.
Mat expm(const Mat& a);

// All eigenvalues of a real square matrix: closed form for n <= 2,
// Hessenberg reduction followed by shifted QR for larger n.
// Throws EigenFailure if the QR iteration stalls.
std::vector<std::complex<double>> eigenvalues(const Mat& a);

// max over eigenvalues of Re(lambda).
double spectral_abscissa(const Mat& a);

}  // namespace sds

#endif
