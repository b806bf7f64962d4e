#include "sds/linalg.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "sds/errors.hpp"

namespace sds {

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::transpose() const {
  Mat t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Mat operator*(const Mat& a, const Mat& b) {
  Mat c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Mat operator+(const Mat& a, const Mat& b) {
  Mat c = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

Mat operator-(const Mat& a, const Mat& b) {
  Mat c = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

Mat operator*(double s, const Mat& a) {
  Mat c = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) *= s;
  return c;
}

double inf_norm(const Mat& a) {
  double best = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    double row = 0.0;
    for (int j = 0; j < a.cols(); ++j) row += std::abs(a(i, j));
    best = std::max(best, row);
  }
  return best;
}

double max_abs_diff(const Mat& a, const Mat& b) {
  double best = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      best = std::max(best, std::abs(a(i, j) - b(i, j)));
  return best;
}

std::vector<double> row_times_mat(const std::vector<double>& pi, const Mat& a) {
  std::vector<double> out(a.cols(), 0.0);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out[j] += pi[i] * a(i, j);
  return out;
}

LuFactors::LuFactors(Mat a) : lu_(std::move(a)), perm_(lu_.rows()) {
  const int n = lu_.rows();
  for (int i = 0; i < n; ++i) perm_[i] = i;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(lu_(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        piv = i;
      }
    }
    if (best == 0.0)
      throw SdsError(ErrorCode::SingularSystem, "LU pivot collapsed at column " + std::to_string(k));
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(lu_(piv, j), lu_(k, j));
      std::swap(perm_[piv], perm_[k]);
      sign_ = -sign_;
    }
    for (int i = k + 1; i < n; ++i) {
      lu_(i, k) /= lu_(k, k);
      double lik = lu_(i, k);
      for (int j = k + 1; j < n; ++j) lu_(i, j) -= lik * lu_(k, j);
    }
  }
}

std::vector<double> LuFactors::solve(std::vector<double> b) const {
  const int n = lu_.rows();
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
    x[i] /= lu_(i, i);
  }
  return x;
}

Mat LuFactors::solve(const Mat& b) const {
  Mat x(b.rows(), b.cols());
  std::vector<double> col(b.rows());
  for (int j = 0; j < b.cols(); ++j) {
    for (int i = 0; i < b.rows(); ++i) col[i] = b(i, j);
    std::vector<double> sol = solve(col);
    for (int i = 0; i < b.rows(); ++i) x(i, j) = sol[i];
  }
  return x;
}

double LuFactors::determinant() const {
  double d = sign_;
  for (int i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
  return d;
}

Mat expm(const Mat& a) {
  // Degree-13 Pade coefficients.
  static const double b[] = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  static const double theta13 = 5.371920351148152;

  const int n = a.rows();
  double norm = inf_norm(a);
  int squarings = 0;
  Mat as = a;
  if (norm > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    as = std::ldexp(1.0, -squarings) * a;
  }

  Mat i = Mat::identity(n);
  Mat a2 = as * as;
  Mat a4 = a2 * a2;
  Mat a6 = a2 * a4;

  Mat u_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  Mat u = as * (a6 * u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * i);
  Mat v_inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
  Mat v = a6 * v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * i;

  Mat f = LuFactors(v - u).solve(v + u);
  for (int s = 0; s < squarings; ++s) f = f * f;
  return f;
}

namespace {

// Eigenvalues of [[a, b], [c, d]] without cancellation in the real case.
void eig2x2(double a, double b, double c, double d,
            std::complex<double>& l1, std::complex<double>& l2) {
  double p = 0.5 * (a - d);
  double q = p * p + b * c;
  if (q >= 0.0) {
    double z = std::sqrt(q);
    z = p + (p >= 0.0 ? z : -z);
    l1 = {d + z, 0.0};
    l2 = (z != 0.0) ? std::complex<double>{d - b * c / z, 0.0}
                    : std::complex<double>{d, 0.0};
  } else {
    double z = std::sqrt(-q);
    l1 = {d + p, z};
    l2 = {d + p, -z};
  }
}

void hessenberg(Mat& h) {
  const int n = h.rows();
  for (int k = 0; k + 2 < n; ++k) {
    double scale = 0.0;
    for (int i = k + 1; i < n; ++i) scale += std::abs(h(i, k));
    if (scale == 0.0) continue;
    double nrm = 0.0;
    std::vector<double> v(n, 0.0);
    for (int i = k + 1; i < n; ++i) {
      v[i] = h(i, k) / scale;
      nrm += v[i] * v[i];
    }
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) continue;
    double alpha = (v[k + 1] >= 0.0) ? -nrm : nrm;
    v[k + 1] -= alpha;
    double vnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;

    // A <- (I - 2vv^T/|v|^2) A
    for (int j = 0; j < n; ++j) {
      double dot = 0.0;
      for (int i = k + 1; i < n; ++i) dot += v[i] * h(i, j);
      dot *= 2.0 / vnorm2;
      for (int i = k + 1; i < n; ++i) h(i, j) -= dot * v[i];
    }
    // A <- A (I - 2vv^T/|v|^2)
    for (int i = 0; i < n; ++i) {
      double dot = 0.0;
      for (int j = k + 1; j < n; ++j) dot += h(i, j) * v[j];
      dot *= 2.0 / vnorm2;
      for (int j = k + 1; j < n; ++j) h(i, j) -= dot * v[j];
    }
    for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

// Shifted QR on an upper Hessenberg matrix (Francis double shift with the
// classic exceptional-shift fallback). Destroys h.
std::vector<std::complex<double>> hqr(Mat& h) {
  const int n = h.rows();
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<std::complex<double>> w(n);

  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(h(i, j));

  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    for (;;) {
      int l;
      for (l = nn; l >= 1; --l) {
        double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(h(l, l - 1)) <= eps * s) {
          h(l, l - 1) = 0.0;
          break;
        }
      }
      if (l < 0) l = 0;

      double x = h(nn, nn);
      if (l == nn) {
        w[nn--] = {x + t, 0.0};
        break;
      }
      double y = h(nn - 1, nn - 1);
      double ww = h(nn, nn - 1) * h(nn - 1, nn);
      if (l == nn - 1) {
        std::complex<double> l1, l2;
        eig2x2(y, h(nn - 1, nn), h(nn, nn - 1), x, l1, l2);
        w[nn - 1] = l1 + t;
        w[nn] = l2 + t;
        nn -= 2;
        break;
      }

      if (its == 30)
        throw SdsError(ErrorCode::EigenFailure, "QR iteration did not converge");
      if (its == 10 || its == 20) {
        // exceptional shift
        t += x;
        for (int i = 0; i <= nn; ++i) h(i, i) -= x;
        double s = std::abs(h(nn, nn - 1)) + std::abs(h(nn - 1, nn - 2));
        x = y = 0.75 * s;
        ww = -0.4375 * s * s;
      }
      ++its;

      // Look for two consecutive small subdiagonals to start the sweep from.
      int m;
      double p = 0.0, q = 0.0, r = 0.0;
      for (m = nn - 2; m >= l; --m) {
        double z = h(m, m);
        double rr = x - z;
        double ss = y - z;
        p = (rr * ss - ww) / h(m + 1, m) + h(m, m + 1);
        q = h(m + 1, m + 1) - z - rr - ss;
        r = h(m + 2, m + 1);
        double s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        double u = std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r));
        double v = std::abs(p) *
                   (std::abs(h(m - 1, m - 1)) + std::abs(z) + std::abs(h(m + 1, m + 1)));
        if (u <= eps * v) break;
      }
      for (int i = m + 2; i <= nn; ++i) {
        h(i, i - 2) = 0.0;
        if (i != m + 2) h(i, i - 3) = 0.0;
      }

      // Double-shift sweep: chase the bulge from row m down to nn-1.
      for (int k = m; k <= nn - 1; ++k) {
        double norm = 0.0;
        if (k != m) {
          p = h(k, k - 1);
          q = h(k + 1, k - 1);
          r = (k != nn - 1) ? h(k + 2, k - 1) : 0.0;
          norm = std::abs(p) + std::abs(q) + std::abs(r);
          if (norm != 0.0) {
            p /= norm;
            q /= norm;
            r /= norm;
          }
        }
        double s = std::sqrt(p * p + q * q + r * r);
        if (p < 0.0) s = -s;
        if (s == 0.0) continue;
        if (k == m) {
          if (l != m) h(k, k - 1) = -h(k, k - 1);
        } else {
          h(k, k - 1) = -s * norm;
        }
        p += s;
        double px = p / s;
        double qy = q / s;
        double rz = r / s;
        double qp = q / p;
        double rp = r / p;
        for (int j = k; j <= nn; ++j) {
          double pp = h(k, j) + qp * h(k + 1, j);
          if (k != nn - 1) {
            pp += rp * h(k + 2, j);
            h(k + 2, j) -= pp * rz;
          }
          h(k + 1, j) -= pp * qy;
          h(k, j) -= pp * px;
        }
        int mmin = std::min(nn, k + 3);
        for (int i = l; i <= mmin; ++i) {
          double pp = px * h(i, k) + qy * h(i, k + 1);
          if (k != nn - 1) {
            pp += rz * h(i, k + 2);
            h(i, k + 2) -= pp * rp;
          }
          h(i, k + 1) -= pp * qp;
          h(i, k) -= pp;
        }
      }
    }
  }
  return w;
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const Mat& a) {
  const int n = a.rows();
  if (n == 1) return {{a(0, 0), 0.0}};
  if (n == 2) {
    std::complex<double> l1, l2;
    eig2x2(a(0, 0), a(0, 1), a(1, 0), a(1, 1), l1, l2);
    return {l1, l2};
  }
  Mat h = a;
  hessenberg(h);
  return hqr(h);
}

double spectral_abscissa(const Mat& a) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& l : eigenvalues(a)) best = std::max(best, l.real());
  return best;
}

}  // namespace sds
