#include "curvespace/stencil.hpp"

#include "curvespace/errors.hpp"

namespace curvespace::stencil {

namespace {
inline int wrap(int i, int n) { return ((i % n) + n) % n; }
}  // namespace

Eigen::MatrixXd d1_periodic(const Eigen::MatrixXd& f, double h) {
  const int n = static_cast<int>(f.rows());
  if (n < 5) return d1_periodic_o2(f, h);
  Eigen::MatrixXd out(f.rows(), f.cols());
  const double s = 1.0 / (12.0 * h);
  for (int i = 0; i < n; ++i) {
    out.row(i) = s * (8.0 * (f.row(wrap(i + 1, n)) - f.row(wrap(i - 1, n))) -
                      (f.row(wrap(i + 2, n)) - f.row(wrap(i - 2, n))));
  }
  return out;
}

Eigen::MatrixXd d1_periodic_o2(const Eigen::MatrixXd& f, double h) {
  const int n = static_cast<int>(f.rows());
  Eigen::MatrixXd out(f.rows(), f.cols());
  const double s = 0.5 / h;
  for (int i = 0; i < n; ++i) out.row(i) = s * (f.row(wrap(i + 1, n)) - f.row(wrap(i - 1, n)));
  return out;
}

Eigen::MatrixXd d2_periodic(const Eigen::MatrixXd& f, double h) {
  const int n = static_cast<int>(f.rows());
  Eigen::MatrixXd out(f.rows(), f.cols());
  if (n < 5) {
    const double s = 1.0 / (h * h);
    for (int i = 0; i < n; ++i)
      out.row(i) = s * (f.row(wrap(i + 1, n)) - 2.0 * f.row(i) + f.row(wrap(i - 1, n)));
    return out;
  }
  const double s = 1.0 / (12.0 * h * h);
  for (int i = 0; i < n; ++i) {
    out.row(i) = s * (16.0 * (f.row(wrap(i + 1, n)) + f.row(wrap(i - 1, n))) -
                      (f.row(wrap(i + 2, n)) + f.row(wrap(i - 2, n))) - 30.0 * f.row(i));
  }
  return out;
}

Eigen::MatrixXd d1_sequence(std::span<const Eigen::MatrixXd> s, int j, double h) {
  const int n = static_cast<int>(s.size());
  if (n < 2) throw InputError("d1_sequence: need at least two slices");
  if (n == 2) return (s[1] - s[0]) / h;
  if (j == 0) return (-3.0 * s[0] + 4.0 * s[1] - s[2]) / (2.0 * h);
  if (j == n - 1) return (3.0 * s[n - 1] - 4.0 * s[n - 2] + s[n - 3]) / (2.0 * h);
  return (s[j + 1] - s[j - 1]) / (2.0 * h);
}

Eigen::MatrixXd d2_sequence(std::span<const Eigen::MatrixXd> s, int j, double h) {
  const int n = static_cast<int>(s.size());
  if (n < 2) throw InputError("d2_sequence: need at least two slices");
  const double q = 1.0 / (h * h);
  if (n == 2) return Eigen::MatrixXd::Zero(s[0].rows(), s[0].cols());
  if (n == 3) return q * (s[0] - 2.0 * s[1] + s[2]);
  if (j == 0) return q * (2.0 * s[0] - 5.0 * s[1] + 4.0 * s[2] - s[3]);
  if (j == n - 1) return q * (2.0 * s[n - 1] - 5.0 * s[n - 2] + 4.0 * s[n - 3] - s[n - 4]);
  return q * (s[j + 1] - 2.0 * s[j] + s[j - 1]);
}

Eigen::MatrixXd d2_sequence_o4(std::span<const Eigen::MatrixXd> s, int j, double h) {
  const int n = static_cast<int>(s.size());
  if (n < 6) return d2_sequence(s, j, h);
  const double q = 1.0 / (12.0 * h * h);
  if (j == 0)
    return q * (45.0 * s[0] - 154.0 * s[1] + 214.0 * s[2] - 156.0 * s[3] + 61.0 * s[4] - 10.0 * s[5]);
  if (j == 1) return q * (10.0 * s[0] - 15.0 * s[1] - 4.0 * s[2] + 14.0 * s[3] - 6.0 * s[4] + s[5]);
  if (j == n - 1)
    return q * (45.0 * s[n - 1] - 154.0 * s[n - 2] + 214.0 * s[n - 3] - 156.0 * s[n - 4] +
                61.0 * s[n - 5] - 10.0 * s[n - 6]);
  if (j == n - 2)
    return q * (10.0 * s[n - 1] - 15.0 * s[n - 2] - 4.0 * s[n - 3] + 14.0 * s[n - 4] - 6.0 * s[n - 5] +
                s[n - 6]);
  return q * (-s[j - 2] + 16.0 * s[j - 1] - 30.0 * s[j] + 16.0 * s[j + 1] - s[j + 2]);
}

Eigen::MatrixXd d1_sequence_o4(std::span<const Eigen::MatrixXd> s, int j, double h) {
  const int n = static_cast<int>(s.size());
  if (n < 5) return d1_sequence(s, j, h);
  const double q = 1.0 / (12.0 * h);
  if (j == 0) return q * (-25.0 * s[0] + 48.0 * s[1] - 36.0 * s[2] + 16.0 * s[3] - 3.0 * s[4]);
  if (j == 1) return q * (-3.0 * s[0] - 10.0 * s[1] + 18.0 * s[2] - 6.0 * s[3] + s[4]);
  if (j == n - 1)
    return q * (25.0 * s[n - 1] - 48.0 * s[n - 2] + 36.0 * s[n - 3] - 16.0 * s[n - 4] + 3.0 * s[n - 5]);
  if (j == n - 2)
    return q * (3.0 * s[n - 1] + 10.0 * s[n - 2] - 18.0 * s[n - 3] + 6.0 * s[n - 4] - s[n - 5]);
  return q * (s[j - 2] - 8.0 * s[j - 1] + 8.0 * s[j + 1] - s[j + 2]);
}

double d1_sequence(std::span<const double> f, int j, double h) {
  const int n = static_cast<int>(f.size());
  if (n < 2) throw InputError("d1_sequence: need at least two samples");
  if (n == 2) return (f[1] - f[0]) / h;
  if (j == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  if (j == n - 1) return (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return (f[j + 1] - f[j - 1]) / (2.0 * h);
}

}  // namespace curvespace::stencil
