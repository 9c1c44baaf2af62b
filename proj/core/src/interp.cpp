#include "curvespace/interp.hpp"

#include <algorithm>
#include <cmath>

#include "curvespace/errors.hpp"

namespace curvespace {

namespace {

// Solves the cyclic system x_{i-1} + 4 x_i + x_{i+1} = r_i (Sherman-Morrison).
Eigen::MatrixXd solve_cyclic_141(const Eigen::MatrixXd& r) {
  const int n = static_cast<int>(r.rows());
  const double alpha = 1.0, beta = 1.0;  // corner entries
  const double gamma = -4.0;
  Eigen::VectorXd diag = Eigen::VectorXd::Constant(n, 4.0);
  diag(0) -= gamma;
  diag(n - 1) -= alpha * beta / gamma;

  auto thomas = [&](const Eigen::MatrixXd& rhs) {
    Eigen::VectorXd c(n);
    Eigen::MatrixXd d = rhs;
    c(0) = 1.0 / diag(0);
    d.row(0) /= diag(0);
    for (int i = 1; i < n; ++i) {
      const double m = diag(i) - c(i - 1);
      c(i) = 1.0 / m;
      d.row(i) = (d.row(i) - d.row(i - 1)) / m;
    }
    for (int i = n - 2; i >= 0; --i) d.row(i) -= c(i) * d.row(i + 1);
    return d;
  };

  Eigen::MatrixXd x = thomas(r);
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, 1);
  u(0, 0) = gamma;
  u(n - 1, 0) = alpha;
  Eigen::MatrixXd z = thomas(u);
  const double vz = z(0, 0) + beta / gamma * z(n - 1, 0);
  Eigen::RowVectorXd vx = x.row(0) + beta / gamma * x.row(n - 1);
  x -= z.col(0) * (vx / (1.0 + vz));
  return x;
}

}  // namespace

PeriodicInterpolant::PeriodicInterpolant(const Eigen::MatrixXd& values, double period)
    : y_(values), period_(period) {
  const int n = static_cast<int>(values.rows());
  if (n < 2) throw InputError("PeriodicInterpolant: need at least two nodes");
  if (!(period > 0.0)) throw InputError("PeriodicInterpolant: period must be positive");
  h_ = period / n;
  cubic_ = n >= 8;
  if (!cubic_) return;
  Eigen::MatrixXd rhs(n, values.cols());
  const double s = 6.0 / (h_ * h_);
  for (int i = 0; i < n; ++i) {
    rhs.row(i) = s * (values.row((i + 1) % n) - 2.0 * values.row(i) + values.row((i + n - 1) % n));
  }
  m_ = solve_cyclic_141(rhs);
}

void PeriodicInterpolant::locate(double t, int& i, double& u) const {
  const int n = size();
  double x = std::fmod(t, period_);
  if (x < 0) x += period_;
  double q = x / h_;
  i = static_cast<int>(std::floor(q));
  if (i >= n) i = n - 1;
  if (i < 0) i = 0;
  u = q - i;
}

Eigen::RowVectorXd PeriodicInterpolant::operator()(double t) const {
  int i;
  double u;
  locate(t, i, u);
  const int n = size();
  const int k = (i + 1) % n;
  Eigen::RowVectorXd out = (1.0 - u) * y_.row(i) + u * y_.row(k);
  if (cubic_) {
    const double w = 1.0 - u;
    out += (h_ * h_ / 6.0) * ((w * w * w - w) * m_.row(i) + (u * u * u - u) * m_.row(k));
  }
  return out;
}

Eigen::RowVectorXd PeriodicInterpolant::derivative(double t) const {
  int i;
  double u;
  locate(t, i, u);
  const int n = size();
  const int k = (i + 1) % n;
  Eigen::RowVectorXd out = (y_.row(k) - y_.row(i)) / h_;
  if (cubic_) {
    const double w = 1.0 - u;
    out += (h_ / 6.0) * (-(3.0 * w * w - 1.0) * m_.row(i) + (3.0 * u * u - 1.0) * m_.row(k));
  }
  return out;
}

Eigen::MatrixXd PeriodicInterpolant::sample(const Eigen::VectorXd& t) const {
  Eigen::MatrixXd out(t.size(), cols());
  for (Eigen::Index r = 0; r < t.size(); ++r) out.row(r) = (*this)(t(r));
  return out;
}

namespace {

void lagrange_weights(int count, double h, double x, int& j0, double w[4]) {
  const double q = x / h;
  j0 = static_cast<int>(std::floor(q)) - 1;
  j0 = std::clamp(j0, 0, std::max(0, count - 4));
  const int m = std::min(4, count);
  for (int a = 0; a < m; ++a) {
    double l = 1.0;
    for (int b = 0; b < m; ++b) {
      if (a == b) continue;
      l *= (q - (j0 + b)) / static_cast<double>(a - b);
    }
    w[a] = l;
  }
  for (int a = m; a < 4; ++a) w[a] = 0.0;
}

}  // namespace

Eigen::MatrixXd lagrange4(std::span<const Eigen::MatrixXd> slices, double h, double x) {
  const int n = static_cast<int>(slices.size());
  if (n < 1) throw InputError("lagrange4: empty sequence");
  if (n == 1) return slices[0];
  int j0;
  double w[4];
  lagrange_weights(n, h, x, j0, w);
  Eigen::MatrixXd out = w[0] * slices[j0];
  for (int a = 1; a < std::min(4, n); ++a) out += w[a] * slices[j0 + a];
  return out;
}

double lagrange4(std::span<const double> f, double h, double x) {
  const int n = static_cast<int>(f.size());
  if (n < 1) throw InputError("lagrange4: empty sequence");
  if (n == 1) return f[0];
  int j0;
  double w[4];
  lagrange_weights(n, h, x, j0, w);
  double out = 0.0;
  for (int a = 0; a < std::min(4, n); ++a) out += w[a] * f[j0 + a];
  return out;
}

}  // namespace curvespace
