#pragma once

#include <span>

#include <Eigen/Dense>

namespace curvespace {

// Interpolant through N periodic rows of `values`, node i at i*period/N.
// Cubic spline (C2) for N >= 8, piecewise linear below that.
class PeriodicInterpolant {
public:
  PeriodicInterpolant() = default;
  PeriodicInterpolant(const Eigen::MatrixXd& values, double period);

  int size() const { return static_cast<int>(y_.rows()); }
  int cols() const { return static_cast<int>(y_.cols()); }
  double period() const { return period_; }
  bool cubic() const { return cubic_; }

  Eigen::RowVectorXd operator()(double t) const;
  Eigen::RowVectorXd derivative(double t) const;
  // Evaluate at many parameters at once; one row per parameter.
  Eigen::MatrixXd sample(const Eigen::VectorXd& t) const;

private:
  void locate(double t, int& i, double& u) const;

  Eigen::MatrixXd y_;
  Eigen::MatrixXd m_;  // second derivatives at nodes
  double period_ = 1.0;
  double h_ = 1.0;
  bool cubic_ = false;
};

// Four-point Lagrange interpolation in a non-periodic sequence sampled at
// x_j = j*h, evaluated at x. Clamps the stencil at both ends.
Eigen::MatrixXd lagrange4(std::span<const Eigen::MatrixXd> slices, double h, double x);
double lagrange4(std::span<const double> f, double h, double x);

}  // namespace curvespace
