#pragma once

#include <span>

#include <Eigen/Dense>

namespace curvespace::stencil {

// Periodic first derivative down the rows, spacing h. Fourth order for N >= 5,
// second order otherwise.
Eigen::MatrixXd d1_periodic(const Eigen::MatrixXd& f, double h);

// Plain three-point version.
Eigen::MatrixXd d1_periodic_o2(const Eigen::MatrixXd& f, double h);

// Periodic second derivative down the rows (five-point for N >= 5).
Eigen::MatrixXd d2_periodic(const Eigen::MatrixXd& f, double h);

// Derivative across a sequence of equally spaced slices at index j: central
// inside, second-order one-sided at the ends. Two slices give a plain difference.
Eigen::MatrixXd d1_sequence(std::span<const Eigen::MatrixXd> slices, int j, double h);
// Fourth-order variant (five-point, one-sided near the ends); falls back to
// d1_sequence below five slices.
Eigen::MatrixXd d1_sequence_o4(std::span<const Eigen::MatrixXd> slices, int j, double h);
Eigen::MatrixXd d2_sequence(std::span<const Eigen::MatrixXd> slices, int j, double h);
// Fourth-order second derivative (six-point one-sided near the ends); falls
// back to d2_sequence below six slices.
Eigen::MatrixXd d2_sequence_o4(std::span<const Eigen::MatrixXd> slices, int j, double h);

// Same stencils on scalar samples.
double d1_sequence(std::span<const double> f, int j, double h);

}  // namespace curvespace::stencil
