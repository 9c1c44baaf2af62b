#pragma once

#include <vector>

#include <Eigen/Dense>

#include "curvespace/curvecore.hpp"
#include "curvespace/homotopy.hpp"

namespace curvespace {

// Midpoint samples theta(s_k) on [0, 2 pi], as produced by lift_direction.
using DirectionFunction = DirectionFunctionSample;

inline constexpr double kGramConditionCap = 1e8;
inline constexpr double kMembershipTol = 1e-6;

DirectionFunction make_direction_function(const Eigen::VectorXd& theta);

// (int theta ds - 2 pi^2, int cos theta ds, int sin theta ds).
Eigen::Vector3d dirfn_constraints(const DirectionFunction& d);

struct ProjectResult {
  DirectionFunction d;
  int iterations = 0;
  double residual = 0.0;
  double condition = 0.0;  // of the constraint Gram matrix at the last iterate
};

// Gauss-Newton onto the constraint set. Throws SingularError when the Gram
// matrix condition exceeds kGramConditionCap, ConvergenceError after 50 steps.
ProjectResult dirfn_project_report(const DirectionFunction& d, double tol = 1e-10, int max_iter = 50);
DirectionFunction dirfn_project(const DirectionFunction& d);

enum class DirDistanceMode { l2, quotient_shift };

double dirfn_distance(const DirectionFunction& a, const DirectionFunction& b,
                      DirDistanceMode mode = DirDistanceMode::l2);

// Rows are points.
double hausdorff_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
// Sum of consecutive Hausdorff distances.
double hausdorff_path_length(const std::vector<Eigen::MatrixXd>& path);
// Trapezoid in v of max_theta |pi_N d_v C|.
double finf_homotopy_length(const HomotopyGrid& c);

}  // namespace curvespace
