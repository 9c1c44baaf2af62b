#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "curvespace/homotopy.hpp"

namespace curvespace {

// Geometric derivatives of a closed homotopy. d/ds is arclength along each
// slice and d/dv* = d/dv - (C_v . C_s) d/ds. Vector fields are stored per slice
// (N_theta x dim), scalars as N_theta x N_v.
struct VStarField {
  std::vector<Eigen::MatrixXd> Cs, Cvs, Css, Cvsvs;  // C_s, C_{v*}, C_ss, C_{v*v*}
  std::vector<Eigen::MatrixXd> Cv;
  Eigen::MatrixXd speed;  // |C_theta|
  Eigen::MatrixXd a;      // C_v . C_s
  Eigen::MatrixXd m;      // |C_{v*}|^2
  Eigen::VectorXd M, L, L_vs;
  double dtheta = 0.0;
  double dv = 0.0;

  int n_theta() const { return static_cast<int>(speed.rows()); }
  int n_v() const { return static_cast<int>(speed.cols()); }
};

// v_order 2 or 4 selects the v-stencils; theta stencils are fourth order.
VStarField vstar_calculus(const HomotopyGrid& c, int v_order = 2);

// Differential operators on a scalar field f (N_theta x N_v) over the grid of `g`.
Eigen::MatrixXd d_s(const VStarField& g, const Eigen::MatrixXd& f);
Eigen::MatrixXd d_v(const VStarField& g, const Eigen::MatrixXd& f);
Eigen::MatrixXd d_vstar(const VStarField& g, const Eigen::MatrixXd& f);
// Per-slice integral of f ds.
Eigen::VectorXd integrate_s(const VStarField& g, const Eigen::MatrixXd& f);

struct CommutatorResiduals {
  double vstar_s = 0.0;  // d_v* d_s f - d_s d_v* f - (C_v* . C_ss) d_s f
  double v_s = 0.0;      // d_v d_s f - d_s d_v f + (C_s . C_vs) d_s f
  double int_v = 0.0;    // d_v int f ds - int (f_v* - f C_v* . C_ss) ds
  double l_vstar = 0.0;  // L_v* + int C_v* . C_ss ds
};

// Max residuals over `trials` random smooth scalar fields.
CommutatorResiduals commutator_check(const HomotopyGrid& c, int trials, std::uint64_t seed = 1);

struct IdentityResiduals {
  double r[6] = {0, 0, 0, 0, 0, 0};
  double max() const;
};

// The six pointwise identities of the v* calculus, max over interior points.
IdentityResiduals identity_check(const HomotopyGrid& c);

// max |(C_v* . C_ss) C_v* - m C_ss| (planar grids).
double planar_reduction_check(const HomotopyGrid& c);

}  // namespace curvespace
