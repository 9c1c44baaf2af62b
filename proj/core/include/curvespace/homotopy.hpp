#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "curvespace/curvecore.hpp"

namespace curvespace {

// Samples C(theta_i, v_j), one N_theta x n matrix per v-node. Closed grids are
// periodic in theta with theta_i = 2*pi*i/N. Open grids live on [0,1]^2 with
// u_i = i/(N-1) and are used by the counterexample families.
class HomotopyGrid {
public:
  HomotopyGrid() = default;
  explicit HomotopyGrid(std::vector<Eigen::MatrixXd> slices, bool closed = true);

  static HomotopyGrid from_function(int n_theta, int n_v,
                                    const std::function<Eigen::RowVectorXd(double, double)>& f,
                                    bool closed = true);

  int n_theta() const { return static_cast<int>(slices_.front().rows()); }
  int n_v() const { return static_cast<int>(slices_.size()); }
  int dim() const { return static_cast<int>(slices_.front().cols()); }
  bool closed() const { return closed_; }

  double theta(int i) const { return closed_ ? kTwoPi * i / n_theta() : double(i) / (n_theta() - 1); }
  double v(int j) const { return double(j) / (n_v() - 1); }
  double dtheta() const { return closed_ ? kTwoPi / n_theta() : 1.0 / (n_theta() - 1); }
  double dv() const { return 1.0 / (n_v() - 1); }

  const Eigen::MatrixXd& slice(int j) const { return slices_[j]; }
  Eigen::MatrixXd& slice(int j) { return slices_[j]; }
  const std::vector<Eigen::MatrixXd>& slices() const { return slices_; }
  Eigen::RowVectorXd at(int i, int j) const { return slices_[j].row(i); }

  SampledCurve curve(int j) const;
  double scale_hint() const { return scale_; }
  void refresh_scale();

  // d/dtheta and d/dv of the positions at slice j.
  Eigen::MatrixXd d_theta(int j) const;
  Eigen::MatrixXd d_v(int j) const;

private:
  std::vector<Eigen::MatrixXd> slices_;
  bool closed_ = true;
  double scale_ = 1.0;
};

HomotopyGrid linear_homotopy(const SampledCurve& c0, const SampledCurve& c1, int n_v);

HomotopyGrid scaled(const HomotopyGrid& c, double eps);

struct LengthProfile {
  Eigen::VectorXd l;
};

LengthProfile length_profile(const HomotopyGrid& c);

// Every closed slice immersed; throws GeometryError naming the first bad slice.
void require_immersed(const HomotopyGrid& c, const char* who);

HomotopyGrid reparam_arclength(const HomotopyGrid& c);

struct HorizontalResult {
  HomotopyGrid grid;
  Eigen::MatrixXd phi;  // N_theta x N_v
  double residual = 0.0;  // max |pi_T d_v C~|
  double min_psi = 0.0;   // min d_theta phi
};

HorizontalResult reparam_horizontal(const HomotopyGrid& c);

HomotopyGrid shift_unwind(const HomotopyGrid& c, const Eigen::VectorXd& phi_of_v);

// Shift phi(v), phi(0)=0, minimizing the tangential part of d_v C per slice.
Eigen::VectorXd optimal_unwind_shift(const HomotopyGrid& c);

// max over the grid of |pi_T d_v C| and the double integral of its square.
double tangential_residual(const HomotopyGrid& c);
double tangential_energy(const HomotopyGrid& c);

// Trapezoid in v over a per-slice quantity.
double trapezoid_v(const Eigen::VectorXd& f, double dv);

}  // namespace curvespace
