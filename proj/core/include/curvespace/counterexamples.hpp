#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "curvespace/curvecore.hpp"
#include "curvespace/homotopy.hpp"

namespace curvespace {

// C_k(theta, v) = C(theta + 2*pi*k*v, v).
HomotopyGrid winding_family(const HomotopyGrid& c, int k);

// Glues h x h rescaled copies of an open grid on [0,1]^2. Neighbouring tiles
// must match, i.e. C(1,v) - C(0,v) = (1,0) and C(u,1) - C(u,0) = (0,1) within
// `tol`. n_out = 0 gives h*(N-1)+1 nodes per direction, so every tile is an
// exact copy; other sizes sample the tiles bilinearly.
HomotopyGrid tessellate(const HomotopyGrid& ctilde, int h, int n_out_u = 0, int n_out_v = 0,
                        double tol = 1e-9);

// Open grid (u, v + gamma(v) sin(2 pi j u)) with the tent gamma. n_v - 1 must
// be even so the tent apex is a node.
HomotopyGrid graph_wiggle(int j, int n_u, int n_v);

// Open grid c(u) + (0, v) with c the two-segment spike of height lam*eps.
// The kinks at eps and 2*eps must fall on nodes.
HomotopyGrid conformal_stretch(double eps, double lam, int n_u, int n_v);
double conformal_stretch_length(double eps, double lam);

struct ZigzagCone {
  int k = 0;
  double eps = 0.0;
  HomotopyGrid grid;  // positions only; slices touch the origin
  double phase1 = 0.0;
  double phase2 = 0.0;
  double total() const { return phase1 + phase2; }
  double phase1_bound() const;  // (4/5) pi^2 / k
};

// Two-phase sawtooth cone from the origin to c1 (|c1| = |c1'| = 1). Energies
// use the closed-form integrand at cell midpoints: c1.size() must be a
// multiple of 2k and n_v - 1 even.
ZigzagCone zigzag_cone(int k, const SampledCurve& c1, int n_v, int cells_per_tooth = 64);

struct PulleyOptions {
  int n_theta = 2048;
  int n_v = 257;
  double fillet = 0.02;
  double min_depth = 0.05;
};

struct Pulley {
  int h = 0;
  HomotopyGrid grid;
  std::vector<Eigen::MatrixXd> velocity;  // analytic d_v C per slice
  double total_length = 0.0;
  double param_energy = 0.0;    // double integral of |d_v C|^2
  double max_normal_speed = 0.0;
  double max_tangent_speed = 0.0;
  double feature_rate = 0.0;    // max |d_v lambda|, lambda the D-to-E arclength
  Eigen::VectorXd lambda;       // per v-node
};

Pulley pulley(int h, const PulleyOptions& opt = {});

}  // namespace curvespace
