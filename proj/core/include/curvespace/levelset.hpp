#pragma once

#include <vector>

#include <Eigen/Dense>

#include "curvespace/curvecore.hpp"
#include "curvespace/homotopy.hpp"

namespace curvespace {

inline constexpr double kCflSafetyLevelSet = 0.2;

struct LevelSetParams {
  int nx = 96;
  int ny = 96;
  int nv = 17;          // used when embedding from endpoints
  double pad = 0.35;    // box margin as a fraction of the larger data extent
  double band = 6.0;    // narrow-band half-width in cells
  int reinit_every = 10;
  double lambda = -1.0;  // < 0: levelset_stable_lambda at t = 0
  double grad_floor = 1e-3;
  bool full_grid = false;
};

// psi[k](i, j) samples slice v_k at (x0 + i h, y0 + j h). Negative inside.
struct LevelSetGrid {
  std::vector<Eigen::MatrixXd> psi;
  double x0 = 0.0, y0 = 0.0, h = 1.0;
  double t = 0.0;
  double lambda = 0.0;
  double band = 6.0;
  double grad_floor = 1e-3;
  bool full_grid = false;

  int nx() const { return static_cast<int>(psi.front().rows()); }
  int ny() const { return static_cast<int>(psi.front().cols()); }
  int nv() const { return static_cast<int>(psi.size()); }
  double dv() const { return 1.0 / (nv() - 1); }
  double x(int i) const { return x0 + h * i; }
  double y(int j) const { return y0 + h * j; }
  double v(int k) const { return double(k) / (nv() - 1); }
  // Bilinear, clamped to the box.
  double sample(int k, double x, double y) const;
};

struct SliceContours {
  std::vector<double> v;
  // Per slice, closed polylines (rows are points, first point not repeated),
  // oriented with psi < 0 on the left.
  std::vector<std::vector<Eigen::MatrixXd>> curves;
  std::vector<bool> flagged;  // empty or open contours

  int size() const { return static_cast<int>(curves.size()); }
};

// Signed distance to each slice of a planar closed homotopy.
LevelSetGrid embed(const HomotopyGrid& c, const LevelSetParams& p = {});
// Interior slices from the linear homotopy between the endpoints.
LevelSetGrid embed(const SampledCurve& c0, const SampledCurve& c1, const LevelSetParams& p = {});

std::vector<Eigen::MatrixXd> extract_contours(const Eigen::MatrixXd& psi, double x0, double y0, double h,
                                              bool* open = nullptr);
SliceContours extract_slices(const LevelSetGrid& g);

// Restores signed distance on interior slices; endpoint slices are left alone.
LevelSetGrid reinitialize(const LevelSetGrid& g);

// m = psi_v^2 / |grad psi|^2 and its contour integral per slice.
struct SliceTerms {
  Eigen::VectorXd length;    // contour length
  Eigen::VectorXd integral;  // int m ds along the contour
  Eigen::VectorXd length_v;  // d/dv of length
};
SliceTerms slice_terms(const LevelSetGrid& g);

// max over band points of interior slices of m / int m ds.
double levelset_stable_lambda(const LevelSetGrid& g);
// min over band points of 1/2 (lambda int m ds - m).
double curvature_coefficient_margin(const LevelSetGrid& g);
// min |grad psi| over nodes within one cell of the zero set, interior slices.
double interface_gradient_min(const LevelSetGrid& g);

// psi_t per slice; zero outside the band and on the endpoint slices.
std::vector<Eigen::MatrixXd> levelset_rhs(const LevelSetGrid& g);
double levelset_dt_max(const LevelSetGrid& g);

struct StepReport {
  double dt = 0.0;
  double displacement = 0.0;  // max dt |psi_t| / |grad psi| at interface nodes
  double max_rate = 0.0;      // max |psi_t| over the band
  double interface_rate = 0.0;  // max |psi_t| at nodes within one cell of the zero set
};

// One explicit step; dt <= 0 picks the CFL step.
LevelSetGrid evolve_step(const LevelSetGrid& g, double dt, StepReport* report = nullptr);

// Arclength-resampled slices with anchors chained from slice to slice. Each
// slice must hold exactly one contour.
HomotopyGrid contours_to_grid(const SliceContours& s, int n_theta);

struct GeodesicOptions {
  LevelSetParams grid;
  int max_steps = 20000;
  double tol = 1e-5;
  int snapshot_every = 0;
  int n_theta_out = 128;
};

struct GeodesicResult {
  LevelSetGrid field;
  SliceContours slices;
  HomotopyGrid homotopy;          // extracted from the final field
  HomotopyGrid initial;           // extracted from the field at t = 0
  std::vector<SliceContours> snapshots;
  std::vector<double> energy_trace;     // E^N of the extracted homotopy, every reinit
  std::vector<double> conformal_trace;  // E_phi with phi = exp(lambda L), same cadence
  int steps = 0;
  bool converged = false;
  double residual = 0.0;          // last step displacement
  double max_rate = 0.0;          // max |psi_t| over the band at the last step
  double interface_rate = 0.0;    // same, within one cell of the zero set
  double endpoint_error = 0.0;    // max Hausdorff error of endpoint contours over the run
  double margin_t0 = 0.0;         // curvature_coefficient_margin at t = 0
};

GeodesicResult run_geodesic(const SampledCurve& c0, const SampledCurve& c1, const GeodesicOptions& opt = {});

}  // namespace curvespace
