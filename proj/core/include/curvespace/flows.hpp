#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "curvespace/calculus.hpp"
#include "curvespace/curvecore.hpp"
#include "curvespace/energies.hpp"
#include "curvespace/homotopy.hpp"

namespace curvespace {

inline constexpr double kCflSafety = 0.2;

// Single-curve flows. dt <= 0 picks the CFL step.
double heat_flow_dt_max(const SampledCurve& c);
SampledCurve heat_flow_step(const SampledCurve& c, double dt);

double mm_normal_speed(double kappa, double A);
double mm_flow_dt_max(const SampledCurve& c, double A);
SampledCurve mm_arclength_flow_step(const SampledCurve& c, double A, double dt);

// Gradient G with E'(t) = -int int C_t . G ds dv; G = 0 on the end slices.
struct HomotopyGradient {
  std::vector<Eigen::MatrixXd> G;
  double dt_max = 0.0;      // CFL step for C_t = G / 2 (or G / (2 phi))
  double min_margin = 0.0;  // min over the grid of phi' M - phi m
  Eigen::VectorXd phi;      // per slice
};

HomotopyGradient h0_gradient(const HomotopyGrid& c);
HomotopyGradient conformal_gradient(const HomotopyGrid& c, const ConformalFactor& f,
                                    bool drop_magnitude = false);

HomotopyGrid h0_homotopy_flow_step(const HomotopyGrid& c, double dt);
HomotopyGrid conformal_homotopy_flow_step(const HomotopyGrid& c, const ConformalFactor& f, double dt,
                                          bool drop_magnitude = false);

enum class FlowKind { h0, conformal };

struct FlowOptions {
  FlowKind kind = FlowKind::conformal;
  double lambda = -1.0;   // < 0: stable_lambda at t = 0
  double dt = 0.0;        // <= 0: CFL step, re-evaluated every step
  // Interior slices are resampled to the endpoints' arclength distribution,
  // blended linearly in v.
  int renormalize_every = 10;
  double blowup_cap = 1e6;
  bool drop_magnitude = false;
  double stability_tol = 1e-9;
};

struct FlowState {
  HomotopyGrid grid;
  double t = 0.0;
  int steps = 0;
  double lambda = 0.0;
  double last_displacement = 0.0;  // max |C(t+dt) - C(t)|
  double min_margin = 0.0;         // monitor of phi' M - phi m
};

class HomotopyFlow {
public:
  HomotopyFlow(HomotopyGrid start, FlowOptions opt = {});

  const FlowState& state() const { return state_; }
  const FlowOptions& options() const { return opt_; }
  ConformalFactor factor() const;
  double energy() const;

  void step();
  // Steps until last_displacement < tol; returns false if max_steps ran out.
  bool run(int max_steps, double tol);

private:
  FlowOptions opt_;
  FlowState state_;
  Eigen::VectorXd frac0_, frac1_;  // endpoint arclength fractions
};

// Central finite differences of the discrete energy against -int int P . G
// for random P vanishing at v = 0, 1. Returns the max relative error.
double energy_derivative_check(const HomotopyGrid& c, FlowKind kind, int trials, double h = 1e-5,
                               std::uint64_t seed = 1, double lambda = -1.0);
// Same check with a caller-supplied perturbation.
double energy_derivative_error(const HomotopyGrid& c, FlowKind kind,
                               const std::vector<Eigen::MatrixXd>& p, double h, double lambda = -1.0);

// Length gradient of a curve under the geometric and the conformal metric,
// compared for parallelism: max over points of |a x b| / (|a||b|).
double conformal_parallelism_check(const SampledCurve& c, const ConformalFactor& f);

}  // namespace curvespace
