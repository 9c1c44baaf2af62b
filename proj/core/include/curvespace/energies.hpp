#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

#include "curvespace/curvecore.hpp"
#include "curvespace/homotopy.hpp"

namespace curvespace {

enum class EnergyKind { param_H0, intermediate, geom_H0, J, MM, alpha_beta, conformal };

const char* to_string(EnergyKind k);
EnergyKind energy_kind_from_string(const std::string& s);

struct ConformalFactor {
  enum class Kind { identity, exp_lambda_L, custom };
  Kind kind = Kind::identity;
  double lambda = 0.0;
  std::function<double(double)> phi;   // custom only
  std::function<double(double)> dphi;  // custom only

  static ConformalFactor identity() { return {}; }
  static ConformalFactor exp_length(double lambda);
  // phi(c) = len(c).
  static ConformalFactor length();

  double value(double len) const;
  double derivative(double len) const;
  std::string describe() const;
};

struct EnergySpec {
  EnergyKind kind = EnergyKind::geom_H0;
  double A = 0.0;
  double alpha = 2.0;
  double beta = 1.0;
  ConformalFactor factor;

  static EnergySpec of(EnergyKind k) {
    EnergySpec s;
    s.kind = k;
    return s;
  }
  static EnergySpec param_h0() { return of(EnergyKind::param_H0); }
  static EnergySpec intermediate() { return of(EnergyKind::intermediate); }
  static EnergySpec en() { return of(EnergyKind::geom_H0); }
  static EnergySpec j() { return of(EnergyKind::J); }
  static EnergySpec mm(double a) {
    EnergySpec s = of(EnergyKind::MM);
    s.A = a;
    return s;
  }
  static EnergySpec alpha_beta(double a, double b) {
    EnergySpec s = of(EnergyKind::alpha_beta);
    s.alpha = a;
    s.beta = b;
    return s;
  }
  static EnergySpec conformal(ConformalFactor f) {
    EnergySpec s = of(EnergyKind::conformal);
    s.factor = std::move(f);
    return s;
  }

  void validate() const;
  bool geometric() const { return kind != EnergyKind::param_H0 && kind != EnergyKind::intermediate; }
  bool metric() const { return kind != EnergyKind::J && kind != EnergyKind::alpha_beta; }
};

struct EnergyReport {
  EnergySpec spec;
  double total = 0.0;
  Eigen::VectorXd per_slice;
  Eigen::VectorXd v;  // abscissae of per_slice
  std::string quadrature;
  int n_theta = 0;
  int n_v = 0;

  std::string to_text() const;
};

double inner_product(const SampledCurve& c, const Deformation& h, const Deformation& k,
                     const EnergySpec& metric);

EnergyReport energy(const HomotopyGrid& c, const EnergySpec& spec);

struct ScalingRatios {
  double en = 0.0;
  double j = 0.0;
};

ScalingRatios scaling_check(const HomotopyGrid& c, double eps);

double area_swept(const HomotopyGrid& c);

struct AreaBound {
  double area = 0.0;
  double en = 0.0;
  double length_integral = 0.0;
  bool holds = false;
};

AreaBound area_swept_bound(const HomotopyGrid& c);
bool area_swept_bound_check(const HomotopyGrid& c);

// Largest pairwise gap between |pi_{W perp} V|^2 |W|^2, |V|^2|W|^2 - <V,W>^2
// and the squared wedge norm, relative to |V|^2 |W|^2.
double cross_identity_check(const Eigen::VectorXd& w, const Eigen::VectorXd& v);

struct PathLenEnergy {
  double len = 0.0;
  double energy = 0.0;
};

PathLenEnergy path_len_energy(const HomotopyGrid& c, const EnergySpec& spec);

// Resamples in v so that the slice norm of `spec` is constant.
HomotopyGrid constant_speed_reparam(const HomotopyGrid& c, const EnergySpec& spec);

// max over the grid of m / M, with m and M from vstar_calculus(c, 4).
double stable_lambda(const HomotopyGrid& c);

// max over v' < v'' of |sqrt l(v'') - sqrt l(v')| - sqrt(J) sqrt(v'' - v') / 2.
struct HolderCheck {
  double max_violation = 0.0;
  double j = 0.0;
};

HolderCheck holder_bound_check(const HomotopyGrid& c);

}  // namespace curvespace
