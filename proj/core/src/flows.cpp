#include "curvespace/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "curvespace/errors.hpp"
#include "curvespace/stencil.hpp"

namespace curvespace {

namespace {

// d_ss C of a closed curve: normal part of C_thth over |C_th|^2.
Eigen::MatrixXd css(const SampledCurve& c) {
  const double h = c.dtheta();
  const Eigen::MatrixXd w = stencil::d1_periodic(c.points(), h);
  const Eigen::MatrixXd wtt = stencil::d2_periodic(c.points(), h);
  Eigen::MatrixXd out(w.rows(), w.cols());
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    const double s2 = w.row(i).squaredNorm();
    out.row(i) = (wtt.row(i) - (wtt.row(i).dot(w.row(i)) / s2) * w.row(i)) / s2;
  }
  return out;
}

double min_ds(const SampledCurve& c) {
  return stencil::d1_periodic(c.points(), c.dtheta()).rowwise().norm().minCoeff() * c.dtheta();
}

void require_curve_immersed(const SampledCurve& c, const char* who) {
  if (!c.immersed()) throw GeometryError(std::string(who) + ": curve is not immersed");
}

double resolve_dt(double dt, double dt_max, const char* who) {
  if (dt <= 0.0) return dt_max;
  if (dt > dt_max * (1.0 + 1e-12))
    throw CflError(std::string(who) + ": dt " + std::to_string(dt) + " exceeds CFL bound " +
                   std::to_string(dt_max));
  return dt;
}

}  // namespace

double heat_flow_dt_max(const SampledCurve& c) {
  const double ds = min_ds(c);
  return kCflSafety * ds * ds;
}

SampledCurve heat_flow_step(const SampledCurve& c, double dt) {
  require_curve_immersed(c, "heat_flow_step");
  dt = resolve_dt(dt, heat_flow_dt_max(c), "heat_flow_step");
  return SampledCurve(c.points() + dt * css(c));
}

double mm_normal_speed(double kappa, double A) {
  if (A < 0.0) throw InputError("mm_normal_speed: A must be >= 0");
  return kappa / (1.0 + A * kappa * kappa);
}

double mm_flow_dt_max(const SampledCurve& c, double A) {
  if (A < 0.0) throw InputError("mm_flow_dt_max: A must be >= 0");
  return heat_flow_dt_max(c);
}

SampledCurve mm_arclength_flow_step(const SampledCurve& c, double A, double dt) {
  if (c.dim() != 2) throw InputError("mm_arclength_flow_step: planar curves only");
  require_curve_immersed(c, "mm_arclength_flow_step");
  dt = resolve_dt(dt, mm_flow_dt_max(c, A), "mm_arclength_flow_step");
  const Eigen::MatrixXd h = css(c);
  const Eigen::ArrayXd k2 = h.rowwise().squaredNorm().array();
  const Eigen::MatrixXd vel = h.array().colwise() / (1.0 + A * k2);
  return SampledCurve(c.points() + dt * vel);
}

namespace {

HomotopyGradient gradient(const HomotopyGrid& c, const ConformalFactor& f, bool drop) {
  const VStarField g = vstar_calculus(c, 4);
  const int n = g.n_theta(), nv = g.n_v();
  HomotopyGradient out;
  out.G.assign(nv, Eigen::MatrixXd::Zero(n, c.dim()));
  out.phi.resize(nv);
  out.min_margin = std::numeric_limits<double>::infinity();
  double coef = 0.0, ds = std::numeric_limits<double>::infinity();
  for (int j = 0; j < nv; ++j) {
    const double phi = f.value(g.L(j)), dphi = f.derivative(g.L(j));
    out.phi(j) = phi;
    const Eigen::VectorXd margin = (dphi * g.M(j) - phi * g.m.col(j).array()).matrix();
    out.min_margin = std::min(out.min_margin, margin.minCoeff());
    if (j == 0 || j == nv - 1) continue;
    const Eigen::VectorXd along = (g.Cvsvs[j].array() * g.Cs[j].array()).rowwise().sum();
    const Eigen::MatrixXd normal_part = g.Cvsvs[j] - (g.Cs[j].array().colwise() * along.array()).matrix();
    out.G[j] = 2.0 * phi * normal_part + 2.0 * dphi * g.L_vs(j) * g.Cvs[j] +
               (g.Css[j].array().colwise() * margin.array()).matrix();
    const double scale = drop ? 1.0 / phi : 1.0;
    const double a2 = g.a.col(j).cwiseAbs2().maxCoeff();
    coef = std::max(coef, scale * std::max(phi, phi * a2 + 0.5 * margin.cwiseAbs().maxCoeff()));
    ds = std::min(ds, g.speed.col(j).minCoeff() * g.dtheta);
  }
  if (nv < 3) {
    out.dt_max = std::numeric_limits<double>::infinity();
  } else {
    const double h2 = std::min(ds * ds, g.dv * g.dv);
    out.dt_max = coef > 0.0 ? kCflSafety * h2 / coef : std::numeric_limits<double>::infinity();
  }
  return out;
}

HomotopyGrid apply(const HomotopyGrid& c, const HomotopyGradient& g, double dt, bool drop,
                   const char* who) {
  dt = resolve_dt(dt, g.dt_max, who);
  if (!std::isfinite(dt)) return c;
  std::vector<Eigen::MatrixXd> s = c.slices();
  for (int j = 1; j + 1 < c.n_v(); ++j) {
    const double scale = 0.5 * dt / (drop ? g.phi(j) : 1.0);
    s[j] += scale * g.G[j];
    if (!s[j].allFinite()) throw BlowUpError(std::string(who) + ": non-finite positions");
  }
  return HomotopyGrid(std::move(s), true);
}

}  // namespace

HomotopyGradient h0_gradient(const HomotopyGrid& c) {
  return gradient(c, ConformalFactor::identity(), false);
}

HomotopyGradient conformal_gradient(const HomotopyGrid& c, const ConformalFactor& f, bool drop) {
  return gradient(c, f, drop);
}

HomotopyGrid h0_homotopy_flow_step(const HomotopyGrid& c, double dt) {
  return apply(c, h0_gradient(c), dt, false, "h0_homotopy_flow_step");
}

HomotopyGrid conformal_homotopy_flow_step(const HomotopyGrid& c, const ConformalFactor& f, double dt,
                                          bool drop) {
  return apply(c, conformal_gradient(c, f, drop), dt, drop, "conformal_homotopy_flow_step");
}

HomotopyFlow::HomotopyFlow(HomotopyGrid start, FlowOptions opt) : opt_(opt) {
  if (!start.closed()) throw InputError("HomotopyFlow: closed grids only");
  if (start.n_v() < 3) throw InputError("HomotopyFlow: need N_v >= 3");
  if (opt_.renormalize_every < 0) throw InputError("HomotopyFlow: renormalize_every must be >= 0");
  state_.grid = std::move(start);
  frac0_ = arclength_fractions(state_.grid.curve(0));
  frac1_ = arclength_fractions(state_.grid.curve(state_.grid.n_v() - 1));
  if (opt_.kind == FlowKind::conformal) {
    state_.lambda = opt_.lambda < 0.0 ? stable_lambda(state_.grid) : opt_.lambda;
    const HomotopyGradient g = conformal_gradient(state_.grid, factor(), opt_.drop_magnitude);
    state_.min_margin = g.min_margin;
    const VStarField v = vstar_calculus(state_.grid);
    const double ref = std::max(1.0, (g.phi.array() * v.M.array()).maxCoeff());
    if (g.min_margin < -opt_.stability_tol * ref)
      throw NumericalError("HomotopyFlow: lambda " + std::to_string(state_.lambda) +
                           " violates the stability condition (min phi'M - phi m = " +
                           std::to_string(g.min_margin) + ")");
  }
}

ConformalFactor HomotopyFlow::factor() const {
  return opt_.kind == FlowKind::conformal ? ConformalFactor::exp_length(state_.lambda)
                                          : ConformalFactor::identity();
}

double HomotopyFlow::energy() const {
  const EnergySpec spec =
      opt_.kind == FlowKind::conformal ? EnergySpec::conformal(factor()) : EnergySpec::en();
  return curvespace::energy(state_.grid, spec).total;
}

void HomotopyFlow::step() {
  const bool drop = opt_.kind == FlowKind::conformal && opt_.drop_magnitude;
  const HomotopyGradient g = gradient(state_.grid, factor(), drop);
  const double dt = resolve_dt(opt_.dt, g.dt_max, "HomotopyFlow::step");
  HomotopyGrid next = apply(state_.grid, g, dt, drop, "HomotopyFlow::step");
  double disp = 0.0;
  for (int j = 1; j + 1 < next.n_v(); ++j)
    disp = std::max(disp, (next.slice(j) - state_.grid.slice(j)).rowwise().norm().maxCoeff());
  if (!(disp <= opt_.blowup_cap * state_.grid.scale_hint()))
    throw BlowUpError("HomotopyFlow::step: displacement " + std::to_string(disp) + " at step " +
                      std::to_string(state_.steps));
  state_.last_displacement = disp;
  state_.min_margin = g.min_margin;
  state_.t += dt;
  ++state_.steps;
  if (opt_.renormalize_every > 0 && state_.steps % opt_.renormalize_every == 0) {
    for (int j = 1; j + 1 < next.n_v(); ++j) {
      const double v = next.v(j);
      next.slice(j) = resample_at_fractions(next.curve(j), (1.0 - v) * frac0_ + v * frac1_).points();
    }
  }
  next.refresh_scale();
  state_.grid = std::move(next);
}

bool HomotopyFlow::run(int max_steps, double tol) {
  for (int k = 0; k < max_steps; ++k) {
    step();
    if (state_.last_displacement < tol) return true;
  }
  return false;
}

namespace {

// Trapezoid with fourth-order end corrections; plain trapezoid below 7 nodes.
double quad_v_o4(const Eigen::VectorXd& f, double h) {
  const Eigen::Index n = f.size();
  if (n < 7) return trapezoid_v(f, h);
  static constexpr double w[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
  double s = f.segment(3, n - 6).sum();
  for (int k = 0; k < 3; ++k) s += w[k] * (f(k) + f(n - 1 - k));
  return s * h;
}

// E_phi with fourth-order v-differences and quadrature, matching the gradient.
double energy_o4(const HomotopyGrid& c, const ConformalFactor& f) {
  const VStarField g = vstar_calculus(c, 4);
  Eigen::VectorXd per(c.n_v());
  for (int j = 0; j < c.n_v(); ++j) per(j) = f.value(g.L(j)) * g.M(j);
  return quad_v_o4(per, c.dv());
}

}  // namespace

double energy_derivative_error(const HomotopyGrid& c, FlowKind kind,
                               const std::vector<Eigen::MatrixXd>& p, double h, double lambda) {
  if (static_cast<int>(p.size()) != c.n_v()) throw InputError("energy_derivative_error: P has wrong N_v");
  ConformalFactor f = ConformalFactor::identity();
  if (kind == FlowKind::conformal) f = ConformalFactor::exp_length(lambda < 0.0 ? stable_lambda(c) : lambda);
  std::vector<Eigen::MatrixXd> plus = c.slices(), minus = c.slices();
  for (int j = 0; j < c.n_v(); ++j) {
    plus[j] += h * p[j];
    minus[j] -= h * p[j];
  }
  const double fd = (energy_o4(HomotopyGrid(std::move(plus)), f) - energy_o4(HomotopyGrid(std::move(minus)), f)) /
                    (2.0 * h);
  const HomotopyGradient g = gradient(c, f, false);
  const VStarField v = vstar_calculus(c, 4);
  Eigen::VectorXd per(c.n_v());
  for (int j = 0; j < c.n_v(); ++j)
    per(j) = -((p[j].array() * g.G[j].array()).rowwise().sum() * v.speed.col(j).array()).sum() * c.dtheta();
  const double analytic = quad_v_o4(per, c.dv());
  const double denom = std::max(std::abs(fd), std::abs(analytic));
  return denom > 0.0 ? std::abs(analytic - fd) / denom : 0.0;
}

double energy_derivative_check(const HomotopyGrid& c, FlowKind kind, int trials, double h,
                               std::uint64_t seed, double lambda) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    double amp[3][3][2];
    for (auto& k : amp)
      for (auto& d : k)
        for (double& x : d) x = u(rng);
    std::vector<Eigen::MatrixXd> p(c.n_v(), Eigen::MatrixXd::Zero(c.n_theta(), c.dim()));
    for (int j = 0; j < c.n_v(); ++j) {
      const double w = std::pow(std::sin(kPi * c.v(j)), 2);
      for (int i = 0; i < c.n_theta(); ++i)
        for (int d = 0; d < std::min(c.dim(), 3); ++d) {
          double s = 0.0;
          for (int k = 0; k < 3; ++k)
            s += amp[k][d][0] * std::cos((k + 1) * c.theta(i)) + amp[k][d][1] * std::sin((k + 1) * c.theta(i));
          p[j](i, d) = w * s;
        }
    }
    worst = std::max(worst, energy_derivative_error(c, kind, p, h, lambda));
  }
  return worst;
}

double conformal_parallelism_check(const SampledCurve& c, const ConformalFactor& f) {
  require_curve_immersed(c, "conformal_parallelism_check");
  const Eigen::MatrixXd a = -css(c);
  const Eigen::MatrixXd b = a / f.value(arclength(c));
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double na = a.row(i).squaredNorm(), nb = b.row(i).norm();
    if (na <= 0.0 || nb <= 0.0) continue;
    const Eigen::RowVectorXd perp = b.row(i) - (a.row(i).dot(b.row(i)) / na) * a.row(i);
    worst = std::max(worst, perp.norm() / nb);
  }
  return worst;
}

}  // namespace curvespace
