#include "curvespace/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "curvespace/errors.hpp"
#include "curvespace/interp.hpp"
#include "curvespace/stencil.hpp"

namespace curvespace {

HomotopyGrid::HomotopyGrid(std::vector<Eigen::MatrixXd> slices, bool closed)
    : slices_(std::move(slices)), closed_(closed) {
  if (slices_.size() < 2) throw InputError("HomotopyGrid: need N_v >= 2");
  const auto rows = slices_.front().rows(), cols = slices_.front().cols();
  if (rows < 3) throw InputError("HomotopyGrid: need N_theta >= 3");
  if (cols < 2) throw InputError("HomotopyGrid: need dimension >= 2");
  for (const auto& s : slices_) {
    if (s.rows() != rows || s.cols() != cols) throw InputError("HomotopyGrid: ragged slices");
    if (!s.allFinite()) throw InputError("HomotopyGrid: non-finite coordinates");
  }
  refresh_scale();
}

void HomotopyGrid::refresh_scale() {
  Eigen::RowVectorXd lo = slices_.front().colwise().minCoeff();
  Eigen::RowVectorXd hi = slices_.front().colwise().maxCoeff();
  for (const auto& s : slices_) {
    lo = lo.cwiseMin(s.colwise().minCoeff());
    hi = hi.cwiseMax(s.colwise().maxCoeff());
  }
  const double d = (hi - lo).norm();
  scale_ = d > 0.0 ? d : 1.0;
}

HomotopyGrid HomotopyGrid::from_function(
    int n_theta, int n_v, const std::function<Eigen::RowVectorXd(double, double)>& f,
    bool closed) {
  if (n_theta < 3 || n_v < 2) throw InputError("from_function: grid too small");
  const int dim = static_cast<int>(f(0.0, 0.0).size());
  std::vector<Eigen::MatrixXd> slices(n_v, Eigen::MatrixXd(n_theta, dim));
  for (int j = 0; j < n_v; ++j) {
    const double v = double(j) / (n_v - 1);
    for (int i = 0; i < n_theta; ++i) {
      const double t = closed ? kTwoPi * i / n_theta : double(i) / (n_theta - 1);
      slices[j].row(i) = f(t, v);
    }
  }
  return HomotopyGrid(std::move(slices), closed);
}

SampledCurve HomotopyGrid::curve(int j) const {
  if (!closed_) throw InputError("HomotopyGrid::curve: open grids have no closed slices");
  return SampledCurve(slices_[j]);
}

Eigen::MatrixXd HomotopyGrid::d_theta(int j) const {
  if (closed_) return stencil::d1_periodic(slices_[j], dtheta());
  // Open grids: second-order differences, one-sided at the ends.
  const Eigen::MatrixXd& s = slices_[j];
  const int n = n_theta();
  const double h = dtheta();
  Eigen::MatrixXd d(n, dim());
  for (int i = 1; i + 1 < n; ++i) d.row(i) = (s.row(i + 1) - s.row(i - 1)) / (2.0 * h);
  d.row(0) = (-3.0 * s.row(0) + 4.0 * s.row(1) - s.row(2)) / (2.0 * h);
  d.row(n - 1) = (3.0 * s.row(n - 1) - 4.0 * s.row(n - 2) + s.row(n - 3)) / (2.0 * h);
  return d;
}

Eigen::MatrixXd HomotopyGrid::d_v(int j) const {
  return stencil::d1_sequence(std::span<const Eigen::MatrixXd>(slices_), j, dv());
}

HomotopyGrid linear_homotopy(const SampledCurve& c0, const SampledCurve& c1, int n_v) {
  if (c0.size() != c1.size() || c0.dim() != c1.dim())
    throw InputError("linear_homotopy: endpoint curves differ in size or dimension");
  if (n_v < 2) throw InputError("linear_homotopy: need N_v >= 2");
  std::vector<Eigen::MatrixXd> slices(n_v);
  for (int j = 0; j < n_v; ++j) {
    const double v = double(j) / (n_v - 1);
    slices[j] = (1.0 - v) * c0.points() + v * c1.points();
  }
  slices.front() = c0.points();
  slices.back() = c1.points();
  return HomotopyGrid(std::move(slices), true);
}

HomotopyGrid scaled(const HomotopyGrid& c, double eps) {
  std::vector<Eigen::MatrixXd> s = c.slices();
  for (auto& m : s) m *= eps;
  return HomotopyGrid(std::move(s), c.closed());
}

LengthProfile length_profile(const HomotopyGrid& c) {
  LengthProfile p;
  p.l.resize(c.n_v());
  for (int j = 0; j < c.n_v(); ++j) {
    if (c.closed()) {
      p.l(j) = stencil::d1_periodic(c.slice(j), c.dtheta()).rowwise().norm().sum() * c.dtheta();
    } else {
      p.l(j) = polyline_length(c.slice(j), false);
    }
  }
  return p;
}

void require_immersed(const HomotopyGrid& c, const char* who) {
  if (!c.closed()) return;
  for (int j = 0; j < c.n_v(); ++j) {
    if (!c.curve(j).immersed())
      throw GeometryError(std::string(who) + ": slice " + std::to_string(j) + " is not immersed");
  }
}

HomotopyGrid reparam_arclength(const HomotopyGrid& c) {
  if (!c.closed()) throw InputError("reparam_arclength: closed grids only");
  require_immersed(c, "reparam_arclength");
  std::vector<Eigen::MatrixXd> out(c.n_v());
  for (int j = 0; j < c.n_v(); ++j)
    out[j] = resample_arclength(c.curve(j), c.n_theta()).points();
  return HomotopyGrid(std::move(out), true);
}

namespace {

// -<C_v, T>/|C_theta| at every node of slice j.
Eigen::MatrixXd d_v_o4(const HomotopyGrid& c, int j) {
  return stencil::d1_sequence_o4(std::span<const Eigen::MatrixXd>(c.slices()), j, c.dv());
}

Eigen::MatrixXd tangential_rate(const HomotopyGrid& c, int j) {
  const Eigen::MatrixXd ct = c.d_theta(j);
  const Eigen::MatrixXd cv = d_v_o4(c, j);
  const Eigen::VectorXd sp2 = ct.rowwise().squaredNorm();
  Eigen::MatrixXd f(c.n_theta(), 1);
  f.col(0) = -(cv.array() * ct.array()).rowwise().sum() / sp2.array();
  return f;
}

}  // namespace

HorizontalResult reparam_horizontal(const HomotopyGrid& c) {
  if (!c.closed()) throw InputError("reparam_horizontal: closed grids only");
  require_immersed(c, "reparam_horizontal");
  const int nt = c.n_theta(), nv = c.n_v();
  const double dv = c.dv();

  std::vector<Eigen::MatrixXd> rate(nv);
  for (int j = 0; j < nv; ++j) rate[j] = tangential_rate(c, j);
  std::vector<PeriodicInterpolant> at_node, at_half;
  at_node.reserve(nv);
  at_half.reserve(nv);
  for (int j = 0; j < nv; ++j) at_node.emplace_back(rate[j], kTwoPi);
  for (int j = 0; j + 1 < nv; ++j) {
    at_half.emplace_back(lagrange4(std::span<const Eigen::MatrixXd>(rate), dv, (j + 0.5) * dv),
                         kTwoPi);
  }
  auto eval = [&](const PeriodicInterpolant& p, const Eigen::VectorXd& x) {
    Eigen::VectorXd y(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) y(i) = p(x(i))(0);
    return y;
  };

  HorizontalResult r;
  r.phi.resize(nt, nv);
  Eigen::VectorXd phi(nt);
  for (int i = 0; i < nt; ++i) phi(i) = c.theta(i);
  r.phi.col(0) = phi;
  for (int j = 0; j + 1 < nv; ++j) {
    const Eigen::VectorXd k1 = eval(at_node[j], phi);
    const Eigen::VectorXd k2 = eval(at_half[j], phi + 0.5 * dv * k1);
    const Eigen::VectorXd k3 = eval(at_half[j], phi + 0.5 * dv * k2);
    const Eigen::VectorXd k4 = eval(at_node[j + 1], phi + dv * k3);
    phi += dv / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    r.phi.col(j + 1) = phi;
  }

  std::vector<Eigen::MatrixXd> out(nv);
  r.min_psi = std::numeric_limits<double>::infinity();
  for (int j = 0; j < nv; ++j) {
    const PeriodicInterpolant p(c.slice(j), kTwoPi);
    out[j] = p.sample(r.phi.col(j));
    Eigen::MatrixXd wrapped(nt, 1);
    for (int i = 0; i < nt; ++i) wrapped(i, 0) = r.phi(i, j) - c.theta(i);
    const Eigen::MatrixXd dpsi = stencil::d1_periodic(wrapped, c.dtheta());
    r.min_psi = std::min(r.min_psi, 1.0 + dpsi.minCoeff());
  }
  if (!(r.min_psi > 1e-8))
    throw NumericalError("reparam_horizontal: d_theta phi lost positivity (min " +
                         std::to_string(r.min_psi) + "); grid too coarse");
  r.grid = HomotopyGrid(std::move(out), true);
  r.residual = tangential_residual(r.grid);
  return r;
}

HomotopyGrid shift_unwind(const HomotopyGrid& c, const Eigen::VectorXd& phi_of_v) {
  if (!c.closed()) throw InputError("shift_unwind: closed grids only");
  if (phi_of_v.size() != c.n_v()) throw InputError("shift_unwind: phi_of_v needs N_v entries");
  std::vector<Eigen::MatrixXd> out(c.n_v());
  Eigen::VectorXd t(c.n_theta());
  for (int j = 0; j < c.n_v(); ++j) {
    if (phi_of_v(j) == 0.0) {
      out[j] = c.slice(j);
      continue;
    }
    for (int i = 0; i < c.n_theta(); ++i) t(i) = c.theta(i) + phi_of_v(j);
    out[j] = PeriodicInterpolant(c.slice(j), kTwoPi).sample(t);
  }
  return HomotopyGrid(std::move(out), true);
}

Eigen::VectorXd optimal_unwind_shift(const HomotopyGrid& c) {
  if (!c.closed()) throw InputError("optimal_unwind_shift: closed grids only");
  const int nv = c.n_v();
  Eigen::VectorXd rate(nv);
  for (int j = 0; j < nv; ++j) {
    const Eigen::MatrixXd ct = c.d_theta(j);
    const Eigen::MatrixXd cv = d_v_o4(c, j);
    const double num = (cv.array() * ct.array()).sum();
    const double den = ct.squaredNorm();
    rate(j) = den > 0.0 ? -num / den : 0.0;
  }
  Eigen::VectorXd phi(nv);
  phi(0) = 0.0;
  for (int j = 1; j < nv; ++j) phi(j) = phi(j - 1) + 0.5 * c.dv() * (rate(j - 1) + rate(j));
  return phi;
}

namespace {

template <class F>
void for_tangential(const HomotopyGrid& c, F&& f) {
  const double eps = kImmersionEps * c.scale_hint();
  for (int j = 0; j < c.n_v(); ++j) {
    const Eigen::MatrixXd ct = c.d_theta(j);
    const Eigen::MatrixXd cv = c.d_v(j);
    for (int i = 0; i < c.n_theta(); ++i) {
      const double sp = ct.row(i).norm();
      const double a = sp > eps ? cv.row(i).dot(ct.row(i)) / sp : 0.0;
      f(i, j, a);
    }
  }
}

}  // namespace

double tangential_residual(const HomotopyGrid& c) {
  double m = 0.0;
  for_tangential(c, [&](int, int, double a) { m = std::max(m, std::abs(a)); });
  return m;
}

double tangential_energy(const HomotopyGrid& c) {
  Eigen::VectorXd per(c.n_v());
  per.setZero();
  for_tangential(c, [&](int, int j, double a) { per(j) += a * a * c.dtheta(); });
  return trapezoid_v(per, c.dv());
}

double trapezoid_v(const Eigen::VectorXd& f, double dv) {
  const Eigen::Index n = f.size();
  if (n < 2) return 0.0;
  return dv * (f.sum() - 0.5 * (f(0) + f(n - 1)));
}

}  // namespace curvespace
