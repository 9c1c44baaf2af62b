#include "curvespace/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <span>

#include "curvespace/errors.hpp"
#include "curvespace/stencil.hpp"

namespace curvespace {

namespace {

using Slices = std::vector<Eigen::MatrixXd>;

Eigen::MatrixXd seq_d1(const Slices& s, int j, double h) {
  return stencil::d1_sequence(std::span<const Eigen::MatrixXd>(s), j, h);
}

Eigen::VectorXd rowdot(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a.array() * b.array()).rowwise().sum();
}

// d/ds of a vector field on slice j.
Eigen::MatrixXd ds_vec(const VStarField& g, const Eigen::MatrixXd& f, int j) {
  Eigen::MatrixXd d = stencil::d1_periodic(f, g.dtheta);
  return d.array().colwise() / g.speed.col(j).array();
}

// d/dv* of a vector field given per slice.
Eigen::MatrixXd dvs_vec(const VStarField& g, const Slices& f, int j) {
  return seq_d1(f, j, g.dv) - (ds_vec(g, f[j], j).array().colwise() * g.a.col(j).array()).matrix();
}

}  // namespace

VStarField vstar_calculus(const HomotopyGrid& c, int v_order) {
  if (!c.closed()) throw InputError("vstar_calculus: closed grids only");
  if (v_order != 2 && v_order != 4) throw InputError("vstar_calculus: v_order must be 2 or 4");
  const bool o4 = v_order == 4;
  auto dv1 = [&](const Slices& s, int j) {
    return o4 ? stencil::d1_sequence_o4(std::span<const Eigen::MatrixXd>(s), j, c.dv()) : seq_d1(s, j, c.dv());
  };
  require_immersed(c, "vstar_calculus");
  const int n = c.n_theta(), nv = c.n_v(), dim = c.dim();
  VStarField g;
  g.dtheta = c.dtheta();
  g.dv = c.dv();
  const double h = g.dtheta;
  g.speed.resize(n, nv);
  g.a.resize(n, nv);
  g.m.resize(n, nv);
  g.M.resize(nv);
  g.L.resize(nv);
  g.Cs.resize(nv);
  g.Cv.resize(nv);
  g.Cvs.resize(nv);
  g.Css.resize(nv);
  g.Cvsvs.resize(nv);

  Slices w(nv), b(nv);
  for (int j = 0; j < nv; ++j) {
    w[j] = c.d_theta(j);
    g.speed.col(j) = w[j].rowwise().norm();
    g.Cs[j] = w[j].array().colwise() / g.speed.col(j).array();
    g.Cv[j] = dv1(c.slices(), j);
    g.a.col(j) = rowdot(g.Cv[j], g.Cs[j]);
    g.Cvs[j] = g.Cv[j] - (g.Cs[j].array().colwise() * g.a.col(j).array()).matrix();
    g.m.col(j) = g.Cvs[j].rowwise().squaredNorm();
    g.L(j) = g.speed.col(j).sum() * h;
    g.M(j) = g.m.col(j).dot(g.speed.col(j)) * h;
    const Eigen::MatrixXd wtt = stencil::d2_periodic(c.slice(j), h);
    const Eigen::VectorXd along = rowdot(wtt, g.Cs[j]);
    const Eigen::VectorXd s2 = g.speed.col(j).array().square();
    g.Css[j] = (wtt - (g.Cs[j].array().colwise() * along.array()).matrix()).array().colwise() / s2.array();
    b[j] = g.a.col(j).cwiseQuotient(g.speed.col(j));
  }
  Slices len(nv);
  for (int j = 0; j < nv; ++j) len[j] = Eigen::MatrixXd::Constant(1, 1, g.L(j));
  g.L_vs.resize(nv);
  const std::span<const Eigen::MatrixXd> pos(c.slices());
  for (int j = 0; j < nv; ++j) {
    g.L_vs(j) = dv1(len, j)(0, 0);
    const Eigen::MatrixXd cvv = o4 ? stencil::d2_sequence_o4(pos, j, g.dv) : stencil::d2_sequence(pos, j, g.dv);
    const Eigen::MatrixXd ctv = dv1(w, j);
    const Eigen::MatrixXd ctt = stencil::d2_periodic(c.slice(j), h);
    const Eigen::VectorXd bj = b[j];
    const Eigen::VectorXd bv = dv1(b, j);
    const Eigen::VectorXd bt = stencil::d1_periodic(b[j], h);
    const Eigen::VectorXd dvs_b = bv - bj.cwiseProduct(bt);
    Eigen::MatrixXd out = cvv;
    for (int k = 0; k < dim; ++k) {
      out.col(k) += -2.0 * bj.cwiseProduct(ctv.col(k)) + bj.cwiseProduct(bj).cwiseProduct(ctt.col(k)) -
                    dvs_b.cwiseProduct(w[j].col(k));
    }
    g.Cvsvs[j] = out;
  }
  return g;
}

Eigen::MatrixXd d_s(const VStarField& g, const Eigen::MatrixXd& f) {
  Eigen::MatrixXd out(f.rows(), f.cols());
  for (int j = 0; j < f.cols(); ++j)
    out.col(j) = stencil::d1_periodic(f.col(j), g.dtheta).cwiseQuotient(g.speed.col(j));
  return out;
}

Eigen::MatrixXd d_v(const VStarField& g, const Eigen::MatrixXd& f) {
  const int nv = static_cast<int>(f.cols());
  Slices cols(nv);
  for (int j = 0; j < nv; ++j) cols[j] = f.col(j);
  Eigen::MatrixXd out(f.rows(), nv);
  for (int j = 0; j < nv; ++j) out.col(j) = seq_d1(cols, j, g.dv);
  return out;
}

Eigen::MatrixXd d_vstar(const VStarField& g, const Eigen::MatrixXd& f) {
  return d_v(g, f) - g.a.cwiseProduct(d_s(g, f));
}

Eigen::VectorXd integrate_s(const VStarField& g, const Eigen::MatrixXd& f) {
  return f.cwiseProduct(g.speed).colwise().sum().transpose() * g.dtheta;
}

namespace {

Eigen::MatrixXd random_field(const VStarField& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double ca[3], sa[3], p[3][3];
  for (int k = 0; k < 3; ++k) {
    ca[k] = u(rng);
    sa[k] = u(rng);
    for (double& x : p[k]) x = u(rng);
  }
  const double c0 = u(rng);
  Eigen::MatrixXd f(g.n_theta(), g.n_v());
  for (int j = 0; j < g.n_v(); ++j) {
    const double v = double(j) / (g.n_v() - 1);
    for (int i = 0; i < g.n_theta(); ++i) {
      const double t = g.dtheta * i;
      double s = c0;
      for (int k = 0; k < 3; ++k)
        s += (ca[k] * std::cos((k + 1) * t) + sa[k] * std::sin((k + 1) * t)) *
             (p[k][0] + p[k][1] * v + p[k][2] * v * v);
      f(i, j) = s;
    }
  }
  return f;
}

Eigen::MatrixXd dot_field(const VStarField& g, const Slices& a, const Slices& b) {
  Eigen::MatrixXd out(g.n_theta(), g.n_v());
  for (int j = 0; j < g.n_v(); ++j) out.col(j) = rowdot(a[j], b[j]);
  return out;
}

}  // namespace

CommutatorResiduals commutator_check(const HomotopyGrid& c, int trials, std::uint64_t seed) {
  const VStarField g = vstar_calculus(c);
  const Eigen::MatrixXd k_vs = dot_field(g, g.Cvs, g.Css);
  Slices cv_s(g.n_v());
  for (int j = 0; j < g.n_v(); ++j) cv_s[j] = ds_vec(g, g.Cv[j], j);
  const Eigen::MatrixXd k_v = dot_field(g, g.Cs, cv_s);

  CommutatorResiduals r;
  r.l_vstar = (g.L_vs + integrate_s(g, k_vs)).cwiseAbs().maxCoeff();
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Eigen::MatrixXd f = random_field(g, rng);
    const Eigen::MatrixXd fs = d_s(g, f);
    const Eigen::MatrixXd e1 = d_vstar(g, fs) - d_s(g, d_vstar(g, f)) - k_vs.cwiseProduct(fs);
    const Eigen::MatrixXd e2 = d_v(g, fs) - d_s(g, d_v(g, f)) + k_v.cwiseProduct(fs);
    const Eigen::VectorXd lhs = d_v(g, integrate_s(g, f).transpose()).transpose();
    const Eigen::VectorXd rhs = integrate_s(g, d_vstar(g, f) - f.cwiseProduct(k_vs));
    r.vstar_s = std::max(r.vstar_s, e1.cwiseAbs().maxCoeff());
    r.v_s = std::max(r.v_s, e2.cwiseAbs().maxCoeff());
    r.int_v = std::max(r.int_v, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return r;
}

double IdentityResiduals::max() const { return *std::max_element(r, r + 6); }

IdentityResiduals identity_check(const HomotopyGrid& c) {
  const VStarField g = vstar_calculus(c);
  IdentityResiduals out;
  for (int j = 0; j < g.n_v(); ++j) {
    const Eigen::MatrixXd cvs_s = ds_vec(g, g.Cvs[j], j);
    const Eigen::MatrixXd cs_vs = dvs_vec(g, g.Cs, j);
    const Eigen::VectorXd id[6] = {
        (g.Cs[j].rowwise().squaredNorm().array() - 1.0).matrix(),
        rowdot(g.Cs[j], g.Cvs[j]),
        rowdot(cvs_s, g.Cvs[j]) + rowdot(g.Cvsvs[j], g.Cs[j]),
        rowdot(cvs_s, g.Cs[j]) + rowdot(g.Css[j], g.Cvs[j]),
        rowdot(cs_vs, g.Cs[j]),
        rowdot(g.Css[j], g.Cs[j])};
    for (int k = 0; k < 6; ++k) out.r[k] = std::max(out.r[k], id[k].cwiseAbs().maxCoeff());
  }
  return out;
}

double planar_reduction_check(const HomotopyGrid& c) {
  if (c.dim() != 2) throw InputError("planar_reduction_check: planar grids only");
  const VStarField g = vstar_calculus(c);
  double worst = 0.0;
  for (int j = 0; j < g.n_v(); ++j) {
    const Eigen::VectorXd k = rowdot(g.Cvs[j], g.Css[j]);
    const Eigen::MatrixXd lhs = g.Cvs[j].array().colwise() * k.array();
    const Eigen::MatrixXd rhs = g.Css[j].array().colwise() * g.m.col(j).array();
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace curvespace
