#include "curvespace/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "curvespace/errors.hpp"

namespace curvespace {

HomotopyGrid winding_family(const HomotopyGrid& c, int k) {
  if (!c.closed()) throw InputError("winding_family: closed grids only");
  Eigen::VectorXd phi(c.n_v());
  for (int j = 0; j < c.n_v(); ++j) phi(j) = kTwoPi * k * c.v(j);
  return shift_unwind(c, phi);
}

namespace {

Eigen::RowVectorXd row2(double x, double y) {
  Eigen::RowVectorXd r(2);
  r << x, y;
  return r;
}

// Position of `ct` at fractional node coordinates (a, b), bilinear.
Eigen::RowVectorXd bilinear(const HomotopyGrid& ct, double a, double b) {
  const int nu = ct.n_theta() - 1, nv = ct.n_v() - 1;
  const int i = std::clamp(static_cast<int>(std::floor(a)), 0, nu - 1);
  const int j = std::clamp(static_cast<int>(std::floor(b)), 0, nv - 1);
  const double fa = a - i, fb = b - j;
  return (1 - fa) * (1 - fb) * ct.at(i, j) + fa * (1 - fb) * ct.at(i + 1, j) +
         (1 - fa) * fb * ct.at(i, j + 1) + fa * fb * ct.at(i + 1, j + 1);
}

}  // namespace

HomotopyGrid tessellate(const HomotopyGrid& ct, int h, int n_out_u, int n_out_v, double tol) {
  if (ct.closed()) throw InputError("tessellate: needs an open grid on [0,1]^2");
  if (h < 1) throw InputError("tessellate: h must be >= 1");
  if (ct.dim() != 2) throw InputError("tessellate: planar grids only");
  const int nu = ct.n_theta(), nv = ct.n_v();
  double defect = 0.0;
  for (int j = 0; j < nv; ++j)
    defect = std::max(defect, (ct.at(nu - 1, j) - ct.at(0, j) - row2(1.0, 0.0)).norm());
  for (int i = 0; i < nu; ++i)
    defect = std::max(defect, (ct.at(i, nv - 1) - ct.at(i, 0) - row2(0.0, 1.0)).norm());
  if (defect > tol)
    throw InputError("tessellate: tiles do not glue (boundary defect " + std::to_string(defect) + ")");

  const int ou = n_out_u > 0 ? n_out_u : h * (nu - 1) + 1;
  const int ov = n_out_v > 0 ? n_out_v : h * (nv - 1) + 1;
  std::vector<Eigen::MatrixXd> out(ov, Eigen::MatrixXd(ou, 2));
  for (int j = 0; j < ov; ++j) {
    const double y = double(j) / (ov - 1) * h;
    const int tj = std::min(static_cast<int>(std::floor(y)), h - 1);
    for (int i = 0; i < ou; ++i) {
      const double x = double(i) / (ou - 1) * h;
      const int ti = std::min(static_cast<int>(std::floor(x)), h - 1);
      const Eigen::RowVectorXd p = bilinear(ct, (x - ti) * (nu - 1), (y - tj) * (nv - 1));
      out[j].row(i) = p / h + row2(double(ti) / h, double(tj) / h);
    }
  }
  return HomotopyGrid(std::move(out), false);
}

HomotopyGrid graph_wiggle(int j, int n_u, int n_v) {
  if (j < 0) throw InputError("graph_wiggle: j must be >= 0");
  if (n_u < 2 || n_v < 3 || (n_v - 1) % 2 != 0)
    throw InputError("graph_wiggle: need n_u >= 2 and odd n_v >= 3");
  return HomotopyGrid::from_function(
      n_u, n_v,
      [j](double u, double v) {
        const double g = v <= 0.5 ? v : 1.0 - v;
        return row2(u, v + g * std::sin(kTwoPi * j * u));
      },
      false);
}

double conformal_stretch_length(double eps, double lam) {
  return 1.0 + 2.0 * eps * (std::sqrt(1.0 + lam * lam) - 1.0);
}

HomotopyGrid conformal_stretch(double eps, double lam, int n_u, int n_v) {
  if (!(eps > 0.0 && eps < 0.5)) throw InputError("conformal_stretch: need 0 < eps < 1/2");
  if (!(lam >= 0.0)) throw InputError("conformal_stretch: need lambda >= 0");
  if (n_u < 3 || n_v < 2) throw InputError("conformal_stretch: grid too small");
  const double k1 = eps * (n_u - 1);
  if (std::abs(k1 - std::round(k1)) > 1e-9)
    throw InputError("conformal_stretch: eps*(n_u-1) must be an integer so kinks sit on nodes");
  return HomotopyGrid::from_function(
      n_u, n_v,
      [eps, lam](double u, double v) {
        double y = 0.0;
        if (u <= eps) y = lam * u;
        else if (u <= 2.0 * eps) y = lam * (2.0 * eps - u);
        return row2(u, y + v);
      },
      false);
}

double ZigzagCone::phase1_bound() const { return 0.8 * kPi * kPi / k; }

namespace {

// Normal-energy density of c1(t) * rho for a unit-speed c1 on the unit sphere.
double cone_density(double rho, double rho_v, double rho_t) {
  const double d2 = rho * rho + rho_t * rho_t;
  if (d2 <= 0.0) return 0.0;
  return rho_v * rho_v * rho * rho / std::sqrt(d2);
}

}  // namespace

ZigzagCone zigzag_cone(int k, const SampledCurve& c1, int n_v, int cells_per_tooth) {
  if (k < 1) throw InputError("zigzag_cone: k must be >= 1");
  const int n = c1.size();
  if (n % (2 * k) != 0) throw InputError("zigzag_cone: c1 sample count must be a multiple of 2k");
  if (n_v < 3 || (n_v - 1) % 2 != 0) throw InputError("zigzag_cone: n_v - 1 must be even");
  if (cells_per_tooth < 1) throw InputError("zigzag_cone: cells_per_tooth must be >= 1");
  const TangentFrame f = tangent_frame(c1);
  const double rad_err = (c1.points().rowwise().norm().array() - 1.0).abs().maxCoeff();
  const double speed_err = (f.speed.array() - 1.0).abs().maxCoeff();
  if (rad_err > 1e-6 || speed_err > 1e-3)
    throw InputError("zigzag_cone: c1 must lie on the unit sphere with unit speed");

  ZigzagCone z;
  z.k = k;
  z.eps = kPi / k;
  const double eps = z.eps;
  auto saw = [eps](double t) {
    const double q = std::fmod(t, 2.0 * eps);
    return q <= eps ? q : 2.0 * eps - q;
  };
  auto rho = [&](double t, double v) {
    return v <= 0.5 ? 2.0 * v / eps * saw(t) : 1.0 - 2.0 * (1.0 - v) / eps * saw(t + eps);
  };

  std::vector<Eigen::MatrixXd> slices(n_v, Eigen::MatrixXd(n, c1.dim()));
  for (int j = 0; j < n_v; ++j) {
    const double v = double(j) / (n_v - 1);
    for (int i = 0; i < n; ++i) slices[j].row(i) = c1.points().row(i) * rho(kTwoPi * i / n, v);
  }
  z.grid = HomotopyGrid(std::move(slices), true);

  // One tooth cell [0, eps] per phase; the other 2k-1 cells are congruent.
  const int m = cells_per_tooth;
  const int half = (n_v - 1) / 2;
  const double dt = eps / m, dv = 0.5 / half;
  double e1 = 0.0, e2 = 0.0;
  for (int b = 0; b < half; ++b) {
    const double v1 = (b + 0.5) * dv;
    const double v2 = 0.5 + (b + 0.5) * dv;
    for (int a = 0; a < m; ++a) {
      const double zt = (a + 0.5) * dt;
      e1 += cone_density(2.0 * v1 * zt / eps, 2.0 * zt / eps, 2.0 * v1 / eps);
      const double zs = eps - zt;
      e2 += cone_density(1.0 - 2.0 * (1.0 - v2) * zs / eps, 2.0 * zs / eps, 2.0 * (1.0 - v2) / eps);
    }
  }
  z.phase1 = 2.0 * k * e1 * dt * dv;
  z.phase2 = 2.0 * k * e2 * dt * dv;
  return z;
}

namespace {

struct Vertex {
  Eigen::Vector2d p;
  Eigen::Vector2d dp;  // d/dv
};

struct Piece {
  bool arc = false;
  Eigen::Vector2d start;
  Eigen::Vector2d dir;     // segment direction, or arc start tangent
  Eigen::Vector2d centre;  // arc only
  double turn = 0.0;       // +1 left, -1 right
  double radius = 0.0;
  double length = 0.0;
  double dlength = 0.0;
  Eigen::Vector2d vel;     // translation rate of the piece
  double s0 = 0.0;
  double ds0 = 0.0;
};

Eigen::Vector2d left_normal(const Eigen::Vector2d& u) { return {-u.y(), u.x()}; }

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

struct PulleyShape {
  std::vector<Piece> pieces;
  double total = 0.0;
  double lambda = 0.0;
  double dlambda = 0.0;

  void eval(double s, Eigen::Vector2d& pos, Eigen::Vector2d& tan, Eigen::Vector2d& vel) const {
    auto it = std::upper_bound(pieces.begin(), pieces.end(), s,
                               [](double x, const Piece& p) { return x < p.s0; });
    const Piece& p = *(it == pieces.begin() ? it : it - 1);
    const double t = s - p.s0;
    if (!p.arc) {
      pos = p.start + t * p.dir;
      tan = p.dir;
    } else {
      const double a = p.turn * t / p.radius;
      const Eigen::Vector2d r0 = p.start - p.centre;
      const Eigen::Rotation2Dd rot(a);
      pos = p.centre + rot * r0;
      tan = rot * p.dir;
    }
    vel = p.vel - p.ds0 * tan;
  }
};

PulleyShape pulley_shape(int h, double v, const PulleyOptions& o) {
  const double r = o.fillet, d0 = o.min_depth;
  const double q = std::fmod(v * h, 1.0);
  const double tri = q <= 0.5 ? q / h : (1.0 - q) / h;
  const double slope = q < 0.5 ? 1.0 : -1.0;
  const double top = d0 + tri, dtop = slope;
  const double bot = d0 + 0.5 / h - tri, dbot = -slope;
  const double w = 1.0 / h;

  std::vector<Vertex> vx;
  auto add = [&](double x, double y, double dy) { vx.push_back({{x, y}, {0.0, dy}}); };
  add(2.0, 0.0, 0.0);  // A
  add(2.5, 0.0, 0.0);  // B
  add(2.5, 1.0, 0.0);  // C
  add(2.0, 1.0, 0.0);  // D
  const std::size_t d_index = 3;
  for (int i = h - 1; i >= 0; --i) {
    const double xc = (i + 0.5) * 2.0 / h;
    add(xc + 0.5 * w, 1.0, 0.0);
    add(xc + 0.5 * w, 1.0 - top, -dtop);
    add(xc - 0.5 * w, 1.0 - top, -dtop);
    add(xc - 0.5 * w, 1.0, 0.0);
  }
  const std::size_t e_index = vx.size();
  add(0.0, 1.0, 0.0);  // E
  add(0.0, 0.0, 0.0);  // F
  for (int i = 0; i < h; ++i) {
    const double xc = (i + 0.5) * 2.0 / h;
    add(xc - 0.5 * w, 0.0, 0.0);
    add(xc - 0.5 * w, bot, dbot);
    add(xc + 0.5 * w, bot, dbot);
    add(xc + 0.5 * w, 0.0, 0.0);
  }

  const std::size_t n = vx.size();
  std::vector<Eigen::Vector2d> dir(n);
  for (std::size_t k = 0; k < n; ++k) dir[k] = (vx[(k + 1) % n].p - vx[k].p).normalized();
  std::vector<bool> corner(n);
  for (std::size_t k = 0; k < n; ++k) corner[k] = std::abs(cross(dir[(k + n - 1) % n], dir[k])) > 1e-12;

  PulleyShape sh;
  double s = 0.0, ds = 0.0;
  double s_d = 0.0, ds_d = 0.0, s_e = 0.0, ds_e = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == d_index) {
      s_d = s;
      ds_d = ds;
    }
    if (corner[k]) {
      const Eigen::Vector2d in = dir[(k + n - 1) % n];
      Piece a;
      a.arc = true;
      a.turn = cross(in, dir[k]) > 0.0 ? 1.0 : -1.0;
      a.radius = r;
      a.start = vx[k].p - r * in;
      a.dir = in;
      a.centre = a.start + a.turn * r * left_normal(in);
      a.length = 0.5 * kPi * r;
      a.vel = vx[k].dp;
      a.s0 = s;
      a.ds0 = ds;
      sh.pieces.push_back(a);
      if (k == e_index) {
        s_e = s + 0.5 * a.length;
        ds_e = ds;
      }
      s += a.length;
    }
    const std::size_t k1 = (k + 1) % n;
    const double trim0 = corner[k] ? r : 0.0, trim1 = corner[k1] ? r : 0.0;
    Piece g;
    g.start = vx[k].p + trim0 * dir[k];
    g.dir = dir[k];
    g.length = (vx[k1].p - vx[k].p).norm() - trim0 - trim1;
    g.dlength = (vx[k1].dp - vx[k].dp).dot(dir[k]);
    g.vel = vx[k].dp;
    g.s0 = s;
    g.ds0 = ds;
    if (!(g.length > 0.0)) throw InputError("pulley: fillet too large for the tooth geometry");
    sh.pieces.push_back(g);
    s += g.length;
    ds += g.dlength;
  }
  sh.total = s;
  sh.lambda = s_e - s_d;
  sh.dlambda = ds_e - ds_d;
  return sh;
}

}  // namespace

Pulley pulley(int h, const PulleyOptions& o) {
  if (h < 1) throw InputError("pulley: h must be >= 1");
  if (o.n_theta < 8 || o.n_v < 3) throw InputError("pulley: grid too small");
  if (!(o.fillet > 0.0) || 0.5 / h < 2.0 * o.fillet || o.min_depth <= 2.0 * o.fillet)
    throw InputError("pulley: fillet radius too large for h = " + std::to_string(h));
  Pulley p;
  p.h = h;
  p.lambda.resize(o.n_v);
  std::vector<Eigen::MatrixXd> slices(o.n_v, Eigen::MatrixXd(o.n_theta, 2));
  p.velocity.assign(o.n_v, Eigen::MatrixXd(o.n_theta, 2));
  Eigen::VectorXd per_slice(o.n_v);
  for (int j = 0; j < o.n_v; ++j) {
    const double v = double(j) / (o.n_v - 1);
    const PulleyShape sh = pulley_shape(h, v, o);
    if (j == 0) p.total_length = sh.total;
    p.lambda(j) = sh.lambda;
    p.feature_rate = std::max(p.feature_rate, std::abs(sh.dlambda));
    double acc = 0.0;
    for (int i = 0; i < o.n_theta; ++i) {
      Eigen::Vector2d pos, tan, vel;
      sh.eval(sh.total * i / o.n_theta, pos, tan, vel);
      slices[j].row(i) = pos.transpose();
      p.velocity[j].row(i) = vel.transpose();
      const double vt = vel.dot(tan);
      p.max_tangent_speed = std::max(p.max_tangent_speed, std::abs(vt));
      p.max_normal_speed = std::max(p.max_normal_speed, (vel - vt * tan).norm());
      acc += vel.squaredNorm();
    }
    per_slice(j) = acc * kTwoPi / o.n_theta;
  }
  p.param_energy = trapezoid_v(per_slice, 1.0 / (o.n_v - 1));
  p.grid = HomotopyGrid(std::move(slices), true);
  return p;
}

}  // namespace curvespace
