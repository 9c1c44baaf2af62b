#include "curvespace/levelset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "curvespace/altmetrics.hpp"
#include "curvespace/energies.hpp"
#include "curvespace/errors.hpp"
#include "curvespace/parallel.hpp"

namespace curvespace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Box {
  double x0, y0, h;
};

Box make_box(const std::vector<Eigen::MatrixXd>& slices, const LevelSetParams& p) {
  if (p.nx < 8 || p.ny < 8) throw InputError("levelset: need nx, ny >= 8");
  if (p.band < 1.0) throw InputError("levelset: band must be at least one cell");
  double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
  for (const auto& s : slices) {
    if (s.cols() != 2) throw InputError("levelset: planar curves only");
    xmin = std::min(xmin, s.col(0).minCoeff());
    xmax = std::max(xmax, s.col(0).maxCoeff());
    ymin = std::min(ymin, s.col(1).minCoeff());
    ymax = std::max(ymax, s.col(1).maxCoeff());
  }
  const double w = xmax - xmin, ht = ymax - ymin;
  double pad = p.pad * std::max(w, ht);
  double h = 0.0;
  for (int it = 0; it < 50; ++it) {
    h = std::max((w + 2 * pad) / (p.nx - 1), (ht + 2 * pad) / (p.ny - 1));
    if (pad >= (p.band + 3.0) * h) break;
    pad = (p.band + 3.0) * h * 1.01;
  }
  if (pad < (p.band + 3.0) * h) throw InputError("levelset: grid too coarse for the narrow band");
  return {0.5 * (xmin + xmax) - 0.5 * (p.nx - 1) * h, 0.5 * (ymin + ymax) - 0.5 * (p.ny - 1) * h, h};
}

double segment_distance(double px, double py, double ax, double ay, double bx, double by, double* cx, double* cy) {
  const double ex = bx - ax, ey = by - ay;
  const double l2 = ex * ex + ey * ey;
  double t = l2 > 0.0 ? ((px - ax) * ex + (py - ay) * ey) / l2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  *cx = ax + t * ex;
  *cy = ay + t * ey;
  return std::hypot(px - *cx, py - *cy);
}

// Unsigned distance and closest point for nodes within `radius` of the polylines.
void near_distance(const std::vector<Eigen::MatrixXd>& polys, int nx, int ny, const Box& b, double radius,
                   Eigen::MatrixXd& d, Eigen::MatrixXd& cx, Eigen::MatrixXd& cy) {
  d.setConstant(nx, ny, kInf);
  cx.setZero(nx, ny);
  cy.setZero(nx, ny);
  for (const auto& p : polys) {
    const Eigen::Index n = p.rows();
    for (Eigen::Index s = 0; s < n; ++s) {
      const double ax = p(s, 0), ay = p(s, 1), bx = p((s + 1) % n, 0), by = p((s + 1) % n, 1);
      const int i0 = std::max(0, static_cast<int>(std::floor((std::min(ax, bx) - radius - b.x0) / b.h)));
      const int i1 = std::min(nx - 1, static_cast<int>(std::ceil((std::max(ax, bx) + radius - b.x0) / b.h)));
      const int j0 = std::max(0, static_cast<int>(std::floor((std::min(ay, by) - radius - b.y0) / b.h)));
      const int j1 = std::min(ny - 1, static_cast<int>(std::ceil((std::max(ay, by) + radius - b.y0) / b.h)));
      for (int i = i0; i <= i1; ++i)
        for (int j = j0; j <= j1; ++j) {
          double qx, qy;
          const double dist = segment_distance(b.x0 + i * b.h, b.y0 + j * b.h, ax, ay, bx, by, &qx, &qy);
          if (dist < d(i, j)) {
            d(i, j) = dist;
            cx(i, j) = qx;
            cy(i, j) = qy;
          }
        }
    }
  }
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      if (d(i, j) > radius) d(i, j) = kInf;
}

// Godunov fast sweeping for |grad d| = 1 with the finite entries of d held fixed.
void fast_sweep(Eigen::MatrixXd& d, double h) {
  const int nx = static_cast<int>(d.rows()), ny = static_cast<int>(d.cols());
  const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> fixed = d.array().isFinite();
  if (!fixed.any()) throw StallError("fast_sweep: no seed values");
  auto update = [&](int i, int j) {
    if (fixed(i, j)) return;
    const double a = std::min(i > 0 ? d(i - 1, j) : kInf, i + 1 < nx ? d(i + 1, j) : kInf);
    const double c = std::min(j > 0 ? d(i, j - 1) : kInf, j + 1 < ny ? d(i, j + 1) : kInf);
    if (!std::isfinite(a) && !std::isfinite(c)) return;
    double u;
    if (std::abs(a - c) >= h)
      u = std::min(a, c) + h;
    else
      u = 0.5 * (a + c + std::sqrt(2 * h * h - (a - c) * (a - c)));
    d(i, j) = std::min(d(i, j), u);
  };
  for (int it = 0; it < 2; ++it) {
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) update(i, j);
    for (int i = nx - 1; i >= 0; --i)
      for (int j = 0; j < ny; ++j) update(i, j);
    for (int i = nx - 1; i >= 0; --i)
      for (int j = ny - 1; j >= 0; --j) update(i, j);
    for (int i = 0; i < nx; ++i)
      for (int j = ny - 1; j >= 0; --j) update(i, j);
  }
}

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

bool segments_cross(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b, const Eigen::RowVectorXd& c,
                    const Eigen::RowVectorXd& d) {
  const double d1 = cross(b(0) - a(0), b(1) - a(1), c(0) - a(0), c(1) - a(1));
  const double d2 = cross(b(0) - a(0), b(1) - a(1), d(0) - a(0), d(1) - a(1));
  const double d3 = cross(d(0) - c(0), d(1) - c(1), a(0) - c(0), a(1) - c(1));
  const double d4 = cross(d(0) - c(0), d(1) - c(1), b(0) - c(0), b(1) - c(1));
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

void require_simple(const Eigen::MatrixXd& p, int slice) {
  const Eigen::Index n = p.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::RowVectorXd a = p.row(i), b = p.row((i + 1) % n);
    for (Eigen::Index k = i + 2; k < n; ++k) {
      if (i == 0 && k == n - 1) continue;
      const Eigen::RowVectorXd c = p.row(k), d = p.row((k + 1) % n);
      if (std::max(a(0), b(0)) < std::min(c(0), d(0)) || std::max(c(0), d(0)) < std::min(a(0), b(0)) ||
          std::max(a(1), b(1)) < std::min(c(1), d(1)) || std::max(c(1), d(1)) < std::min(a(1), b(1)))
        continue;
      if (segments_cross(a, b, c, d))
        throw GeometryError("embed: slice " + std::to_string(slice) + " self-intersects");
    }
  }
}

// Even-odd inside test for every node, one scanline per row of constant y.
Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> inside_mask(const Eigen::MatrixXd& p, int nx, int ny,
                                                               const Box& b) {
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> in(nx, ny);
  in.setConstant(false);
  const Eigen::Index n = p.rows();
  std::vector<double> xs;
  for (int j = 0; j < ny; ++j) {
    const double y = b.y0 + j * b.h;
    xs.clear();
    for (Eigen::Index s = 0; s < n; ++s) {
      const double ay = p(s, 1), by = p((s + 1) % n, 1);
      if ((ay > y) != (by > y)) {
        const double ax = p(s, 0), bx = p((s + 1) % n, 0);
        xs.push_back(ax + (y - ay) * (bx - ax) / (by - ay));
      }
    }
    std::sort(xs.begin(), xs.end());
    std::size_t c = 0;
    for (int i = 0; i < nx; ++i) {
      const double x = b.x0 + i * b.h;
      while (c < xs.size() && xs[c] < x) ++c;
      in(i, j) = c % 2 == 1;
    }
  }
  return in;
}

Eigen::MatrixXd polygon_sdf(const Eigen::MatrixXd& p, int nx, int ny, const Box& b, double band) {
  Eigen::MatrixXd d, cx, cy;
  near_distance({p}, nx, ny, b, (band + 2.0) * b.h, d, cx, cy);
  fast_sweep(d, b.h);
  const auto in = inside_mask(p, nx, ny, b);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      if (in(i, j)) d(i, j) = -d(i, j);
  return d;
}

// Tensor cubic Lagrange interpolation of psi on the 4x4 stencil around (x, y).
struct Cubic {
  const Eigen::MatrixXd& psi;
  Box b;

  static void weights(double t, double w[4], double dw[4]) {
    w[0] = -t * (t - 1) * (t - 2) / 6;
    w[1] = (t + 1) * (t - 1) * (t - 2) / 2;
    w[2] = -(t + 1) * t * (t - 2) / 2;
    w[3] = (t + 1) * t * (t - 1) / 6;
    dw[0] = -(3 * t * t - 6 * t + 2) / 6;
    dw[1] = (3 * t * t - 4 * t - 1) / 2;
    dw[2] = -(3 * t * t - 2 * t - 2) / 2;
    dw[3] = (3 * t * t - 1) / 6;
  }

  // Stencil base cell for a point; kept fixed during one projection.
  std::pair<int, int> cell(double x, double y) const {
    const int nx = static_cast<int>(psi.rows()), ny = static_cast<int>(psi.cols());
    return {std::clamp(static_cast<int>(std::floor((x - b.x0) / b.h)), 1, nx - 3),
            std::clamp(static_cast<int>(std::floor((y - b.y0) / b.h)), 1, ny - 3)};
  }

  void eval(std::pair<int, int> c, double x, double y, double& f, double& fx, double& fy) const {
    const auto [i, j] = c;
    const double u = (x - b.x0) / b.h, v = (y - b.y0) / b.h;
    double wx[4], dwx[4], wy[4], dwy[4];
    weights(u - i, wx, dwx);
    weights(v - j, wy, dwy);
    f = fx = fy = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 4; ++c) {
        const double s = psi(i - 1 + a, j - 1 + c);
        f += wx[a] * wy[c] * s;
        fx += dwx[a] * wy[c] * s;
        fy += wx[a] * dwy[c] * s;
      }
    fx /= b.h;
    fy /= b.h;
  }
};

Eigen::MatrixXd reinit_slice(const Eigen::MatrixXd& psi, const Box& b, double band, int slice) {
  const int nx = static_cast<int>(psi.rows()), ny = static_cast<int>(psi.cols());
  const auto polys = extract_contours(psi, b.x0, b.y0, b.h);
  if (polys.empty()) throw StallError("reinitialize: slice " + std::to_string(slice) + " has an empty zero set");
  Eigen::MatrixXd d, cx, cy;
  near_distance(polys, nx, ny, b, (band + 2.0) * b.h, d, cx, cy);
  const Cubic cubic{psi, b};
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      if (!std::isfinite(d(i, j))) continue;
      const double x = b.x0 + i * b.h, y = b.y0 + j * b.h;
      double px = cx(i, j), py = cy(i, j);
      const auto base = cubic.cell(px, py);
      bool ok = false;
      for (int it = 0; it < 30; ++it) {
        double f, gx, gy;
        cubic.eval(base, px, py, f, gx, gy);
        const double g2 = gx * gx + gy * gy;
        if (g2 < 1e-12) break;
        const double rx = x - px, ry = y - py, rg = (rx * gx + ry * gy) / g2;
        const double sx = -f * gx / g2 + rx - rg * gx, sy = -f * gy / g2 + ry - rg * gy;
        px += sx;
        py += sy;
        if (std::hypot(sx, sy) < 1e-12 * b.h) {
          ok = true;
          break;
        }
      }
      if (ok && std::hypot(px - cx(i, j), py - cy(i, j)) < b.h) d(i, j) = std::hypot(x - px, y - py);
    }
  fast_sweep(d, b.h);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      if (psi(i, j) < 0.0) d(i, j) = -d(i, j);
  return d;
}

Box box_of(const LevelSetGrid& g) { return {g.x0, g.y0, g.h}; }

double polyline_integral(const Eigen::MatrixXd& p, const Eigen::VectorXd& f) {
  const Eigen::Index n = p.rows();
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index k = (i + 1) % n;
    s += 0.5 * (f(i) + f(k)) * (p.row(k) - p.row(i)).norm();
  }
  return s;
}

double bilinear(const Eigen::MatrixXd& f, const Box& b, double x, double y) {
  const int nx = static_cast<int>(f.rows()), ny = static_cast<int>(f.cols());
  const double u = std::clamp((x - b.x0) / b.h, 0.0, nx - 1.0), v = std::clamp((y - b.y0) / b.h, 0.0, ny - 1.0);
  const int i = std::min(static_cast<int>(u), nx - 2), j = std::min(static_cast<int>(v), ny - 2);
  const double s = u - i, t = v - j;
  return (1 - s) * (1 - t) * f(i, j) + s * (1 - t) * f(i + 1, j) + (1 - s) * t * f(i, j + 1) + s * t * f(i + 1, j + 1);
}

// m = psi_v^2 / |grad psi|^2 on interior nodes of interior slice k.
Eigen::MatrixXd m_field(const LevelSetGrid& g, int k) {
  const int nx = g.nx(), ny = g.ny();
  const double h = g.h, dv = g.dv(), floor2 = g.grad_floor * g.grad_floor;
  const Eigen::MatrixXd& p = g.psi[k];
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nx, ny);
  for (int i = 1; i < nx - 1; ++i)
    for (int j = 1; j < ny - 1; ++j) {
      const double px = (p(i + 1, j) - p(i - 1, j)) / (2 * h), py = (p(i, j + 1) - p(i, j - 1)) / (2 * h);
      const double pv = (g.psi[k + 1](i, j) - g.psi[k - 1](i, j)) / (2 * dv);
      m(i, j) = pv * pv / std::max(px * px + py * py, floor2);
    }
  return m;
}

bool in_band(const LevelSetGrid& g, double psi) { return g.full_grid || std::abs(psi) < g.band * g.h; }

struct Assembly {
  std::vector<Eigen::MatrixXd> rhs;
  double rate = 0.0;  // max CFL rate
};

Assembly assemble(const LevelSetGrid& g) {
  const int nx = g.nx(), ny = g.ny(), nv = g.nv();
  const double h = g.h, dv = g.dv();
  const SliceTerms st = slice_terms(g);
  Assembly a;
  a.rhs.assign(nv, Eigen::MatrixXd::Zero(nx, ny));
  std::vector<double> rate(nv, 0.0);
  parallel_for(1, nv - 1, [&](int k) {
    const Eigen::MatrixXd &p = g.psi[k], &pu = g.psi[k + 1], &pd = g.psi[k - 1];
    const double lam_i = g.lambda * st.integral(k), adv = g.lambda * st.length_v(k);
    Eigen::MatrixXd& out = a.rhs[k];
    for (int i = 1; i < nx - 1; ++i)
      for (int j = 1; j < ny - 1; ++j) {
        if (!in_band(g, p(i, j))) continue;
        const double px = (p(i + 1, j) - p(i - 1, j)) / (2 * h), py = (p(i, j + 1) - p(i, j - 1)) / (2 * h);
        const double g2 = px * px + py * py;
        if (std::sqrt(g2) < g.grad_floor) {
          if (std::abs(p(i, j)) < 2 * h)
            throw NumericalError("evolve_step: |grad psi| below floor next to the zero set in slice " +
                                 std::to_string(k));
          continue;
        }
        const double pxx = (p(i + 1, j) - 2 * p(i, j) + p(i - 1, j)) / (h * h);
        const double pyy = (p(i, j + 1) - 2 * p(i, j) + p(i, j - 1)) / (h * h);
        const double pxy = (p(i + 1, j + 1) - p(i + 1, j - 1) - p(i - 1, j + 1) + p(i - 1, j - 1)) / (4 * h * h);
        const double pv = (pu(i, j) - pd(i, j)) / (2 * dv);
        const double pvv = (pu(i, j) - 2 * p(i, j) + pd(i, j)) / (dv * dv);
        const double pvx = (pu(i + 1, j) - pu(i - 1, j) - pd(i + 1, j) + pd(i - 1, j)) / (4 * h * dv);
        const double pvy = (pu(i, j + 1) - pu(i, j - 1) - pd(i, j + 1) + pd(i, j - 1)) / (4 * h * dv);
        const double hess = px * px * pxx + 2 * px * py * pxy + py * py * pyy;
        const double kap = pxx * py * py - 2 * px * py * pxy + pyy * px * px;
        const double m = pv * pv / g2;
        const double up = adv >= 0.0 ? (pu(i, j) - p(i, j)) / dv : (p(i, j) - pd(i, j)) / dv;
        out(i, j) = pvv - 2 * pv * (pvx * px + pvy * py) / g2 + m * hess / g2 - 0.5 * (m - lam_i) * kap / g2 + adv * up;
        const double dx = std::abs(pv * px) / g2, dy = std::abs(pv * py) / g2;
        const double r = std::pow((dx + dy) / h + 1.0 / dv, 2) + 2.0 * std::abs(lam_i - m) / (h * h) + std::abs(adv) / dv;
        rate[k] = std::max(rate[k], r);
      }
  });
  a.rate = *std::max_element(rate.begin(), rate.end());
  return a;
}

}  // namespace

double LevelSetGrid::sample(int k, double px, double py) const { return bilinear(psi[k], {x0, y0, h}, px, py); }

LevelSetGrid embed(const HomotopyGrid& c, const LevelSetParams& p) {
  if (!c.closed() || c.dim() != 2) throw InputError("embed: closed planar homotopy required");
  if (c.n_v() < 3) throw InputError("embed: need N_v >= 3");
  const Box b = make_box(c.slices(), p);
  LevelSetGrid g;
  g.x0 = b.x0;
  g.y0 = b.y0;
  g.h = b.h;
  g.band = p.band;
  g.grad_floor = p.grad_floor;
  g.full_grid = p.full_grid;
  g.psi.resize(c.n_v());
  parallel_for(0, c.n_v(), [&](int k) {
    require_simple(c.slice(k), k);
    g.psi[k] = polygon_sdf(c.slice(k), p.nx, p.ny, b, p.band);
  });
  g.lambda = p.lambda >= 0.0 ? p.lambda : 0.0;
  return g;
}

LevelSetGrid embed(const SampledCurve& c0, const SampledCurve& c1, const LevelSetParams& p) {
  if (p.nv < 3) throw InputError("embed: need nv >= 3");
  if (c0.size() == c1.size()) return embed(linear_homotopy(c0, c1, p.nv), p);
  const int n = std::max(c0.size(), c1.size());
  return embed(linear_homotopy(resample_arclength(c0, n), resample_arclength(c1, n), p.nv), p);
}

std::vector<Eigen::MatrixXd> extract_contours(const Eigen::MatrixXd& psi, double x0, double y0, double h, bool* open) {
  const int nx = static_cast<int>(psi.rows()), ny = static_cast<int>(psi.cols());
  if (open) *open = false;
  auto neg = [&](int i, int j) { return psi(i, j) < 0.0; };
  // Edge ids: 2*(i + nx*j) for (i,j)-(i+1,j), +1 for (i,j)-(i,j+1).
  auto point_on = [&](long id) {
    const long base = id / 2;
    const int i = static_cast<int>(base % nx), j = static_cast<int>(base / nx);
    const bool horiz = id % 2 == 0;
    const int i2 = horiz ? i + 1 : i, j2 = horiz ? j : j + 1;
    const double a = psi(i, j), c = psi(i2, j2);
    const double t = a / (a - c);
    return Eigen::RowVector2d(x0 + (i + (horiz ? t : 0.0)) * h, y0 + (j + (horiz ? 0.0 : t)) * h);
  };
  std::map<long, long> next;
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      // Corners CCW: 0 (i,j), 1 (i+1,j), 2 (i+1,j+1), 3 (i,j+1); edge e joins corner e to e+1.
      const bool s[4] = {neg(i, j), neg(i + 1, j), neg(i + 1, j + 1), neg(i, j + 1)};
      const long eid[4] = {2L * (i + long(nx) * j), 2L * (i + 1 + long(nx) * j) + 1, 2L * (i + long(nx) * (j + 1)),
                           2L * (i + long(nx) * j) + 1};
      int cut[4], nc = 0;
      for (int e = 0; e < 4; ++e)
        if (s[e] != s[(e + 1) % 4]) cut[nc++] = e;
      if (nc == 0) continue;
      std::array<std::pair<int, int>, 2> segs;
      int ns = 0;
      if (nc == 2) {
        segs[ns++] = {cut[0], cut[1]};
      } else {
        const double centre = 0.25 * (psi(i, j) + psi(i + 1, j) + psi(i + 1, j + 1) + psi(i, j + 1));
        if ((centre < 0.0) == s[0]) {
          segs[ns++] = {0, 1};
          segs[ns++] = {2, 3};
        } else {
          segs[ns++] = {3, 0};
          segs[ns++] = {1, 2};
        }
      }
      for (int q = 0; q < ns; ++q) {
        auto [e1, e2] = segs[q];
        // Corner e1+1 lies to the right of the segment e1 -> e2; keep psi < 0 on the left.
        if (s[(e1 + 1) % 4]) std::swap(e1, e2);
        next[eid[e1]] = eid[e2];
      }
    }
  std::vector<Eigen::MatrixXd> out;
  std::map<long, bool> used;
  for (const auto& [start, _] : next) {
    if (used[start]) continue;
    std::vector<Eigen::RowVector2d> pts;
    long cur = start;
    bool closed = false;
    while (true) {
      used[cur] = true;
      const Eigen::RowVector2d q = point_on(cur);
      if (pts.empty() || (q - pts.back()).norm() > 1e-12 * h) pts.push_back(q);
      const auto it = next.find(cur);
      if (it == next.end()) break;
      cur = it->second;
      if (cur == start) {
        closed = true;
        break;
      }
      if (used[cur]) break;
    }
    if (pts.size() > 1 && (pts.front() - pts.back()).norm() <= 1e-12 * h) pts.pop_back();
    if (!closed) {
      if (open) *open = true;
      continue;
    }
    if (pts.size() < 3) continue;
    Eigen::MatrixXd m(pts.size(), 2);
    for (std::size_t r = 0; r < pts.size(); ++r) m.row(static_cast<Eigen::Index>(r)) = pts[r];
    out.push_back(std::move(m));
  }
  return out;
}

SliceContours extract_slices(const LevelSetGrid& g) {
  SliceContours s;
  const int nv = g.nv();
  s.v.resize(nv);
  s.curves.resize(nv);
  std::vector<char> open(nv, 0);
  parallel_for(0, nv, [&](int k) {
    bool o = false;
    s.v[k] = g.v(k);
    s.curves[k] = extract_contours(g.psi[k], g.x0, g.y0, g.h, &o);
    open[k] = o || s.curves[k].empty();
  });
  s.flagged.assign(open.begin(), open.end());
  return s;
}

LevelSetGrid reinitialize(const LevelSetGrid& g) {
  LevelSetGrid out = g;
  parallel_for(1, g.nv() - 1, [&](int k) { out.psi[k] = reinit_slice(g.psi[k], box_of(g), g.band, k); });
  return out;
}

SliceTerms slice_terms(const LevelSetGrid& g) {
  const int nv = g.nv();
  const Box b = box_of(g);
  SliceTerms st;
  st.length = Eigen::VectorXd::Zero(nv);
  st.integral = Eigen::VectorXd::Zero(nv);
  st.length_v = Eigen::VectorXd::Zero(nv);
  for (int k = 0; k < nv; ++k) {
    const auto polys = extract_contours(g.psi[k], g.x0, g.y0, g.h);
    Eigen::MatrixXd m;
    if (k > 0 && k < nv - 1) m = m_field(g, k);
    for (const auto& p : polys) {
      st.length(k) += polyline_length(p, true);
      if (m.size() == 0) continue;
      Eigen::VectorXd f(p.rows());
      for (Eigen::Index r = 0; r < p.rows(); ++r) f(r) = bilinear(m, b, p(r, 0), p(r, 1));
      st.integral(k) += polyline_integral(p, f);
    }
  }
  const double dv = g.dv();
  for (int k = 1; k < nv - 1; ++k) st.length_v(k) = (st.length(k + 1) - st.length(k - 1)) / (2 * dv);
  st.length_v(0) = (-3 * st.length(0) + 4 * st.length(1) - st.length(2)) / (2 * dv);
  st.length_v(nv - 1) = (3 * st.length(nv - 1) - 4 * st.length(nv - 2) + st.length(nv - 3)) / (2 * dv);
  return st;
}

double levelset_stable_lambda(const LevelSetGrid& g) {
  const SliceTerms st = slice_terms(g);
  double lam = 0.0;
  for (int k = 1; k < g.nv() - 1; ++k) {
    if (st.integral(k) <= 1e-14) continue;
    const Eigen::MatrixXd m = m_field(g, k);
    for (int i = 1; i < g.nx() - 1; ++i)
      for (int j = 1; j < g.ny() - 1; ++j)
        if (in_band(g, g.psi[k](i, j))) lam = std::max(lam, m(i, j) / st.integral(k));
  }
  return lam;
}

double curvature_coefficient_margin(const LevelSetGrid& g) {
  const SliceTerms st = slice_terms(g);
  double worst = kInf;
  for (int k = 1; k < g.nv() - 1; ++k) {
    const Eigen::MatrixXd m = m_field(g, k);
    for (int i = 1; i < g.nx() - 1; ++i)
      for (int j = 1; j < g.ny() - 1; ++j)
        if (in_band(g, g.psi[k](i, j))) worst = std::min(worst, 0.5 * (g.lambda * st.integral(k) - m(i, j)));
  }
  return worst;
}

double interface_gradient_min(const LevelSetGrid& g) {
  double lo = kInf;
  for (int k = 1; k < g.nv() - 1; ++k) {
    const Eigen::MatrixXd& p = g.psi[k];
    for (int i = 1; i < g.nx() - 1; ++i)
      for (int j = 1; j < g.ny() - 1; ++j)
        if (std::abs(p(i, j)) <= g.h)
          lo = std::min(lo, std::hypot(p(i + 1, j) - p(i - 1, j), p(i, j + 1) - p(i, j - 1)) / (2 * g.h));
  }
  return lo;
}

std::vector<Eigen::MatrixXd> levelset_rhs(const LevelSetGrid& g) { return assemble(g).rhs; }

double levelset_dt_max(const LevelSetGrid& g) {
  const double r = assemble(g).rate;
  return r > 0.0 ? kCflSafetyLevelSet / r : kInf;
}

LevelSetGrid evolve_step(const LevelSetGrid& g, double dt, StepReport* report) {
  if (g.nv() < 3) throw InputError("evolve_step: need nv >= 3");
  const Assembly a = assemble(g);
  const double dt_max = a.rate > 0.0 ? kCflSafetyLevelSet / a.rate : kInf;
  if (dt <= 0.0) {
    dt = std::isfinite(dt_max) ? dt_max : 0.0;
  } else if (dt > dt_max * (1.0 + 1e-12)) {
    throw CflError("evolve_step: dt " + std::to_string(dt) + " exceeds CFL bound " + std::to_string(dt_max));
  }
  LevelSetGrid out = g;
  StepReport rep;
  rep.dt = dt;
  for (int k = 1; k < g.nv() - 1; ++k) {
    out.psi[k] += dt * a.rhs[k];
    const Eigen::MatrixXd& p = g.psi[k];
    rep.max_rate = std::max(rep.max_rate, a.rhs[k].cwiseAbs().maxCoeff());
    for (int i = 1; i < g.nx() - 1; ++i)
      for (int j = 1; j < g.ny() - 1; ++j) {
        if (std::abs(p(i, j)) > g.h) continue;
        rep.interface_rate = std::max(rep.interface_rate, std::abs(a.rhs[k](i, j)));
        const double gn = std::hypot(p(i + 1, j) - p(i - 1, j), p(i, j + 1) - p(i, j - 1)) / (2 * g.h);
        rep.displacement = std::max(rep.displacement, dt * std::abs(a.rhs[k](i, j)) / std::max(gn, g.grad_floor));
      }
  }
  out.t += dt;
  if (report) *report = rep;
  return out;
}

HomotopyGrid contours_to_grid(const SliceContours& s, int n_theta) {
  if (n_theta < 8) throw InputError("contours_to_grid: need n_theta >= 8");
  std::vector<Eigen::MatrixXd> slices;
  Eigen::RowVector2d anchor;
  for (int k = 0; k < s.size(); ++k) {
    if (s.curves[k].size() != 1)
      throw GeometryError("contours_to_grid: slice " + std::to_string(k) + " has " +
                          std::to_string(s.curves[k].size()) + " contours");
    const Eigen::MatrixXd& p = s.curves[k].front();
    const Eigen::Index n = p.rows();
    // Start on the polyline at the point closest to the previous anchor.
    Eigen::Index seg = 0;
    double best = kInf, tb = 0.0;
    if (k == 0) p.col(0).maxCoeff(&seg);
    for (Eigen::Index i = 0; i < n && k > 0; ++i) {
      double qx, qy;
      const Eigen::RowVector2d a = p.row(i), b = p.row((i + 1) % n);
      const double d = segment_distance(anchor(0), anchor(1), a(0), a(1), b(0), b(1), &qx, &qy);
      if (d < best) {
        best = d;
        seg = i;
        const double l = (b - a).norm();
        tb = l > 0.0 ? (Eigen::RowVector2d(qx, qy) - a).norm() / l : 0.0;
      }
    }
    std::vector<Eigen::RowVector2d> loop;
    const Eigen::RowVector2d a0 = p.row(seg), b0 = p.row((seg + 1) % n);
    loop.push_back(a0 + tb * (b0 - a0));
    for (Eigen::Index i = 1; i <= n; ++i) loop.push_back(p.row((seg + i) % n));
    loop.push_back(loop.front());
    std::vector<double> cum(loop.size(), 0.0);
    for (std::size_t i = 1; i < loop.size(); ++i) cum[i] = cum[i - 1] + (loop[i] - loop[i - 1]).norm();
    const double total = cum.back();
    Eigen::MatrixXd out(n_theta, 2);
    std::size_t c = 0;
    for (int i = 0; i < n_theta; ++i) {
      const double target = total * i / n_theta;
      while (c + 2 < loop.size() && cum[c + 1] < target) ++c;
      const double l = cum[c + 1] - cum[c];
      const double t = l > 0.0 ? (target - cum[c]) / l : 0.0;
      out.row(i) = loop[c] + t * (loop[c + 1] - loop[c]);
    }
    anchor = out.row(0);
    slices.push_back(std::move(out));
  }
  return HomotopyGrid(std::move(slices));
}

namespace {

double endpoint_error(const SliceContours& s, const Eigen::MatrixXd& c0, const Eigen::MatrixXd& c1) {
  double e = 0.0;
  const int last = s.size() - 1;
  for (auto [k, ref] : {std::pair<int, const Eigen::MatrixXd*>{0, &c0}, {last, &c1}}) {
    if (s.curves[k].empty()) return kInf;
    Eigen::Index rows = 0;
    for (const auto& p : s.curves[k]) rows += p.rows();
    Eigen::MatrixXd all(rows, 2);
    rows = 0;
    for (const auto& p : s.curves[k]) {
      all.middleRows(rows, p.rows()) = p;
      rows += p.rows();
    }
    e = std::max(e, hausdorff_distance(all, *ref));
  }
  return e;
}

void record_energies(GeodesicResult& r, const HomotopyGrid& c, double lambda) {
  r.energy_trace.push_back(energy(c, EnergySpec::en()).total);
  r.conformal_trace.push_back(energy(c, EnergySpec::conformal(ConformalFactor::exp_length(lambda))).total);
}

}  // namespace

GeodesicResult run_geodesic(const SampledCurve& c0, const SampledCurve& c1, const GeodesicOptions& opt) {
  if (c0.dim() != 2 || c1.dim() != 2) throw InputError("run_geodesic: planar curves only");
  if (opt.max_steps < 1) throw InputError("run_geodesic: max_steps must be positive");
  if (opt.grid.reinit_every < 1) throw InputError("run_geodesic: reinit_every must be positive");
  GeodesicResult r;
  LevelSetGrid g = embed(c0, c1, opt.grid);
  g.lambda = opt.grid.lambda >= 0.0 ? opt.grid.lambda : levelset_stable_lambda(g);
  r.margin_t0 = curvature_coefficient_margin(g);
  SliceContours s = extract_slices(g);
  r.initial = contours_to_grid(s, opt.n_theta_out);
  record_energies(r, r.initial, g.lambda);
  r.endpoint_error = endpoint_error(s, c0.points(), c1.points());
  if (opt.snapshot_every > 0) r.snapshots.push_back(s);
  while (r.steps < opt.max_steps) {
    StepReport rep;
    g = evolve_step(g, 0.0, &rep);
    ++r.steps;
    r.residual = rep.displacement;
    r.max_rate = rep.max_rate;
    r.interface_rate = rep.interface_rate;
    const bool done = rep.displacement < opt.tol;
    if (r.steps % opt.grid.reinit_every == 0 || done) {
      g = reinitialize(g);
      s = extract_slices(g);
      record_energies(r, contours_to_grid(s, opt.n_theta_out), g.lambda);
      r.endpoint_error = std::max(r.endpoint_error, endpoint_error(s, c0.points(), c1.points()));
    }
    if (opt.snapshot_every > 0 && r.steps % opt.snapshot_every == 0) r.snapshots.push_back(extract_slices(g));
    if (done) {
      r.converged = true;
      break;
    }
  }
  r.field = g;
  r.slices = extract_slices(g);
  r.homotopy = contours_to_grid(r.slices, opt.n_theta_out);
  return r;
}

}  // namespace curvespace
