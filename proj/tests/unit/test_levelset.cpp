#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "curvespace/altmetrics.hpp"
#include "curvespace/energies.hpp"
#include "curvespace/errors.hpp"
#include "curvespace/levelset.hpp"
#include "fixtures.hpp"

using namespace curvespace;

namespace {

// Field f(x, y) replicated on nv slices of a square grid.
LevelSetGrid analytic(int n, double half, int nv, const std::function<double(double, double)>& f) {
  LevelSetGrid g;
  g.h = 2 * half / (n - 1);
  g.x0 = g.y0 = -half;
  Eigen::MatrixXd p(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p(i, j) = f(g.x(i), g.y(j));
  g.psi.assign(nv, p);
  return g;
}

double circle_sdf(double x, double y) { return std::hypot(x, y) - 1.0; }

double signed_area(const Eigen::MatrixXd& p) {
  double a = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const Eigen::Index k = (i + 1) % p.rows();
    a += p(i, 0) * p(k, 1) - p(k, 0) * p(i, 1);
  }
  return 0.5 * a;
}

double band_change(const LevelSetGrid& a, const LevelSetGrid& b, int k) {
  double d = 0.0;
  for (int i = 0; i < a.nx(); ++i)
    for (int j = 0; j < a.ny(); ++j)
      if (std::abs(a.psi[k](i, j)) < a.band * a.h) d = std::max(d, std::abs(a.psi[k](i, j) - b.psi[k](i, j)));
  return d;
}

Eigen::MatrixXd all_points(const std::vector<Eigen::MatrixXd>& c) {
  Eigen::Index n = 0;
  for (const auto& p : c) n += p.rows();
  Eigen::MatrixXd out(n, 2);
  n = 0;
  for (const auto& p : c) {
    out.middleRows(n, p.rows()) = p;
    n += p.rows();
  }
  return out;
}

GeodesicOptions small_run(int n, int nv) {
  GeodesicOptions o;
  o.grid.nx = o.grid.ny = n;
  o.grid.nv = nv;
  return o;
}

}  // namespace

TEST(Embed, CircleIsSignedDistance) {
  LevelSetParams p;
  p.nx = p.ny = 80;
  p.nv = 3;
  const LevelSetGrid g = embed(make_circle(256), make_circle(256), p);
  double err = 0.0;
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) {
      const double e = circle_sdf(g.x(i), g.y(j));
      if (std::abs(e) < g.band * g.h) err = std::max(err, std::abs(g.psi[1](i, j) - e));
    }
  EXPECT_LT(err, 2 * g.h);
  EXPECT_LT(err, 1e-3);
}

TEST(Embed, RoundTripRecoversSlices) {
  const HomotopyGrid c = linear_homotopy(make_circle(256), make_ellipse(256, 1.5, 0.8), 5);
  LevelSetParams p;
  p.nx = p.ny = 96;
  const LevelSetGrid g = embed(c, p);
  const SliceContours s = extract_slices(g);
  for (int k = 0; k < c.n_v(); ++k) {
    ASSERT_EQ(s.curves[k].size(), 1u);
    EXPECT_FALSE(s.flagged[k]);
    EXPECT_LT(hausdorff_distance(s.curves[k].front(), c.slice(k)), 2 * g.h) << "k=" << k;
  }
}

TEST(Embed, DisjointCirclesInterpolateMonotonically) {
  LevelSetParams p;
  p.nx = p.ny = 96;
  p.nv = 9;
  const LevelSetGrid g = embed(make_circle(128), make_circle(128, 1.0, 3.0, 0.0), p);
  const SliceContours s = extract_slices(g);
  double prev = -1.0;
  for (int k = 0; k < s.size(); ++k) {
    ASSERT_EQ(s.curves[k].size(), 1u);
    const double cx = s.curves[k].front().col(0).mean();
    EXPECT_GT(cx, prev);
    prev = cx;
  }
}

TEST(Embed, RejectsSelfIntersection) {
  const SampledCurve eight = sample_curve(128, [](double t) { return fixtures::xy(std::sin(2 * t), std::sin(t)); });
  EXPECT_THROW(embed(eight, eight), GeometryError);
}

TEST(Extract, CircleRadius) {
  const LevelSetGrid g = analytic(81, 2.0, 3, circle_sdf);
  const auto c = extract_contours(g.psi[0], g.x0, g.y0, g.h);
  ASSERT_EQ(c.size(), 1u);
  const Eigen::VectorXd r = c.front().rowwise().norm();
  EXPECT_LT((r.array() - 1.0).abs().maxCoeff(), g.h / 4);
  EXPECT_GT(signed_area(c.front()), 0.0);
}

TEST(Extract, PositiveFieldIsEmptyAndFlagged) {
  const LevelSetGrid g = analytic(41, 2.0, 3, [](double x, double y) { return 1.0 + x * x + y * y; });
  const SliceContours s = extract_slices(g);
  for (int k = 0; k < s.size(); ++k) {
    EXPECT_TRUE(s.curves[k].empty());
    EXPECT_TRUE(s.flagged[k]);
  }
}

TEST(Extract, NestedCirclesOppositeOrientation) {
  const LevelSetGrid g = analytic(101, 3.0, 3, [](double x, double y) {
    const double r = std::hypot(x, y);
    return (r - 1.0) * (r - 2.0) / 1.5;
  });
  const auto c = extract_contours(g.psi[0], g.x0, g.y0, g.h);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_LT(signed_area(c[0]) * signed_area(c[1]), 0.0);
  for (const auto& p : c) {
    const double r = p.rowwise().norm().mean();
    // psi < 0 on the annulus, so the outer contour runs anticlockwise.
    EXPECT_EQ(r > 1.5, signed_area(p) > 0.0);
  }
}

TEST(Reinit, SignedDistanceIsFixedPoint) {
  const LevelSetGrid g = analytic(161, 2.0, 3, circle_sdf);
  EXPECT_LT(band_change(g, reinitialize(g), 1), 1e-6);
}

TEST(Reinit, RestoresUnitGradient) {
  LevelSetGrid g = analytic(81, 2.0, 3, circle_sdf);
  const LevelSetGrid ref = g;
  g.psi[1] *= 3.0;
  const LevelSetGrid r = reinitialize(g);
  EXPECT_LT(band_change(ref, r, 1), 1e-4);
  EXPECT_GT(interface_gradient_min(r), 0.5);
  EXPECT_NEAR(interface_gradient_min(r), 1.0, 1e-2);
}

TEST(Reinit, NoisyFieldKeepsZeroSet) {
  LevelSetGrid g = analytic(81, 2.0, 3, [](double x, double y) { return std::hypot(x / 1.3, y) - 1.0; });
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j)
      if (std::abs(g.psi[1](i, j)) > g.band * g.h) g.psi[1](i, j) *= 1.0 + u(rng);
  const auto before = extract_contours(g.psi[1], g.x0, g.y0, g.h);
  const LevelSetGrid r = reinitialize(g);
  const auto after = extract_contours(r.psi[1], r.x0, r.y0, r.h);
  EXPECT_LT(hausdorff_distance(all_points(before), all_points(after)), g.h / 2);
}

TEST(Reinit, EmptySliceStalls) {
  const LevelSetGrid g = analytic(41, 2.0, 3, [](double x, double y) { return 1.0 + x * x + y * y; });
  EXPECT_THROW(reinitialize(g), StallError);
}

TEST(Evolve, VIndependentFieldIsStationary) {
  LevelSetGrid g = analytic(61, 2.0, 5, [](double x, double y) {
    return x * x / 1.5 + y * y - 1.0 + 0.1 * std::sin(3 * x) * std::cos(2 * y);
  });
  g.full_grid = true;
  g.lambda = 0.7;
  for (const auto& r : levelset_rhs(g)) EXPECT_EQ(r.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Evolve, CflViolation) {
  LevelSetParams p;
  p.nx = p.ny = 48;
  p.nv = 9;
  LevelSetGrid g = embed(make_circle(128), make_circle(128, 1.0, 0.5, 0.0), p);
  g.lambda = levelset_stable_lambda(g);
  EXPECT_THROW(evolve_step(g, 10 * levelset_dt_max(g)), CflError);
}

TEST(Evolve, StabilitySurrogateAtStart) {
  LevelSetParams p;
  p.nx = p.ny = 64;
  p.nv = 9;
  LevelSetGrid g = embed(fixtures::blob(256), fixtures::three_lobed(256), p);
  g.lambda = levelset_stable_lambda(g);
  EXPECT_GE(curvature_coefficient_margin(g), -1e-9);
}

TEST(Geodesic, IdenticalEndpointsConvergeAtOnce) {
  const GeodesicResult r = run_geodesic(make_ellipse(128, 1.3, 1.0), make_ellipse(128, 1.3, 1.0), small_run(48, 9));
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.steps, 1);
}

TEST(Geodesic, TranslatedCircles) {
  const GeodesicResult r = run_geodesic(make_circle(256), make_circle(256, 1.0, 0.3, 0.0), small_run(64, 17));
  ASSERT_TRUE(r.converged);
  EXPECT_GE(r.margin_t0, -1e-9);
  EXPECT_LT(r.endpoint_error, 2 * r.field.h);
  EXPECT_LE(r.energy_trace.back(), r.energy_trace.front());
  double prev = -1.0;
  for (int k = 0; k < r.homotopy.n_v(); ++k) {
    const Eigen::MatrixXd& p = r.homotopy.slice(k);
    const double cx = p.col(0).mean();
    EXPECT_GT(cx, prev - 1e-9);
    prev = cx;
    const Eigen::VectorXd rad = (p.rowwise() - p.colwise().mean()).rowwise().norm();
    EXPECT_LT((rad.maxCoeff() - rad.minCoeff()) / (rad.maxCoeff() + rad.minCoeff()), 0.02) << "k=" << k;
  }
}

TEST(Geodesic, StationaryTranslationFamily) {
  const GeodesicResult r = run_geodesic(make_circle(256), make_circle(256, 1.0, 0.5, 0.0), small_run(64, 17));
  ASSERT_TRUE(r.converged);
  EXPECT_LT(r.interface_rate, 5e-2);
}

TEST(Geodesic, LobedEndpointsDescend) {
  GeodesicOptions o = small_run(64, 9);
  o.max_steps = 200;
  const GeodesicResult r = run_geodesic(fixtures::blob(256), fixtures::three_lobed(256), o);
  ASSERT_GE(r.conformal_trace.size(), 20u);
  for (std::size_t i = 1; i < r.conformal_trace.size(); ++i)
    EXPECT_LE(r.conformal_trace[i], r.conformal_trace[i - 1] * (1 + 1e-9)) << "i=" << i;
  EXPECT_LE(r.energy_trace.back(), r.energy_trace.front());
  EXPECT_LT(r.endpoint_error, 2 * r.field.h);
}
