#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "curvespace/altmetrics.hpp"
#include "curvespace/errors.hpp"
#include "fixtures.hpp"

using namespace curvespace;

namespace {

DirectionFunction analytic_dirfn(int m, const std::function<double(double)>& f) {
  Eigen::VectorXd t(m);
  const double h = kTwoPi / m;
  for (int k = 0; k < m; ++k) t(k) = f((k + 0.5) * h);
  return make_direction_function(t);
}

DirectionFunction identity_dirfn(int m) {
  return analytic_dirfn(m, [](double s) { return s; });
}

DirectionFunction member(int m, double a2, double a3) {
  return dirfn_project(analytic_dirfn(m, [=](double s) { return s + a2 * std::sin(2 * s) + a3 * std::cos(3 * s); }));
}

// Cyclic base-point shift by k samples, re-projected onto the constraint set.
DirectionFunction shifted(const DirectionFunction& d, int k) {
  const Eigen::Index m = d.theta.size();
  Eigen::VectorXd t(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = i + k;
    t(i) = j < m ? d.theta(j) : d.theta(j - m) + kTwoPi * d.winding;
  }
  return dirfn_project(make_direction_function(t));
}

double l2(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::sqrt((a - b).squaredNorm() * kTwoPi / a.size());
}

Eigen::MatrixXd circle_points(int n, double r, double cx = 0.0) {
  return make_circle(n, r, cx, 0.0).points();
}

Eigen::MatrixXd random_set(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Eigen::MatrixXd p(n, 2);
  for (int i = 0; i < n; ++i) p.row(i) << u(rng), u(rng);
  return p;
}

}  // namespace

TEST(DirfnConstraints, IdentityIsMember) {
  EXPECT_LT(dirfn_constraints(identity_dirfn(1024)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(DirfnConstraints, ConstantShift) {
  const Eigen::Vector3d r = dirfn_constraints(analytic_dirfn(1024, [](double s) { return s + 0.1; }));
  EXPECT_NEAR(r(0), 0.2 * kPi, 1e-10);
  EXPECT_NEAR(r(1), 0.0, 1e-10);
  EXPECT_NEAR(r(2), 0.0, 1e-10);
}

TEST(DirfnConstraints, ConstantPi) {
  const Eigen::Vector3d r = dirfn_constraints(analytic_dirfn(256, [](double) { return kPi; }));
  EXPECT_NEAR(r(0), 0.0, 1e-10);
  EXPECT_NEAR(r(1), -kTwoPi, 1e-10);
  EXPECT_NEAR(r(2), 0.0, 1e-10);
}

TEST(DirfnConstraints, WindingFromSamples) {
  EXPECT_EQ(identity_dirfn(64).winding, 1);
  EXPECT_EQ(analytic_dirfn(64, [](double s) { return 2 * s; }).winding, 2);
}

TEST(DirfnProject, MemberIsFixedPoint) {
  const DirectionFunction d = identity_dirfn(512);
  const ProjectResult r = dirfn_project_report(d);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_LT((r.d.theta - d.theta).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DirfnProject, SmoothPerturbationConverges) {
  const DirectionFunction d = analytic_dirfn(512, [](double s) { return s + 0.05 * std::sin(3 * s) + 0.02; });
  const ProjectResult r = dirfn_project_report(d);
  EXPECT_LT(r.residual, 1e-10);
  EXPECT_LT(dirfn_constraints(r.d).norm(), 1e-10);
  EXPECT_LT(l2(r.d.theta, d.theta), 0.1);
  EXPECT_GT(r.iterations, 0);
  EXPECT_LT(r.condition, kGramConditionCap);
  const UnliftResult u = unlift_direction(r.d);
  EXPECT_LT(u.closure_defect, 1e-9);
}

TEST(DirfnProject, Idempotent) {
  for (double a : {0.05, 0.2, 0.4}) {
    const DirectionFunction p = dirfn_project(analytic_dirfn(256, [=](double s) { return s + a * std::cos(2 * s) - 0.1; }));
    EXPECT_LT((dirfn_project(p).theta - p.theta).cwiseAbs().maxCoeff(), 1e-10) << "a=" << a;
  }
}

TEST(DirfnProject, FlatCurveIsSingular) {
  const DirectionFunction d = analytic_dirfn(256, [](double s) { return s < kPi ? kPi / 2 : 3 * kPi / 2; });
  EXPECT_LT(dirfn_constraints(d).norm(), 1e-10);
  EXPECT_THROW(dirfn_project(d), SingularError);
}

TEST(DirfnProject, TooFewSamples) {
  DirectionFunction d;
  d.theta = Eigen::VectorXd::Zero(2);
  EXPECT_THROW(dirfn_project(d), InputError);
}

TEST(DirfnDistance, IdentityIsZero) {
  const DirectionFunction a = member(256, 0.2, 0.05);
  EXPECT_EQ(dirfn_distance(a, a), 0.0);
  EXPECT_LT(dirfn_distance(a, a, DirDistanceMode::quotient_shift), 1e-12);
}

TEST(DirfnDistance, ShiftOrbitMatches) {
  const DirectionFunction a = member(256, 0.25, 0.0);
  const DirectionFunction b = shifted(a, 256 / 8);
  EXPECT_GT(dirfn_distance(a, b), 0.1);
  EXPECT_LT(dirfn_distance(a, b, DirDistanceMode::quotient_shift), 1e-3);
}

TEST(DirfnDistance, LiftedEllipseShiftOrbit) {
  const int m = 512;
  const SampledCurve e = resample_arclength(make_ellipse(2048, 1.5, 0.8), m);
  const SampledCurve scaled(e.points() * (kTwoPi / polyline_length(e.points(), true)));
  const DirectionFunction a = dirfn_project(lift_direction(scaled));
  const DirectionFunction b = shifted(a, m / 8);
  EXPECT_GT(dirfn_distance(a, b), 0.1);
  EXPECT_LT(dirfn_distance(a, b, DirDistanceMode::quotient_shift), 1e-3);
  const DirectionFunction circle = identity_dirfn(m);
  EXPECT_GT(dirfn_distance(circle, a, DirDistanceMode::quotient_shift), 0.0);
}

TEST(DirfnDistance, MetricAxioms) {
  const std::vector<DirectionFunction> d = {identity_dirfn(256), member(256, 0.3, 0.0), member(256, 0.0, 0.15),
                                            member(256, -0.2, 0.1)};
  for (auto mode : {DirDistanceMode::l2, DirDistanceMode::quotient_shift})
    for (const auto& a : d)
      for (const auto& b : d) {
        const double ab = dirfn_distance(a, b, mode);
        EXPECT_NEAR(ab, dirfn_distance(b, a, mode), 1e-9);
        EXPECT_LE(dirfn_distance(a, b, DirDistanceMode::quotient_shift), dirfn_distance(a, b) + 1e-15);
        for (const auto& c : d) EXPECT_LE(dirfn_distance(a, c, mode), ab + dirfn_distance(b, c, mode) + 1e-9);
      }
}

TEST(DirfnDistance, RequiresMembership) {
  const DirectionFunction off = analytic_dirfn(128, [](double s) { return s + 0.1; });
  EXPECT_THROW(dirfn_distance(identity_dirfn(128), off), InputError);
  EXPECT_THROW(dirfn_distance(identity_dirfn(128), identity_dirfn(64)), InputError);
}

TEST(Hausdorff, PointPair) {
  Eigen::MatrixXd a(1, 2), b(1, 2);
  a << 0, 0;
  b << 3, 4;
  EXPECT_DOUBLE_EQ(hausdorff_distance(a, b), 5.0);
}

TEST(Hausdorff, NestedCircles) {
  EXPECT_NEAR(hausdorff_distance(circle_points(512, 1.0), circle_points(512, 2.0)), 1.0, 1e-12);
  EXPECT_NEAR(hausdorff_distance(circle_points(128, 1.0), circle_points(512, 2.0)), 1.0, 1e-3);
}

TEST(Hausdorff, SubsetIsDominatedByLargerSet) {
  const Eigen::MatrixXd b = circle_points(64, 1.0);
  const Eigen::MatrixXd a = b.topRows(16);
  double far = 0.0;
  for (Eigen::Index j = 0; j < b.rows(); ++j)
    far = std::max(far, (a.rowwise() - b.row(j)).rowwise().norm().minCoeff());
  EXPECT_GT(far, 1.0);
  EXPECT_DOUBLE_EQ(hausdorff_distance(a, b), far);
}

TEST(Hausdorff, MetricAxiomsOnRandomSets) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> size(1, 40);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXd a = random_set(rng, size(rng));
    const Eigen::MatrixXd b = random_set(rng, size(rng));
    const Eigen::MatrixXd c = random_set(rng, size(rng));
    EXPECT_EQ(hausdorff_distance(a, a), 0.0);
    const double ab = hausdorff_distance(a, b);
    EXPECT_EQ(ab, hausdorff_distance(b, a));
    EXPECT_GT(ab, 0.0);
    EXPECT_LE(hausdorff_distance(a, c), ab + hausdorff_distance(b, c) + 1e-12);
  }
}

TEST(Hausdorff, Errors) {
  EXPECT_THROW(hausdorff_distance(Eigen::MatrixXd(0, 2), circle_points(8, 1.0)), InputError);
  EXPECT_THROW(hausdorff_distance(Eigen::MatrixXd::Zero(3, 3), circle_points(8, 1.0)), InputError);
  EXPECT_THROW(hausdorff_path_length({circle_points(8, 1.0)}), InputError);
}

TEST(HausdorffPath, ConstantPathIsZero) {
  const Eigen::MatrixXd a = circle_points(64, 1.0);
  EXPECT_EQ(hausdorff_path_length({a, a, a, a}), 0.0);
}

TEST(HausdorffPath, TranslationTelescopes) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd base = random_set(rng, 30);
  for (int k : {1, 2, 7, 32}) {
    std::vector<Eigen::MatrixXd> path;
    for (int i = 0; i <= k; ++i) {
      Eigen::MatrixXd p = base;
      p.col(0).array() += 0.6 * i / k;
      p.col(1).array() += 0.8 * i / k;
      path.push_back(p);
    }
    EXPECT_NEAR(hausdorff_path_length(path), 1.0, 1e-12) << "k=" << k;
  }
}

TEST(HausdorffPath, RadialGrowth) {
  for (int k : {1, 4, 16}) {
    std::vector<Eigen::MatrixXd> path;
    for (int i = 0; i <= k; ++i) path.push_back(circle_points(256, 1.0 + double(i) / k));
    EXPECT_NEAR(hausdorff_path_length(path), 1.0, 1e-12) << "k=" << k;
  }
}

TEST(FinfLength, TranslatingCircle) {
  EXPECT_NEAR(finf_homotopy_length(fixtures::translating_circle(256, 64)), 1.0, 1e-9);
}

TEST(FinfLength, RadialGrowth) {
  EXPECT_NEAR(finf_homotopy_length(fixtures::radial_circle(256, 64, 1.0, 2.0)), 1.0, 1e-9);
}

TEST(FinfLength, ConstantHomotopyIsZero) {
  EXPECT_NEAR(finf_homotopy_length(fixtures::constant_grid(128, 8)), 0.0, 1e-12);
}

TEST(FinfLength, MatchesHausdorffPathLength) {
  for (const HomotopyGrid& c : {fixtures::translating_circle(256, 64), fixtures::radial_circle(256, 64, 1.0, 2.0)}) {
    std::vector<Eigen::MatrixXd> slices;
    for (int k = 0; k < c.n_v(); ++k) slices.push_back(c.slice(k));
    const double hp = hausdorff_path_length(slices);
    EXPECT_NEAR(finf_homotopy_length(c), hp, 0.05 * hp);
  }
}
