#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "curvespace/energies.hpp"
#include "curvespace/errors.hpp"
#include "curvespace/homotopy.hpp"
#include "fixtures.hpp"

using namespace curvespace;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

HomotopyGrid wound(const HomotopyGrid& g, int k) {
  Eigen::VectorXd w(g.n_v());
  for (int j = 0; j < g.n_v(); ++j) w(j) = kTwoPi * k * g.v(j);
  return shift_unwind(g, w);
}

std::vector<EnergySpec> invariant_specs() {
  return {EnergySpec::en(), EnergySpec::j(), EnergySpec::mm(0.5), EnergySpec::alpha_beta(2.0, 1.0),
          EnergySpec::alpha_beta(1.5, 1.0), EnergySpec::conformal(ConformalFactor::exp_length(0.2))};
}

}  // namespace

TEST(InnerProduct, CircleNormalNormal) {
  const SampledCurve c = make_circle(256);
  const Eigen::MatrixXd n = tangent_frame(c).normal();
  EXPECT_NEAR(inner_product(c, n, n, EnergySpec::en()), kTwoPi, 1e-4);
  EXPECT_NEAR(inner_product(c, n, n, EnergySpec::mm(1.0)), 4.0 * kPi, 1e-3);
}

TEST(InnerProduct, TangentIsProjectedOut) {
  const SampledCurve c = make_circle(256);
  const TangentFrame f = tangent_frame(c);
  EXPECT_NEAR(inner_product(c, f.T, f.normal(), EnergySpec::en()), 0.0, 1e-12);
  EXPECT_NEAR(inner_product(c, f.T, f.T, EnergySpec::en()), 0.0, 1e-12);
  EXPECT_NEAR(inner_product(c, f.T, f.T, EnergySpec::param_h0()), kTwoPi, 1e-4);
}

TEST(InnerProduct, ConformalScalesGeometric) {
  const SampledCurve c = make_ellipse(128, 1.5, 1.0);
  const Eigen::MatrixXd h = Eigen::MatrixXd::Random(128, 2);
  const double g = inner_product(c, h, h, EnergySpec::en());
  const double gc = inner_product(c, h, h, EnergySpec::conformal(ConformalFactor::exp_length(0.3)));
  EXPECT_NEAR(gc / g, std::exp(0.3 * arclength(c)), 1e-12);
}

TEST(InnerProduct, Rejections) {
  const SampledCurve c = make_circle(16);
  EXPECT_THROW(inner_product(c, Eigen::MatrixXd::Zero(15, 2), Eigen::MatrixXd::Zero(16, 2), EnergySpec::en()),
               InputError);
  EXPECT_THROW(inner_product(c, c.points(), c.points(), EnergySpec::j()), InputError);
  const SampledCurve flat(Eigen::MatrixXd::Zero(16, 2));
  EXPECT_THROW(inner_product(flat, c.points(), c.points(), EnergySpec::en()), GeometryError);
}

TEST(Energy, TranslatingCircle) {
  const HomotopyGrid g = fixtures::translating_circle(256, 64);
  EXPECT_NEAR(energy(g, EnergySpec::en()).total, kPi, 5e-3);
  EXPECT_NEAR(energy(g, EnergySpec::param_h0()).total, kTwoPi, 5e-3);
  EXPECT_NEAR(energy(g, EnergySpec::intermediate()).total, kTwoPi, 5e-3);
}

TEST(Energy, QuarticCircleJ) {
  const double j = energy(fixtures::v4_circle(256, 64), EnergySpec::j()).total;
  EXPECT_LT(rel(j, 32.0 * kPi / 3.0), 1e-2);
}

TEST(Energy, WindingInvariance) {
  const HomotopyGrid g = fixtures::translating_circle(256, 64);
  const double e = energy(g, EnergySpec::en()).total;
  for (int k = 1; k <= 3; ++k) EXPECT_LT(rel(energy(wound(g, k), EnergySpec::en()).total, e), 1e-3);
}

TEST(Energy, ReportTotalIsQuadratureOfSlices) {
  const EnergyReport r = energy(fixtures::translating_circle(64, 16), EnergySpec::en());
  EXPECT_NEAR(r.total, trapezoid_v(r.per_slice, 1.0 / 15), 1e-14);
  EXPECT_EQ(r.n_theta, 64);
  EXPECT_EQ(r.n_v, 16);
  EXPECT_NE(r.to_text().find("kind=geom_H0"), std::string::npos);
}

TEST(Energy, MMIsENPlusAJ) {
  std::mt19937_64 rng(4);
  const HomotopyGrid g = fixtures::random_smooth(fixtures::random_coeffs(rng), 128, 32);
  const double en = energy(g, EnergySpec::en()).total;
  const double j = energy(g, EnergySpec::j()).total;
  for (double a : {0.0, 0.3, 2.0}) EXPECT_NEAR(energy(g, EnergySpec::mm(a)).total, en + a * j, 1e-12 * (en + j));
}

TEST(Energy, InvalidSpecsRejected) {
  const HomotopyGrid g = fixtures::translating_circle(32, 8);
  EXPECT_THROW(energy(g, EnergySpec::mm(-1.0)), InputError);
  EXPECT_THROW(energy(g, EnergySpec::alpha_beta(0.0, 1.0)), InputError);
  EXPECT_THROW(energy(g, EnergySpec::alpha_beta(2.0, -1.0)), InputError);
}

TEST(Energy, PartiallyDegenerateSliceThrows) {
  HomotopyGrid g = fixtures::translating_circle(32, 8);
  g.slice(3).row(4) = g.slice(3).row(5);
  EXPECT_THROW(energy(g, EnergySpec::en()), GeometryError);
  EXPECT_NO_THROW(energy(g, EnergySpec::param_h0()));
}

TEST(Energy, KindNamesRoundTrip) {
  for (auto k : {EnergyKind::param_H0, EnergyKind::intermediate, EnergyKind::geom_H0, EnergyKind::J,
                 EnergyKind::MM, EnergyKind::alpha_beta, EnergyKind::conformal})
    EXPECT_EQ(energy_kind_from_string(to_string(k)), k);
  EXPECT_EQ(energy_kind_from_string("en"), EnergyKind::geom_H0);
  EXPECT_THROW(energy_kind_from_string("bogus"), InputError);
}

TEST(Energy, ParameterisationInvariance) {
  std::mt19937_64 rng(12);
  const HomotopyGrid g = fixtures::random_smooth(fixtures::random_coeffs(rng), 256, 64);
  const HomotopyGrid a = reparam_arclength(g);
  const HomotopyGrid h = reparam_horizontal(g).grid;
  for (const auto& s : invariant_specs()) {
    const double e = energy(g, s).total;
    EXPECT_LT(rel(energy(a, s).total, e), 1e-3) << to_string(s.kind);
    EXPECT_LT(rel(energy(h, s).total, e), 1e-3) << to_string(s.kind);
  }
  const double p = energy(g, EnergySpec::param_h0()).total;
  EXPECT_GT(rel(energy(h, EnergySpec::param_h0()).total, p), 1e-2);
}

TEST(Scaling, TranslatingCircle) {
  const HomotopyGrid g = fixtures::translating_circle(256, 64);
  const ScalingRatios r2 = scaling_check(g, 2.0);
  EXPECT_LT(rel(r2.en, 8.0), 1e-3);
  EXPECT_LT(rel(r2.j, 2.0), 1e-3);
  const ScalingRatios r1 = scaling_check(g, 1.0);
  EXPECT_NEAR(r1.en, 1.0, 1e-14);
  EXPECT_NEAR(r1.j, 1.0, 1e-14);
}

TEST(Scaling, RandomSmoothHalf) {
  std::mt19937_64 rng(13);
  const ScalingRatios r = scaling_check(fixtures::random_smooth(fixtures::random_coeffs(rng), 256, 64), 0.5);
  EXPECT_LT(rel(r.en, 0.125), 1e-3);
  EXPECT_LT(rel(r.j, 0.5), 1e-3);
}

TEST(Scaling, ZeroBaseEnergyThrows) {
  EXPECT_THROW(scaling_check(fixtures::constant_grid(32, 4), 2.0), InputError);
  EXPECT_THROW(scaling_check(fixtures::translating_circle(32, 4), 0.0), InputError);
}

TEST(AreaSwept, Examples) {
  EXPECT_NEAR(area_swept(fixtures::translating_circle(256, 64)), 4.0, 1e-3);
  EXPECT_NEAR(area_swept(fixtures::constant_grid(64, 8)), 0.0, 1e-14);
  EXPECT_NEAR(area_swept(fixtures::radial_circle(256, 64, 0.0, 1.0)), kPi, 1e-3);
}

TEST(AreaSwept, ThreeDimensional) {
  const HomotopyGrid g = HomotopyGrid::from_function(128, 32, [](double t, double v) {
    Eigen::RowVectorXd p(3);
    p << std::cos(t), std::sin(t), v;
    return p;
  });
  EXPECT_NEAR(area_swept(g), kTwoPi, 1e-3);
}

TEST(AreaBound, TranslatingAndConstant) {
  const AreaBound b = area_swept_bound(fixtures::translating_circle(256, 64));
  EXPECT_NEAR(b.area * b.area, 16.0, 1e-2);
  EXPECT_NEAR(b.en * b.length_integral, 2.0 * kPi * kPi, 1e-2);
  EXPECT_TRUE(b.holds);
  EXPECT_TRUE(area_swept_bound_check(fixtures::constant_grid(64, 8)));
}

TEST(AreaBound, RandomSmoothHomotopies) {
  std::mt19937_64 rng(100);
  for (int k = 0; k < 100; ++k) {
    const HomotopyGrid g = fixtures::random_smooth(fixtures::random_coeffs(rng, 0.12), 64, 16);
    EXPECT_TRUE(area_swept_bound_check(g)) << "trial " << k;
  }
}

TEST(CrossIdentity, Examples) {
  EXPECT_LT(cross_identity_check(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)), 1e-15);
  EXPECT_LT(cross_identity_check(Eigen::Vector2d(1, 2), Eigen::Vector2d(2, 4)), 1e-15);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int k = 0; k < 200; ++k) {
    const Eigen::Vector3d w(g(rng), g(rng), g(rng)), v(g(rng), g(rng), g(rng));
    EXPECT_LT(cross_identity_check(w, v), 1e-12);
  }
  EXPECT_THROW(cross_identity_check(Eigen::Vector2d::Zero(), Eigen::Vector2d(1, 0)), InputError);
}

TEST(PathLenEnergy, TranslatingCircleIsConstantSpeed) {
  const PathLenEnergy p = path_len_energy(fixtures::translating_circle(256, 64), EnergySpec::en());
  EXPECT_NEAR(p.len, std::sqrt(kPi), 1e-3);
  EXPECT_NEAR(p.energy, kPi, 5e-3);
  EXPECT_NEAR(p.len * p.len, p.energy, 1e-6);
}

TEST(PathLenEnergy, ConstantHomotopyIsZero) {
  const PathLenEnergy p = path_len_energy(fixtures::constant_grid(64, 8), EnergySpec::en());
  EXPECT_NEAR(p.len, 0.0, 1e-12);
  EXPECT_NEAR(p.energy, 0.0, 1e-24);
}

TEST(PathLenEnergy, NonUniformTimeKeepsLengthRaisesEnergy) {
  const HomotopyGrid g = HomotopyGrid::from_function(256, 128, [](double t, double v) {
    return fixtures::xy(std::cos(t) + v + 0.25 * std::sin(kPi * v) / kPi * 2.0, std::sin(t));
  });
  const PathLenEnergy p = path_len_energy(g, EnergySpec::en());
  const PathLenEnergy q = path_len_energy(fixtures::translating_circle(256, 128), EnergySpec::en());
  EXPECT_NEAR(p.len, q.len, 1e-3);
  EXPECT_GT(p.energy, q.energy + 1e-2);
}

TEST(PathLenEnergy, HolderInequalityForAllMetrics) {
  std::mt19937_64 rng(17);
  const HomotopyGrid g = fixtures::random_smooth(fixtures::random_coeffs(rng), 128, 64);
  for (const auto& s : {EnergySpec::param_h0(), EnergySpec::intermediate(), EnergySpec::en(), EnergySpec::mm(1.0),
                        EnergySpec::conformal(ConformalFactor::exp_length(0.1))}) {
    const PathLenEnergy p = path_len_energy(g, s);
    EXPECT_LE(p.len * p.len, p.energy * (1.0 + 1e-12)) << to_string(s.kind);
  }
  EXPECT_THROW(path_len_energy(g, EnergySpec::j()), InputError);
}

TEST(PathLenEnergy, ConstantSpeedReparamReachesEquality) {
  const HomotopyGrid g = HomotopyGrid::from_function(256, 257, [](double t, double v) {
    const double r = 1.0 + v * v;
    return fixtures::xy(r * std::cos(t) + 0.3 * v, r * std::sin(t));
  });
  const PathLenEnergy before = path_len_energy(g, EnergySpec::en());
  const PathLenEnergy after = path_len_energy(constant_speed_reparam(g, EnergySpec::en()), EnergySpec::en());
  EXPECT_GT(before.energy - before.len * before.len, 1e-2);
  EXPECT_LT(std::abs(after.energy - after.len * after.len) / after.energy, 1e-6);
  EXPECT_NEAR(after.len, before.len, 1e-3);
}

TEST(StableLambda, TranslatingCircle) {
  EXPECT_LT(rel(stable_lambda(fixtures::translating_circle(256, 64)), 1.0 / kPi), 1e-3);
}

TEST(StableLambda, RadialScalingIsInverseLength) {
  EXPECT_LT(rel(stable_lambda(fixtures::radial_circle(256, 32, 1.0, 2.0)), 1.0 / kTwoPi), 1e-3);
}

TEST(StableLambda, ConstantHomotopyStalls) {
  EXPECT_THROW(stable_lambda(fixtures::constant_grid(64, 8)), StallError);
}
