#include <cmath>
#include <random>

#include <benchmark/benchmark.h>

#include "curvespace/altmetrics.hpp"
#include "curvespace/calculus.hpp"
#include "curvespace/energies.hpp"
#include "curvespace/flows.hpp"
#include "curvespace/homotopy.hpp"
#include "curvespace/levelset.hpp"

using namespace curvespace;

namespace {

HomotopyGrid circle_to_ellipse(int nt, int nv) {
  return linear_homotopy(make_circle(nt), make_ellipse(nt, 2.0, 1.0), nv);
}

LevelSetGrid translated_field(int n, int nv) {
  LevelSetParams p;
  p.nx = p.ny = n;
  p.nv = nv;
  LevelSetGrid g = embed(make_circle(256), make_circle(256, 1.0, 0.5, 0.0), p);
  g.lambda = levelset_stable_lambda(g);
  return g;
}

}  // namespace

static void BM_EnergyEN(benchmark::State& state) {
  const HomotopyGrid c = circle_to_ellipse(static_cast<int>(state.range(0)), 64);
  for (auto _ : state) benchmark::DoNotOptimize(energy(c, EnergySpec::en()).total);
  state.SetItemsProcessed(state.iterations() * state.range(0) * 64);
}
BENCHMARK(BM_EnergyEN)->Arg(128)->Arg(256)->Arg(512);

static void BM_VStarCalculus(benchmark::State& state) {
  const HomotopyGrid c = circle_to_ellipse(256, 64);
  for (auto _ : state) benchmark::DoNotOptimize(vstar_calculus(c, 4).M.sum());
}
BENCHMARK(BM_VStarCalculus);

static void BM_ConformalFlowStep(benchmark::State& state) {
  const HomotopyGrid c = circle_to_ellipse(128, 33);
  const ConformalFactor f = ConformalFactor::exp_length(stable_lambda(c));
  for (auto _ : state) {
    const HomotopyGradient g = conformal_gradient(c, f);
    benchmark::DoNotOptimize(conformal_homotopy_flow_step(c, f, 0.5 * g.dt_max));
  }
}
BENCHMARK(BM_ConformalFlowStep);

static void BM_HorizontalReparam(benchmark::State& state) {
  const HomotopyGrid c = HomotopyGrid::from_function(256, 128, [](double t, double v) {
    Eigen::RowVectorXd r(2);
    r << std::cos(t) + v, std::sin(t);
    return r;
  });
  for (auto _ : state) benchmark::DoNotOptimize(reparam_horizontal(c).residual);
}
BENCHMARK(BM_HorizontalReparam);

static void BM_LevelSetStep(benchmark::State& state) {
  const LevelSetGrid g = translated_field(static_cast<int>(state.range(0)), 17);
  for (auto _ : state) benchmark::DoNotOptimize(evolve_step(g, 0.0).t);
}
BENCHMARK(BM_LevelSetStep)->Arg(64)->Arg(96)->Unit(benchmark::kMillisecond);

static void BM_Reinitialize(benchmark::State& state) {
  const LevelSetGrid g = translated_field(static_cast<int>(state.range(0)), 17);
  for (auto _ : state) benchmark::DoNotOptimize(reinitialize(g).psi.size());
}
BENCHMARK(BM_Reinitialize)->Arg(64)->Arg(96)->Unit(benchmark::kMillisecond);

static void BM_Hausdorff(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  const auto m = static_cast<Eigen::Index>(state.range(0));
  Eigen::MatrixXd a(m, 2), b(m, 2);
  for (Eigen::Index i = 0; i < m; ++i) {
    a.row(i) << n(rng), n(rng);
    b.row(i) << n(rng) + 0.2, n(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff_distance(a, b));
}
BENCHMARK(BM_Hausdorff)->Arg(1000)->Arg(4000);

static void BM_DirfnProject(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Eigen::VectorXd t(m);
  for (int k = 0; k < m; ++k) {
    const double s = (k + 0.5) * kTwoPi / m;
    t(k) = s + 0.05 * std::sin(3 * s) + 0.02;
  }
  const DirectionFunction d = make_direction_function(t);
  for (auto _ : state) benchmark::DoNotOptimize(dirfn_project(d).theta.sum());
}
BENCHMARK(BM_DirfnProject)->Arg(256)->Arg(4096);
BENCHMARK_MAIN();
