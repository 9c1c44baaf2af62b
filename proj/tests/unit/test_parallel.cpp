#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "curvespace/altmetrics.hpp"
#include "curvespace/levelset.hpp"
#include "curvespace/parallel.hpp"

using namespace curvespace;

namespace {

struct ThreadCap {
  explicit ThreadCap(int n) { set_max_threads(n); }
  ~ThreadCap() { set_max_threads(0); }
};

}  // namespace

TEST(ParallelFor, VisitsEveryIndexOnce) {
  ThreadCap cap(4);
  std::vector<int> hits(1000, 0);
  parallel_for(0, 1000, [&](int i) { ++hits[i]; });
  for (int h : hits) EXPECT_EQ(h, 1);
  parallel_for(5, 5, [&](int) { FAIL(); });
}

TEST(ParallelFor, RethrowsLowestIndex) {
  ThreadCap cap(4);
  try {
    parallel_for(0, 64, [](int i) {
      if (i % 10 == 7) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "7");
  }
}

TEST(ParallelFor, ThreadCapSetting) {
  ThreadCap cap(3);
  EXPECT_EQ(max_threads(), 3);
  set_max_threads(0);
  EXPECT_GE(max_threads(), 1);
}

TEST(ParallelFor, HausdorffIndependentOfThreads) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  Eigen::MatrixXd a(3000, 2), b(2500, 2);
  for (Eigen::Index i = 0; i < a.rows(); ++i) a.row(i) << n(rng), n(rng);
  for (Eigen::Index i = 0; i < b.rows(); ++i) b.row(i) << n(rng) + 0.3, n(rng);
  double d1, d4;
  {
    ThreadCap cap(1);
    d1 = hausdorff_distance(a, b);
  }
  {
    ThreadCap cap(4);
    d4 = hausdorff_distance(a, b);
  }
  EXPECT_EQ(d1, d4);
}

TEST(ParallelFor, LevelSetStepIndependentOfThreads) {
  LevelSetParams p;
  p.nx = p.ny = 48;
  p.nv = 9;
  LevelSetGrid g = embed(make_circle(128), make_ellipse(128, 1.4, 0.8), p);
  g.lambda = levelset_stable_lambda(g);
  LevelSetGrid s1, s4;
  {
    ThreadCap cap(1);
    s1 = reinitialize(evolve_step(g, 0.0));
  }
  {
    ThreadCap cap(4);
    s4 = reinitialize(evolve_step(g, 0.0));
  }
  for (int k = 0; k < g.nv(); ++k) EXPECT_EQ(s1.psi[k], s4.psi[k]);
}
