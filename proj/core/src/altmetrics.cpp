#include "curvespace/altmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "curvespace/errors.hpp"
#include "curvespace/parallel.hpp"

namespace curvespace {

DirectionFunction make_direction_function(const Eigen::VectorXd& theta) {
  if (theta.size() < 3) throw InputError("make_direction_function: need at least 3 samples");
  DirectionFunction d;
  d.theta = theta;
  d.winding = static_cast<int>(std::lround((theta(theta.size() - 1) - theta(0)) / kTwoPi));
  return d;
}

Eigen::Vector3d dirfn_constraints(const DirectionFunction& d) {
  const double h = d.ds();
  return {d.theta.sum() * h - 2.0 * kPi * kPi, d.theta.array().cos().sum() * h, d.theta.array().sin().sum() * h};
}

namespace {

void require_member(const DirectionFunction& d, const char* who) {
  const double r = dirfn_constraints(d).norm();
  if (!(r < kMembershipTol))
    throw InputError(std::string(who) + ": direction function is off the constraint set (residual " +
                     std::to_string(r) + ")");
}

}  // namespace

ProjectResult dirfn_project_report(const DirectionFunction& d, double tol, int max_iter) {
  if (d.theta.size() < 3) throw InputError("dirfn_project: need at least 3 samples");
  ProjectResult out;
  out.d = d;
  const double h = d.ds();
  const Eigen::Index m = d.theta.size();
  for (;;) {
    Eigen::MatrixXd g(3, m);
    g.row(0).setOnes();
    g.row(1) = -out.d.theta.array().sin().transpose();
    g.row(2) = out.d.theta.array().cos().transpose();
    const Eigen::Matrix3d gram = g * g.transpose() * h;
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(gram);
    const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(2);
    out.condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (!(out.condition < kGramConditionCap))
      throw SingularError("dirfn_project: constraint Gram matrix is singular (condition " +
                          std::to_string(out.condition) + "); theta is near the flat set");
    const Eigen::Vector3d r = dirfn_constraints(out.d);
    out.residual = r.norm();
    if (out.residual < tol) return out;
    if (out.iterations >= max_iter)
      throw ConvergenceError("dirfn_project: residual " + std::to_string(out.residual) + " after " +
                             std::to_string(max_iter) + " iterations");
    out.d.theta -= g.transpose() * gram.ldlt().solve(r);
    ++out.iterations;
  }
}

DirectionFunction dirfn_project(const DirectionFunction& d) { return dirfn_project_report(d).d; }

double dirfn_distance(const DirectionFunction& a, const DirectionFunction& b, DirDistanceMode mode) {
  if (a.theta.size() != b.theta.size()) throw InputError("dirfn_distance: sample counts differ");
  require_member(a, "dirfn_distance");
  require_member(b, "dirfn_distance");
  const double h = a.ds();
  const double l2 = std::sqrt((a.theta - b.theta).squaredNorm() * h);
  if (mode == DirDistanceMode::l2) return l2;
  const Eigen::Index m = b.theta.size();
  const int w = make_direction_function(b.theta).winding;
  double best = l2;
  Eigen::VectorXd s(m);
  for (Eigen::Index k = 1; k < m; ++k) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::Index j = i + k;
      s(i) = j < m ? b.theta(j) : b.theta(j - m) + kTwoPi * w;
    }
    s.array() -= (s.sum() * h - 2.0 * kPi * kPi) / kTwoPi;
    best = std::min(best, std::sqrt((a.theta - s).squaredNorm() * h));
  }
  return best;
}

namespace {

double directed(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  constexpr Eigen::Index kChunk = 256;
  const int chunks = static_cast<int>((a.rows() + kChunk - 1) / kChunk);
  std::vector<double> worst(chunks, 0.0);
  parallel_for(0, chunks, [&](int c) {
    double& w = worst[c];
    for (Eigen::Index i = c * kChunk; i < std::min(a.rows(), (c + 1) * kChunk); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < b.rows() && best > w; ++j) best = std::min(best, (a.row(i) - b.row(j)).squaredNorm());
      w = std::max(w, best);
    }
  });
  return std::sqrt(*std::max_element(worst.begin(), worst.end()));
}

}  // namespace

double hausdorff_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() == 0 || b.rows() == 0) throw InputError("hausdorff_distance: empty set");
  if (a.cols() != b.cols()) throw InputError("hausdorff_distance: dimension mismatch");
  return std::max(directed(a, b), directed(b, a));
}

double hausdorff_path_length(const std::vector<Eigen::MatrixXd>& path) {
  if (path.size() < 2) throw InputError("hausdorff_path_length: need at least 2 sets");
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) total += hausdorff_distance(path[i - 1], path[i]);
  return total;
}

double finf_homotopy_length(const HomotopyGrid& c) {
  require_immersed(c, "finf_homotopy_length");
  Eigen::VectorXd sup(c.n_v());
  for (int j = 0; j < c.n_v(); ++j) {
    const TangentFrame f = tangent_frame(c.curve(j));
    sup(j) = project(f, c.d_v(j), Component::normal).rowwise().norm().maxCoeff();
  }
  return trapezoid_v(sup, c.dv());
}

}  // namespace curvespace
