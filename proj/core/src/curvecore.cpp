#include "curvespace/curvecore.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "curvespace/errors.hpp"
#include "curvespace/interp.hpp"
#include "curvespace/stencil.hpp"

namespace curvespace {

double default_scale(const Eigen::MatrixXd& points) {
  if (points.rows() == 0) return 1.0;
  const Eigen::RowVectorXd lo = points.colwise().minCoeff();
  const Eigen::RowVectorXd hi = points.colwise().maxCoeff();
  const double d = (hi - lo).norm();
  return d > 0.0 ? d : 1.0;
}

SampledCurve::SampledCurve(Eigen::MatrixXd points, double scale_hint) : pts_(std::move(points)) {
  if (pts_.rows() < 3) throw InputError("SampledCurve: need N >= 3 samples");
  if (pts_.cols() < 2) throw InputError("SampledCurve: need dimension n >= 2");
  if (!pts_.allFinite()) throw InputError("SampledCurve: non-finite coordinates");
  scale_ = scale_hint > 0.0 ? scale_hint : default_scale(pts_);
}

double SampledCurve::min_edge() const {
  double m = std::numeric_limits<double>::infinity();
  const int n = size();
  for (int i = 0; i < n; ++i) m = std::min(m, (pts_.row((i + 1) % n) - pts_.row(i)).norm());
  return m;
}

bool SampledCurve::immersed() const { return min_edge() > kImmersionEps * scale_; }

SampledCurve sample_curve(int n, const std::function<Eigen::RowVectorXd(double)>& f) {
  if (n < 3) throw InputError("sample_curve: need N >= 3");
  Eigen::RowVectorXd p0 = f(0.0);
  Eigen::MatrixXd pts(n, p0.size());
  pts.row(0) = p0;
  for (int i = 1; i < n; ++i) pts.row(i) = f(kTwoPi * i / n);
  return SampledCurve(std::move(pts));
}

SampledCurve make_circle(int n, double radius, double cx, double cy, bool clockwise) {
  const double sgn = clockwise ? -1.0 : 1.0;
  return sample_curve(n, [&](double t) {
    Eigen::RowVectorXd p(2);
    p << cx + radius * std::cos(t), cy + sgn * radius * std::sin(t);
    return p;
  });
}

SampledCurve make_ellipse(int n, double a, double b) {
  return sample_curve(n, [&](double t) {
    Eigen::RowVectorXd p(2);
    p << a * std::cos(t), b * std::sin(t);
    return p;
  });
}

Eigen::MatrixXd TangentFrame::normal() const {
  if (!planar()) throw InputError("TangentFrame::normal: planar frames only");
  Eigen::MatrixXd n(T.rows(), 2);
  n.col(0) = -T.col(1);
  n.col(1) = T.col(0);
  return n;
}

TangentFrame tangent_frame(const SampledCurve& c) {
  TangentFrame f;
  const Eigen::MatrixXd d = stencil::d1_periodic(c.points(), c.dtheta());
  f.speed = d.rowwise().norm();
  f.T = Eigen::MatrixXd::Zero(d.rows(), d.cols());
  const double eps = kImmersionEps * c.scale_hint();
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    if (f.speed(i) > eps) f.T.row(i) = d.row(i) / f.speed(i);
  }
  return f;
}

Deformation project(const TangentFrame& frame, const Deformation& v, Component which) {
  if (v.rows() != frame.T.rows() || v.cols() != frame.T.cols())
    throw InputError("project: deformation size does not match the frame");
  const Eigen::VectorXd a = (v.array() * frame.T.array()).rowwise().sum();
  Deformation tang = frame.T.array().colwise() * a.array();
  if (which == Component::tangent) return tang;
  return v - tang;
}

double arclength(const SampledCurve& c) {
  const Eigen::MatrixXd d = stencil::d1_periodic(c.points(), c.dtheta());
  return d.rowwise().norm().sum() * c.dtheta();
}

double polyline_length(const Eigen::MatrixXd& pts, bool closed) {
  const Eigen::Index n = pts.rows();
  double l = 0.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) l += (pts.row(i + 1) - pts.row(i)).norm();
  if (closed && n > 1) l += (pts.row(0) - pts.row(n - 1)).norm();
  return l;
}

namespace {

double turning_angle(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  const double dot = a.dot(b);
  const double cr2 = std::max(0.0, a.squaredNorm() * b.squaredNorm() - dot * dot);
  return std::atan2(std::sqrt(cr2), dot);
}

}  // namespace

double turning_mass(const Eigen::MatrixXd& pts) {
  const Eigen::Index n = pts.rows();
  std::vector<Eigen::RowVectorXd> edges;
  edges.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::RowVectorXd e = pts.row((i + 1) % n) - pts.row(i);
    if (e.norm() > 0.0) edges.push_back(std::move(e));
  }
  double mass = 0.0;
  const size_t m = edges.size();
  for (size_t i = 0; i < m; ++i) mass += turning_angle(edges[i], edges[(i + 1) % m]);
  return mass;
}

CurvatureField curvature(const SampledCurve& c) {
  if (!c.immersed()) throw GeometryError("curvature: curve is not immersed");
  const TangentFrame f = tangent_frame(c);
  CurvatureField k;
  k.H = stencil::d1_periodic(f.T, c.dtheta());
  k.H.array().colwise() /= f.speed.array();
  if (f.planar()) {
    const Eigen::ArrayXd along_n = (k.H.array() * f.normal().array()).rowwise().sum();
    k.kappa = along_n.sign() * k.H.rowwise().norm().array();
  }
  k.total_mass = turning_mass(c.points());
  return k;
}

namespace {

double wrap_pi(double a) {
  // into (-pi, pi]
  a = std::fmod(a + kPi, kTwoPi);
  if (a <= 0.0) a += kTwoPi;
  return a - kPi;
}

}  // namespace

DirectionFunctionSample lift_direction(const SampledCurve& c, double length_tol) {
  if (c.dim() != 2) throw InputError("lift_direction: planar curves only");
  if (!c.immersed()) throw GeometryError("lift_direction: curve is not immersed");
  const int m = c.size();
  const double len = polyline_length(c.points(), true);
  if (std::abs(len - kTwoPi) > length_tol * kTwoPi)
    throw InputError("lift_direction: curve length " + std::to_string(len) +
                     " is not 2*pi; normalize first");
  const double h = kTwoPi / m;
  DirectionFunctionSample d;
  d.theta.resize(m);
  double prev = 0.0;
  double total = 0.0;
  for (int k = 0; k < m; ++k) {
    const Eigen::RowVectorXd e = c.point(k + 1) - c.point(k);
    if (std::abs(e.norm() - h) > length_tol * h * 10.0)
      throw InputError("lift_direction: samples are not at uniform arclength");
    const double a = std::atan2(e(1), e(0));
    if (k == 0) {
      d.theta(0) = a;
    } else {
      const double inc = wrap_pi(a - prev);
      d.theta(k) = d.theta(k - 1) + inc;
      total += inc;
    }
    prev = a;
  }
  const Eigen::RowVectorXd e0 = c.point(1) - c.point(0);
  total += wrap_pi(std::atan2(e0(1), e0(0)) - prev);
  d.winding = static_cast<int>(std::lround(total / kTwoPi));
  return d;
}

UnliftResult unlift_direction(const DirectionFunctionSample& d) {
  const Eigen::Index m = d.theta.size();
  if (m < 3) throw InputError("unlift_direction: need at least 3 samples");
  const double h = d.ds();
  Eigen::MatrixXd pts(m, 2);
  Eigen::RowVector2d p(0.0, 0.0);
  for (Eigen::Index k = 0; k < m; ++k) {
    pts.row(k) = p;
    p += h * Eigen::RowVector2d(std::cos(d.theta(k)), std::sin(d.theta(k)));
  }
  UnliftResult r;
  r.closure_defect = p.norm();
  r.curve = SampledCurve(std::move(pts), kTwoPi);
  return r;
}

namespace {

// Arclength along a periodic interpolant, tabulated per node interval with
// five-point Gauss-Legendre.
class ArcTable {
public:
  explicit ArcTable(const PeriodicInterpolant& p) : p_(p) {
    const int n = p.size();
    h_ = p.period() / n;
    cum_.resize(n + 1);
    cum_[0] = 0.0;
    for (int i = 0; i < n; ++i) cum_[i + 1] = cum_[i] + segment(i * h_, (i + 1) * h_);
  }
  double total() const { return cum_.back(); }

  double at(double t) const {
    const int n = static_cast<int>(cum_.size()) - 1;
    int i = std::clamp(static_cast<int>(std::floor(t / h_)), 0, n - 1);
    return cum_[i] + segment(i * h_, t);
  }

  double speed(double t) const { return p_.derivative(t).norm(); }

  // Parameter t in [0, period) with at(t) = s.
  double inverse(double s) const {
    const int n = static_cast<int>(cum_.size()) - 1;
    auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    int i = std::clamp(static_cast<int>(it - cum_.begin()) - 1, 0, n - 1);
    double lo = i * h_, hi = (i + 1) * h_;
    double t = lo + (s - cum_[i]) / std::max(cum_[i + 1] - cum_[i], 1e-300) * h_;
    for (int it2 = 0; it2 < 50; ++it2) {
      const double f = at(t) - s;
      if (f > 0) hi = t; else lo = t;
      const double sp = speed(t);
      double tn = sp > 0 ? t - f / sp : 0.5 * (lo + hi);
      if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
      if (std::abs(tn - t) < 1e-15 * p_.period()) { t = tn; break; }
      t = tn;
    }
    return t;
  }

private:
  double segment(double a, double b) const {
    static constexpr std::array<double, 5> x{-0.9061798459386640, -0.5384693101056831, 0.0,
                                             0.5384693101056831, 0.9061798459386640};
    static constexpr std::array<double, 5> w{0.2369268850561891, 0.4786286704993665,
                                             0.5688888888888889, 0.4786286704993665,
                                             0.2369268850561891};
    if (b <= a) return 0.0;
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += w[k] * speed(c + r * x[k]);
    return s * r;
  }

  const PeriodicInterpolant& p_;
  double h_;
  std::vector<double> cum_;
};

}  // namespace

SampledCurve resample_arclength(const SampledCurve& c, int m, bool equal_chords) {
  if (m < 3) throw InputError("resample_arclength: need M >= 3");
  if (!c.immersed()) throw GeometryError("resample_arclength: curve is not immersed");
  const PeriodicInterpolant p(c.points(), kTwoPi);
  const ArcTable arc(p);
  const double len = arc.total();

  std::vector<double> ds(m, len / m);
  Eigen::MatrixXd out(m, c.dim());
  for (int iter = 0; iter < 60; ++iter) {
    double s = 0.0;
    for (int k = 0; k < m; ++k) {
      out.row(k) = k == 0 ? p(0.0) : p(arc.inverse(s));
      s += ds[k];
    }
    if (!equal_chords) break;
    std::vector<double> chord(m);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
    for (int k = 0; k < m; ++k) {
      chord[k] = (out.row((k + 1) % m) - out.row(k)).norm();
      lo = std::min(lo, chord[k]);
      hi = std::max(hi, chord[k]);
      sum += chord[k];
    }
    if ((hi - lo) <= 1e-13 * sum / m) break;
    double inv_sum = 0.0;
    std::vector<double> ginv(m);
    for (int k = 0; k < m; ++k) {
      ginv[k] = ds[k] / chord[k];
      inv_sum += ginv[k];
    }
    for (int k = 0; k < m; ++k) ds[k] = ginv[k] * len / inv_sum;
  }
  return SampledCurve(std::move(out), c.scale_hint());
}

Eigen::VectorXd arclength_fractions(const SampledCurve& c) {
  if (!c.immersed()) throw GeometryError("arclength_fractions: curve is not immersed");
  const PeriodicInterpolant p(c.points(), kTwoPi);
  const ArcTable arc(p);
  Eigen::VectorXd f(c.size());
  for (int i = 0; i < c.size(); ++i) f(i) = arc.at(i * c.dtheta()) / arc.total();
  return f;
}

SampledCurve resample_at_fractions(const SampledCurve& c, const Eigen::VectorXd& frac) {
  if (frac.size() < 3) throw InputError("resample_at_fractions: need at least 3 fractions");
  if (!c.immersed()) throw GeometryError("resample_at_fractions: curve is not immersed");
  const PeriodicInterpolant p(c.points(), kTwoPi);
  const ArcTable arc(p);
  Eigen::MatrixXd out(frac.size(), c.dim());
  for (Eigen::Index k = 0; k < frac.size(); ++k) {
    if (!(frac(k) >= 0.0 && frac(k) < 1.0) || (k > 0 && !(frac(k) > frac(k - 1))))
      throw InputError("resample_at_fractions: fractions must increase within [0, 1)");
    out.row(k) = k == 0 && frac(0) == 0.0 ? p(0.0) : p(arc.inverse(frac(k) * arc.total()));
  }
  return SampledCurve(std::move(out), c.scale_hint());
}

}  // namespace curvespace
