#pragma once

#include <functional>

#include <Eigen/Dense>

namespace curvespace {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Relative immersion threshold.
inline constexpr double kImmersionEps = 1e-9;

// Closed curve sampled at theta_i = 2*pi*i/N. One row per sample, no
// duplicated closing point.
class SampledCurve {
public:
  SampledCurve() = default;
  // scale_hint <= 0 picks the bounding-box diagonal (or 1 for a point curve).
  explicit SampledCurve(Eigen::MatrixXd points, double scale_hint = 0.0);

  int size() const { return static_cast<int>(pts_.rows()); }
  int dim() const { return static_cast<int>(pts_.cols()); }
  const Eigen::MatrixXd& points() const { return pts_; }
  Eigen::RowVectorXd point(int i) const { return pts_.row(wrap(i)); }
  double scale_hint() const { return scale_; }
  double dtheta() const { return kTwoPi / size(); }
  int wrap(int i) const {
    const int n = size();
    return ((i % n) + n) % n;
  }

  bool immersed() const;
  double min_edge() const;

private:
  Eigen::MatrixXd pts_;
  double scale_ = 1.0;
};

double default_scale(const Eigen::MatrixXd& points);

using Deformation = Eigen::MatrixXd;

// Constructors for common test curves.
SampledCurve sample_curve(int n, const std::function<Eigen::RowVectorXd(double)>& f);
SampledCurve make_circle(int n, double radius = 1.0, double cx = 0.0, double cy = 0.0,
                         bool clockwise = false);
SampledCurve make_ellipse(int n, double a, double b);

struct TangentFrame {
  Eigen::MatrixXd T;      // unit tangents, zero rows where degenerate
  Eigen::VectorXd speed;  // |c'(theta_i)|
  bool planar() const { return T.cols() == 2; }
  // Anticlockwise normal (planar only).
  Eigen::MatrixXd normal() const;
};

enum class Component { normal, tangent };

TangentFrame tangent_frame(const SampledCurve& c);
Deformation project(const TangentFrame& frame, const Deformation& v, Component which);

double arclength(const SampledCurve& c);
double polyline_length(const Eigen::MatrixXd& pts, bool closed);

struct CurvatureField {
  Eigen::MatrixXd H;
  Eigen::VectorXd kappa;  // empty unless planar
  double total_mass = 0.0;
};

CurvatureField curvature(const SampledCurve& c);

// Sum of absolute turning angles of the closed polygon.
double turning_mass(const Eigen::MatrixXd& pts);

struct DirectionFunctionSample {
  // theta_k is the direction at s_k = (k + 1/2) * 2*pi/M.
  Eigen::VectorXd theta;
  int winding = 0;
  double ds() const { return kTwoPi / static_cast<double>(theta.size()); }
};

DirectionFunctionSample lift_direction(const SampledCurve& c, double length_tol = 1e-3);

struct UnliftResult {
  SampledCurve curve;
  double closure_defect = 0.0;
};

UnliftResult unlift_direction(const DirectionFunctionSample& d);

// M samples with equal chord length along a periodic cubic through c.
// equal_chords = false stops after one pass: samples equally spaced in spline
// arclength rather than in chord length.
SampledCurve resample_arclength(const SampledCurve& c, int m, bool equal_chords = true);

// Spline arclength at each node divided by the total; the first entry is 0.
Eigen::VectorXd arclength_fractions(const SampledCurve& c);
// Points at the given increasing arclength fractions in [0, 1).
SampledCurve resample_at_fractions(const SampledCurve& c, const Eigen::VectorXd& frac);

}  // namespace curvespace
