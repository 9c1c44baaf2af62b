#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "curvespace/curvecore.hpp"
#include "curvespace/homotopy.hpp"

namespace fixtures {

using curvespace::HomotopyGrid;
using curvespace::kPi;
using curvespace::kTwoPi;

inline Eigen::RowVectorXd xy(double x, double y) {
  Eigen::RowVectorXd r(2);
  r << x, y;
  return r;
}

// Unit circle translating with unit speed along x.
inline HomotopyGrid translating_circle(int nt, int nv, double speed = 1.0) {
  return HomotopyGrid::from_function(nt, nv, [=](double t, double v) {
    return xy(std::cos(t) + speed * v, std::sin(t));
  });
}

inline HomotopyGrid radial_circle(int nt, int nv, double r0, double r1) {
  return HomotopyGrid::from_function(nt, nv, [=](double t, double v) {
    const double r = r0 + (r1 - r0) * v;
    return xy(r * std::cos(t), r * std::sin(t));
  });
}

inline HomotopyGrid v4_circle(int nt, int nv) {
  return HomotopyGrid::from_function(nt, nv, [](double t, double v) {
    const double s = v * v * v * v;
    return xy(s * std::cos(t), s * std::sin(t));
  });
}

inline HomotopyGrid constant_grid(int nt, int nv) {
  return HomotopyGrid::from_function(nt, nv, [](double t, double) {
    return xy(std::cos(t), 0.5 * std::sin(t));
  });
}

// Smooth random homotopy of star-shaped curves: r(t,v) = 1 + small Fourier
// modes in t and v, plus a drift of the centre.
struct RandomSmooth {
  double a[3][3];
  double b[3][3];
  double cx, cy;
};

inline RandomSmooth random_coeffs(std::mt19937_64& rng, double amp = 0.08) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RandomSmooth c{};
  for (auto& row : c.a)
    for (auto& x : row) x = amp * u(rng);
  for (auto& row : c.b)
    for (auto& x : row) x = amp * u(rng);
  c.cx = 0.5 * u(rng);
  c.cy = 0.5 * u(rng);
  return c;
}

inline HomotopyGrid random_smooth(const RandomSmooth& c, int nt, int nv) {
  return HomotopyGrid::from_function(nt, nv, [c](double t, double v) {
    double r = 1.0 + 0.3 * v;
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) {
        const double tv = std::cos(kPi * l * v);
        r += c.a[k][l] * std::cos((k + 2) * t) * tv + c.b[k][l] * std::sin((k + 2) * t) * tv;
      }
    }
    return xy(r * std::cos(t) + c.cx * v, r * std::sin(t) + c.cy * v * v);
  });
}

// Star-shaped curve r(t) = 1 + a cos(k t) about (cx, cy).
inline curvespace::SampledCurve lobed(int n, int k, double a, double cx = 0.0, double cy = 0.0) {
  return curvespace::sample_curve(n, [=](double t) {
    const double r = 1.0 + a * std::cos(k * t);
    return xy(cx + r * std::cos(t), cy + r * std::sin(t));
  });
}

// Two-lobed blob and a three-lobed blob used as level-set geodesic endpoints.
inline curvespace::SampledCurve blob(int n) { return lobed(n, 2, 0.15); }
inline curvespace::SampledCurve three_lobed(int n) { return lobed(n, 3, 0.2, 0.3, 0.0); }

}  // namespace fixtures
