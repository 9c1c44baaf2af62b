#include "curvespace/energies.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <span>
#include <string>

#include "curvespace/calculus.hpp"
#include "curvespace/errors.hpp"
#include "curvespace/interp.hpp"
#include "curvespace/stencil.hpp"

namespace curvespace {

const char* to_string(EnergyKind k) {
  switch (k) {
    case EnergyKind::param_H0: return "param_H0";
    case EnergyKind::intermediate: return "intermediate";
    case EnergyKind::geom_H0: return "geom_H0";
    case EnergyKind::J: return "J";
    case EnergyKind::MM: return "MM";
    case EnergyKind::alpha_beta: return "alpha_beta";
    case EnergyKind::conformal: return "conformal";
  }
  return "?";
}

EnergyKind energy_kind_from_string(const std::string& s) {
  std::string t = s;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (t == "param_h0" || t == "param") return EnergyKind::param_H0;
  if (t == "intermediate") return EnergyKind::intermediate;
  if (t == "geom_h0" || t == "en" || t == "h0") return EnergyKind::geom_H0;
  if (t == "j") return EnergyKind::J;
  if (t == "mm") return EnergyKind::MM;
  if (t == "alpha_beta" || t == "ab") return EnergyKind::alpha_beta;
  if (t == "conformal" || t == "conf") return EnergyKind::conformal;
  throw InputError("unknown energy kind '" + s + "'");
}

ConformalFactor ConformalFactor::exp_length(double lambda) {
  if (!(lambda >= 0.0)) throw InputError("ConformalFactor: lambda must be >= 0");
  ConformalFactor f;
  f.kind = Kind::exp_lambda_L;
  f.lambda = lambda;
  return f;
}

ConformalFactor ConformalFactor::length() {
  ConformalFactor f;
  f.kind = Kind::custom;
  f.phi = [](double l) { return l; };
  f.dphi = [](double) { return 1.0; };
  return f;
}

double ConformalFactor::value(double len) const {
  switch (kind) {
    case Kind::identity: return 1.0;
    case Kind::exp_lambda_L: return std::exp(lambda * len);
    case Kind::custom: return phi(len);
  }
  return 1.0;
}

double ConformalFactor::derivative(double len) const {
  switch (kind) {
    case Kind::identity: return 0.0;
    case Kind::exp_lambda_L: return lambda * std::exp(lambda * len);
    case Kind::custom: return dphi ? dphi(len) : 0.0;
  }
  return 0.0;
}

std::string ConformalFactor::describe() const {
  switch (kind) {
    case Kind::identity: return "identity";
    case Kind::exp_lambda_L: return "exp_lambda_L(lambda=" + std::to_string(lambda) + ")";
    case Kind::custom: return "custom";
  }
  return "?";
}

void EnergySpec::validate() const {
  if (kind == EnergyKind::MM && !(A >= 0.0)) throw InputError("MM energy needs A >= 0");
  if (kind == EnergyKind::alpha_beta && !(alpha > 0.0 && beta > 0.0))
    throw InputError("alpha_beta energy needs alpha > 0 and beta > 0");
}

std::string EnergyReport::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "kind=" << to_string(spec.kind) << "\n";
  os << "params=A:" << spec.A << ";alpha:" << spec.alpha << ";beta:" << spec.beta
     << ";factor:" << spec.factor.describe() << "\n";
  os << "total=" << total << "\n";
  os << "quadrature=" << quadrature << "\n";
  os << "resolution=" << n_theta << "," << n_v << "\n";
  os << "v,slice\n";
  for (Eigen::Index j = 0; j < per_slice.size(); ++j) os << v(j) << "," << per_slice(j) << "\n";
  return os.str();
}

namespace {

// Normal part of the second theta derivative over |W|^2.
Eigen::MatrixXd curvature_vector(const Eigen::MatrixXd& pts, const Eigen::MatrixXd& w, double h) {
  const Eigen::MatrixXd wtt = stencil::d2_periodic(pts, h);
  Eigen::MatrixXd hv(pts.rows(), pts.cols());
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const double s2 = w.row(i).squaredNorm();
    if (s2 <= 0.0) {
      hv.row(i).setZero();
      continue;
    }
    hv.row(i) = (wtt.row(i) - (wtt.row(i).dot(w.row(i)) / s2) * w.row(i)) / s2;
  }
  return hv;
}

double normal_sq(const Eigen::RowVectorXd& v, const Eigen::RowVectorXd& w) {
  const double w2 = w.squaredNorm();
  if (w2 <= 0.0) return v.squaredNorm();
  const double d = v.dot(w);
  return std::max(0.0, v.squaredNorm() - d * d / w2);
}

struct PointTerms {
  double v2, n2, sp, h2;
};

double integrand(const EnergySpec& s, const PointTerms& p, double phi) {
  switch (s.kind) {
    case EnergyKind::param_H0: return p.v2;
    case EnergyKind::intermediate: return p.v2 * p.sp;
    case EnergyKind::geom_H0: return p.n2 * p.sp;
    case EnergyKind::J: return p.h2 * p.n2 * p.sp;
    case EnergyKind::MM: return (1.0 + s.A * p.h2) * p.n2 * p.sp;
    case EnergyKind::alpha_beta:
      return std::pow(p.n2, 0.5 * s.alpha) * std::pow(p.sp, s.beta);
    case EnergyKind::conformal: return phi * p.n2 * p.sp;
  }
  return 0.0;
}

bool needs_curvature(EnergyKind k) { return k == EnergyKind::J || k == EnergyKind::MM; }

EnergyReport energy_closed(const HomotopyGrid& c, const EnergySpec& spec) {
  EnergyReport r;
  r.spec = spec;
  r.n_theta = c.n_theta();
  r.n_v = c.n_v();
  r.quadrature = "periodic-trapezoid(theta) x trapezoid(v)";
  r.per_slice.resize(c.n_v());
  r.v.resize(c.n_v());
  const double h = c.dtheta();
  const double eps = kImmersionEps * c.scale_hint();
  for (int j = 0; j < c.n_v(); ++j) {
    r.v(j) = c.v(j);
    const Eigen::MatrixXd w = c.d_theta(j);
    const Eigen::MatrixXd vv = c.d_v(j);
    const Eigen::VectorXd sp = w.rowwise().norm();
    const double len = sp.sum() * h;
    if (spec.geometric()) {
      if (len <= eps) {
        r.per_slice(j) = 0.0;
        continue;
      }
      if (!c.curve(j).immersed())
        throw GeometryError(std::string("energy: slice ") + std::to_string(j) +
                            " is not immersed");
    }
    Eigen::MatrixXd hv;
    if (needs_curvature(spec.kind)) hv = curvature_vector(c.slice(j), w, h);
    const double phi = spec.kind == EnergyKind::conformal ? spec.factor.value(len) : 1.0;
    double acc = 0.0;
    for (int i = 0; i < c.n_theta(); ++i) {
      PointTerms p{vv.row(i).squaredNorm(), normal_sq(vv.row(i), w.row(i)), sp(i),
                   hv.size() ? hv.row(i).squaredNorm() : 0.0};
      acc += integrand(spec, p, phi);
    }
    r.per_slice(j) = acc * h;
  }
  r.total = trapezoid_v(r.per_slice, c.dv());
  return r;
}

EnergyReport energy_open(const HomotopyGrid& c, const EnergySpec& spec) {
  if (needs_curvature(spec.kind))
    throw InputError("energy: J and MM need closed slices");
  EnergyReport r;
  r.spec = spec;
  r.n_theta = c.n_theta();
  r.n_v = c.n_v();
  r.quadrature = "cell-midpoint";
  const int nu = c.n_theta() - 1, nv = c.n_v() - 1;
  const double du = c.dtheta(), dv = c.dv();
  r.per_slice.resize(nv);
  r.v.resize(nv);
  Eigen::VectorXd lens(c.n_v());
  if (spec.kind == EnergyKind::conformal)
    for (int j = 0; j < c.n_v(); ++j) lens(j) = polyline_length(c.slice(j), false);
  for (int j = 0; j < nv; ++j) {
    r.v(j) = (j + 0.5) * dv;
    const Eigen::MatrixXd& a = c.slice(j);
    const Eigen::MatrixXd& b = c.slice(j + 1);
    const double phi =
        spec.kind == EnergyKind::conformal ? spec.factor.value(0.5 * (lens(j) + lens(j + 1))) : 1.0;
    double acc = 0.0;
    for (int i = 0; i < nu; ++i) {
      const Eigen::RowVectorXd w = 0.5 * ((a.row(i + 1) - a.row(i)) + (b.row(i + 1) - b.row(i))) / du;
      const Eigen::RowVectorXd v = 0.5 * ((b.row(i) - a.row(i)) + (b.row(i + 1) - a.row(i + 1))) / dv;
      PointTerms p{v.squaredNorm(), normal_sq(v, w), w.norm(), 0.0};
      acc += integrand(spec, p, phi);
    }
    r.per_slice(j) = acc * du;
  }
  r.total = r.per_slice.sum() * dv;
  return r;
}

}  // namespace

double inner_product(const SampledCurve& c, const Deformation& h, const Deformation& k,
                     const EnergySpec& metric) {
  metric.validate();
  if (h.rows() != c.size() || k.rows() != c.size() || h.cols() != c.dim() || k.cols() != c.dim())
    throw InputError("inner_product: deformation sizes do not match the curve");
  if (metric.kind == EnergyKind::J || metric.kind == EnergyKind::alpha_beta)
    throw InputError(std::string("inner_product: ") + to_string(metric.kind) +
                     " is not an inner product");
  const double dt = c.dtheta();
  if (metric.kind == EnergyKind::param_H0) return (h.array() * k.array()).sum() * dt;
  const TangentFrame f = tangent_frame(c);
  if (metric.kind == EnergyKind::intermediate)
    return ((h.array() * k.array()).rowwise().sum() * f.speed.array()).sum() * dt;
  if (!c.immersed()) throw GeometryError("inner_product: curve is not immersed");
  const Deformation hn = project(f, h, Component::normal);
  const Deformation kn = project(f, k, Component::normal);
  Eigen::ArrayXd w = f.speed.array();
  if (metric.kind == EnergyKind::MM) {
    const Eigen::MatrixXd d = stencil::d1_periodic(c.points(), dt);
    const Eigen::MatrixXd hv = curvature_vector(c.points(), d, dt);
    w *= 1.0 + metric.A * hv.rowwise().squaredNorm().array();
  }
  double g = ((hn.array() * kn.array()).rowwise().sum() * w).sum() * dt;
  if (metric.kind == EnergyKind::conformal) g *= metric.factor.value(arclength(c));
  return g;
}

EnergyReport energy(const HomotopyGrid& c, const EnergySpec& spec) {
  spec.validate();
  return c.closed() ? energy_closed(c, spec) : energy_open(c, spec);
}

ScalingRatios scaling_check(const HomotopyGrid& c, double eps) {
  if (!(eps > 0.0)) throw InputError("scaling_check: eps must be positive");
  const HomotopyGrid s = scaled(c, eps);
  const double en0 = energy(c, EnergySpec::en()).total;
  const double j0 = energy(c, EnergySpec::j()).total;
  const double sc = c.scale_hint();
  if (en0 <= 1e-24 * sc * sc * sc || j0 <= 1e-24 * sc)
    throw InputError("scaling_check: base energy is zero");
  return {energy(s, EnergySpec::en()).total / en0, energy(s, EnergySpec::j()).total / j0};
}

namespace {

double wedge_sq(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  double s = 0.0;
  for (Eigen::Index p = 0; p < a.size(); ++p)
    for (Eigen::Index q = p + 1; q < a.size(); ++q) {
      const double m = a(p) * b(q) - a(q) * b(p);
      s += m * m;
    }
  return s;
}

}  // namespace

double area_swept(const HomotopyGrid& c) {
  if (c.closed()) {
    Eigen::VectorXd per(c.n_v());
    for (int j = 0; j < c.n_v(); ++j) {
      const Eigen::MatrixXd w = c.d_theta(j);
      const Eigen::MatrixXd v = c.d_v(j);
      double acc = 0.0;
      for (int i = 0; i < c.n_theta(); ++i) acc += std::sqrt(wedge_sq(v.row(i), w.row(i)));
      per(j) = acc * c.dtheta();
    }
    return trapezoid_v(per, c.dv());
  }
  const double du = c.dtheta(), dv = c.dv();
  double acc = 0.0;
  for (int j = 0; j + 1 < c.n_v(); ++j) {
    const Eigen::MatrixXd& a = c.slice(j);
    const Eigen::MatrixXd& b = c.slice(j + 1);
    for (int i = 0; i + 1 < c.n_theta(); ++i) {
      const Eigen::RowVectorXd w = 0.5 * ((a.row(i + 1) - a.row(i)) + (b.row(i + 1) - b.row(i))) / du;
      const Eigen::RowVectorXd v = 0.5 * ((b.row(i) - a.row(i)) + (b.row(i + 1) - a.row(i + 1))) / dv;
      acc += std::sqrt(wedge_sq(v, w));
    }
  }
  return acc * du * dv;
}

AreaBound area_swept_bound(const HomotopyGrid& c) {
  AreaBound b;
  b.area = area_swept(c);
  b.en = energy(c, EnergySpec::en()).total;
  const LengthProfile lp = length_profile(c);
  b.length_integral = c.closed() ? trapezoid_v(lp.l, c.dv()) : lp.l.sum() * c.dv();
  const double rhs = b.en * b.length_integral;
  b.holds = b.area * b.area <= rhs + 1e-9 * std::max(1.0, rhs);
  return b;
}

bool area_swept_bound_check(const HomotopyGrid& c) { return area_swept_bound(c).holds; }

double cross_identity_check(const Eigen::VectorXd& w, const Eigen::VectorXd& v) {
  if (w.size() != v.size()) throw InputError("cross_identity_check: dimension mismatch");
  const double w2 = w.squaredNorm();
  if (w2 == 0.0) throw InputError("cross_identity_check: W = 0");
  const Eigen::VectorXd pn = v - (v.dot(w) / w2) * w;
  const double a = pn.squaredNorm() * w2;
  const double b = v.squaredNorm() * w2 - v.dot(w) * v.dot(w);
  const double c = wedge_sq(v.transpose(), w.transpose());
  const double scale = std::max(v.squaredNorm() * w2, std::numeric_limits<double>::min());
  return std::max({std::abs(a - b), std::abs(a - c), std::abs(b - c)}) / scale;
}

namespace {

Eigen::VectorXd slice_norms(const HomotopyGrid& c, const EnergySpec& spec) {
  if (!spec.metric())
    throw InputError(std::string("path_len_energy: ") + to_string(spec.kind) + " is not a metric");
  if (!c.closed()) throw InputError("path_len_energy: closed grids only");
  return energy(c, spec).per_slice.cwiseMax(0.0).cwiseSqrt();
}

}  // namespace

PathLenEnergy path_len_energy(const HomotopyGrid& c, const EnergySpec& spec) {
  const Eigen::VectorXd f = slice_norms(c, spec);
  return {trapezoid_v(f, c.dv()), trapezoid_v(f.cwiseAbs2(), c.dv())};
}

HomotopyGrid constant_speed_reparam(const HomotopyGrid& c, const EnergySpec& spec) {
  const Eigen::VectorXd f = slice_norms(c, spec);
  const int nv = c.n_v();
  std::vector<double> s(nv, 0.0);
  for (int j = 1; j < nv; ++j) s[j] = s[j - 1] + 0.5 * c.dv() * (f(j - 1) + f(j));
  const double total = s.back();
  if (!(total > 0.0)) return c;
  std::vector<Eigen::MatrixXd> out(nv);
  out.front() = c.slice(0);
  out.back() = c.slice(nv - 1);
  for (int k = 1; k + 1 < nv; ++k) {
    const double target = total * k / (nv - 1);
    const auto it = std::lower_bound(s.begin(), s.end(), target);
    int j = std::clamp(static_cast<int>(it - s.begin()), 1, nv - 1);
    const double span = s[j] - s[j - 1];
    const double frac = span > 0.0 ? (target - s[j - 1]) / span : 0.0;
    const double v = (j - 1 + frac) * c.dv();
    out[k] = lagrange4(std::span<const Eigen::MatrixXd>(c.slices()), c.dv(), v);
  }
  return HomotopyGrid(std::move(out), c.closed());
}

double stable_lambda(const HomotopyGrid& c) {
  if (!c.closed()) throw InputError("stable_lambda: closed grids only");
  const VStarField g = vstar_calculus(c, 4);
  const double floor = 1e-12 * c.scale_hint() * c.scale_hint();
  double lambda = 0.0;
  for (int j = 0; j < g.n_v(); ++j) {
    if (!(g.M(j) > floor))
      throw StallError("stable_lambda: slice " + std::to_string(j) + " has M = " + std::to_string(g.M(j)));
    lambda = std::max(lambda, g.m.col(j).maxCoeff() / g.M(j));
  }
  return lambda;
}

HolderCheck holder_bound_check(const HomotopyGrid& c) {
  HolderCheck h;
  h.j = energy(c, EnergySpec::j()).total;
  const Eigen::VectorXd l = length_profile(c).l;
  const double rj = 0.5 * std::sqrt(std::max(0.0, h.j));
  h.max_violation = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < c.n_v(); ++a)
    for (int b = a + 1; b < c.n_v(); ++b) {
      const double lhs = std::abs(std::sqrt(l(b)) - std::sqrt(l(a)));
      const double rhs = rj * std::sqrt(c.v(b) - c.v(a));
      h.max_violation = std::max(h.max_violation, lhs - rhs);
    }
  return h;
}

}  // namespace curvespace
