#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "curvespace/altmetrics.hpp"
#include "curvespace/calculus.hpp"
#include "curvespace/counterexamples.hpp"
#include "curvespace/energies.hpp"
#include "curvespace/errors.hpp"
#include "curvespace/flows.hpp"
#include "curvespace/homotopy.hpp"
#include "curvespace/io.hpp"
#include "curvespace/levelset.hpp"

namespace cli {

using namespace curvespace;
namespace fs = std::filesystem;

namespace {

Eigen::RowVectorXd xy(double x, double y) {
  Eigen::RowVectorXd r(2);
  r << x, y;
  return r;
}

std::string numbered(const std::string& stem, int k, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%05d", k);
  return stem + buf + ext;
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create directory " + dir + ": " + ec.message());
  return fs::path(dir);
}

std::ostream& out() {
  std::cout << std::setprecision(12);
  return std::cout;
}

std::vector<Eigen::MatrixXd> strided_slices(const HomotopyGrid& c, int stride) {
  std::vector<Eigen::MatrixXd> s;
  for (int j = 0; j < c.n_v(); j += std::max(stride, 1)) s.push_back(c.slice(j));
  if ((c.n_v() - 1) % std::max(stride, 1) != 0) s.push_back(c.slice(c.n_v() - 1));
  return s;
}

// Homotopy input shared by several subcommands.
struct GridSource {
  std::string file;
  std::string preset = "trans_circle";
  std::string c0, c1;
  int nt = 256;
  int nv = 64;

  void add(CLI::App* sub) {
    sub->add_option("--homotopy", file, "grid CSV (N_theta,N_v,n[,closed] header)");
    sub->add_option("--preset", preset, "built-in homotopy when no file is given")
        ->check(CLI::IsMember({"trans_circle", "radial", "v4", "circle_ellipse", "wavy"}));
    sub->add_option("--c0", c0, "start curve (.json or .csv); linear homotopy with --c1");
    sub->add_option("--c1", c1, "end curve");
    sub->add_option("--nt", nt, "theta samples for presets and resampled curves")->check(CLI::Range(16, 1 << 20));
    sub->add_option("--nv", nv, "v nodes for presets and linear homotopies")->check(CLI::Range(3, 1 << 20));
  }

  HomotopyGrid load() const {
    if (!file.empty()) return read_grid_csv(file);
    if (!c0.empty() || !c1.empty()) {
      if (c0.empty() || c1.empty()) throw InputError("--c0 and --c1 go together");
      return linear_homotopy(resample_arclength(read_curve(c0), nt), resample_arclength(read_curve(c1), nt), nv);
    }
    if (preset == "trans_circle")
      return HomotopyGrid::from_function(nt, nv, [](double t, double v) { return xy(std::cos(t) + v, std::sin(t)); });
    if (preset == "radial")
      return HomotopyGrid::from_function(nt, nv, [](double t, double v) {
        return xy((1 + v) * std::cos(t), (1 + v) * std::sin(t));
      });
    if (preset == "v4")
      return HomotopyGrid::from_function(nt, nv, [](double t, double v) {
        const double s = std::pow(v, 4);
        return xy(s * std::cos(t), s * std::sin(t));
      });
    if (preset == "wavy")
      return HomotopyGrid::from_function(nt, nv, [](double t, double v) {
        const double r = 1.0 + 0.3 * v + 0.04 * std::cos(2 * t) * std::cos(kPi * v) + 0.03 * std::sin(3 * t) +
                         0.02 * std::cos(4 * t) * std::cos(2 * kPi * v);
        return xy(r * std::cos(t) + 0.3 * v, r * std::sin(t) - 0.2 * v * v);
      });
    return linear_homotopy(make_circle(nt), make_ellipse(nt, 2.0, 1.0), nv);
  }
};

struct SpecOptions {
  std::string kind = "en";
  double A = 0.0, alpha = 2.0, beta = 1.0, lambda = -1.0;
  std::string factor = "exp";

  void add(CLI::App* sub) {
    sub->add_option("--kind", kind, "param_h0 | intermediate | en | j | mm | alpha_beta | conformal");
    sub->add_option("--A", A, "MM weight")->check(CLI::NonNegativeNumber);
    sub->add_option("--alpha", alpha, "E_{alpha,beta} exponent alpha");
    sub->add_option("--beta", beta, "E_{alpha,beta} exponent beta");
    sub->add_option("--lambda", lambda, "conformal lambda; negative picks the stable value");
    sub->add_option("--factor", factor, "conformal factor")->check(CLI::IsMember({"exp", "length", "identity"}));
  }

  EnergySpec build(const HomotopyGrid* c) const {
    EnergySpec s = EnergySpec::of(energy_kind_from_string(kind));
    s.A = A;
    s.alpha = alpha;
    s.beta = beta;
    if (s.kind == EnergyKind::conformal) {
      if (factor == "length") s.factor = ConformalFactor::length();
      else if (factor == "identity") s.factor = ConformalFactor::identity();
      else if (lambda >= 0.0 || c == nullptr) s.factor = ConformalFactor::exp_length(std::max(lambda, 0.0));
      else s.factor = ConformalFactor::exp_length(stable_lambda(*c));
    }
    s.validate();
    return s;
  }
};

double parse_dt(const std::string& s) {
  if (s == "auto") return 0.0;
  try {
    std::size_t used = 0;
    const double dt = std::stod(s, &used);
    if (used == s.size() && dt > 0.0) return dt;
  } catch (const std::exception&) {
  }
  throw InputError("--dt must be 'auto' or a positive number, got '" + s + "'");
}

}  // namespace

void add_energy(CLI::App& app) {
  auto* sub = app.add_subcommand("energy", "path energy of a homotopy");
  auto src = std::make_shared<GridSource>();
  auto spec = std::make_shared<SpecOptions>();
  auto path = std::make_shared<std::string>();
  src->add(sub);
  spec->add(sub);
  sub->add_option("--out", *path, "also write the report here");
  sub->callback([=] {
    const HomotopyGrid c = src->load();
    const EnergyReport r = energy(c, spec->build(&c));
    out() << r.to_text();
    if (!path->empty()) write_energy_report(*path, r);
  });
}

void add_inner(CLI::App& app) {
  auto* sub = app.add_subcommand("inner", "metric inner product of two deformations of a curve");
  auto curve = std::make_shared<std::string>();
  auto h = std::make_shared<std::string>();
  auto k = std::make_shared<std::string>();
  auto spec = std::make_shared<SpecOptions>();
  sub->add_option("--curve", *curve, "curve (.json or .csv)")->required();
  sub->add_option("--def1", *h, "first deformation, CSV one vector per sample")->required();
  sub->add_option("--def2", *k, "second deformation; defaults to --def1");
  spec->add(sub);
  sub->callback([=] {
    const SampledCurve c = read_curve(*curve);
    const Deformation dh = read_points_csv(*h);
    const Deformation dk = k->empty() ? dh : read_points_csv(*k);
    out() << inner_product(c, dh, dk, spec->build(nullptr)) << '\n';
  });
}

void add_reparam(CLI::App& app) {
  auto* sub = app.add_subcommand("reparam", "reparameterize a homotopy");
  auto src = std::make_shared<GridSource>();
  auto mode = std::make_shared<std::string>("horizontal");
  auto path = std::make_shared<std::string>();
  auto svg = std::make_shared<std::string>();
  auto stride = std::make_shared<int>(8);
  src->add(sub);
  sub->add_option("--mode", *mode, "target parameterization")
      ->check(CLI::IsMember({"arclength", "horizontal", "unwind", "constant_speed"}));
  sub->add_option("--out", *path, "write the reparameterized grid CSV");
  sub->add_option("--svg", *svg, "write selected slices as SVG");
  sub->add_option("--stride", *stride, "slice stride for --svg")->check(CLI::PositiveNumber);
  sub->callback([=] {
    const HomotopyGrid c = src->load();
    HomotopyGrid r;
    if (*mode == "arclength") r = reparam_arclength(c);
    else if (*mode == "unwind") r = shift_unwind(c, optimal_unwind_shift(c));
    else if (*mode == "constant_speed") r = constant_speed_reparam(c, EnergySpec::en());
    else {
      const HorizontalResult h = reparam_horizontal(c);
      out() << "min_dtheta_phi," << h.min_psi << '\n';
      r = h.grid;
    }
    out() << "tangential_residual_before," << tangential_residual(c) << '\n'
          << "tangential_residual_after," << tangential_residual(r) << '\n'
          << "param_energy_before," << energy(c, EnergySpec::param_h0()).total << '\n'
          << "param_energy_after," << energy(r, EnergySpec::param_h0()).total << '\n'
          << "en_before," << energy(c, EnergySpec::en()).total << '\n'
          << "en_after," << energy(r, EnergySpec::en()).total << '\n';
    if (!path->empty()) write_grid_csv(*path, r);
    if (!svg->empty()) write_svg(*svg, strided_slices(r, *stride));
  });
}

void add_flow(CLI::App& app) {
  auto* sub = app.add_subcommand("flow", "curve flows and homotopy gradient flows");
  struct Opt {
    std::string kind = "conformal";
    std::string curve;
    std::string dt = "auto";
    int steps = 100;
    int dump_every = 0;
    int stride = 8;
    double A = 4.0;
    double lambda = -1.0;
    double tol = 0.0;
    bool drop_magnitude = false;
    std::string dir = "flow_out";
    GridSource src;
  };
  auto o = std::make_shared<Opt>();
  sub->add_option("--kind", o->kind, "heat | mm act on --curve, h0 | conformal on a homotopy")
      ->check(CLI::IsMember({"heat", "mm", "h0", "conformal"}));
  sub->add_option("--curve", o->curve, "curve for heat and mm (default unit circle)");
  sub->add_option("--steps", o->steps, "step count")->check(CLI::NonNegativeNumber);
  sub->add_option("--dt", o->dt, "'auto' for the CFL step, or a fixed step");
  sub->add_option("--dump-every", o->dump_every, "write CSV and SVG every k steps (0: first and last only)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--stride", o->stride, "slice stride in homotopy SVGs")->check(CLI::PositiveNumber);
  sub->add_option("--A", o->A, "MM weight")->check(CLI::NonNegativeNumber);
  sub->add_option("--lambda", o->lambda, "conformal lambda; negative picks the stable value at t = 0");
  sub->add_option("--tol", o->tol, "stop once the max displacement per step falls below this");
  sub->add_flag("--drop-magnitude", o->drop_magnitude, "conformal flow moves with G / (2 phi)");
  sub->add_option("--out", o->dir, "output directory");
  o->src.add(sub);
  sub->callback([o] {
    const double dt = parse_dt(o->dt);
    const fs::path dir = ensure_dir(o->dir);
    const auto due = [&](int k) { return k == 0 || k == o->steps || (o->dump_every > 0 && k % o->dump_every == 0); };
    std::ostream& log = out();
    if (o->kind == "heat" || o->kind == "mm") {
      SampledCurve c = o->curve.empty() ? make_circle(o->src.nt) : read_curve(o->curve);
      const bool heat = o->kind == "heat";
      double t = 0.0;
      log << "step,t,length\n";
      for (int k = 0;; ++k) {
        if (due(k)) {
          log << k << ',' << t << ',' << arclength(c) << '\n';
          write_points_csv((dir / numbered("curve", k, ".csv")).string(), c.points());
          write_svg((dir / numbered("curve", k, ".svg")).string(), {c.points()});
        }
        if (k == o->steps) break;
        const double h = dt > 0.0 ? dt : (heat ? heat_flow_dt_max(c) : mm_flow_dt_max(c, o->A));
        c = heat ? heat_flow_step(c, h) : mm_arclength_flow_step(c, o->A, h);
        t += h;
      }
      return;
    }
    FlowOptions fo;
    fo.kind = o->kind == "h0" ? FlowKind::h0 : FlowKind::conformal;
    fo.lambda = o->lambda;
    fo.dt = dt;
    fo.drop_magnitude = o->drop_magnitude;
    HomotopyFlow flow(o->src.load(), fo);
    log << "lambda," << flow.state().lambda << '\n' << "step,t,energy,displacement,min_margin\n";
    for (int k = 0;; ++k) {
      const FlowState& s = flow.state();
      if (due(k)) {
        log << k << ',' << s.t << ',' << flow.energy() << ',' << s.last_displacement << ',' << s.min_margin << '\n';
        write_grid_csv((dir / numbered("grid", k, ".csv")).string(), s.grid);
        write_svg((dir / numbered("grid", k, ".svg")).string(), strided_slices(s.grid, o->stride));
      }
      if (k == o->steps) break;
      if (k > 0 && o->tol > 0.0 && s.last_displacement < o->tol) {
        log << k << ',' << s.t << ',' << flow.energy() << ',' << s.last_displacement << ',' << s.min_margin << '\n';
        write_grid_csv((dir / numbered("grid", k, ".csv")).string(), s.grid);
        write_svg((dir / numbered("grid", k, ".svg")).string(), strided_slices(s.grid, o->stride));
        break;
      }
      flow.step();
    }
  });
}

void add_geodesic(CLI::App& app) {
  auto* sub = app.add_subcommand("geodesic", "level-set geodesic between two simple closed curves");
  struct Opt {
    std::string c0, c1, dir = "geodesic_out";
    GeodesicOptions g;
  };
  auto o = std::make_shared<Opt>();
  sub->add_option("--c0", o->c0, "start curve (.json or .csv)")->required();
  sub->add_option("--c1", o->c1, "end curve")->required();
  sub->add_option("--nx", o->g.grid.nx, "grid nodes in x")->check(CLI::Range(16, 4096));
  sub->add_option("--ny", o->g.grid.ny, "grid nodes in y")->check(CLI::Range(16, 4096));
  sub->add_option("--nv", o->g.grid.nv, "v slices")->check(CLI::Range(3, 4096));
  sub->add_option("--steps", o->g.max_steps, "step cap")->check(CLI::NonNegativeNumber);
  sub->add_option("--tol", o->g.tol, "interface displacement per step at convergence");
  sub->add_option("--lambda", o->g.grid.lambda, "negative picks the stable value at t = 0");
  sub->add_option("--band", o->g.grid.band, "narrow band half-width in cells")->check(CLI::PositiveNumber);
  sub->add_option("--reinit-every", o->g.grid.reinit_every, "steps between reinitializations")->check(CLI::PositiveNumber);
  sub->add_flag("--full-grid", o->g.grid.full_grid, "evolve every node instead of the band");
  sub->add_option("--n-theta", o->g.n_theta_out, "samples per extracted slice")->check(CLI::Range(16, 1 << 16));
  sub->add_option("--dump-every", o->g.snapshot_every, "snapshot SVGs every k steps")->check(CLI::NonNegativeNumber);
  sub->add_option("--out", o->dir, "output directory");
  sub->callback([o] {
    const fs::path dir = ensure_dir(o->dir);
    const GeodesicResult r = run_geodesic(read_curve(o->c0), read_curve(o->c1), o->g);
    std::vector<Eigen::MatrixXd> all;
    for (int k = 0; k < r.slices.size(); ++k) {
      write_svg((dir / numbered("slice", k, ".svg")).string(), r.slices.curves[k]);
      all.insert(all.end(), r.slices.curves[k].begin(), r.slices.curves[k].end());
    }
    write_svg((dir / "slices.svg").string(), all);
    for (std::size_t s = 0; s < r.snapshots.size(); ++s) {
      std::vector<Eigen::MatrixXd> snap;
      for (const auto& c : r.snapshots[s].curves) snap.insert(snap.end(), c.begin(), c.end());
      write_svg((dir / numbered("snapshot", static_cast<int>(s), ".svg")).string(), snap);
    }
    {
      std::ofstream e(dir / "energy.csv");
      e << std::setprecision(17) << "record,E_N,E_phi\n";
      for (std::size_t i = 0; i < r.energy_trace.size(); ++i)
        e << i << ',' << r.energy_trace[i] << ',' << r.conformal_trace[i] << '\n';
    }
    write_grid_csv((dir / "homotopy.csv").string(), r.homotopy);
    write_obj((dir / "surface.obj").string(), r.homotopy);
    out() << "converged," << (r.converged ? 1 : 0) << '\n'
          << "steps," << r.steps << '\n'
          << "t," << r.field.t << '\n'
          << "lambda," << r.field.lambda << '\n'
          << "margin_t0," << r.margin_t0 << '\n'
          << "residual," << r.residual << '\n'
          << "interface_rate," << r.interface_rate << '\n'
          << "endpoint_error," << r.endpoint_error << '\n'
          << "E_N_initial," << r.energy_trace.front() << '\n'
          << "E_N_final," << r.energy_trace.back() << '\n';
  });
}

void add_counterexample(CLI::App& app) {
  auto* sub = app.add_subcommand("counterexample", "energy tables for the degenerate families");
  struct Opt {
    std::string family = "zigzag";
    std::vector<int> k;
    std::vector<double> eps{0.0025, 0.05, 0.25, 0.45};
    double lambda = 1.0;
    std::string path;
  };
  auto o = std::make_shared<Opt>();
  sub->add_option("--family", o->family, "family to tabulate")
      ->check(CLI::IsMember({"winding", "tessellation", "graph_wiggle", "zigzag", "pulley", "stretch"}));
  sub->add_option("--k", o->k, "parameter list (winding k, tiles h, frequency j, teeth k, pulley h)")->delimiter(',');
  sub->add_option("--eps", o->eps, "stretch: spike widths")->delimiter(',');
  sub->add_option("--lambda", o->lambda, "stretch: spike slope");
  sub->add_option("--out", o->path, "write CSV here instead of stdout");
  sub->callback([o] {
    std::ostringstream csv;
    csv << std::setprecision(12);
    const auto ks = [&](std::vector<int> d) { return o->k.empty() ? d : o->k; };
    if (o->family == "winding") {
      csv << "k,E_N,param_H0\n";
      for (int k : ks({1, 2, 3})) {
        if (k < 0) throw InputError("winding: k must be >= 0");
        const HomotopyGrid g = winding_family(
            linear_homotopy(make_circle(256), make_ellipse(256, 2.0, 1.0), 256 * std::max(k, 1) + 1), k);
        csv << k << ',' << energy(g, EnergySpec::en()).total << ',' << energy(g, EnergySpec::param_h0()).total << '\n';
      }
    } else if (o->family == "tessellation") {
      const HomotopyGrid base = HomotopyGrid::from_function(
          33, 33,
          [](double u, double v) {
            const double b = 0.05 * std::sin(kPi * u) * std::sin(kPi * v);
            return xy(u + b, v + b * std::sin(kTwoPi * u));
          },
          false);
      csv << "h,E_2_1\n";
      for (int h : ks({1, 2, 4})) csv << h << ',' << energy(tessellate(base, h), EnergySpec::alpha_beta(2, 1)).total << '\n';
    } else if (o->family == "graph_wiggle") {
      csv << "j,E_2_1\n";
      for (int j : ks({1, 2, 4, 8, 16}))
        csv << j << ',' << energy(graph_wiggle(j, 128 * std::max(j, 1) + 1, 129), EnergySpec::alpha_beta(2, 1)).total << '\n';
    } else if (o->family == "zigzag") {
      csv << "k,phase1,phase1_bound,total\n";
      for (int k : ks({4, 8, 16, 32})) {
        if (k <= 0) throw InputError("zigzag: k must be positive");
        const ZigzagCone z = zigzag_cone(k, make_circle(32 * k), 129);
        csv << k << ',' << z.phase1 << ',' << z.phase1_bound() << ',' << z.total() << '\n';
      }
    } else if (o->family == "pulley") {
      csv << "h,param_energy,max_normal_speed,max_tangent_speed,total_length,feature_rate\n";
      for (int h : ks({2, 4, 8})) {
        const Pulley p = pulley(h);
        csv << h << ',' << p.param_energy << ',' << p.max_normal_speed << ',' << p.max_tangent_speed << ','
            << p.total_length << ',' << p.feature_rate << '\n';
      }
    } else {
      csv << "eps,lambda,E_phi,length\n";
      const EnergySpec spec = EnergySpec::conformal(ConformalFactor::length());
      for (double e : o->eps)
        csv << e << ',' << o->lambda << ',' << energy(conformal_stretch(e, o->lambda, 401, 9), spec).total << ','
            << conformal_stretch_length(e, o->lambda) << '\n';
    }
    if (o->path.empty()) std::cout << csv.str();
    else std::ofstream(o->path) << csv.str();
  });
}

void add_dirshape(CLI::App& app) {
  auto* sub = app.add_subcommand("dirshape", "direction-function lift, projection and distance");
  struct Opt {
    std::string curve, theta, other, path;
    int m = 256;
  };
  auto o = std::make_shared<Opt>();
  sub->add_option("--curve", o->curve, "curve to lift (.json or .csv)");
  sub->add_option("--theta", o->theta, "direction function CSV (s,theta) instead of --curve");
  sub->add_option("--other", o->other, "second curve; prints both distances");
  sub->add_option("--m", o->m, "arclength samples")->check(CLI::Range(16, 1 << 20));
  sub->add_option("--out", o->path, "write the projected direction function CSV");
  const auto load = [o](const std::string& file) {
    const SampledCurve r = resample_arclength(read_curve(file), o->m);
    const SampledCurve c(r.points() * (kTwoPi / polyline_length(r.points(), true)));
    return lift_direction(c);
  };
  sub->callback([o, load] {
    if (o->curve.empty() == o->theta.empty()) throw InputError("dirshape: give exactly one of --curve and --theta");
    const DirectionFunction d = o->theta.empty() ? load(o->curve) : read_dirfn_csv(o->theta);
    const ProjectResult p = dirfn_project_report(d);
    const Eigen::Vector3d r0 = dirfn_constraints(d), r1 = dirfn_constraints(p.d);
    out() << "winding," << d.winding << '\n'
          << "residual_before," << r0(0) << ',' << r0(1) << ',' << r0(2) << '\n'
          << "residual_after," << r1(0) << ',' << r1(1) << ',' << r1(2) << '\n'
          << "iterations," << p.iterations << '\n'
          << "gram_condition," << p.condition << '\n';
    if (!o->other.empty()) {
      const DirectionFunction q = dirfn_project(load(o->other));
      out() << "distance_l2," << dirfn_distance(p.d, q) << '\n'
            << "distance_quotient_shift," << dirfn_distance(p.d, q, DirDistanceMode::quotient_shift) << '\n';
    }
    if (!o->path.empty()) write_dirfn_csv(o->path, p.d);
  });
}

void add_hausdorff(CLI::App& app) {
  auto* sub = app.add_subcommand("hausdorff", "Hausdorff distance or path length of point sets");
  auto files = std::make_shared<std::vector<std::string>>();
  sub->add_option("sets", *files, "two or more point sets (.csv points or .json curves)")->required();
  sub->callback([files] {
    if (files->size() < 2) throw InputError("hausdorff: need at least two sets");
    std::vector<Eigen::MatrixXd> sets;
    for (const auto& f : *files)
      sets.push_back(f.size() > 5 && f.substr(f.size() - 5) == ".json" ? read_curve(f).points() : read_points_csv(f));
    if (sets.size() == 2) out() << hausdorff_distance(sets[0], sets[1]) << '\n';
    else out() << hausdorff_path_length(sets) << '\n';
  });
}

void add_selfcheck(CLI::App& app) {
  auto* sub = app.add_subcommand("selfcheck", "commutator, identity and gradient consistency suites");
  auto seed = std::make_shared<std::uint64_t>(1);
  sub->add_option("--seed", *seed, "perturbation seed");
  sub->callback([seed] {
    GridSource src;
    src.preset = "wavy";
    const auto grid = [&](int nt, int nv) {
      src.nt = nt;
      src.nv = nv;
      return reparam_arclength(src.load());
    };
    const HomotopyGrid a = grid(256, 32), b = grid(512, 64);
    std::ostream& log = out();
    const auto report = [&](const std::string& name, double value, bool ok) {
      log << (ok ? "PASS " : "FAIL ") << name << ' ' << value << '\n';
      if (!ok) g_selfcheck_failed = true;
    };
    const CommutatorResiduals ca = commutator_check(a, 3, *seed), cb = commutator_check(b, 3, *seed);
    for (auto [x, y, name] : {std::tuple{ca.vstar_s, cb.vstar_s, "commutator_vstar_s_ratio"},
                              {ca.v_s, cb.v_s, "commutator_v_s_ratio"},
                              {ca.int_v, cb.int_v, "commutator_int_v_ratio"},
                              {ca.l_vstar, cb.l_vstar, "commutator_l_vstar_ratio"}})
      report(name, x / y, x / y >= 3.5 && x / y <= 4.5);
    const IdentityResiduals ia = identity_check(a), ib = identity_check(b);
    for (int k = 0; k < 6; ++k)
      report("identity_" + std::to_string(k + 1), ib.r[k], ib.r[k] < 1e-8 || (ib.r[k] < ia.r[k] && ib.r[k] < 0.1));
    report("planar_reduction", planar_reduction_check(a), planar_reduction_check(a) < 1e-8);
    const HomotopyGrid g = grid(128, 64);
    const double eh = energy_derivative_check(g, FlowKind::h0, 5, 1e-5, *seed);
    const double ec = energy_derivative_check(g, FlowKind::conformal, 5, 1e-5, *seed);
    report("gradient_h0", eh, eh < 1e-3);
    report("gradient_conformal", ec, ec < 1e-3);
    const double par = conformal_parallelism_check(make_ellipse(256, 1.5, 1.0), ConformalFactor::exp_length(0.3));
    report("conformal_parallel", par, par < 1e-8);
  });
}

}  // namespace cli
