#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "curvespace/altmetrics.hpp"
#include "curvespace/curvecore.hpp"
#include "curvespace/energies.hpp"
#include "curvespace/homotopy.hpp"

namespace curvespace {

// {"n": dim, "points": [[x, y], ...]}, theta order, no closing duplicate.
SampledCurve curve_from_json(const std::string& text);
std::string curve_to_json(const SampledCurve& c);
SampledCurve read_curve(const std::string& path);  // .json or .csv by extension
void write_curve_json(const std::string& path, const SampledCurve& c);

// One point per row; an optional non-numeric header line is skipped on read.
Eigen::MatrixXd read_points_csv(const std::string& path);
void write_points_csv(const std::string& path, const Eigen::MatrixXd& p);

// Header "N_theta,N_v,n,closed" then its values, then rows ordered v-major.
HomotopyGrid read_grid_csv(const std::string& path);
void write_grid_csv(const std::string& path, const HomotopyGrid& c);
void write_grid_csv(std::ostream& os, const HomotopyGrid& c);

// Rows "s,theta".
DirectionFunction read_dirfn_csv(const std::string& path);
void write_dirfn_csv(const std::string& path, const DirectionFunction& d);

void write_energy_report(const std::string& path, const EnergyReport& r);

// One polyline (polygon when closed) per entry; viewBox is the data bounds
// plus 5% margin. Only the first two coordinates are drawn.
std::string svg_document(const std::vector<Eigen::MatrixXd>& polylines, bool closed = true);
void write_svg(const std::string& path, const std::vector<Eigen::MatrixXd>& polylines, bool closed = true);

// Triangle mesh of a planar homotopy as the surface (x, y, v).
void write_obj(const std::string& path, const HomotopyGrid& c);

}  // namespace curvespace
