#include "curvespace/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "curvespace/errors.hpp"

namespace curvespace {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path + " for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path + " for writing");
  out << std::setprecision(17);
  return out;
}

std::vector<double> parse_row(const std::string& line, const std::string& where) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    try {
      row.push_back(std::stod(cell, &used));
    } catch (const std::exception&) {
      throw InputError(where + ": bad number '" + cell + "'");
    }
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
    if (used != cell.size()) throw InputError(where + ": bad number '" + cell + "'");
  }
  return row;
}

bool is_header(const std::string& line) {
  const auto it = std::find_if(line.begin(), line.end(), [](char c) { return !std::isspace(static_cast<unsigned char>(c)); });
  return it != line.end() && std::isalpha(static_cast<unsigned char>(*it));
}

std::vector<std::vector<double>> read_rows(std::istream& in, const std::string& where) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (first && is_header(line)) {
      first = false;
      continue;
    }
    first = false;
    rows.push_back(parse_row(line, where));
  }
  return rows;
}

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows, std::size_t begin, std::size_t end,
                          const std::string& where) {
  if (begin >= end) throw InputError(where + ": no data rows");
  const std::size_t cols = rows[begin].size();
  Eigen::MatrixXd m(end - begin, cols);
  for (std::size_t r = begin; r < end; ++r) {
    if (rows[r].size() != cols) throw InputError(where + ": ragged row " + std::to_string(r + 1));
    for (std::size_t c = 0; c < cols; ++c) m(r - begin, c) = rows[r][c];
  }
  return m;
}

void write_rows(std::ostream& os, const Eigen::MatrixXd& p) {
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index k = 0; k < p.cols(); ++k) os << (k ? "," : "") << p(i, k);
    os << '\n';
  }
}

std::string axis_names(Eigen::Index n) {
  static const char* names[] = {"x", "y", "z"};
  std::string h;
  for (Eigen::Index k = 0; k < n; ++k) h += (k ? "," : "") + (k < 3 ? std::string(names[k]) : "x" + std::to_string(k));
  return h;
}

}  // namespace

SampledCurve curve_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("curve json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array())
    throw InputError("curve json: missing \"points\" array");
  const auto& pts = j["points"];
  if (pts.empty()) throw InputError("curve json: no points");
  const std::size_t n = j.contains("n") ? j["n"].get<std::size_t>() : pts.front().size();
  if (n < 2) throw InputError("curve json: dimension must be at least 2");
  Eigen::MatrixXd p(pts.size(), n);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!pts[i].is_array() || pts[i].size() != n)
      throw InputError("curve json: point " + std::to_string(i) + " does not have " + std::to_string(n) + " coordinates");
    for (std::size_t k = 0; k < n; ++k) p(i, k) = pts[i][k].get<double>();
  }
  if (p.rows() < 3) throw InputError("curve json: need at least 3 points");
  return SampledCurve(p);
}

std::string curve_to_json(const SampledCurve& c) {
  nlohmann::json j;
  j["n"] = c.dim();
  j["points"] = nlohmann::json::array();
  for (int i = 0; i < c.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < c.dim(); ++k) row.push_back(c.points()(i, k));
    j["points"].push_back(row);
  }
  return j.dump() + "\n";
}

SampledCurve read_curve(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    const Eigen::MatrixXd p = read_points_csv(path);
    if (p.rows() < 3 || p.cols() < 2) throw InputError(path + ": need at least 3 points in 2 or more dimensions");
    return SampledCurve(p);
  }
  std::ifstream in = open_in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return curve_from_json(ss.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_curve_json(const std::string& path, const SampledCurve& c) { open_out(path) << curve_to_json(c); }

Eigen::MatrixXd read_points_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  const auto rows = read_rows(in, path);
  return to_matrix(rows, 0, rows.size(), path);
}

void write_points_csv(const std::string& path, const Eigen::MatrixXd& p) {
  std::ofstream out = open_out(path);
  out << axis_names(p.cols()) << '\n';
  write_rows(out, p);
}

HomotopyGrid read_grid_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  const auto rows = read_rows(in, path);
  if (rows.empty() || rows[0].size() < 3 || rows[0].size() > 4) throw InputError(path + ": missing N_theta,N_v,n header");
  const auto nt = static_cast<long>(rows[0][0]), nv = static_cast<long>(rows[0][1]), n = static_cast<long>(rows[0][2]);
  const bool closed = rows[0].size() < 4 || rows[0][3] != 0.0;
  if (nt < 3 || nv < 2 || n < 2) throw InputError(path + ": bad grid sizes");
  if (static_cast<long>(rows.size()) - 1 != nt * nv)
    throw InputError(path + ": expected " + std::to_string(nt * nv) + " rows, found " + std::to_string(rows.size() - 1));
  const Eigen::MatrixXd all = to_matrix(rows, 1, rows.size(), path);
  if (all.cols() != n) throw InputError(path + ": rows do not have " + std::to_string(n) + " columns");
  std::vector<Eigen::MatrixXd> slices;
  for (long j = 0; j < nv; ++j) slices.push_back(all.middleRows(j * nt, nt));
  return HomotopyGrid(std::move(slices), closed);
}

void write_grid_csv(std::ostream& os, const HomotopyGrid& c) {
  os << "N_theta,N_v,n,closed\n" << c.n_theta() << ',' << c.n_v() << ',' << c.dim() << ',' << (c.closed() ? 1 : 0) << '\n';
  for (const auto& s : c.slices()) write_rows(os, s);
}

void write_grid_csv(const std::string& path, const HomotopyGrid& c) {
  std::ofstream out = open_out(path);
  write_grid_csv(out, c);
}

DirectionFunction read_dirfn_csv(const std::string& path) {
  const Eigen::MatrixXd m = read_points_csv(path);
  if (m.cols() != 2) throw InputError(path + ": expected columns s,theta");
  return make_direction_function(m.col(1));
}

void write_dirfn_csv(const std::string& path, const DirectionFunction& d) {
  std::ofstream out = open_out(path);
  out << "s,theta\n";
  for (Eigen::Index k = 0; k < d.theta.size(); ++k) out << (k + 0.5) * d.ds() << ',' << d.theta(k) << '\n';
}

void write_energy_report(const std::string& path, const EnergyReport& r) { open_out(path) << r.to_text(); }

std::string svg_document(const std::vector<Eigen::MatrixXd>& polylines, bool closed) {
  double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
  for (const auto& p : polylines) {
    if (p.cols() < 2) throw InputError("svg: polylines need at least 2 coordinates");
    for (int k = 0; k < 2; ++k)
      if (p.rows() > 0) {
        lo[k] = std::min(lo[k], p.col(k).minCoeff());
        hi[k] = std::max(hi[k], p.col(k).maxCoeff());
      }
  }
  if (lo[0] > hi[0]) {
    lo[0] = lo[1] = 0.0;
    hi[0] = hi[1] = 1.0;
  }
  const double w0 = std::max(hi[0] - lo[0], 1e-12), h0 = std::max(hi[1] - lo[1], 1e-12);
  const double mx = 0.05 * w0, my = 0.05 * h0;
  const double x0 = lo[0] - mx, w = w0 + 2 * mx, h = h0 + 2 * my;
  const double stroke = 0.004 * std::max(w, h);
  std::ostringstream os;
  os << std::setprecision(9);
  // Drawn with y up.
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << x0 << ' ' << -(hi[1] + my) << ' ' << w << ' ' << h
     << "\">\n";
  for (const auto& p : polylines) {
    os << "  <" << (closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\"black\" stroke-width=\"" << stroke
       << "\" points=\"";
    for (Eigen::Index i = 0; i < p.rows(); ++i) os << (i ? " " : "") << p(i, 0) << ',' << -p(i, 1);
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_svg(const std::string& path, const std::vector<Eigen::MatrixXd>& polylines, bool closed) {
  open_out(path) << svg_document(polylines, closed);
}

void write_obj(const std::string& path, const HomotopyGrid& c) {
  if (c.dim() != 2) throw InputError("write_obj: planar homotopies only");
  std::ofstream out = open_out(path);
  const int nt = c.n_theta(), nv = c.n_v();
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nt; ++i) out << "v " << c.at(i, j)(0) << ' ' << c.at(i, j)(1) << ' ' << c.v(j) << '\n';
  const int ncols = c.closed() ? nt : nt - 1;
  for (int j = 0; j + 1 < nv; ++j)
    for (int i = 0; i < ncols; ++i) {
      const int a = j * nt + i + 1, b = j * nt + (i + 1) % nt + 1, d = a + nt, e = b + nt;
      out << "f " << a << ' ' << b << ' ' << e << '\n' << "f " << a << ' ' << e << ' ' << d << '\n';
    }
}

}  // namespace curvespace
