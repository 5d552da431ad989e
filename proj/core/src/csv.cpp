#include "mse/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <ostream>

#include "mse/errors.hpp"

namespace mse::csv {

std::string number(double v) {
  char buf[32];
  // %.17g always round-trips; try the shorter form first.
  std::snprintf(buf, sizeof buf, "%.15g", v);
  if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_header(std::ostream& os, const std::string& kind, const std::vector<std::string>& columns) {
  os << "# mse-" << kind << " v" << schema_version << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
}

void write_dofs(std::ostream& os, const DiscreteForm& form, double time) {
  const Mesh2D& mesh = *form.mesh;
  write_header(os, "dofs", {"degree", "p", "nx", "ny", "time", "index", "value"});
  const std::string prefix = std::to_string(form.degree) + "," + std::to_string(mesh.order()) + "," +
                             std::to_string(mesh.nx()) + "," + std::to_string(mesh.ny()) + "," +
                             number(time) + ",";
  for (Eigen::Index i = 0; i < form.coeffs.size(); ++i) {
    os << prefix << i << ',' << number(form.coeffs[i]) << '\n';
  }
}

void write_field(std::ostream& os, const DiscreteForm& form, int points_per_direction, double time) {
  if (points_per_direction < 1) throw InvalidArgument("field grid needs at least one point per direction");
  const int n = points_per_direction;
  std::vector<double> ref(n);
  for (int a = 0; a < n; ++a) ref[a] = -1.0 + (2.0 * a + 1.0) / n;
  const FieldSamples s = reconstruct(form, ref);
  std::vector<std::string> cols{"element", "time", "x", "y"};
  if (s.components == 2) {
    cols.insert(cols.end(), {"value_x", "value_y"});
  } else {
    cols.push_back("value");
  }
  write_header(os, "field", cols);
  const std::string t = number(time);
  for (Eigen::Index r = 0; r < s.values.rows(); ++r) {
    os << r / (n * n) << ',' << t << ',' << number(s.positions[r].x) << ',' << number(s.positions[r].y);
    for (int k = 0; k < s.components; ++k) os << ',' << number(s.values(r, k));
    os << '\n';
  }
}

void write_mesh_summary(std::ostream& os, const Mesh2D& mesh) {
  os << "# mse-mesh v" << schema_version << " nx=" << mesh.nx() << " ny=" << mesh.ny() << " p=" << mesh.order()
     << " nodes=" << mesh.complex().node_count() << " edges=" << mesh.complex().edge_count()
     << " faces=" << mesh.complex().face_count() << " distortion=" << number(mesh.distortion()) << '\n';
  os << "element,ex,ey,x0,y0,x1,y1,x2,y2,x3,y3\n";
  constexpr double corner[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  for (int ey = 0; ey < mesh.ny(); ++ey) {
    for (int ex = 0; ex < mesh.nx(); ++ex) {
      const int e = mesh.complex().element(ex, ey);
      os << e << ',' << ex << ',' << ey;
      for (const auto& c : corner) {
        const Point2 pt = mesh.element_map(e)(c[0], c[1]);
        os << ',' << number(pt.x) << ',' << number(pt.y);
      }
      os << '\n';
    }
  }
}

HistoryWriter::HistoryWriter(std::ostream& os) : os_(os) {
  write_header(os_, "history", {"step", "t", "l2_error", "mass_drift"});
}

void HistoryWriter::row(long step, double t, double l2_error, double mass_drift) {
  os_ << step << ',' << number(t) << ',' << number(l2_error) << ',' << number(mass_drift) << '\n';
}

TableWriter::TableWriter(std::ostream& os, const std::string& kind, std::vector<std::string> columns)
    : os_(os), width_(columns.size()) {
  write_header(os_, kind, columns);
}

void TableWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(number(v));
  row(cells);
}

void TableWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw DimensionMismatch("table row width");
  for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
  os_ << '\n';
}

void write_manifest(const std::filesystem::path& path, const std::map<std::string, std::string>& entries) {
  auto os = open_output(path);
  os << "# mse-manifest v" << schema_version << '\n';
  for (const auto& [k, v] : entries) os << k << " = " << v << '\n';
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  return os;
}

}  // namespace mse::csv
