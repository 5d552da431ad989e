#pragma once

// CSV outputs consumed by the plotting scripts. Every file starts with one
// comment line "# mse-<kind> v<version>" naming its schema; the next line
// holds the column names.

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "mse/forms.hpp"

namespace mse::csv {

inline constexpr int schema_version = 1;

/// Writes "# mse-<kind> v1" and the column line.
void write_header(std::ostream& os, const std::string& kind, const std::vector<std::string>& columns);

/// Shortest round-trip text for a double.
std::string number(double v);

/// DOF snapshot: degree,p,nx,ny,time,index,value; one row per global k-cell.
void write_dofs(std::ostream& os, const DiscreteForm& form, double time);
/// Reconstructed field on a tensor grid: element,x,y,value (2-forms and
/// 0-forms) or element,x,y,value_x,value_y (1-forms).
void write_field(std::ostream& os, const DiscreteForm& form, int points_per_direction, double time);
/// Element corners: element,ex,ey,x0,y0,x1,y1,x2,y2,x3,y3 (counter-clockwise).
void write_mesh_summary(std::ostream& os, const Mesh2D& mesh);

/// Streaming writer for step,t,l2_error,mass_drift.
class HistoryWriter {
 public:
  explicit HistoryWriter(std::ostream& os);
  void row(long step, double t, double l2_error, double mass_drift);

 private:
  std::ostream& os_;
};

/// Generic numeric table with a named schema.
class TableWriter {
 public:
  TableWriter(std::ostream& os, const std::string& kind, std::vector<std::string> columns);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& os_;
  std::size_t width_;
};

/// key = value lines, keys sorted.
void write_manifest(const std::filesystem::path& path, const std::map<std::string, std::string>& entries);

/// Opens a file for writing, creating parent directories; throws Error on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace mse::csv
