#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlds/attractor.hpp"
#include "nlds/dissipativity.hpp"
#include "nlds/grid.hpp"
#include "nlds/timechange.hpp"
#include "nlds/trajectory.hpp"

namespace nlds {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Long form, header `stamp,x,value`, one row per stamp and interior node.
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);
/// Header `x,theta`.
void write_theta_csv(const GridFunction& theta, const std::filesystem::path& path);
/// Header `t,alpha`, one row per knot.
void write_timechange_csv(const TimeChange& map, const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Numeric CSV reader for the files above.
CsvTable read_csv(const std::filesystem::path& path);

/// Writes `j` indented by two spaces with a trailing newline.
void write_json(const nlohmann::json& j, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

/// Creates the directory (and parents) if needed.
void ensure_directory(const std::filesystem::path& dir);

nlohmann::json trajectory_summary(const Trajectory& traj);
nlohmann::json dissipativity_json(const DissipativityReport& report);
nlohmann::json containment_json(const ContainmentReport& report);

}  // namespace nlds
