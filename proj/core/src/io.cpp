#include "nlds/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "nlds/error.hpp"

namespace nlds {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error("cannot format number");
  return {buf, end};
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open file for writing", path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed", path.string());
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "stamp,x,value\n";
  for (std::size_t s = 0; s < traj.size(); ++s) {
    const auto& u = traj.states()[s];
    const std::string stamp = format_double(traj.stamps()[s]);
    for (std::size_t i = 0; i < u.size(); ++i) {
      out << stamp << ',' << format_double(u.grid().x(i)) << ',' << format_double(u[i]) << '\n';
    }
  }
  finish(out, path);
}

void write_theta_csv(const GridFunction& theta, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "x,theta\n";
  for (std::size_t i = 0; i < theta.size(); ++i) {
    out << format_double(theta.grid().x(i)) << ',' << format_double(theta[i]) << '\n';
  }
  finish(out, path);
}

void write_timechange_csv(const TimeChange& map, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "t,alpha\n";
  for (const auto& k : map.knots()) out << format_double(k.t) << ',' << format_double(k.alpha) << '\n';
  finish(out, path);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for reading", path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError("missing CSV header", path.string());
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) table.header.push_back(cell);
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p <= end) {
      const char* comma = std::find(p, end, ',');
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(p, comma, v);
      if (ec != std::errc{} || ptr != comma) {
        throw IoError("malformed number on line " + std::to_string(lineno), path.string());
      }
      row.push_back(v);
      p = comma + 1;
    }
    if (row.size() != table.header.size()) {
      throw IoError("wrong column count on line " + std::to_string(lineno), path.string());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_json(const json& j, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file for reading", path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error&) {
    throw IoError("malformed JSON", path.string());
  }
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create directory", dir.string());
}

namespace {

/// JSON has no infinities; they become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json trajectory_summary(const Trajectory& traj) {
  json stamps = json::array(), l2 = json::array(), h10 = json::array(), linf = json::array(),
       coeff = json::array();
  for (std::size_t s = 0; s < traj.size(); ++s) {
    const auto& d = traj.diagnostics()[s];
    stamps.push_back(traj.stamps()[s]);
    l2.push_back(num(d.l2));
    h10.push_back(num(d.h10));
    linf.push_back(num(d.linf));
    coeff.push_back(num(d.coeff));
  }
  return {{"schema_version", 1}, {"stamps", stamps}, {"l2", l2},
          {"h10", h10},          {"linf", linf},     {"coeff", coeff}};
}

json dissipativity_json(const DissipativityReport& r) {
  const auto& d = r.conditions;
  json j = {
      {"schema_version", 1},
      {"omega", d.omega},
      {"omega_discrete", d.omega_discrete},
      {"d_lhs", d.d_lhs},
      {"d_lhs_derived", d.d_lhs_derived},
      {"d_holds", d.d_holds},
      {"d_holds_derived", d.derived_holds},
      {"c0", r.constants.c0},
      {"c1", num(r.constants.c1)},
      {"nu_lo", r.constants.nu_lo},
      {"nu_hi", r.constants.nu_hi},
      {"s_holds", r.s_check.holds},
      {"s_worst_margin", num(r.s_check.worst_margin)},
      {"s_witness", r.s_check.witness},
      {"k_abs", opt(r.k_abs)},
      {"c1_star_best", r.c1_star_best},
      {"c1_star_worst", r.c1_star_worst},
  };
  j["diagnostics"] = r.diagnostics;
  if (r.theta) {
    const auto& th = *r.theta;
    double mx = 0.0;
    for (std::size_t i = 0; i < th.size(); ++i) mx = std::max(mx, th[i]);
    j["theta_max"] = mx;
  } else {
    j["theta_max"] = nullptr;
  }
  return j;
}

json containment_json(const ContainmentReport& r) {
  return {{"violation_all", num(r.violation_all)},
          {"violation_window", num(r.violation_window)},
          {"violation_after", num(r.violation_after)},
          {"violation_omega", num(r.violation_omega)},
          {"omega_clusters", r.omega_clusters}};
}

}  // namespace nlds
