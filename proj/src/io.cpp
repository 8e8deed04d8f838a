#include "sts/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sts/errors.hpp"

namespace sts {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

void check(const std::ofstream& out, const std::string& path) {
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace

void write_snapshot_csv(std::ostream& out, const Field& f) {
  out << "x,u\n";
  const Grid1D& g = f.grid();
  for (std::size_t i = 0; i < f.size(); ++i) out << num(g.x(i)) << ',' << num(f.value(i)) << '\n';
}

void write_snapshot_csv(const std::string& path, const Field& f) {
  auto out = open_out(path);
  write_snapshot_csv(out, f);
  out.flush();
  check(out, path);
}

void write_series_csv(std::ostream& out, std::span<const DiagnosticsRow> rows) {
  out << kSeriesHeader << '\n';
  for (const auto& r : rows) {
    out << num(r.time) << ',' << num(r.value) << ',' << num(r.half_width) << ',' << num(r.dvdt) << ','
        << num(r.cone_slope) << ',' << r.level << ',' << num(r.time_to_end) << '\n';
  }
}

void write_series_csv(const std::string& path, std::span<const DiagnosticsRow> rows) {
  auto out = open_out(path);
  write_series_csv(out, rows);
  out.flush();
  check(out, path);
}

std::vector<DiagnosticsRow> read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kSeriesHeader) throw IoError("'" + path + "': unexpected series header");
  std::vector<DiagnosticsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw IoError("'" + path + "': expected 7 columns in '" + line + "'");
    auto d = [](const std::string& c) { return std::strtod(c.c_str(), nullptr); };
    DiagnosticsRow r;
    r.time = d(cells[0]);
    r.value = d(cells[1]);
    r.half_width = d(cells[2]);
    r.dvdt = d(cells[3]);
    r.cone_slope = d(cells[4]);
    r.level = std::stoi(cells[5]);
    r.time_to_end = d(cells[6]);
    rows.push_back(r);
  }
  return rows;
}

nlohmann::json report_json(const RunReport& r) {
  using nlohmann::json;
  json j;
  j["format_version"] = 1;
  j["problem"] = std::string(to_string(r.config.problem));
  j["integrator"] = std::string(to_string(r.config.integrator));
  j["scheme"] = r.scheme;
  j["termination"] = std::string(to_string(r.termination));
  j["success"] = is_success(r.termination);
  j["message"] = r.message;
  j["final_time"] = r.final_time.hi;
  j["final_time_lo"] = r.final_time.lo;
  j["final_value"] = r.final_value;
  j["steps"] = r.steps;
  j["rejected_steps"] = r.rejected_steps;
  j["rhs_evaluations"] = r.rhs_evaluations;
  j["wall_seconds"] = r.wall_seconds;
  j["refinement_count"] = r.refinements.size();
  j["final_nodes"] = r.final_field ? r.final_field->size() : 0;
  json sched = json::array();
  for (const auto& e : r.schedule) sched.push_back({{"step", e.step}, {"time", e.time}, {"s", e.s}, {"dt", e.dt}});
  j["schedule"] = sched;
  json refs = json::array();
  for (const auto& e : r.refinements) {
    refs.push_back({{"step", e.step},
                    {"time", e.time},
                    {"trigger_value", e.trigger_value},
                    {"level", e.level},
                    {"nodes", e.nodes},
                    {"s", e.s},
                    {"dt", e.dt}});
  }
  j["refinements"] = refs;
  json snaps = json::array();
  for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
    char name[48];
    std::snprintf(name, sizeof name, "snapshots/snapshot_%03zu.csv", i);
    snaps.push_back({{"time", r.snapshots[i].time}, {"value", r.snapshots[i].value}, {"file", name}});
  }
  j["snapshots"] = snaps;
  j["series_file"] = "series.csv";
  j["config"] = format_config(r.config);
  return j;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  out.flush();
  check(out, path);
}

void write_run_outputs(const RunReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(fs::path(dir) / "snapshots", ec);
  if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
  write_series_csv((fs::path(dir) / "series.csv").string(), report.series);
  for (std::size_t i = 0; i < report.snapshots.size(); ++i) {
    char name[48];
    std::snprintf(name, sizeof name, "snapshot_%03zu.csv", i);
    write_snapshot_csv((fs::path(dir) / "snapshots" / name).string(), report.snapshots[i].field);
  }
  write_json((fs::path(dir) / "report.json").string(), report_json(report));
}

nlohmann::json certificate_json(const monotone::Certificate& c) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& x : c.samples) samples.push_back(monotone::to_string(x));
  return {{"family", std::string(to_string(c.family))},
          {"s", c.s},
          {"degenerate", c.degenerate},
          {"monotone", c.monotone},
          {"consistent", c.consistent},
          {"min_coefficient", monotone::to_string(c.min_coefficient)},
          {"min_offset", c.min_offset},
          {"min_x", monotone::to_string(c.min_x)},
          {"samples", samples}};
}

nlohmann::json certificates_json(std::span<const monotone::Certificate> certs) {
  nlohmann::json list = nlohmann::json::array();
  bool all = true;
  for (const auto& c : certs) {
    list.push_back(certificate_json(c));
    all = all && c.monotone && c.consistent;
  }
  return {{"format_version", 1}, {"all_monotone", all}, {"certificates", list}};
}

}  // namespace sts
