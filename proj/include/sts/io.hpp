#pragma once

#include <json.hpp>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sts/amr.hpp"
#include "sts/grid.hpp"
#include "sts/monotone.hpp"

namespace sts {

// Header of the diagnostics series CSV, in column order.
inline constexpr const char* kSeriesHeader = "time,value,half_width,dvdt,cone_slope,level,time_to_end";

// "x,u" then one node per line, 17 significant digits.
void write_snapshot_csv(std::ostream& out, const Field& f);
void write_snapshot_csv(const std::string& path, const Field& f);

void write_series_csv(std::ostream& out, std::span<const DiagnosticsRow> rows);
void write_series_csv(const std::string& path, std::span<const DiagnosticsRow> rows);

// Parses a series CSV written by write_series_csv.
std::vector<DiagnosticsRow> read_series_csv(const std::string& path);

nlohmann::json report_json(const RunReport& report);

/**
 * Writes report.json, series.csv and snapshots/snapshot_NNN.csv under dir
 * (created when missing). Throws IoError naming the failing path.
 */
void write_run_outputs(const RunReport& report, const std::string& dir);

nlohmann::json certificate_json(const monotone::Certificate& cert);
nlohmann::json certificates_json(std::span<const monotone::Certificate> certs);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace sts
