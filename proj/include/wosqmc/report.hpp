#pragma once

// CSV and JSON products of studies and probes. Numbers are written with 17
// significant digits so files round-trip exactly.

#include <filesystem>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "wosqmc/experiments.hpp"
#include "wosqmc/minkprobe.hpp"

namespace wosqmc {

std::string format_number(double x);

/// example,method,n,replicate,estimate
void write_estimates_csv(std::ostream& out, const StudyTable& table);

/// method,n,variance,mse (mse empty without an exact solution)
void write_variance_csv(std::ostream& out, const std::vector<CellStats>& cells);

/// Reads a variance CSV back. Error("parse-error") with the line number on
/// malformed rows, Error("missing-data-file") when unreadable.
std::vector<CellStats> read_variance_csv(const std::filesystem::path& path);

/// k,m,flagged,total,volume_estimate
void write_probe_csv(std::ostream& out, const std::vector<ProbeResult>& rows);

nlohmann::json fit_to_json(const RegressionFit& fit);
RegressionFit fit_from_json(const nlohmann::json& j);

/// {"fits": [...]} with one entry per method.
nlohmann::json fits_document(const std::vector<RegressionFit>& fits);

/// Fits listed in a fits document or a run summary. Error("config-error") when
/// the file has none, Error("missing-data-file") when unreadable.
std::vector<RegressionFit> load_fits(const std::filesystem::path& path);

}  // namespace wosqmc
