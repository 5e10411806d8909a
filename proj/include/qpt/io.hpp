#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "qpt/fitscale.hpp"
#include "qpt/series.hpp"

namespace qpt::io {

// 17-significant-digit scientific notation; round-trips every double exactly
std::string float17(double x);

// CSV layout: '#'-prefixed "key: value" metadata lines, a "t,M,lnM" header
// row, then one row per point with float17 fields.  LF line endings; no
// volatile fields, so identical inputs serialize byte-identically.
void write_series_csv(std::ostream& out, const SurvivalSeries& series);
void write_series_csv_file(const std::string& path, const SurvivalSeries& series);
std::string series_csv_string(const SurvivalSeries& series);

// parses the body (and selected metadata) back; used by the fit subcommand
SurvivalSeries read_series_csv_file(const std::string& path);

// FNV-1a over a canonical config string
std::uint64_t fnv1a64(const std::string& data);

std::string fit_report_json(const fitscale::FitReport& report);

}  // namespace qpt::io
