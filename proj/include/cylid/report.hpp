#pragma once

// Table rendering. The CSV keeps raw precision plus an explicit trailing flags
// column; the markdown mirrors the reference layout (6 columns, parameters
// rounded to 2 decimals), with flagged rows marked by a '*' on the method name
// and explained in footnotes below the table.

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cylid/benchmark.hpp"
#include "cylid/csv_io.hpp"

namespace cylid {

namespace detail {

inline std::string format_time(double seconds) {
  char buf[48];
  if (seconds < 1e-3) std::snprintf(buf, sizeof(buf), "%.0f us", seconds * 1e6);
  else if (seconds < 1.0) std::snprintf(buf, sizeof(buf), "%.1f ms", seconds * 1e3);
  else std::snprintf(buf, sizeof(buf), "%.2f s", seconds);
  return buf;
}

// round to 2 decimals, then print without trailing zeros (5 -> "5", 0.5 -> "0.5")
inline std::string format_rounded(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", std::round(v * 100.0) / 100.0);
  return buf;
}

}  // namespace detail

inline constexpr const char* kRecordCsvHeader = "method,m2,m3,neg_s3z,I,time_s,flags";

inline std::string records_to_csv(const std::vector<EstimateRecord>& records) {
  if (records.empty()) throw std::invalid_argument("records_to_csv: no records");
  std::ostringstream out;
  out << kRecordCsvHeader << "\n";
  for (const auto& r : records) {
    out << r.method << "," << detail::format_full(r.m2) << "," << detail::format_full(r.m3)
        << "," << detail::format_full(r.neg_s3z) << "," << detail::format_full(r.inertia) << ",";
    if (r.seconds) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.9g", *r.seconds);
      out << buf;
    }
    out << "," << r.flags << "\n";
  }
  return out.str();
}

inline std::vector<EstimateRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != kRecordCsvHeader)
    throw std::runtime_error("records_from_csv: unexpected header");
  std::vector<EstimateRecord> records;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    // flags may contain commas (error messages), so split only the first 6 cells
    std::vector<std::string> cells;
    std::size_t pos = 0;
    for (int i = 0; i < 6; ++i) {
      const auto comma = line.find(',', pos);
      if (comma == std::string::npos)
        throw std::runtime_error("records_from_csv: expected 7 columns");
      cells.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    cells.push_back(detail::trim(line.substr(pos)));
    EstimateRecord r;
    r.method = cells[0];
    r.m2 = detail::parse_double(cells[1], "records csv");
    r.m3 = detail::parse_double(cells[2], "records csv");
    r.neg_s3z = detail::parse_double(cells[3], "records csv");
    r.inertia = detail::parse_double(cells[4], "records csv");
    if (!cells[5].empty()) r.seconds = detail::parse_double(cells[5], "records csv");
    r.flags = cells[6];
    records.push_back(r);
  }
  if (records.empty()) throw std::runtime_error("records_from_csv: no records");
  return records;
}

inline std::string records_to_markdown(const std::vector<EstimateRecord>& records) {
  if (records.empty()) throw std::invalid_argument("records_to_markdown: no records");
  std::ostringstream out;
  out << "| method | m2 | m3 | -s3z | I | computation time |\n";
  out << "| --- | --- | --- | --- | --- | --- |\n";
  std::vector<const EstimateRecord*> flagged;
  for (const auto& r : records) {
    std::string name = r.method;
    if (!r.flags.empty()) {
      name += "*";
      flagged.push_back(&r);
    }
    out << "| " << name << " | " << detail::format_rounded(r.m2) << " | "
        << detail::format_rounded(r.m3) << " | " << detail::format_rounded(r.neg_s3z) << " | "
        << detail::format_rounded(r.inertia) << " | "
        << (r.seconds ? detail::format_time(*r.seconds) : "") << " |\n";
  }
  if (!flagged.empty()) {
    out << "\n";
    for (const auto* r : flagged) out << "\\* " << r->method << ": " << r->flags << "\n";
  }
  return out.str();
}

inline constexpr const char* kStudyCsvHeader =
    "scenario,method,seeds,excluded,include_flagged,"
    "mean_err_m2,mean_err_m3,mean_err_s3z,mean_err_I,mean_err_pooled,"
    "median_err_m2,median_err_m3,median_err_s3z,median_err_I,median_err_pooled";

inline std::string study_to_csv(const StudyResult& study) {
  std::ostringstream out;
  out << kStudyCsvHeader << "\n";
  for (const auto& c : study.cells) {
    out << c.scenario << "," << c.method << "," << c.seed_count << "," << c.excluded << ","
        << (study.include_flagged ? 1 : 0);
    for (double v : c.mean_err) out << "," << detail::format_full(v);
    out << "," << detail::format_full(c.mean_pooled);
    for (double v : c.median_err) out << "," << detail::format_full(v);
    out << "," << detail::format_full(c.median_pooled);
    out << "\n";
  }
  return out.str();
}

}  // namespace cylid
