#pragma once

// SampleSet serialization: a CSV with one sample per line at full double
// precision, plus a key-value sidecar (<path>.meta) holding the provenance.
// write/read round-trip bit-exactly.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cylid/sampling.hpp"

namespace cylid {

inline constexpr const char* kSampleCsvHeader =
    "t,theta1,d2,d3,theta1_dot,d2_dot,d3_dot,theta1_ddot,d2_ddot,d3_ddot,tau1,tau2,tau3";

namespace detail {

inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

inline double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\r')) ++pos;
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("failed to parse number '" + s + "' in " + what);
  }
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline std::string sidecar_path(const std::string& csv_path) { return csv_path + ".meta"; }

inline void write_samples_csv(const SampleSet& set, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << kSampleCsvHeader << "\n";
  for (const Sample& s : set.samples) {
    const double cells[13] = {s.t,
                              s.state.theta1,
                              s.state.d2,
                              s.state.d3,
                              s.state.theta1_dot,
                              s.state.d2_dot,
                              s.state.d3_dot,
                              s.state.theta1_ddot,
                              s.state.d2_ddot,
                              s.state.d3_ddot,
                              s.torque[0],
                              s.torque[1],
                              s.torque[2]};
    for (int i = 0; i < 13; ++i) {
      if (i) f << ",";
      f << detail::format_full(cells[i]);
    }
    f << "\n";
  }
  if (!f) throw std::runtime_error("write failed for '" + path + "'");

  std::ofstream m(sidecar_path(path));
  if (!m) throw std::runtime_error("cannot open '" + sidecar_path(path) + "' for writing");
  const Provenance& p = set.provenance;
  m << "true_m2 = " << detail::format_full(p.true_params.m2) << "\n";
  m << "true_m3 = " << detail::format_full(p.true_params.m3) << "\n";
  m << "true_s3z = " << detail::format_full(p.true_params.s3z) << "\n";
  m << "true_I = " << detail::format_full(p.true_params.inertia) << "\n";
  m << "g = " << detail::format_full(p.g) << "\n";
  m << "scenario = " << p.scenario << "\n";
  m << "noise_seed = " << p.noise_seed << "\n";
  m << "samples = " << set.samples.size() << "\n";
  if (!m) throw std::runtime_error("write failed for '" + sidecar_path(path) + "'");
}

inline SampleSet read_samples_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("'" + path + "' is empty");
  if (detail::trim(line) != kSampleCsvHeader)
    throw std::runtime_error("'" + path + "': unexpected CSV header");

  SampleSet set;
  while (std::getline(f, line)) {
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv_line(detail::trim(line));
    if (cells.size() != 13)
      throw std::runtime_error("'" + path + "': expected 13 columns, got " +
                               std::to_string(cells.size()));
    Sample s;
    double v[13];
    for (int i = 0; i < 13; ++i) v[i] = detail::parse_double(cells[i], path);
    s.t = v[0];
    s.state.theta1 = v[1];
    s.state.d2 = v[2];
    s.state.d3 = v[3];
    s.state.theta1_dot = v[4];
    s.state.d2_dot = v[5];
    s.state.d3_dot = v[6];
    s.state.theta1_ddot = v[7];
    s.state.d2_ddot = v[8];
    s.state.d3_ddot = v[9];
    s.torque = {v[10], v[11], v[12]};
    for (int i = 0; i < 13; ++i)
      if (!std::isfinite(v[i])) throw std::runtime_error("'" + path + "': non-finite entry");
    set.samples.push_back(s);
  }
  if (set.samples.empty()) throw std::runtime_error("'" + path + "': no samples");

  std::ifstream m(sidecar_path(path));
  if (!m)
    throw std::runtime_error("missing provenance sidecar '" + sidecar_path(path) +
                             "' (written by gen-data/corrupt)");
  while (std::getline(m, line)) {
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("'" + sidecar_path(path) + "': expected 'key = value' lines");
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string val = detail::trim(t.substr(eq + 1));
    Provenance& p = set.provenance;
    if (key == "true_m2") p.true_params.m2 = detail::parse_double(val, key);
    else if (key == "true_m3") p.true_params.m3 = detail::parse_double(val, key);
    else if (key == "true_s3z") p.true_params.s3z = detail::parse_double(val, key);
    else if (key == "true_I") p.true_params.inertia = detail::parse_double(val, key);
    else if (key == "g") p.g = detail::parse_double(val, key);
    else if (key == "scenario") p.scenario = val;
    else if (key == "noise_seed") p.noise_seed = std::stoull(val);
    else if (key == "samples") {
      if (std::stoull(val) != set.samples.size())
        throw std::runtime_error("'" + sidecar_path(path) + "': sample count mismatch");
    } else {
      throw std::runtime_error("'" + sidecar_path(path) + "': unknown key '" + key + "'");
    }
  }
  return set;
}

}  // namespace cylid
