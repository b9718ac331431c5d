#pragma once

// Benchmark configuration files: plain "key = value" lines, '#' comments.
// Unknown keys are rejected. echo_config() serializes the fully resolved
// configuration (defaults filled in) for provenance.

#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cylid/benchmark.hpp"
#include "cylid/csv_io.hpp"

namespace cylid {

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

inline std::vector<double> parse_double_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(parse_double(item, key));
  return out;
}

inline bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::runtime_error("config key '" + key + "': expected true/false, got '" + s + "'");
}

inline int parse_int(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "': expected integer, got '" + s + "'");
  }
}

inline std::uint64_t parse_u64(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "': expected unsigned integer, got '" + s + "'");
  }
}

}  // namespace detail

inline BenchmarkConfig parse_config_text(const std::string& text) {
  BenchmarkConfig cfg;
  std::string scenario_id = "clean";
  double scenario_bound = 0.20;
  int outlier_count = 10;
  double outlier_bound = 0.70;
  double outlier_base_bound = 0.05;
  std::array<double, kComponentsPerSample> custom_bounds{};
  bool have_custom_bounds = false;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected 'key = value'");
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string val = detail::trim(t.substr(eq + 1));

    if (key == "true_params") {
      const auto v = detail::parse_double_list(val, key);
      if (v.size() != 4) throw std::runtime_error("true_params: expected m2,m3,s3z,I");
      cfg.true_params = {v[0], v[1], v[2], v[3]};
    } else if (key == "g") cfg.g = detail::parse_double(val, key);
    else if (key == "samples") cfg.sample_count = detail::parse_int(val, key);
    else if (key == "scenario") scenario_id = val;
    else if (key == "scenario_bound") scenario_bound = detail::parse_double(val, key);
    else if (key == "outlier_count") outlier_count = detail::parse_int(val, key);
    else if (key == "outlier_bound") outlier_bound = detail::parse_double(val, key);
    else if (key == "outlier_base_bound") outlier_base_bound = detail::parse_double(val, key);
    else if (key == "custom_bounds") {
      const auto v = detail::parse_double_list(val, key);
      if (v.size() != kComponentsPerSample)
        throw std::runtime_error("custom_bounds: expected 12 comma-separated values");
      for (std::size_t i = 0; i < custom_bounds.size(); ++i) custom_bounds[i] = v[i];
      have_custom_bounds = true;
    } else if (key == "data_seed") cfg.data_seed = detail::parse_u64(val, key);
    else if (key == "methods") {
      if (val == "all") cfg.methods = all_method_names();
      else cfg.methods = detail::split_list(val);
    } else if (key == "pso_population") cfg.pso.population = detail::parse_int(val, key);
    else if (key == "pso_iterations") cfg.pso.iterations = detail::parse_int(val, key);
    else if (key == "pso_c1") cfg.pso.c1 = detail::parse_double(val, key);
    else if (key == "pso_c2") cfg.pso.c2 = detail::parse_double(val, key);
    else if (key == "pso_inertia_start") cfg.pso.inertia_start = detail::parse_double(val, key);
    else if (key == "pso_inertia_end") cfg.pso.inertia_end = detail::parse_double(val, key);
    else if (key == "pso_inertia_ramp") cfg.pso.inertia_ramp_iters = detail::parse_int(val, key);
    else if (key == "pso_runs") cfg.pso.runs_per_estimate = detail::parse_int(val, key);
    else if (key == "pso_per_dimension_draws")
      cfg.pso.per_dimension_draws = detail::parse_bool(val, key);
    else if (key == "pso_seeds") {
      cfg.pso_seeds.clear();
      for (const auto& item : detail::split_list(val)) cfg.pso_seeds.push_back(detail::parse_u64(item, key));
    } else if (key == "pso_share_seeds") cfg.share_pso_seeds = detail::parse_bool(val, key);
    else if (key == "box_m2" || key == "box_m3" || key == "box_s3z" || key == "box_I") {
      const auto v = detail::parse_double_list(val, key);
      if (v.size() != 2) throw std::runtime_error(key + ": expected 'lower,upper'");
      const std::size_t d = key == "box_m2" ? 0 : key == "box_m3" ? 1 : key == "box_s3z" ? 2 : 3;
      cfg.box.limits[d] = {v[0], v[1]};
    } else if (key == "study_exclude_flagged")
      cfg.exclude_flagged_from_study = detail::parse_bool(val, key);
    else if (key == "threads") cfg.threads = detail::parse_int(val, key);
    else throw std::runtime_error("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }

  if (scenario_id == "clean") {
    cfg.scenario.reset();
  } else if (scenario_id == "custom") {
    if (!have_custom_bounds)
      throw std::runtime_error("scenario = custom requires custom_bounds");
    cfg.scenario = NoiseScenario::custom(custom_bounds);
  } else {
    NoiseScenario sc = scenario_from_id(scenario_id);
    if (sc.kind == NoiseScenario::Kind::kOutliers) {
      sc.outlier_count = outlier_count;
      sc.outlier_bound = outlier_bound;
      sc.base_bound = outlier_base_bound;
    } else {
      sc.bound = scenario_bound;
    }
    cfg.scenario = sc;
  }
  cfg.validate();
  return cfg;
}

inline BenchmarkConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

// Fully resolved configuration, defaults filled, deterministic order.
inline std::string echo_config(const BenchmarkConfig& cfg) {
  std::ostringstream out;
  out << "true_params = " << detail::format_full(cfg.true_params.m2) << ","
      << detail::format_full(cfg.true_params.m3) << "," << detail::format_full(cfg.true_params.s3z)
      << "," << detail::format_full(cfg.true_params.inertia) << "\n";
  out << "g = " << detail::format_full(cfg.g) << "\n";
  out << "samples = " << cfg.resolved_sample_count() << "\n";
  if (!cfg.scenario) {
    out << "scenario = clean\n";
  } else {
    const NoiseScenario& sc = *cfg.scenario;
    out << "scenario = " << sc.id() << "\n";
    switch (sc.kind) {
      case NoiseScenario::Kind::kOutliers:
        out << "outlier_count = " << sc.outlier_count << "\n";
        out << "outlier_bound = " << detail::format_full(sc.outlier_bound) << "\n";
        out << "outlier_base_bound = " << detail::format_full(sc.base_bound) << "\n";
        break;
      case NoiseScenario::Kind::kCustom:
        out << "custom_bounds = ";
        for (std::size_t i = 0; i < sc.component_bounds.size(); ++i)
          out << (i ? "," : "") << detail::format_full(sc.component_bounds[i]);
        out << "\n";
        break;
      default:
        out << "scenario_bound = " << detail::format_full(sc.bound) << "\n";
    }
  }
  out << "data_seed = " << cfg.data_seed << "\n";
  out << "methods = ";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) out << (i ? "," : "") << cfg.methods[i];
  out << "\n";
  out << "pso_population = " << cfg.pso.population << "\n";
  out << "pso_iterations = " << cfg.pso.iterations << "\n";
  out << "pso_c1 = " << detail::format_full(cfg.pso.c1) << "\n";
  out << "pso_c2 = " << detail::format_full(cfg.pso.c2) << "\n";
  out << "pso_inertia_start = " << detail::format_full(cfg.pso.inertia_start) << "\n";
  out << "pso_inertia_end = " << detail::format_full(cfg.pso.inertia_end) << "\n";
  out << "pso_inertia_ramp = " << cfg.pso.inertia_ramp_iters << "\n";
  out << "pso_runs = " << cfg.pso.runs_per_estimate << "\n";
  out << "pso_per_dimension_draws = " << (cfg.pso.per_dimension_draws ? "true" : "false") << "\n";
  out << "pso_seeds = ";
  std::vector<std::uint64_t> seeds = cfg.pso_seeds;
  if (seeds.empty())
    for (int i = 0; i < cfg.pso.runs_per_estimate; ++i)
      seeds.push_back(101 + static_cast<std::uint64_t>(i));
  for (std::size_t i = 0; i < seeds.size(); ++i) out << (i ? "," : "") << seeds[i];
  out << "\n";
  out << "pso_share_seeds = " << (cfg.share_pso_seeds ? "true" : "false") << "\n";
  const char* box_keys[4] = {"box_m2", "box_m3", "box_s3z", "box_I"};
  for (std::size_t d = 0; d < 4; ++d)
    out << box_keys[d] << " = " << detail::format_full(cfg.box.limits[d].lo) << ","
        << detail::format_full(cfg.box.limits[d].hi) << "\n";
  out << "study_exclude_flagged = " << (cfg.exclude_flagged_from_study ? "true" : "false") << "\n";
  out << "threads = " << cfg.threads << "\n";
  return out.str();
}

}  // namespace cylid
