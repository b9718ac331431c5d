#pragma once

// Benchmark orchestration: one corrupted dataset shared by every configured
// method, one table row per method, and multi-seed robustness studies with
// per-method error statistics (including the f13/f14 averaged composite).

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cylid/estimators.hpp"
#include "cylid/pso.hpp"
#include "cylid/sampling.hpp"

namespace cylid {

struct MethodSpec {
  std::string name;
  bool is_pso = false;
  AnalyticKind kind = AnalyticKind::kLs;  // analytic methods
  bool relative = false;
  int cost_id = 0;  // PSO methods
};

inline const std::vector<std::string>& all_method_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v{"ls", "tls", "rls", "ls-rel", "tls-rel", "rls-rel"};
    for (int i = 1; i <= kCostCount; ++i) v.push_back("pso-f" + std::to_string(i));
    return v;
  }();
  return names;
}

inline MethodSpec parse_method(const std::string& name) {
  MethodSpec m;
  m.name = name;
  if (name == "ls") m.kind = AnalyticKind::kLs;
  else if (name == "tls") m.kind = AnalyticKind::kTls;
  else if (name == "rls") m.kind = AnalyticKind::kRls;
  else if (name == "ls-rel") { m.kind = AnalyticKind::kLs; m.relative = true; }
  else if (name == "tls-rel") { m.kind = AnalyticKind::kTls; m.relative = true; }
  else if (name == "rls-rel") { m.kind = AnalyticKind::kRls; m.relative = true; }
  else if (name.rfind("pso-f", 0) == 0) {
    m.is_pso = true;
    try {
      m.cost_id = std::stoi(name.substr(5));
    } catch (const std::exception&) {
      m.cost_id = 0;
    }
    if (m.cost_id < 1 || m.cost_id > kCostCount)
      throw std::invalid_argument("unknown method '" + name + "'");
  } else {
    throw std::invalid_argument("unknown method '" + name + "'");
  }
  return m;
}

struct BenchmarkConfig {
  RobotParams true_params{5.0, 3.0, -0.5, 3.0};
  double g = kDefaultGravity;
  int sample_count = 0;  // 0 = scenario default (20 for s3, 10 otherwise)
  std::optional<NoiseScenario> scenario;  // nullopt = clean data
  std::uint64_t data_seed = 1;
  PsoConfig pso;
  SearchBox box;
  std::vector<std::string> methods = all_method_names();
  std::vector<std::uint64_t> pso_seeds;  // empty = 101 .. 100+runs_per_estimate
  bool share_pso_seeds = true;  // otherwise each method gets an offset seed list
  bool exclude_flagged_from_study = false;
  int threads = 0;  // study work pool; 0 = hardware concurrency

  int resolved_sample_count() const {
    if (sample_count > 0) return sample_count;
    return (scenario && scenario->kind == NoiseScenario::Kind::kAll) ? 20 : 10;
  }

  std::vector<std::uint64_t> resolved_pso_seeds(std::size_t method_index) const {
    std::vector<std::uint64_t> seeds = pso_seeds;
    if (seeds.empty()) {
      for (int i = 0; i < pso.runs_per_estimate; ++i) seeds.push_back(101 + static_cast<std::uint64_t>(i));
    }
    if (!share_pso_seeds)
      for (auto& s : seeds) s += 1000 * (static_cast<std::uint64_t>(method_index) + 1);
    return seeds;
  }

  void validate() const {
    pso.validate();
    box.validate();
    if (!is_physical(true_params))
      throw std::invalid_argument("BenchmarkConfig: true parameters must be physical");
    if (!(g > 0.0)) throw std::invalid_argument("BenchmarkConfig: g must be positive");
    if (sample_count < 0 || (sample_count > 0 && sample_count < 2))
      throw std::invalid_argument("BenchmarkConfig: sample_count must be >= 2");
    if (methods.empty()) throw std::invalid_argument("BenchmarkConfig: empty method list");
    for (const auto& m : methods) parse_method(m);
    if (!pso_seeds.empty() && pso_seeds.size() < 2)
      throw std::invalid_argument("BenchmarkConfig: need at least 2 PSO seeds");
    if (scenario) scenario->validate(static_cast<std::size_t>(resolved_sample_count()));
    if (threads < 0) throw std::invalid_argument("BenchmarkConfig: threads must be >= 0");
  }
};

// One table row. Parameter cells may be NaN when a method diverged hard or
// extraction was degenerate; the flags column says why.
struct EstimateRecord {
  std::string method;
  double m2 = std::numeric_limits<double>::quiet_NaN();
  double m3 = std::numeric_limits<double>::quiet_NaN();
  double neg_s3z = std::numeric_limits<double>::quiet_NaN();
  double inertia = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> seconds;
  std::string flags;  // semicolon-separated tokens, empty when clean
};

namespace detail {

inline void append_flag(std::string& flags, const std::string& token) {
  if (!flags.empty()) flags += ";";
  flags += token;
}

inline EstimateRecord run_one_method(const MethodSpec& m, std::size_t method_index,
                                     const SampleSet& data, const BenchmarkConfig& cfg) {
  EstimateRecord rec;
  rec.method = m.name;
  try {
    if (m.is_pso) {
      const auto seeds = cfg.resolved_pso_seeds(method_index);
      const auto t0 = std::chrono::steady_clock::now();
      const AggregateResult agg =
          pso_aggregate(m.cost_id, data, cfg.g, cfg.pso, cfg.box, seeds);
      const auto t1 = std::chrono::steady_clock::now();
      rec.seconds = std::chrono::duration<double>(t1 - t0).count();
      rec.m2 = agg.params.m2;
      rec.m3 = agg.params.m3;
      rec.neg_s3z = -agg.params.s3z;
      rec.inertia = agg.params.inertia;
      if (!agg.discarded.empty())
        append_flag(rec.flags, "discarded=" + std::to_string(agg.discarded.size()));
    } else {
      const EstimateResult est = estimate(m.kind, m.relative, data, cfg.g);
      rec.seconds = est.seconds;
      if (est.params) {
        rec.m2 = est.params->m2;
        rec.m3 = est.params->m3;
        rec.neg_s3z = -est.params->s3z;
        rec.inertia = est.params->inertia;
      } else if (est.alpha) {
        // extraction failed; report the raw alpha components that map directly
        rec.m2 = (*est.alpha)[1];
        rec.m3 = (*est.alpha)[2];
      }
      if (est.solver_failed) append_flag(rec.flags, "solver-failed: " + est.note);
      if (est.condition_flag) append_flag(rec.flags, "ill-conditioned");
      if (est.extraction_flag) append_flag(rec.flags, "extraction-degenerate");
      if (est.clamped_rows > 0)
        append_flag(rec.flags, "clamped-rows=" + std::to_string(est.clamped_rows));
    }
  } catch (const std::exception& e) {
    append_flag(rec.flags, std::string("error: ") + e.what());
  }
  return rec;
}

}  // namespace detail

inline EstimateRecord real_values_record(const RobotParams& p) {
  EstimateRecord rec;
  rec.method = "real values";
  rec.m2 = p.m2;
  rec.m3 = p.m3;
  rec.neg_s3z = -p.s3z;
  rec.inertia = p.inertia;
  return rec;
}

// Runs every configured method on one shared dataset. The first record is the
// "real values" reference row. Method failures become flagged rows; the sweep
// itself never aborts.
inline std::vector<EstimateRecord> run_benchmark(const BenchmarkConfig& cfg) {
  cfg.validate();
  const SampleSet clean =
      collect_samples(cfg.true_params, cfg.g, static_cast<std::size_t>(cfg.resolved_sample_count()));
  const SampleSet data = cfg.scenario ? corrupt(clean, *cfg.scenario, cfg.data_seed) : clean;

  std::vector<EstimateRecord> records;
  records.reserve(cfg.methods.size() + 1);
  records.push_back(real_values_record(cfg.true_params));
  for (std::size_t i = 0; i < cfg.methods.size(); ++i)
    records.push_back(detail::run_one_method(parse_method(cfg.methods[i]), i, data, cfg));
  return records;
}

inline constexpr const char* kCompositeMethodName = "pso-f13f14-avg";

struct StudyCell {
  std::string scenario;
  std::string method;
  std::size_t seed_count = 0;
  std::size_t excluded = 0;  // flagged estimates dropped (only when configured)
  std::array<double, 4> mean_err{};    // |relative error| per parameter (m2, m3, s3z, I)
  std::array<double, 4> median_err{};
  double mean_pooled = 0.0;
  double median_pooled = 0.0;
};

struct StudyResult {
  std::vector<StudyCell> cells;
  bool include_flagged = true;
  std::size_t seeds_per_scenario = 0;
};

namespace detail {

inline double median_of(Vec v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// |(est - true)/true| per parameter; est s3z comes back from the -s3z column.
inline std::array<double, 4> param_errors(const EstimateRecord& rec, const RobotParams& truth) {
  const double est[4] = {rec.m2, rec.m3, -rec.neg_s3z, rec.inertia};
  const double tru[4] = {truth.m2, truth.m3, truth.s3z, truth.inertia};
  std::array<double, 4> e{};
  for (int i = 0; i < 4; ++i) e[i] = std::fabs((est[i] - tru[i]) / tru[i]);
  return e;
}

template <class Fn>
inline void parallel_for(std::size_t count, int threads, Fn&& fn) {
  unsigned n = threads > 0 ? static_cast<unsigned>(threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, count));
  if (n <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace detail

inline NoiseScenario scenario_from_id(const std::string& id) {
  if (id == "s1") return NoiseScenario::s1();
  if (id == "s2") return NoiseScenario::s2();
  if (id == "s3") return NoiseScenario::s3();
  if (id == "s4") return NoiseScenario::s4();
  throw std::invalid_argument("unknown scenario '" + id + "'");
}

// One benchmark per (scenario, data seed); statistics per (scenario, method)
// against the configured true parameters. When both pso-f13 and pso-f14 are in
// the method list, their per-seed componentwise average joins the table as
// "pso-f13f14-avg".
inline StudyResult run_study(const BenchmarkConfig& base, const std::vector<std::string>& scenario_ids,
                             const std::vector<std::uint64_t>& data_seeds) {
  if (data_seeds.size() < 2) throw std::invalid_argument("run_study: need at least 2 data seeds");
  if (scenario_ids.empty()) throw std::invalid_argument("run_study: no scenarios");

  StudyResult out;
  out.include_flagged = !base.exclude_flagged_from_study;
  out.seeds_per_scenario = data_seeds.size();

  const bool has_f13 = std::find(base.methods.begin(), base.methods.end(), "pso-f13") != base.methods.end();
  const bool has_f14 = std::find(base.methods.begin(), base.methods.end(), "pso-f14") != base.methods.end();
  const bool composite = has_f13 && has_f14;

  struct Cell {
    std::string scenario;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const auto& sc : scenario_ids)
    for (std::uint64_t seed : data_seeds) cells.push_back({sc, seed});

  std::vector<std::vector<EstimateRecord>> results(cells.size());
  detail::parallel_for(cells.size(), base.threads, [&](std::size_t i) {
    BenchmarkConfig cfg = base;
    cfg.scenario = scenario_from_id(cells[i].scenario);
    cfg.data_seed = cells[i].seed;
    results[i] = run_benchmark(cfg);
  });

  std::vector<std::string> methods = base.methods;
  if (composite) methods.push_back(kCompositeMethodName);

  for (const auto& sc : scenario_ids) {
    for (const auto& method : methods) {
      StudyCell cell;
      cell.scenario = sc;
      cell.method = method;
      std::array<Vec, 4> errs;
      Vec pooled;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].scenario != sc) continue;
        const auto& records = results[i];
        auto find_rec = [&](const std::string& name) -> const EstimateRecord* {
          for (const auto& r : records)
            if (r.method == name) return &r;
          return nullptr;
        };
        EstimateRecord rec;
        if (method == kCompositeMethodName) {
          const EstimateRecord* a = find_rec("pso-f13");
          const EstimateRecord* b = find_rec("pso-f14");
          if (!a || !b) continue;
          rec.method = method;
          rec.m2 = 0.5 * (a->m2 + b->m2);
          rec.m3 = 0.5 * (a->m3 + b->m3);
          rec.neg_s3z = 0.5 * (a->neg_s3z + b->neg_s3z);
          rec.inertia = 0.5 * (a->inertia + b->inertia);
          rec.flags = a->flags.empty() ? b->flags : a->flags;
        } else {
          const EstimateRecord* r = find_rec(method);
          if (!r) continue;
          rec = *r;
        }
        if (!rec.flags.empty() && base.exclude_flagged_from_study) {
          ++cell.excluded;
          continue;
        }
        const auto e = detail::param_errors(rec, base.true_params);
        for (int k = 0; k < 4; ++k) errs[static_cast<std::size_t>(k)].push_back(e[static_cast<std::size_t>(k)]);
        pooled.push_back((e[0] + e[1] + e[2] + e[3]) / 4.0);
      }
      cell.seed_count = pooled.size();
      if (!pooled.empty()) {
        for (std::size_t k = 0; k < 4; ++k) {
          double s = 0.0;
          for (double v : errs[k]) s += v;
          cell.mean_err[k] = s / static_cast<double>(errs[k].size());
          cell.median_err[k] = detail::median_of(errs[k]);
        }
        double s = 0.0;
        for (double v : pooled) s += v;
        cell.mean_pooled = s / static_cast<double>(pooled.size());
        cell.median_pooled = detail::median_of(pooled);
      }
      out.cells.push_back(cell);
    }
  }
  return out;
}

}  // namespace cylid
