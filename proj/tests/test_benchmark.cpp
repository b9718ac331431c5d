#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "cylid/benchmark.hpp"
#include "cylid/config.hpp"
#include "cylid/report.hpp"

using namespace cylid;

namespace {

bool same_record(const EstimateRecord& a, const EstimateRecord& b, bool ignore_time) {
  auto eq = [](double x, double y) {
    return (std::isnan(x) && std::isnan(y)) || x == y;
  };
  if (a.method != b.method || a.flags != b.flags) return false;
  if (!eq(a.m2, b.m2) || !eq(a.m3, b.m3) || !eq(a.neg_s3z, b.neg_s3z) || !eq(a.inertia, b.inertia))
    return false;
  if (!ignore_time) {
    if (a.seconds.has_value() != b.seconds.has_value()) return false;
    if (a.seconds && *a.seconds != *b.seconds) return false;
  }
  return a.seconds.has_value() == b.seconds.has_value();
}

}  // namespace

TEST_CASE("method registry covers all 22 names") {
  const auto& names = all_method_names();
  REQUIRE(names.size() == 22);
  CHECK(names.front() == "ls");
  CHECK(names[5] == "rls-rel");
  CHECK(names.back() == "pso-f16");
  for (const auto& n : names) CHECK_NOTHROW(parse_method(n));
  CHECK_THROWS_AS(parse_method("pso-f17"), std::invalid_argument);
  CHECK_THROWS_AS(parse_method("wls"), std::invalid_argument);
  CHECK(parse_method("tls-rel").relative);
  CHECK(parse_method("pso-f13").cost_id == 13);
}

TEST_CASE("benchmark on clean data recovers the truth for every method") {
  BenchmarkConfig cfg;
  cfg.scenario.reset();
  const auto records = run_benchmark(cfg);
  REQUIRE(records.size() == 23);
  CHECK(records[0].method == "real values");
  CHECK(records[0].m2 == 5.0);
  CHECK(records[0].neg_s3z == 0.5);
  CHECK_FALSE(records[0].seconds.has_value());
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    INFO(r.method);
    const bool analytic = r.method.rfind("pso-", 0) != 0;
    const double tol = analytic ? 1e-6 : 5e-2;
    CHECK(std::fabs(r.m2 - 5.0) <= tol * 5.0);
    CHECK(std::fabs(r.m3 - 3.0) <= tol * 3.0);
    CHECK(std::fabs(r.neg_s3z - 0.5) <= tol * 0.5);
    CHECK(std::fabs(r.inertia - 3.0) <= tol * 3.0);
    REQUIRE(r.seconds.has_value());
    CHECK(*r.seconds >= 0.0);
  }
}

TEST_CASE("s1 benchmark has the table shape and shares one dataset") {
  BenchmarkConfig cfg;
  cfg.scenario = NoiseScenario::s1();
  cfg.data_seed = 3;
  cfg.methods = {"ls", "tls", "rls", "ls-rel", "tls-rel", "rls-rel"};
  const auto records = run_benchmark(cfg);
  REQUIRE(records.size() == 7);
  for (const auto& r : records) CHECK_FALSE(std::isnan(r.m2));
}

TEST_CASE("s3 default sample count is 20, others 10") {
  BenchmarkConfig cfg;
  cfg.scenario = NoiseScenario::s3();
  CHECK(cfg.resolved_sample_count() == 20);
  cfg.scenario = NoiseScenario::s1();
  CHECK(cfg.resolved_sample_count() == 10);
  cfg.scenario.reset();
  CHECK(cfg.resolved_sample_count() == 10);
  cfg.sample_count = 12;
  CHECK(cfg.resolved_sample_count() == 12);
}

TEST_CASE("benchmark is a pure function of its config modulo timing") {
  BenchmarkConfig cfg;
  cfg.scenario = NoiseScenario::s4();
  cfg.data_seed = 9;
  cfg.methods = {"ls", "tls", "rls-rel", "pso-f13"};
  const auto a = run_benchmark(cfg);
  const auto b = run_benchmark(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_record(a[i], b[i], true));
}

TEST_CASE("heavy corruption never aborts the benchmark") {
  BenchmarkConfig cfg;
  cfg.scenario = NoiseScenario::s3();
  cfg.data_seed = 2718;
  cfg.methods = {"ls", "tls", "rls", "ls-rel", "tls-rel", "rls-rel"};
  const auto records = run_benchmark(cfg);
  REQUIRE(records.size() == 7);  // all methods produced a row, flagged or not
}

TEST_CASE("records csv round-trips") {
  BenchmarkConfig cfg;
  cfg.scenario = NoiseScenario::s2();
  cfg.data_seed = 5;
  cfg.methods = {"ls", "rls", "pso-f1"};
  const auto records = run_benchmark(cfg);
  const std::string csv = records_to_csv(records);
  const auto back = records_from_csv(csv);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) CHECK(same_record(records[i], back[i], false));
}

TEST_CASE("markdown table visits the reference layout") {
  const std::vector<EstimateRecord> only_real{real_values_record({5.0, 3.0, -0.5, 3.0})};
  const std::string md = records_to_markdown(only_real);
  std::istringstream in(md);
  std::string header, sep, row;
  REQUIRE(std::getline(in, header));
  REQUIRE(std::getline(in, sep));
  REQUIRE(std::getline(in, row));
  // 6 columns -> 7 pipes
  CHECK(std::count(header.begin(), header.end(), '|') == 7);
  CHECK(std::count(row.begin(), row.end(), '|') == 7);
  CHECK(row == "| real values | 5 | 3 | 0.5 | 3 |  |");

  EstimateRecord flagged;
  flagged.method = "tls";
  flagged.m2 = 20.86;
  flagged.m3 = -12.03;
  flagged.neg_s3z = 0.38;
  flagged.inertia = 3.14;
  flagged.seconds = 9e-6;
  flagged.flags = "ill-conditioned";
  const std::string md2 = records_to_markdown({only_real[0], flagged});
  CHECK(md2.find("| tls* | 20.86 | -12.03 |") != std::string::npos);
  CHECK(md2.find("\\* tls: ill-conditioned") != std::string::npos);
}

TEST_CASE("study counts benchmarks and scores errors") {
  BenchmarkConfig cfg;
  cfg.methods = {"ls"};
  const StudyResult study = run_study(cfg, {"s1"}, {1, 2});
  REQUIRE(study.cells.size() == 1);
  const StudyCell& cell = study.cells[0];
  CHECK(cell.scenario == "s1");
  CHECK(cell.method == "ls");
  CHECK(cell.seed_count == 2);
  CHECK(cell.mean_pooled > 0.0);
  CHECK(cell.median_pooled > 0.0);
  CHECK(study.include_flagged);
}

TEST_CASE("zero-noise study has tiny errors") {
  BenchmarkConfig cfg;
  cfg.methods = {"ls", "tls", "rls", "ls-rel", "tls-rel", "rls-rel"};
  // a custom all-zero-bounds scenario behaves like clean data
  NoiseScenario zero = NoiseScenario::custom({});
  BenchmarkConfig per_seed = cfg;
  per_seed.scenario = zero;
  per_seed.data_seed = 1;
  const auto records = run_benchmark(per_seed);
  for (std::size_t i = 1; i < records.size(); ++i) {
    CHECK(std::fabs(records[i].m2 - 5.0) < 1e-2);
    CHECK(std::fabs(records[i].inertia - 3.0) < 1e-2);
  }
}

TEST_CASE("study includes the f13/f14 composite when both methods run") {
  BenchmarkConfig cfg;
  cfg.methods = {"ls", "pso-f13", "pso-f14"};
  cfg.pso.iterations = 100;  // keep the unit test quick
  cfg.pso.inertia_ramp_iters = 100;
  cfg.pso_seeds = {101, 102, 103};
  const StudyResult study = run_study(cfg, {"s1"}, {1, 2});
  REQUIRE(study.cells.size() == 4);
  CHECK(study.cells.back().method == kCompositeMethodName);
  CHECK(study.cells.back().seed_count == 2);
  const std::string csv = study_to_csv(study);
  CHECK(csv.find("pso-f13f14-avg") != std::string::npos);
  CHECK(csv.rfind(kStudyCsvHeader, 0) == 0);
}

TEST_CASE("study results are independent of the work-pool size") {
  BenchmarkConfig cfg;
  cfg.methods = {"ls", "pso-f13", "pso-f14"};
  cfg.pso.iterations = 100;
  cfg.pso.inertia_ramp_iters = 100;
  cfg.pso_seeds = {101, 102};
  cfg.threads = 1;
  const std::string serial = study_to_csv(run_study(cfg, {"s1", "s4"}, {1, 2, 3}));
  cfg.threads = 2;
  const std::string pooled = study_to_csv(run_study(cfg, {"s1", "s4"}, {1, 2, 3}));
  CHECK(serial == pooled);
}

TEST_CASE("excluding flagged rows from a study is visible, never silent") {
  BenchmarkConfig cfg;
  cfg.methods = {"ls", "ls-rel"};  // ls-rel rows always carry the clamped-rows flag here
  cfg.exclude_flagged_from_study = true;
  const StudyResult study = run_study(cfg, {"s1"}, {1, 2});
  REQUIRE(study.cells.size() == 2);
  CHECK_FALSE(study.include_flagged);
  const StudyCell& ls = study.cells[0];
  CHECK(ls.seed_count == 2);
  CHECK(ls.excluded == 0);
  const StudyCell& lsrel = study.cells[1];
  CHECK(lsrel.excluded == 2);
  CHECK(lsrel.seed_count == 0);
}

TEST_CASE("config defaults fill and echo deterministically") {
  const BenchmarkConfig cfg = parse_config_text("scenario = s1\n");
  CHECK(cfg.true_params.m2 == 5.0);
  CHECK(cfg.true_params.s3z == -0.5);
  CHECK(cfg.g == 9.81);
  CHECK(cfg.resolved_sample_count() == 10);
  CHECK(cfg.methods.size() == 22);
  CHECK(cfg.pso.population == 20);
  CHECK(cfg.pso.iterations == 300);
  CHECK(cfg.scenario.has_value());
  CHECK(cfg.scenario->id() == "s1");
  CHECK(echo_config(cfg) == echo_config(parse_config_text("scenario = s1\n")));
  CHECK(echo_config(cfg).find("pso_seeds = 101,102,103,104,105,106,107,108,109,110") !=
        std::string::npos);
}

TEST_CASE("config parsing covers every documented key") {
  const std::string text =
      "true_params = 4, 2, -0.25, 1.5\n"
      "g = 9.8\n"
      "samples = 14\n"
      "scenario = s4\n"
      "outlier_count = 6\n"
      "outlier_bound = 0.5\n"
      "outlier_base_bound = 0.01\n"
      "data_seed = 77\n"
      "methods = ls, rls-rel, pso-f13\n"
      "pso_population = 12\n"
      "pso_iterations = 150\n"
      "pso_c1 = 1.2\n"
      "pso_c2 = 1.4\n"
      "pso_inertia_start = 0.8\n"
      "pso_inertia_end = 0.3\n"
      "pso_inertia_ramp = 50\n"
      "pso_runs = 4\n"
      "pso_per_dimension_draws = false\n"
      "pso_seeds = 7,8,9,10\n"
      "pso_share_seeds = false\n"
      "box_m2 = 0.5,10\n"
      "box_m3 = 0.5,10\n"
      "box_s3z = -0.9,0.9\n"
      "box_I = 0.5,10\n"
      "study_exclude_flagged = true\n"
      "threads = 2\n";
  const BenchmarkConfig cfg = parse_config_text(text);
  CHECK(cfg.true_params.m3 == 2.0);
  CHECK(cfg.sample_count == 14);
  REQUIRE(cfg.scenario.has_value());
  CHECK(cfg.scenario->outlier_count == 6);
  CHECK(cfg.scenario->outlier_bound == 0.5);
  CHECK(cfg.data_seed == 77);
  CHECK(cfg.methods == std::vector<std::string>{"ls", "rls-rel", "pso-f13"});
  CHECK(cfg.pso.population == 12);
  CHECK_FALSE(cfg.pso.per_dimension_draws);
  CHECK(cfg.pso_seeds == std::vector<std::uint64_t>{7, 8, 9, 10});
  CHECK_FALSE(cfg.share_pso_seeds);
  CHECK(cfg.box.lo(0) == 0.5);
  CHECK(cfg.box.hi(2) == 0.9);
  CHECK(cfg.exclude_flagged_from_study);
  CHECK(cfg.threads == 2);
  // unshared seeds get per-method offsets
  CHECK(cfg.resolved_pso_seeds(0) == std::vector<std::uint64_t>{1007, 1008, 1009, 1010});
  CHECK(cfg.resolved_pso_seeds(1) == std::vector<std::uint64_t>{2007, 2008, 2009, 2010});
}

TEST_CASE("every shipped config file parses and validates") {
  for (const char* name : {"reference.cfg", "clean.cfg", "s1.cfg", "s2.cfg", "s3.cfg", "s4.cfg",
                           "study.cfg"}) {
    INFO(name);
    const BenchmarkConfig cfg = load_config(std::string(CYLID_CONFIG_DIR) + "/" + name);
    CHECK(cfg.resolved_sample_count() >= 2);
  }
  const BenchmarkConfig s3 = load_config(std::string(CYLID_CONFIG_DIR) + "/s3.cfg");
  CHECK(s3.resolved_sample_count() == 20);
}

TEST_CASE("config rejects unknown keys and bad values") {
  CHECK_THROWS_AS(parse_config_text("bogus_key = 1\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config_text("scenario = s7\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text("samples = ten\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config_text("scenario = custom\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config_text("true_params = 1,2\n"), std::runtime_error);
  CHECK_NOTHROW(parse_config_text("# comment only\n\n"));
  const BenchmarkConfig custom = parse_config_text(
      "scenario = custom\ncustom_bounds = 0.1,0,0,0,0,0,0,0,0,0.2,0.2,0.2\n");
  REQUIRE(custom.scenario.has_value());
  CHECK(custom.scenario->id() == "custom");
  CHECK(custom.scenario->component_bounds[0] == 0.1);
  CHECK(custom.scenario->component_bounds[9] == 0.2);
}
