#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "charmoment/harness.hpp"

using namespace charmoment;

namespace {

ExperimentSpec base_thm1() {
  ExperimentSpec s;
  s.mode = SweepMode::kThm1;
  s.poly = IntPoly{1, 0, 1};
  s.order_t = 3;
  s.m = 1.0;
  return s;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("sweep skips inadmissible primes with reasons", "[harness]") {
  ExperimentSpec s = base_thm1();
  s.primes = {7, 11, 13, 31};
  const SweepResult r = run_sweep(s);
  REQUIRE(r.records.size() == 3);  // 7, 13, 31 are ≡ 1 (mod 3)
  CHECK(r.records[0].p == 7);
  CHECK(r.records[1].p == 13);
  CHECK(r.records[2].p == 31);
  REQUIRE(r.skipped.size() == 1);
  CHECK(r.skipped[0].p == 11);
  CHECK(r.skipped[0].reason == "order_not_dividing");
  for (const auto& rec : r.records) {
    CHECK(rec.n == rec.p - 2);
    CHECK(rec.hypothesis == "certified");
    CHECK(rec.constant == Catch::Approx(2.0).epsilon(1e-14));
    CHECK(rec.wall_ms >= 0.0);
  }
}

TEST_CASE("sweep covers a range and stays sorted", "[harness]") {
  ExperimentSpec s = base_thm1();
  s.p_min = 5;
  s.p_max = 100;
  s.m = 0.5;
  const SweepResult r = run_sweep(s);
  CHECK(r.records.size() + r.skipped.size() == 23);  // primes in [5, 100]
  for (std::size_t i = 1; i < r.records.size(); ++i)
    CHECK(r.records[i - 1].p < r.records[i].p);
  for (const auto& rec : r.records) CHECK((rec.p - 1) % 3 == 0);
}

TEST_CASE("additive sweep counts its violations", "[harness]") {
  ExperimentSpec s;
  s.mode = SweepMode::kThm2;
  s.poly = IntPoly{0, 0, 1};
  s.add_a = 1;
  s.m = 0.5;
  s.primes = {5, 7, 11};
  const SweepResult r = run_sweep(s);
  REQUIRE(r.records.size() == 3);
  for (const auto& rec : r.records) {
    CHECK(rec.n == rec.p - 1);
    // 2n + 1 ≡ 0 (mod p) exactly once over the full interval
    CHECK(rec.violations == 1);
    CHECK(rec.hypothesis == "certified");
  }
}

TEST_CASE("binomial sweep has no degenerate pairs", "[harness]") {
  ExperimentSpec s;
  s.mode = SweepMode::kThm2;
  s.binomial_d = 2;
  s.add_a = 1;
  s.m = 0.5;
  s.primes = {5, 7, 11, 13};
  const SweepResult r = run_sweep(s);
  REQUIRE(r.records.size() == 3);  // p = 5 leaves no room between d+1 and p
  CHECK(r.skipped.size() == 1);
  CHECK(r.skipped[0].reason == "interval_empty");
  for (const auto& rec : r.records) {
    CHECK(rec.n == rec.p - 5);  // (d+2 .. p-2) with d = 2
    CHECK(rec.violations == 0);
  }
}

TEST_CASE("sweep throws when everything is skipped", "[harness]") {
  ExperimentSpec s = base_thm1();
  s.primes = {11, 17, 23};  // none are ≡ 1 (mod 3)
  CHECK_THROWS_AS(run_sweep(s), empty_sweep_error);
  ExperimentSpec bad = base_thm1();
  bad.order_t = 2;
  CHECK_THROWS_AS(run_sweep(bad), std::invalid_argument);
}

TEST_CASE("degree collapse is skipped per prime", "[harness]") {
  ExperimentSpec s = base_thm1();
  s.poly = IntPoly{1, 0, 7};  // 7X^2 + 1
  s.primes = {7, 13};
  const SweepResult r = run_sweep(s);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].p == 13);
  REQUIRE(r.skipped.size() == 1);
  CHECK(r.skipped[0].reason == "degree_collapse");
}

TEST_CASE("interval policies", "[harness]") {
  ExperimentSpec s = base_thm1();
  s.primes = {13};
  s.interval_policy = IntervalPolicy::kFixedLength;
  s.interval_start = 2;
  s.interval_length = 6;
  CHECK(run_sweep(s).records[0].n == 6);
  s.interval_policy = IntervalPolicy::kFraction;
  s.interval_fraction = 0.5;
  CHECK(run_sweep(s).records[0].n == 6);  // floor(13/2)
  s.interval_fraction = 1.0;
  CHECK(run_sweep(s).records[0].n == 11);  // capped at p - 2
}

TEST_CASE("fkm checks ride along when enabled", "[harness]") {
  ExperimentSpec s = base_thm1();
  s.primes = {13, 31, 61};
  s.m = 0.5;
  s.fkm_enabled = true;
  const SweepResult r = run_sweep(s);
  REQUIRE_FALSE(r.fkm_checks.empty());
  for (const auto& bc : r.fkm_checks) CHECK(bc.ok);
}

TEST_CASE("determinism across repeated sweeps", "[harness]") {
  ExperimentSpec s = base_thm1();
  s.p_min = 5;
  s.p_max = 60;
  s.m = 0.7;
  const SweepResult a = run_sweep(s);
  const SweepResult b = run_sweep(s);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].p == b.records[i].p);
    CHECK(a.records[i].lhs == b.records[i].lhs);  // bitwise
    CHECK(a.records[i].constant == b.records[i].constant);
    CHECK(a.records[i].abs_error == b.records[i].abs_error);
    CHECK(a.records[i].normalized_error == b.records[i].normalized_error);
    CHECK(a.records[i].violations == b.records[i].violations);
  }
}

TEST_CASE("trend analysis on synthetic data", "[harness]") {
  std::vector<SweepRecord> recs;
  for (u64 p : {101ull, 211ull, 401ull, 809ull, 1601ull, 3203ull}) {
    SweepRecord r;
    r.p = p;
    const double x = std::sqrt(static_cast<double>(p)) * std::log(static_cast<double>(p));
    r.abs_error = 3.0 * x;  // exact slope 1 in log-log
    r.normalized_error = r.abs_error / x;
    recs.push_back(r);
  }
  const TrendResult t = trend_analysis(recs);
  CHECK(t.points_used == 6);
  CHECK(t.slope == Catch::Approx(1.0).epsilon(1e-9));
  CHECK(t.intercept == Catch::Approx(std::log(3.0)).epsilon(1e-9));
  CHECK(t.max_normalized == Catch::Approx(3.0).epsilon(1e-12));

  std::vector<SweepRecord> flat = recs;
  for (auto& r : flat) r.abs_error = 5.0;
  CHECK(trend_analysis(flat).slope == Catch::Approx(0.0).margin(1e-9));

  recs.resize(4);
  CHECK_THROWS_AS(trend_analysis(recs), too_few_points_error);
  // zero errors carry no slope information
  std::vector<SweepRecord> zeros(10);
  CHECK_THROWS_AS(trend_analysis(zeros), too_few_points_error);
}

TEST_CASE("csv emission", "[harness]") {
  ExperimentSpec s = base_thm1();
  s.primes = {7, 13};
  const SweepResult r = run_sweep(s);
  const std::string csv = to_csv(r.records);
  CHECK(csv.rfind("p,N,lhs,constant,abs_error,normalized_error,m1,m2,violations,"
                  "hypothesis,wall_ms\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  const std::string path = temp_path("charmoment_test.csv");
  emit(r.records, EmitFormat::kCsv, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == csv);
  std::remove(path.c_str());
}

TEST_CASE("json round trip is bit identical", "[harness]") {
  ExperimentSpec s = base_thm1();
  s.p_min = 5;
  s.p_max = 80;
  s.m = 0.3;
  const SweepResult r = run_sweep(s);
  const std::string once = to_json(r.records);
  const std::vector<SweepRecord> back = parse_records_json(once);
  CHECK(to_json(back) == once);
  REQUIRE(back.size() == r.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].lhs == r.records[i].lhs);
    CHECK(back[i].wall_ms == r.records[i].wall_ms);
    CHECK(back[i].hypothesis == r.records[i].hypothesis);
  }
  const std::string path = temp_path("charmoment_test.json");
  emit(r.records, EmitFormat::kJson, path);
  CHECK(to_json(load_records_json(path)) == once);
  std::remove(path.c_str());
}

TEST_CASE("emission failures surface as io errors", "[harness]") {
  CHECK_THROWS_AS(emit({}, EmitFormat::kCsv, "/nonexistent_zz/x.csv"), io_error);
  CHECK_THROWS_AS(load_records_json("/nonexistent_zz/x.json"), io_error);
  CHECK_THROWS_AS(parse_records_json("{not json"), io_error);
}
