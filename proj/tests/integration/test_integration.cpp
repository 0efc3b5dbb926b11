#include <sstream>
#include <string>

#include "catch_amalgamated.hpp"
#include "json.hpp"
#include "srptq/commands.hpp"
#include "srptq/config.hpp"
#include "srptq/error.hpp"
#include "srptq/verify.hpp"

using namespace srptq;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

SystemConfig small_config() {
  SystemConfig cfg = load_config(SRPTQ_CONFIG_DIR "/default.json");
  cfg.horizon = 1'000.0;
  cfg.warmup = 100.0;
  cfg.seeds = {1, 2, 3};
  return cfg;
}

}  // namespace

TEST_CASE("shipped configs load", "[integration]") {
  for (const char* name : {"default.json", "verify.json", "verify_quick.json", "pareto_service.json"}) {
    INFO(name);
    CHECK_NOTHROW(load_config(std::string(SRPTQ_CONFIG_DIR "/") + name));
  }
  const SystemConfig cfg = load_config(SRPTQ_CONFIG_DIR "/default.json");
  CHECK(cfg.servers == 10);
  CHECK(cfg.lambda == 14.0);
}

TEST_CASE("simulate emits one metrics row per metric plus traces", "[integration]") {
  CommandOptions opts;
  opts.trace = true;
  const CommandOutput out = cmd_simulate(small_config(), opts);
  REQUIRE(out.size() == 4);
  CHECK(out[0].name == "metrics.csv");
  const auto rows = lines(out[0].content);
  CHECK(rows.size() == 2 + 13);
  CHECK(out[1].name == "trace_seed1.csv");
  CHECK_THAT(out[1].content, StartsWith("# srptq trace v1\nid,arrival,S,T,wait,status,class\n"));
}

TEST_CASE("disciplines order as expected on one workload", "[integration]") {
  // At rho = 1.4 SRPT serves more customers per arrival than FCFS, and every
  // policy's estimate stays near its limit already at moderate scale.
  SystemConfig cfg = small_config().with_servers(50);
  cfg.horizon = 2'000.0;
  cfg.warmup = 200.0;
  double th[2];
  for (int i = 0; i < 2; ++i) {
    cfg.discipline = i == 0 ? Discipline::SRPT : Discipline::FCFS;
    const auto rows = lines(cmd_simulate(cfg, {})[0].content);
    const std::string& tp = rows[2];
    REQUIRE_THAT(tp, StartsWith("throughput_per_arrival,"));
    th[i] = std::stod(tp.substr(tp.find(',') + 1));
  }
  CHECK(th[0] > th[1]);
  CHECK(th[1] == Catch::Approx(1.0 / 1.4).margin(0.02));
}

TEST_CASE("couple reports zero violations", "[integration]") {
  const auto out = cmd_couple(small_config(), {});
  const auto rows = lines(out[0].content);
  REQUIRE(rows.size() == 2 + 3);
  CHECK(rows[1] == "seed,n_L1,n_O,epochs_checked,violations,min_slack,rate_L1,rate_O,analytic_rate_L1");
  for (std::size_t i = 2; i < rows.size(); ++i) {
    std::vector<std::string> f;
    std::istringstream is(rows[i]);
    for (std::string x; std::getline(is, x, ',');) f.push_back(x);
    CHECK(f[4] == "0");
    CHECK(std::stoull(f[1]) <= std::stoull(f[2]));
  }
}

TEST_CASE("figures and gnuplot companions", "[integration]") {
  CommandOptions opts;
  opts.gnuplot = true;
  for (int which : {1, 2, 3}) {
    const auto out = cmd_figure(which, opts);
    REQUIRE(out.size() == 2);
    CHECK_THAT(out[1].content, ContainsSubstring(out[0].name));
  }
  opts.family = Family::Pareto;
  CHECK(cmd_figure(2, opts)[0].name == "figure2_pareto.csv");
  CHECK_THROWS_AS(cmd_figure(4, opts), Error);
}

TEST_CASE("analytic criteria pass and report as JSON", "[integration]") {
  VerifyPlan plan;
  plan.criteria = {1, 2, 3, 7, 8, 9};
  const auto results = run_verification(SystemConfig{}, plan);
  REQUIRE(results.size() == 6);
  for (const auto& r : results) {
    INFO(format_result_line(r));
    CHECK(r.passed);
  }
  const auto j = nlohmann::json::parse(verification_report_json(results));
  CHECK(j["passed"] == true);
  CHECK(j["criteria"].size() == 6);
  CHECK_THAT(format_result_line(results[0]), StartsWith("PASS [ 1] threshold ("));
}

TEST_CASE("a failing criterion is reported, not thrown", "[integration]") {
  VerifyPlan plan;
  plan.knapsack_grid = 10;  // below the oracle's minimum grid
  const CheckResult r = run_criterion(7, SystemConfig{}, plan);
  CHECK_FALSE(r.passed);
  CHECK_THAT(r.detail, ContainsSubstring("error"));
  CHECK_THAT(format_result_line(r), StartsWith("FAIL [ 7]"));
}
