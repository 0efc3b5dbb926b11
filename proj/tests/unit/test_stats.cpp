#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "srptq/error.hpp"
#include "srptq/stats.hpp"

using namespace srptq;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SimTrace synthetic(std::size_t n, double wait) {
  SimTrace t;
  t.horizon = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    Customer c;
    c.id = i;
    c.arrival_time = static_cast<double>(i);
    c.service_req = c.remaining_service = 0.0;
    c.queue_time_used = wait;
    c.exit_time = c.arrival_time + wait;
    c.status = Status::Served;
    t.customers.push_back(c);
  }
  return t;
}

SystemConfig exp_config(int servers, double horizon) {
  SystemConfig cfg = SystemConfig{}.with_servers(servers);
  cfg.horizon = horizon;
  cfg.warmup = 0.1 * horizon;
  return cfg;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("degenerate trace with zero waits", "[estimate]") {
  const SimMetrics m = estimate(synthetic(150, 0.0), 0.0, 5);
  CHECK(m[Metric::WaitOverall].value == 0.0);
  CHECK(m[Metric::WaitOverall].half_width == 0.0);
  CHECK(m[Metric::ThroughputPerArrival].value == 1.0);
  CHECK(m.batch_count == 5);
}

TEST_CASE("zero-variance batches", "[estimate]") {
  const SimMetrics m = estimate(synthetic(150, 1.0), 0.0, 5);
  CHECK(m[Metric::WaitOverall].value == 1.0);
  CHECK(m[Metric::WaitOverall].half_width == 0.0);
  // No customer abandoned, so the conditional wait has no batch to average.
  CHECK(std::isnan(m[Metric::WaitGivenAbandoned].value));
  CHECK(m[Metric::WaitGivenAbandoned].samples == 0);
}

TEST_CASE("insufficient data", "[estimate]") {
  CHECK_THROWS_WITH(estimate(synthetic(149, 0.0), 0.0, 5), ContainsSubstring("insufficient data"));
  CHECK_THROWS_AS(estimate(synthetic(1000, 0.0), 0.0, 4), Error);
  CHECK_THROWS_AS(estimate(synthetic(1000, 0.0), 1000.0, 5), Error);
}

TEST_CASE("warmup customers are dropped and the remainder trimmed", "[estimate]") {
  SimTrace t = synthetic(400, 0.0);
  for (std::size_t i = 0; i < 100; ++i) t.customers[i].queue_time_used = 50.0;
  const BatchTable b = batch_means(t, 100.0, 7);
  CHECK(b.customers == 7 * (300 / 7));
  CHECK(summarize(std::span<const BatchTable>(&b, 1))[Metric::WaitOverall].value == 0.0);
}

TEST_CASE("fractions add up to one", "[estimate]") {
  for (auto d : {Discipline::SRPT, Discipline::FCFS, Discipline::PriorityLoss}) {
    SystemConfig cfg = exp_config(10, 1'000.0);
    cfg.discipline = d;
    const SimMetrics m = estimate(run(cfg, 11), cfg.warmup, 20);
    const double total = m[Metric::ThroughputPerArrival].value + m[Metric::AbandonmentFraction].value +
                         m[Metric::LostFraction].value + m[Metric::ResidualFraction].value;
    CHECK_THAT(total, WithinAbs(1.0, 1e-12));
    for (Metric x : all_metrics()) {
      const auto& e = m[x];
      if (std::isnan(e.value)) continue;
      CHECK(e.half_width >= 0.0);
      if (x != Metric::WaitGivenServed && x != Metric::WaitGivenAbandoned && x != Metric::WaitOverall &&
          x != Metric::WaitGivenShort && x != Metric::WaitGivenLong) {
        CHECK(e.value >= 0.0);
        CHECK(e.value <= 1.0);
      }
    }
  }
}

TEST_CASE("pooling is invariant to batch and replication order", "[estimate]") {
  const SystemConfig cfg = exp_config(10, 1'000.0);
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4};
  std::vector<BatchTable> tables = run_replications(cfg, seeds);
  const SimMetrics ref = summarize(tables);
  std::mt19937 g(3);
  for (int round = 0; round < 5; ++round) {
    std::shuffle(tables.begin(), tables.end(), g);
    for (auto& t : tables) std::shuffle(t.batches.begin(), t.batches.end(), g);
    const SimMetrics m = summarize(tables);
    for (Metric x : all_metrics()) {
      CHECK(same_bits(m[x].value, ref[x].value));
      CHECK(same_bits(m[x].half_width, ref[x].half_width));
    }
  }
}

TEST_CASE("worker count does not change the merged result", "[estimate]") {
  const SystemConfig cfg = exp_config(10, 800.0);
  const std::vector<std::uint64_t> seeds{5, 6, 7, 8, 9};
  const SimMetrics a = summarize(run_replications(cfg, seeds, 1));
  const SimMetrics b = summarize(run_replications(cfg, seeds, 3));
  for (Metric x : all_metrics()) CHECK(same_bits(a[x].value, b[x].value));
}

TEST_CASE("doubling the horizon shrinks half-widths", "[estimate]") {
  const auto mean_hw = [](double horizon) {
    SystemConfig cfg = exp_config(10, horizon);
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
      sum += estimate(run(cfg, seed), 200.0, 20)[Metric::ThroughputPerArrival].half_width;
    return sum / 20.0;
  };
  const double h1 = mean_hw(2'000.0);
  const double h2 = mean_hw(4'000.0);
  INFO("mean half-width " << h1 << " -> " << h2);
  CHECK(h2 <= 1.1 * h1);
}

TEST_CASE("sweep over a single scale", "[sweep]") {
  const SystemConfig cfg = exp_config(10, 1'000.0);
  const std::vector<int> scales{10};
  const std::vector<std::uint64_t> seeds{1, 2};
  const SweepReport r = convergence_sweep(cfg, scales, seeds);
  CHECK(r.scales == scales);
  CHECK(r.rows.size() == kMetricCount);
  CHECK(r.trends_ok());
  CHECK_THAT(r.at(10, Metric::ThroughputPerArrival).target, WithinAbs(0.918547308511, 1e-11));
  CHECK(r.at(10, Metric::WaitGivenAbandoned).target == 1.0);
  std::ostringstream os;
  write_sweep_csv(os, r);
  CHECK_THAT(os.str(), StartsWith("# srptq sweep v1\nscale,metric,estimate,half_width,target,gap,trend_ok\n"));
}

TEST_CASE("sweep targets per discipline", "[sweep]") {
  SystemConfig cfg = exp_config(10, 1'000.0);
  cfg.discipline = Discipline::FCFS;
  CHECK_THAT(asymptotic_target(cfg, Metric::ThroughputPerArrival), WithinAbs(1.0 / 1.4, 1e-12));
  CHECK_THAT(asymptotic_target(cfg, Metric::WaitOverall), WithinAbs(0.285714285714, 1e-11));
  cfg.discipline = Discipline::SRPT;
  CHECK_THAT(asymptotic_target(cfg, Metric::WaitOverall), WithinAbs(0.0814526914893, 1e-11));
  CHECK(asymptotic_target(cfg, Metric::PServedGivenShort) == 1.0);
  CHECK(asymptotic_target(cfg, Metric::PServedGivenLong) == 0.0);
}

TEST_CASE("metrics csv layout", "[estimate]") {
  std::ostringstream os;
  write_metrics_csv(os, estimate(synthetic(150, 0.25), 0.0, 5));
  const std::string s = os.str();
  CHECK_THAT(s, StartsWith("# srptq metrics v1\nmetric,estimate,half_width,batches\n"));
  CHECK_THAT(s, ContainsSubstring("\nwait_overall,0.25,0,5\n"));
}

TEST_CASE("SRPT wait of abandoning customers at s=200", "[slow]") {
  SystemConfig cfg = exp_config(200, 20'000.0);
  cfg.warmup = 2'000.0;
  const SimMetrics m = estimate(run(cfg, 1), cfg.warmup, 20);
  INFO("E[W|Ab] = " << m[Metric::WaitGivenAbandoned].value << " +- " << m[Metric::WaitGivenAbandoned].half_width);
  CHECK_THAT(m[Metric::WaitGivenAbandoned].value, WithinRel(1.0, 0.10));
}
