#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "srptq/config.hpp"
#include "srptq/engine.hpp"

namespace srptq {

enum class Metric : std::size_t {
  ThroughputPerArrival,
  ThroughputShort,  // served short customers per arrival
  ThroughputLong,
  PServedGivenShort,
  PServedGivenLong,
  WaitGivenServed,
  WaitGivenAbandoned,
  WaitOverall,
  WaitGivenShort,
  WaitGivenLong,
  AbandonmentFraction,
  LostFraction,
  ResidualFraction,
};
inline constexpr std::size_t kMetricCount = 13;

std::string_view to_string(Metric m);
std::span<const Metric> all_metrics();

struct Estimate {
  double value = std::numeric_limits<double>::quiet_NaN();
  double half_width = std::numeric_limits<double>::quiet_NaN();
  std::size_t samples = 0;  // batch means that entered the estimate
};

struct SimMetrics {
  std::array<Estimate, kMetricCount> values{};
  std::size_t replication_count = 0;
  std::size_t batch_count = 0;
  double confidence = 0.95;

  const Estimate& operator[](Metric m) const { return values[static_cast<std::size_t>(m)]; }
  Estimate& operator[](Metric m) { return values[static_cast<std::size_t>(m)]; }
};

/// Per-batch means of every metric for one replication. A conditional metric
/// is NaN in a batch that has no customer in the conditioning event.
struct BatchTable {
  std::uint64_t replication = 0;
  std::size_t customers = 0;  // post-warmup customers used
  std::vector<std::array<double, kMetricCount>> batches;
};

/// Splits customers arriving at or after `warmup` into `batches` equal-count
/// batches (the remainder beyond batches * floor(n / batches) is dropped).
/// Throws InsufficientData if a batch would hold fewer than 30 customers.
BatchTable batch_means(const SimTrace& trace, double warmup, int batches);

/// Pools batch means of all tables into mean +- t-based half-width. Values are
/// sorted before summation, so the result does not depend on the order of
/// `tables` or of batches within them.
SimMetrics summarize(std::span<const BatchTable> tables, double confidence = 0.95);

SimMetrics estimate(const SimTrace& trace, double warmup, int batches);

/// Runs one replication per seed (fanned out over `workers` threads) and
/// returns their batch tables ordered by seed position.
std::vector<BatchTable> run_replications(const SystemConfig& cfg,
                                         std::span<const std::uint64_t> seeds, int workers = 1);

void write_metrics_csv(std::ostream& os, const SimMetrics& m);

struct SweepRow {
  int scale = 0;
  Metric metric = Metric::ThroughputPerArrival;
  Estimate estimate;
  double target = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  bool trend_ok = true;  // gap did not grow beyond the two half-widths vs previous scale
};

struct SweepReport {
  std::vector<int> scales;
  std::vector<SweepRow> rows;  // scale-major
  std::vector<SimMetrics> per_scale;

  const SweepRow& at(int scale, Metric m) const;
  bool trends_ok() const;
};

/// Asymptotic target of a metric for the configuration's discipline, NaN if
/// none applies.
double asymptotic_target(const SystemConfig& cfg, Metric m);

/// Estimates every metric at each server count (rho held fixed) and compares
/// it with its limit.
SweepReport convergence_sweep(const SystemConfig& base, std::span<const int> scales,
                              std::span<const std::uint64_t> seeds, int workers = 1);

void write_sweep_csv(std::ostream& os, const SweepReport& report);

}  // namespace srptq
