#include "srptq/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>
#include <ostream>

#include "srptq/analytics.hpp"
#include "srptq/csv.hpp"
#include "srptq/error.hpp"
#include "srptq/parallel.hpp"

namespace srptq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kMinBatchCustomers = 30;

constexpr std::array<Metric, kMetricCount> kAllMetrics{
    Metric::ThroughputPerArrival, Metric::ThroughputShort,     Metric::ThroughputLong,
    Metric::PServedGivenShort,    Metric::PServedGivenLong,    Metric::WaitGivenServed,
    Metric::WaitGivenAbandoned,   Metric::WaitOverall,         Metric::WaitGivenShort,
    Metric::WaitGivenLong,        Metric::AbandonmentFraction, Metric::LostFraction,
    Metric::ResidualFraction};

std::size_t idx(Metric m) { return static_cast<std::size_t>(m); }

double ratio(double num, std::size_t den) { return den == 0 ? kNaN : num / static_cast<double>(den); }

// Mean and half-width over values sorted first, so summation order is fixed.
Estimate pooled(std::vector<double> v, double confidence) {
  std::erase_if(v, [](double x) { return std::isnan(x); });
  Estimate e;
  e.samples = v.size();
  if (v.empty()) return e;
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  e.value = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() < 2) return e;
  double ss = 0.0;
  for (double x : v) ss += (x - e.value) * (x - e.value);
  const double sd = std::sqrt(ss / (n - 1.0));
  boost::math::students_t t(n - 1.0);
  const double q = boost::math::quantile(boost::math::complement(t, 0.5 * (1.0 - confidence)));
  e.half_width = q * sd / std::sqrt(n);
  return e;
}

}  // namespace

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::ThroughputPerArrival: return "throughput_per_arrival";
    case Metric::ThroughputShort: return "throughput_short";
    case Metric::ThroughputLong: return "throughput_long";
    case Metric::PServedGivenShort: return "p_served_given_short";
    case Metric::PServedGivenLong: return "p_served_given_long";
    case Metric::WaitGivenServed: return "wait_given_served";
    case Metric::WaitGivenAbandoned: return "wait_given_abandoned";
    case Metric::WaitOverall: return "wait_overall";
    case Metric::WaitGivenShort: return "wait_given_short";
    case Metric::WaitGivenLong: return "wait_given_long";
    case Metric::AbandonmentFraction: return "abandonment_fraction";
    case Metric::LostFraction: return "lost_fraction";
    case Metric::ResidualFraction: return "residual_fraction";
  }
  return "?";
}

std::span<const Metric> all_metrics() { return kAllMetrics; }

BatchTable batch_means(const SimTrace& trace, double warmup, int batches) {
  if (batches < 5) throw Error(ErrorCode::InvalidArgument, "batches must be >= 5");
  if (!(trace.horizon > warmup) || warmup < 0.0)
    throw Error(ErrorCode::InvalidArgument, "warmup must lie in [0, horizon)");

  const auto& cs = trace.customers;
  const auto first = std::lower_bound(cs.begin(), cs.end(), warmup,
                                      [](const Customer& c, double w) { return c.arrival_time < w; });
  const std::size_t start = static_cast<std::size_t>(first - cs.begin());
  const std::size_t n = cs.size() - start;
  const std::size_t per_batch = n / static_cast<std::size_t>(batches);
  if (per_batch < kMinBatchCustomers)
    throw Error(ErrorCode::InsufficientData,
                std::to_string(n) + " post-warmup customers for " + std::to_string(batches) +
                    " batches; need " + std::to_string(kMinBatchCustomers) + " per batch");

  BatchTable table;
  table.customers = per_batch * static_cast<std::size_t>(batches);
  table.batches.reserve(static_cast<std::size_t>(batches));
  for (int b = 0; b < batches; ++b) {
    std::size_t short_n = 0, long_n = 0, served_short = 0, served_long = 0;
    std::size_t abandoned = 0, lost = 0, residual = 0;
    std::size_t done = 0, done_short = 0, done_long = 0;
    double w_served = 0.0, w_abandoned = 0.0, w_all = 0.0, w_short = 0.0, w_long = 0.0;

    const std::size_t lo = start + static_cast<std::size_t>(b) * per_batch;
    for (std::size_t i = lo; i < lo + per_batch; ++i) {
      const Customer& c = cs[i];
      const bool is_short = c.class_label == JobClass::Short;
      (is_short ? short_n : long_n)++;
      if (!is_terminal(c.status)) {
        ++residual;
        continue;
      }
      const double w = c.queue_time_used;
      ++done;
      w_all += w;
      if (is_short) {
        ++done_short;
        w_short += w;
      } else {
        ++done_long;
        w_long += w;
      }
      switch (c.status) {
        case Status::Served:
          (is_short ? served_short : served_long)++;
          w_served += w;
          break;
        case Status::Abandoned:
          ++abandoned;
          w_abandoned += w;
          break;
        case Status::Lost: ++lost; break;
        default: break;
      }
    }
    const std::size_t served = served_short + served_long;
    std::array<double, kMetricCount> row{};
    row[idx(Metric::ThroughputPerArrival)] = ratio(static_cast<double>(served), per_batch);
    row[idx(Metric::ThroughputShort)] = ratio(static_cast<double>(served_short), per_batch);
    row[idx(Metric::ThroughputLong)] = ratio(static_cast<double>(served_long), per_batch);
    row[idx(Metric::PServedGivenShort)] = ratio(static_cast<double>(served_short), short_n);
    row[idx(Metric::PServedGivenLong)] = ratio(static_cast<double>(served_long), long_n);
    row[idx(Metric::WaitGivenServed)] = ratio(w_served, served);
    row[idx(Metric::WaitGivenAbandoned)] = ratio(w_abandoned, abandoned);
    row[idx(Metric::WaitOverall)] = ratio(w_all, done);
    row[idx(Metric::WaitGivenShort)] = ratio(w_short, done_short);
    row[idx(Metric::WaitGivenLong)] = ratio(w_long, done_long);
    row[idx(Metric::AbandonmentFraction)] = ratio(static_cast<double>(abandoned), per_batch);
    row[idx(Metric::LostFraction)] = ratio(static_cast<double>(lost), per_batch);
    row[idx(Metric::ResidualFraction)] = ratio(static_cast<double>(residual), per_batch);
    table.batches.push_back(row);
  }
  return table;
}

SimMetrics summarize(std::span<const BatchTable> tables, double confidence) {
  SimMetrics out;
  out.confidence = confidence;
  out.replication_count = tables.size();
  for (const auto& t : tables) out.batch_count += t.batches.size();
  for (Metric m : kAllMetrics) {
    std::vector<double> v;
    v.reserve(out.batch_count);
    for (const auto& t : tables)
      for (const auto& row : t.batches) v.push_back(row[idx(m)]);
    out[m] = pooled(std::move(v), confidence);
  }
  return out;
}

SimMetrics estimate(const SimTrace& trace, double warmup, int batches) {
  const BatchTable t = batch_means(trace, warmup, batches);
  return summarize(std::span<const BatchTable>(&t, 1));
}

std::vector<BatchTable> run_replications(const SystemConfig& cfg,
                                         std::span<const std::uint64_t> seeds, int workers) {
  cfg.validate();
  std::vector<BatchTable> out(seeds.size());
  parallel_for(seeds.size(), workers, [&](std::size_t i) {
    const SimTrace trace = run(cfg, seeds[i]);
    out[i] = batch_means(trace, cfg.warmup, cfg.batches);
    out[i].replication = i;
  });
  return out;
}

void write_metrics_csv(std::ostream& os, const SimMetrics& m) {
  os << "# srptq metrics v1\n";
  os << "metric,estimate,half_width,batches\n";
  for (Metric k : kAllMetrics) {
    CsvRow row;
    row.add(to_string(k)).add(m[k].value).add(m[k].half_width).add(m[k].samples);
    os << row.str() << '\n';
  }
}

const SweepRow& SweepReport::at(int scale, Metric m) const {
  for (const auto& r : rows)
    if (r.scale == scale && r.metric == m) return r;
  throw Error(ErrorCode::InvalidArgument, "no sweep row for scale " + std::to_string(scale));
}

bool SweepReport::trends_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.trend_ok; });
}

double asymptotic_target(const SystemConfig& cfg, Metric m) {
  const double theta_inv = cfg.patience.mean();
  if (!(cfg.rho > 1.0)) return kNaN;
  switch (cfg.discipline) {
    case Discipline::SRPT: {
      const double g = solve_threshold(cfg.service, cfg.rho, cfg.mu()).g_tau;
      switch (m) {
        case Metric::ThroughputPerArrival: return g;
        case Metric::ThroughputShort: return g;
        case Metric::ThroughputLong: return 0.0;
        case Metric::PServedGivenShort: return 1.0;
        case Metric::PServedGivenLong: return 0.0;
        case Metric::WaitGivenServed: return 0.0;
        case Metric::WaitGivenAbandoned: return theta_inv;
        case Metric::WaitOverall: return (1.0 - g) * theta_inv;
        case Metric::WaitGivenShort: return 0.0;
        case Metric::WaitGivenLong: return theta_inv;
        case Metric::AbandonmentFraction: return 1.0 - g;
        default: return kNaN;
      }
    }
    case Discipline::FCFS:
    case Discipline::LCFS:
      switch (m) {
        case Metric::ThroughputPerArrival: return 1.0 / cfg.rho;
        case Metric::AbandonmentFraction: return 1.0 - 1.0 / cfg.rho;
        case Metric::WaitOverall:
          return cfg.discipline == Discipline::FCFS ? fcfs_fluid_wait(cfg.patience, cfg.rho)
                                                    : lcfs_fluid_wait(theta_inv, cfg.rho);
        default: return kNaN;
      }
    case Discipline::PriorityLoss:
      switch (m) {
        case Metric::PServedGivenShort: return 1.0;
        case Metric::PServedGivenLong: return 0.0;
        case Metric::ThroughputPerArrival:
          return solve_threshold(cfg.service, cfg.rho, cfg.mu()).g_tau;
        default: return kNaN;
      }
  }
  return kNaN;
}

SweepReport convergence_sweep(const SystemConfig& base, std::span<const int> scales,
                              std::span<const std::uint64_t> seeds, int workers) {
  SweepReport report;
  report.scales.assign(scales.begin(), scales.end());
  for (std::size_t k = 0; k < scales.size(); ++k) {
    const SystemConfig cfg = base.with_servers(scales[k]);
    const auto tables = run_replications(cfg, seeds, workers);
    report.per_scale.push_back(summarize(tables));
    const SimMetrics& m = report.per_scale.back();
    for (Metric metric : kAllMetrics) {
      SweepRow row;
      row.scale = scales[k];
      row.metric = metric;
      row.estimate = m[metric];
      row.target = asymptotic_target(cfg, metric);
      row.gap = std::fabs(row.estimate.value - row.target);
      if (k > 0 && std::isfinite(row.gap)) {
        const SweepRow& prev = report.at(scales[k - 1], metric);
        if (std::isfinite(prev.gap)) {
          auto hw = [](const Estimate& e) { return std::isfinite(e.half_width) ? e.half_width : 0.0; };
          row.trend_ok = row.gap <= prev.gap + hw(prev.estimate) + hw(row.estimate);
        }
      }
      report.rows.push_back(row);
    }
  }
  return report;
}

void write_sweep_csv(std::ostream& os, const SweepReport& report) {
  os << "# srptq sweep v1\n";
  os << "scale,metric,estimate,half_width,target,gap,trend_ok\n";
  for (const auto& r : report.rows) {
    CsvRow row;
    row.add(r.scale).add(to_string(r.metric)).add(r.estimate.value).add(r.estimate.half_width);
    row.add(r.target).add(r.gap).add(r.trend_ok);
    os << row.str() << '\n';
  }
}

}  // namespace srptq
