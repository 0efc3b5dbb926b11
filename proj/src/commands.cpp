#include "srptq/commands.hpp"

#include <sstream>

#include "srptq/analytics.hpp"
#include "srptq/csv.hpp"
#include "srptq/engine.hpp"
#include "srptq/error.hpp"
#include "srptq/parallel.hpp"
#include "srptq/scenarios.hpp"
#include "srptq/stats.hpp"

namespace srptq {

namespace {

OutputFile table_file(const Table& t) {
  std::ostringstream os;
  write_table_csv(os, t);
  return {t.name + ".csv", os.str()};
}

}  // namespace

CommandOutput cmd_threshold(const SystemConfig& cfg) {
  return {table_file(threshold_table(solve_threshold(cfg.service, cfg.rho, cfg.mu()), cfg.rho))};
}

CommandOutput cmd_limits(const SystemConfig& cfg) {
  const AsymptoticReport r = asymptotic_report(cfg.service, cfg.patience, cfg.rho);
  return {table_file(report_table(std::span<const AsymptoticReport>(&r, 1)))};
}

CommandOutput cmd_simulate(const SystemConfig& cfg, const CommandOptions& opts) {
  cfg.validate();
  CommandOutput out;
  std::vector<BatchTable> tables(cfg.seeds.size());
  std::vector<std::string> traces(opts.trace ? cfg.seeds.size() : 0);
  parallel_for(cfg.seeds.size(), opts.workers, [&](std::size_t i) {
    const SimTrace trace = run(cfg, cfg.seeds[i]);
    tables[i] = batch_means(trace, cfg.warmup, cfg.batches);
    tables[i].replication = i;
    if (opts.trace) {
      std::ostringstream os;
      write_trace_csv(os, trace);
      traces[i] = os.str();
    }
  });
  std::ostringstream os;
  write_metrics_csv(os, summarize(tables));
  out.push_back({"metrics.csv", os.str()});
  for (std::size_t i = 0; i < traces.size(); ++i)
    out.push_back({"trace_seed" + std::to_string(cfg.seeds[i]) + ".csv", std::move(traces[i])});
  return out;
}

CommandOutput cmd_couple(const SystemConfig& cfg, const CommandOptions& opts) {
  cfg.validate();
  const double tau = solve_threshold(cfg.service, cfg.rho, cfg.mu()).tau;
  const double g_tau = cfg.service.cdf(tau);
  std::vector<CoupledCounters> results(cfg.seeds.size());
  parallel_for(cfg.seeds.size(), opts.workers, [&](std::size_t i) {
    results[i] = run_coupled(cfg, tau, cfg.seeds[i], /*strict=*/false).counters;
  });

  std::ostringstream os;
  os << "# srptq coupled v1\n";
  os << "seed,n_L1,n_O,epochs_checked,violations,min_slack,rate_L1,rate_O,analytic_rate_L1\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& c = results[i];
    CsvRow row;
    row.add(cfg.seeds[i]).add(c.n_L1).add(c.n_O).add(c.epochs_checked).add(c.violations);
    row.add(c.min_slack);
    row.add(static_cast<double>(c.n_L1) / cfg.horizon).add(static_cast<double>(c.n_O) / cfg.horizon);
    row.add(loss_class1_throughput(cfg.lambda, cfg.servers, g_tau));
    os << row.str() << '\n';
  }
  return {{"coupled.csv", os.str()}};
}

CommandOutput cmd_sweep(const SystemConfig& cfg, const CommandOptions& opts) {
  const SweepReport report = convergence_sweep(cfg, opts.scales, cfg.seeds, opts.workers);
  std::ostringstream os;
  write_sweep_csv(os, report);
  return {{"sweep.csv", os.str()}};
}

CommandOutput cmd_figure(int which, const CommandOptions& opts) {
  Table t;
  switch (which) {
    case 1: {
      const auto grid = opts.grid.empty() ? default_figure1_grid(opts.family) : opts.grid;
      t = figure1(grid, opts.family);
      break;
    }
    case 2: {
      const auto grid = opts.grid.empty() ? default_figure2_grid(opts.family) : opts.grid;
      t = figure2(grid, opts.family);
      break;
    }
    case 3: {
      const auto grid = opts.grid.empty() ? default_figure3_grid() : opts.grid;
      t = figure3(grid, opts.patience_shape);
      break;
    }
    default: throw Error(ErrorCode::InvalidArgument, "figure must be 1, 2 or 3");
  }
  CommandOutput out{table_file(t)};
  if (opts.gnuplot) out.push_back({t.name + ".gp", gnuplot_script(t, t.name + ".csv")});
  return out;
}

}  // namespace srptq
