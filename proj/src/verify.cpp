#include "srptq/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "srptq/analytics.hpp"
#include "srptq/commands.hpp"
#include "srptq/csv.hpp"
#include "srptq/engine.hpp"
#include "srptq/error.hpp"
#include "srptq/parallel.hpp"
#include "srptq/quadrature.hpp"
#include "srptq/scenarios.hpp"
#include "srptq/stats.hpp"

namespace srptq {

using nlohmann::json;

namespace {

std::string fmt(double v) { return format_number(v); }

template <class T>
void read(const json& obj, const char* key, T& dst) {
  if (obj.contains(key)) dst = obj.at(key).get<T>();
}

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) passed = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << (ok ? "" : "FAIL ") << what;
  }
};

// Bisection over quadrature of x e^{-x}, sharing nothing with the closed forms.
double threshold_oracle_exp(double rho) {
  const auto moment = [](double t) {
    return adaptive_simpson([](double x) { return x * std::exp(-x); }, 0.0, t, {1e-13, 1'000'000}).value;
  };
  const double target = 1.0 / rho;
  double lo = 0.0, hi = 1.0;
  while (moment(hi) < target) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (moment(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

SystemConfig sim_config(const SystemConfig& base, Discipline d, int servers, double horizon) {
  SystemConfig cfg = base.with_servers(servers);
  cfg.discipline = d;
  cfg.horizon = horizon;
  cfg.warmup = 0.1 * horizon;
  cfg.debug_invariants = false;
  return cfg;
}

void check_threshold(const SystemConfig&, const VerifyPlan& plan, Outcome& o) {
  const double rho = 1.4;
  const auto start = std::chrono::steady_clock::now();
  const auto r = solve_threshold(Distribution::exponential(1.0), rho);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double residual = std::fabs(1.0 - std::exp(-r.tau) * (1.0 + r.tau) - 1.0 / rho);
  const double oracle = threshold_oracle_exp(rho);
  o.require(residual <= plan.threshold_residual_tol, "residual " + fmt(residual));
  o.require(std::fabs(r.tau - oracle) <= 1e-8, "tau " + fmt(r.tau) + " vs oracle " + fmt(oracle));
  o.require(secs < plan.threshold_runtime_s, "solve " + fmt(secs) + " s");
}

void check_throughput_gain(const SystemConfig&, const VerifyPlan&, Outcome& o) {
  std::vector<Distribution> services;
  for (double m : {0.5, 1.0, 2.0}) services.push_back(Distribution::exponential(m));
  for (double a : {0.4, 1.0, 1.6}) services.push_back(Distribution::with_mean(Family::Weibull, a, 1.0));
  for (double a : {1.5, 2.0, 3.0}) services.push_back(Distribution::with_mean(Family::Pareto, a, 1.0));
  int ok = 0, total = 0;
  double min_margin = INFINITY;
  std::string worst;
  for (const auto& s : services) {
    for (double rho : {1.1, 1.4, 2.0}) {
      const double g = solve_threshold(s, rho).g_tau;
      ++total;
      if (g > 1.0 / rho) ++ok;
      if (g - 1.0 / rho < min_margin) {
        min_margin = g - 1.0 / rho;
        worst = s.describe() + " rho=" + fmt(rho);
      }
    }
  }
  o.require(ok == total, std::to_string(ok) + "/" + std::to_string(total) + " cases with G(tau) > 1/rho");
  o.detail << ", smallest margin " << fmt(min_margin) << " at " << worst;
}

void check_erlang(const SystemConfig&, const VerifyPlan& plan, Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  int worst_s = 0;
  for (int s = 1; s <= plan.erlang_max_servers; ++s) {
    const double d = std::fabs(erlang_blocking(s, s) - erlang_blocking_integral(s, s));
    if (d > worst) {
      worst = d;
      worst_s = s;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(worst <= plan.erlang_tol, "max |recursion - integral| " + fmt(worst) + " at s=" + std::to_string(worst_s));
  o.require(secs < plan.erlang_runtime_s, fmt(secs) + " s");
}

void check_coupling(const SystemConfig& base, const VerifyPlan& plan, Outcome& o) {
  SystemConfig exp_base = base;
  exp_base.service = Distribution::exponential(1.0);
  exp_base.patience = Distribution::exponential(1.0);
  const SystemConfig cfg = sim_config(exp_base, Discipline::SRPT, plan.coupling_servers, plan.coupling_horizon);
  const double tau = solve_threshold(cfg.service, cfg.rho, cfg.mu()).tau;
  const auto seeds = expand_seeds(plan.seed_base, static_cast<std::size_t>(plan.coupling_seeds));
  std::vector<CoupledCounters> res(seeds.size());
  const auto start = std::chrono::steady_clock::now();
  parallel_for(seeds.size(), plan.workers, [&](std::size_t i) {
    res[i] = run_coupled(cfg, tau, seeds[i], /*strict=*/false).counters;
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::uint64_t violations = 0, epochs = 0;
  std::int64_t min_slack = INT64_MAX;
  for (const auto& c : res) {
    violations += c.violations;
    epochs += c.epochs_checked;
    min_slack = std::min(min_slack, c.min_slack);
  }
  o.require(violations == 0, std::to_string(violations) + " violations over " + std::to_string(epochs) +
                                 " departure epochs, " + std::to_string(seeds.size()) + " seeds");
  o.detail << ", min slack " << min_slack;
  o.require(secs < plan.coupling_runtime_s, fmt(secs) + " s");
}

void check_collapse(const SystemConfig& base, const VerifyPlan& plan, Outcome& o) {
  const SystemConfig cfg = sim_config(base, Discipline::SRPT, plan.sweep_scales.front(), plan.sweep_horizon);
  const auto seeds = expand_seeds(plan.seed_base, static_cast<std::size_t>(plan.sweep_seeds));
  const auto start = std::chrono::steady_clock::now();
  const SweepReport rep = convergence_sweep(cfg, plan.sweep_scales, seeds, plan.workers);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const int top = plan.sweep_scales.back();
  const auto v = [&](Metric m) { return rep.at(top, m).estimate.value; };
  const double g = asymptotic_target(cfg, Metric::ThroughputPerArrival);
  const double theta_inv = cfg.patience.mean();

  o.require(v(Metric::PServedGivenShort) >= plan.min_p_served_short,
            "at s=" + std::to_string(top) + " P(Serv|S<=tau)=" + fmt(v(Metric::PServedGivenShort)));
  o.require(v(Metric::PServedGivenLong) <= plan.max_p_served_long,
            "P(Serv|S>tau)=" + fmt(v(Metric::PServedGivenLong)));
  o.require(std::fabs(v(Metric::ThroughputPerArrival) - g) <= plan.max_throughput_gap,
            "Th/lambda=" + fmt(v(Metric::ThroughputPerArrival)) + " vs G(tau)=" + fmt(g));
  o.require(std::fabs(v(Metric::WaitGivenAbandoned) - theta_inv) <= plan.max_abandon_wait_gap,
            "E[W|Ab]=" + fmt(v(Metric::WaitGivenAbandoned)) + " vs " + fmt(theta_inv));
  o.require(v(Metric::WaitGivenServed) <= plan.max_served_wait,
            "E[W|Serv]=" + fmt(v(Metric::WaitGivenServed)));
  std::string bad;
  for (const auto& r : rep.rows)
    if (!r.trend_ok) bad += (bad.empty() ? "" : ",") + std::string(to_string(r.metric)) + "@" + std::to_string(r.scale);
  o.require(bad.empty(), bad.empty() ? "gaps nonincreasing within CIs" : "gap grew: " + bad);
  o.require(secs < plan.sweep_runtime_s, fmt(secs) + " s");
}

void check_fcfs_fluid(const SystemConfig& base, const VerifyPlan& plan, Outcome& o) {
  SystemConfig cfg = sim_config(base, Discipline::FCFS, plan.fcfs_servers, plan.fcfs_horizon);
  cfg.patience = Distribution::exponential(1.0);
  const double fluid = fcfs_fluid_wait(cfg.patience, cfg.rho);
  const auto seeds = expand_seeds(plan.seed_base, static_cast<std::size_t>(plan.fcfs_seeds));
  const auto tables = run_replications(cfg, seeds, plan.workers);
  const Estimate w = summarize(tables)[Metric::WaitOverall];
  const double rel = std::fabs(w.value - fluid) / fluid;
  o.require(rel <= plan.fcfs_rel_tol, "wait " + fmt(w.value) + " +- " + fmt(w.half_width) + " vs fluid " +
                                          fmt(fluid) + " (rel " + fmt(rel) + ")");
}

void check_knapsack(const SystemConfig&, const VerifyPlan& plan, Outcome& o) {
  const auto service = Distribution::exponential(1.0);
  const auto th = solve_threshold(service, 1.4);
  const double bound =
      throughput_bound_oracle(service, th.tau, plan.knapsack_grid, KnapsackMode::MaxThroughput);
  const double rel = std::fabs(bound - th.g_tau) / th.g_tau;
  o.require(rel <= plan.knapsack_rel_tol, "bound " + fmt(bound) + " vs G(tau)=" + fmt(th.g_tau) + " (rel " + fmt(rel) + ")");

  const auto sol = solve_admission_knapsack(service, th.tau, plan.knapsack_grid, KnapsackMode::MaxThroughput);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < sol.selection.size(); ++i) {
    const double lo = sol.cell_lower[i];
    const double hi = i + 1 < sol.cell_lower.size() ? sol.cell_lower[i + 1] : INFINITY;
    if (lo <= th.tau && th.tau <= hi) continue;  // cells touching tau carry the fractional item
    const double indicator = hi <= th.tau ? 1.0 : 0.0;
    if (std::fabs(sol.selection[i] - indicator) > 1e-6) ++mismatches;
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " of " + std::to_string(sol.selection.size()) +
                                 " cells differ from 1{x<=tau}");
}

void check_crossover(const SystemConfig&, const VerifyPlan&, Outcome& o) {
  const double at_04 = figure1_wait_difference(0.4);
  const double at_10 = figure1_wait_difference(1.0);
  o.require(at_04 < 0.0, "FCFS-SRPT at 0.4: " + fmt(at_04));
  o.require(at_10 > 0.0, "at 1.0: " + fmt(at_10));
  if (at_04 < 0.0 && at_10 > 0.0) {
    const double x = figure1_crossover(0.4, 1.0);
    o.require(x > 0.4 && x < 1.0, "crossover at shape " + fmt(x));
  }
}

void check_figure2(const SystemConfig&, const VerifyPlan&, Outcome& o) {
  const Table t = figure2(default_figure2_grid(Family::Weibull), Family::Weibull);
  const auto shape = t.column_values("shape");
  const auto g = t.column_values("srpt_throughput");
  std::string bad;
  for (std::size_t i = 1; i < g.size(); ++i)
    if (!(g[i] < g[i - 1])) bad += " " + fmt(shape[i]);
  o.require(bad.empty(), "G(tau) from " + fmt(g.front()) + " at " + fmt(shape.front()) + " to " +
                             fmt(g.back()) + " at " + fmt(shape.back()) +
                             (bad.empty() ? "" : ", not decreasing at" + bad));
}

void check_insensitivity(const SystemConfig& base, const VerifyPlan& plan, Outcome& o) {
  SystemConfig exp_cfg = sim_config(base, Discipline::SRPT, plan.insensitivity_servers, plan.insensitivity_horizon);
  const double theta_inv = exp_cfg.patience.mean();
  exp_cfg.patience = Distribution::exponential(theta_inv);
  SystemConfig wb_cfg = exp_cfg;
  wb_cfg.patience = Distribution::with_mean(Family::Weibull, plan.insensitivity_patience_shape, theta_inv);
  const auto seeds = expand_seeds(plan.seed_base, static_cast<std::size_t>(plan.insensitivity_seeds));
  const SimMetrics a = summarize(run_replications(exp_cfg, seeds, plan.workers));
  const SimMetrics b = summarize(run_replications(wb_cfg, seeds, plan.workers));
  for (Metric m : {Metric::ThroughputPerArrival, Metric::WaitGivenAbandoned}) {
    const double diff = std::fabs(a[m].value - b[m].value);
    const double allowed = a[m].half_width + b[m].half_width;
    o.require(diff < allowed, std::string(to_string(m)) + " " + fmt(a[m].value) + " vs " + fmt(b[m].value) +
                                  " (diff " + fmt(diff) + ", allowed " + fmt(allowed) + ")");
  }
}

std::string concat(const CommandOutput& out) {
  std::string s;
  for (const auto& f : out) s += "== " + f.name + "\n" + f.content;
  return s;
}

void check_determinism(const SystemConfig& base, const VerifyPlan& plan, Outcome& o) {
  SystemConfig cfg = sim_config(base, Discipline::SRPT, plan.determinism_servers, plan.determinism_horizon);
  cfg.seeds = expand_seeds(plan.seed_base, 3);
  cfg.batches = 5;
  CommandOptions opts;
  opts.workers = plan.workers;
  opts.trace = true;
  opts.gnuplot = true;
  opts.scales = {plan.determinism_servers, 2 * plan.determinism_servers};

  const std::vector<std::pair<std::string, std::function<CommandOutput()>>> commands{
      {"threshold", [&] { return cmd_threshold(cfg); }},
      {"limits", [&] { return cmd_limits(cfg); }},
      {"simulate", [&] { return cmd_simulate(cfg, opts); }},
      {"couple", [&] { return cmd_couple(cfg, opts); }},
      {"sweep", [&] { return cmd_sweep(cfg, opts); }},
      {"figure1", [&] { return cmd_figure(1, opts); }},
      {"figure2", [&] { return cmd_figure(2, opts); }},
      {"figure3", [&] { return cmd_figure(3, opts); }},
  };
  std::string differing;
  std::size_t bytes = 0;
  for (const auto& [name, fn] : commands) {
    const std::string first = concat(fn());
    const std::string second = concat(fn());
    bytes += first.size();
    if (first != second) differing += " " + name;
  }
  // Worker count must not change the merged result either.
  SystemConfig fcfs = cfg;
  fcfs.discipline = Discipline::FCFS;
  CommandOptions serial = opts, pooled = opts;
  serial.workers = 1;
  pooled.workers = 3;
  if (concat(cmd_simulate(fcfs, serial)) != concat(cmd_simulate(fcfs, pooled))) differing += " simulate(workers)";
  o.require(differing.empty(), differing.empty()
                                   ? std::to_string(commands.size()) + " subcommands identical (" +
                                         std::to_string(bytes) + " bytes), independent of workers"
                                   : "outputs differ:" + differing);
}

}  // namespace

VerifyPlan parse_verify_plan(std::string_view json_text) {
  VerifyPlan p;
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigParse, e.what());
  }
  if (!doc.is_object() || !doc.contains("verify")) return p;
  const json& v = doc.at("verify");
  if (!v.is_object()) throw Error(ErrorCode::ConfigParse, "field 'verify': expected an object");
  static const std::vector<std::string> known{
      "criteria",         "seed_base",        "workers",          "coupling_seeds",
      "coupling_servers", "coupling_horizon", "sweep_scales",     "sweep_seeds",
      "sweep_horizon",    "fcfs_servers",     "fcfs_seeds",       "fcfs_horizon",
      "knapsack_grid",    "insensitivity_servers", "insensitivity_seeds", "insensitivity_horizon",
      "determinism_servers", "determinism_horizon"};
  for (const auto& [key, _] : v.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw Error(ErrorCode::ConfigParse, "field 'verify." + key + "': unknown field");
  try {
    read(v, "criteria", p.criteria);
    read(v, "seed_base", p.seed_base);
    read(v, "workers", p.workers);
    read(v, "coupling_seeds", p.coupling_seeds);
    read(v, "coupling_servers", p.coupling_servers);
    read(v, "coupling_horizon", p.coupling_horizon);
    read(v, "sweep_scales", p.sweep_scales);
    read(v, "sweep_seeds", p.sweep_seeds);
    read(v, "sweep_horizon", p.sweep_horizon);
    read(v, "fcfs_servers", p.fcfs_servers);
    read(v, "fcfs_seeds", p.fcfs_seeds);
    read(v, "fcfs_horizon", p.fcfs_horizon);
    read(v, "knapsack_grid", p.knapsack_grid);
    read(v, "insensitivity_servers", p.insensitivity_servers);
    read(v, "insensitivity_seeds", p.insensitivity_seeds);
    read(v, "insensitivity_horizon", p.insensitivity_horizon);
    read(v, "determinism_servers", p.determinism_servers);
    read(v, "determinism_horizon", p.determinism_horizon);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigParse, std::string("field 'verify': ") + e.what());
  }
  for (int id : p.criteria)
    if (id < 1 || id > 11) throw Error(ErrorCode::ConfigParse, "field 'verify.criteria': no criterion " + std::to_string(id));
  if (p.sweep_scales.empty()) throw Error(ErrorCode::ConfigParse, "field 'verify.sweep_scales': empty");
  if (p.workers < 1) throw Error(ErrorCode::ConfigParse, "field 'verify.workers': must be >= 1");
  return p;
}

std::string_view criterion_name(int id) {
  switch (id) {
    case 1: return "threshold";
    case 2: return "throughput-gain";
    case 3: return "erlang-b-oracle";
    case 4: return "coupling";
    case 5: return "state-space-collapse";
    case 6: return "fcfs-fluid";
    case 7: return "knapsack-bound";
    case 8: return "figure1-crossover";
    case 9: return "figure2-monotone";
    case 10: return "patience-insensitivity";
    case 11: return "determinism";
    default: throw Error(ErrorCode::InvalidArgument, "no criterion " + std::to_string(id));
  }
}

CheckResult run_criterion(int id, const SystemConfig& base, const VerifyPlan& plan) {
  using Check = void (*)(const SystemConfig&, const VerifyPlan&, Outcome&);
  static constexpr Check checks[] = {check_threshold,   check_throughput_gain, check_erlang,
                                     check_coupling,    check_collapse,        check_fcfs_fluid,
                                     check_knapsack,    check_crossover,       check_figure2,
                                     check_insensitivity, check_determinism};
  CheckResult r;
  r.id = id;
  r.name = std::string(criterion_name(id));
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    checks[id - 1](base, plan, o);
  } catch (const std::exception& e) {
    o.require(false, std::string("error: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = o.passed;
  r.detail = o.detail.str();
  return r;
}

std::vector<CheckResult> run_verification(const SystemConfig& base, const VerifyPlan& plan,
                                          const std::function<void(const CheckResult&)>& on_result) {
  std::vector<CheckResult> out;
  for (int id : plan.criteria) {
    out.push_back(run_criterion(id, base, plan));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string verification_report_json(std::span<const CheckResult> results) {
  json arr = json::array();
  bool all = true;
  for (const auto& r : results) {
    arr.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    all = all && r.passed;
  }
  return json{{"passed", all}, {"criteria", arr}}.dump(2) + "\n";
}

std::string format_result_line(const CheckResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "%s [%2d] ", r.passed ? "PASS" : "FAIL", r.id);
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
  return std::string(head) + r.name + " (" + secs + " s): " + r.detail;
}

}  // namespace srptq
