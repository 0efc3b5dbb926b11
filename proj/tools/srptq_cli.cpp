// srptq: analytic limits, simulation and verification for many-server
// queues with abandonment under SRPT and blind policies.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "srptq/commands.hpp"
#include "srptq/config.hpp"
#include "srptq/error.hpp"
#include "srptq/verify.hpp"

namespace fs = std::filesystem;
using namespace srptq;

namespace {

struct Args {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed_base;
  std::optional<int> replications;
  int workers = 1;
  bool debug_invariants = false;

  std::optional<double> rho;
  std::optional<int> servers;
  std::optional<double> lambda;
  std::optional<std::string> discipline;
  std::optional<double> horizon;
  std::optional<double> warmup;
  std::optional<int> batches;

  bool trace = false;
  bool gnuplot = false;
  std::string family = "weibull";
  double patience_shape = 0.4;
  std::vector<int> scales;
  std::vector<double> grid;
  std::vector<int> criteria;
  bool json_report = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigParse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SystemConfig build_config(const Args& a, const std::string& text) {
  SystemConfig cfg = text.empty() ? SystemConfig{} : parse_config(text);
  if (a.rho || a.servers || a.lambda) {
    // Flags override the file; an unspecified member of the triple is
    // re-derived unless two are pinned by flags.
    std::optional<double> lam = a.lambda;
    std::optional<int> s = a.servers;
    std::optional<double> r = a.rho;
    const int given = (lam ? 1 : 0) + (s ? 1 : 0) + (r ? 1 : 0);
    if (given == 1) {
      if (lam) s = cfg.servers;
      else r = cfg.rho;
    }
    const auto t = resolve_rates(lam, s, r, cfg.mu());
    cfg.lambda = t.lambda;
    cfg.servers = t.servers;
    cfg.rho = t.rho;
  }
  if (a.discipline) cfg.discipline = parse_discipline(*a.discipline);
  if (a.horizon) {
    cfg.horizon = *a.horizon;
    if (!a.warmup) cfg.warmup = 0.1 * cfg.horizon;
  }
  if (a.warmup) cfg.warmup = *a.warmup;
  if (a.batches) cfg.batches = *a.batches;
  if (a.seed_base || a.replications)
    cfg.seeds = expand_seeds(a.seed_base.value_or(cfg.seeds.front()),
                             static_cast<std::size_t>(a.replications.value_or(static_cast<int>(cfg.seeds.size()))));
  if (a.debug_invariants) cfg.debug_invariants = true;
  return cfg;
}

CommandOptions command_options(const Args& a) {
  CommandOptions o;
  o.workers = a.workers;
  o.trace = a.trace;
  o.gnuplot = a.gnuplot;
  if (!a.scales.empty()) o.scales = a.scales;
  o.family = parse_family(a.family);
  o.grid = a.grid;
  o.patience_shape = a.patience_shape;
  return o;
}

void emit(const Args& a, const CommandOutput& out) {
  if (a.out_dir.empty()) {
    for (const auto& f : out) {
      if (out.size() > 1) std::cout << "## " << f.name << '\n';
      std::cout << f.content;
    }
    std::cout.flush();
    return;
  }
  fs::create_directories(a.out_dir);
  for (const auto& f : out) {
    const fs::path p = fs::path(a.out_dir) / f.name;
    std::ofstream os(p, std::ios::binary);
    os << f.content;
    if (!os) throw Error(ErrorCode::InvalidArgument, "cannot write " + p.string());
    std::cerr << "wrote " << p.string() << '\n';
  }
}

int run_verify(const Args& a, const std::string& text) {
  const SystemConfig base = build_config(a, text);
  VerifyPlan plan = text.empty() ? VerifyPlan{} : parse_verify_plan(text);
  if (a.seed_base) plan.seed_base = *a.seed_base;
  if (a.workers > 1) plan.workers = a.workers;
  if (!a.criteria.empty()) plan.criteria = a.criteria;
  const auto results = run_verification(base, plan, [](const CheckResult& r) {
    std::cout << format_result_line(r) << std::endl;
  });
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  std::cout << (all ? "all criteria passed" : "some criteria failed") << '\n';
  if (!a.out_dir.empty()) emit(a, {{"verify.json", verification_report_json(results)}});
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"srptq: SRPT vs blind policies in overloaded many-server queues with abandonment"};
  app.require_subcommand(1);
  Args a;

  app.add_option("--config", a.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--out", a.out_dir, "write outputs into this directory instead of stdout");
  app.add_option("--seed-base", a.seed_base, "first seed of the replication list");
  app.add_option("--workers", a.workers, "worker threads for replications")->check(CLI::PositiveNumber);
  app.add_flag("--debug-invariants", a.debug_invariants, "check engine invariants after every event");
  app.add_option("--rho", a.rho, "traffic intensity");
  app.add_option("--servers", a.servers, "number of servers");
  app.add_option("--lambda", a.lambda, "arrival rate");

  auto* threshold = app.add_subcommand("threshold", "solve for the service-time threshold tau");
  auto* limits = app.add_subcommand("limits", "asymptotic SRPT and blind-policy measures");
  auto* simulate = app.add_subcommand("simulate", "simulate and report batch-means estimates");
  auto* couple = app.add_subcommand("couple", "pathwise comparison of SRPT with the priority loss system");
  auto* sweep = app.add_subcommand("sweep", "estimate vs limit across server counts");
  auto* fig1 = app.add_subcommand("figure1", "mean wait vs patience shape, exponential service");
  auto* fig2 = app.add_subcommand("figure2", "throughput vs service shape");
  auto* fig3 = app.add_subcommand("figure3", "mean wait vs Weibull service shape");
  auto* verify = app.add_subcommand("verify", "run the acceptance battery");

  for (auto* sc : {simulate, couple, sweep, verify}) {
    sc->add_option("--discipline", a.discipline, "srpt | fcfs | lcfs | priority_loss");
    sc->add_option("--horizon", a.horizon, "simulated time per replication");
    sc->add_option("--warmup", a.warmup, "discarded initial period");
    sc->add_option("--batches", a.batches, "batches per replication");
    sc->add_option("--replications", a.replications, "number of seeds");
  }
  simulate->add_flag("--trace", a.trace, "also write per-customer traces");
  sweep->add_option("--scales", a.scales, "server counts")->delimiter(',');
  for (auto* sc : {fig1, fig2, fig3}) {
    sc->add_flag("--gnuplot", a.gnuplot, "also write a gnuplot script");
    sc->add_option("--grid", a.grid, "shape values")->delimiter(',');
  }
  for (auto* sc : {fig1, fig2})
    sc->add_option("--family", a.family, "weibull | pareto")->check(CLI::IsMember({"weibull", "pareto"}));
  fig3->add_option("--patience-shape", a.patience_shape, "Weibull patience shape");
  verify->add_option("--criteria", a.criteria, "criterion ids to run")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string text = a.config_path.empty() ? std::string{} : read_file(a.config_path);
    if (*verify) return run_verify(a, text);
    const SystemConfig cfg = build_config(a, text);
    const CommandOptions opts = command_options(a);
    if (*threshold) emit(a, cmd_threshold(cfg));
    else if (*limits) emit(a, cmd_limits(cfg));
    else if (*simulate) emit(a, cmd_simulate(cfg, opts));
    else if (*couple) emit(a, cmd_couple(cfg, opts));
    else if (*sweep) emit(a, cmd_sweep(cfg, opts));
    else if (*fig1) emit(a, cmd_figure(1, opts));
    else if (*fig2) emit(a, cmd_figure(2, opts));
    else if (*fig3) emit(a, cmd_figure(3, opts));
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
