#pragma once

#include <string>
#include <vector>

#include "srptq/config.hpp"
#include "srptq/dists.hpp"

namespace srptq {

/// A named artifact produced by a subcommand (CSV, gnuplot script, report).
struct OutputFile {
  std::string name;
  std::string content;
};
using CommandOutput = std::vector<OutputFile>;

struct CommandOptions {
  int workers = 1;
  bool trace = false;    // simulate: also emit per-customer CSV per seed
  bool gnuplot = false;  // figures: also emit a .gp script
  std::vector<int> scales{10, 50, 200};
  Family family = Family::Weibull;
  std::vector<double> grid;    // empty: the figure's default grid
  double patience_shape = 0.4;  // figure3
};

CommandOutput cmd_threshold(const SystemConfig& cfg);
CommandOutput cmd_limits(const SystemConfig& cfg);
CommandOutput cmd_simulate(const SystemConfig& cfg, const CommandOptions& opts);
CommandOutput cmd_couple(const SystemConfig& cfg, const CommandOptions& opts);
CommandOutput cmd_sweep(const SystemConfig& cfg, const CommandOptions& opts);
CommandOutput cmd_figure(int which, const CommandOptions& opts);

}  // namespace srptq
