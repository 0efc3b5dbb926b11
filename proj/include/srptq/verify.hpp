#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srptq/config.hpp"

namespace srptq {

/// Battery sizes and pass thresholds for the verification suite. Defaults are
/// the release gate; a config file may shrink the battery sizes (seeds,
/// horizons, scales) but thresholds are fixed here.
struct VerifyPlan {
  std::vector<int> criteria{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  std::uint64_t seed_base = 1;
  int workers = 1;

  // 1: threshold
  double threshold_residual_tol = 1e-10;
  double threshold_runtime_s = 1.0;
  // 3: Erlang-B
  int erlang_max_servers = 200;
  double erlang_tol = 1e-9;
  double erlang_runtime_s = 5.0;
  // 4: coupling
  int coupling_seeds = 100;
  int coupling_servers = 10;
  double coupling_horizon = 1e4;
  double coupling_runtime_s = 120.0;
  // 5: state-space collapse sweep
  std::vector<int> sweep_scales{10, 50, 200};
  int sweep_seeds = 10;
  double sweep_horizon = 2e4;
  double sweep_runtime_s = 900.0;
  double min_p_served_short = 0.95;
  double max_p_served_long = 0.10;
  double max_throughput_gap = 0.03;
  double max_abandon_wait_gap = 0.10;
  double max_served_wait = 0.05;
  // 6: FCFS fluid
  int fcfs_servers = 200;
  int fcfs_seeds = 5;
  double fcfs_horizon = 2e4;
  double fcfs_rel_tol = 0.05;
  // 7: knapsack
  std::size_t knapsack_grid = 100'000;
  double knapsack_rel_tol = 1e-3;
  // 10: patience insensitivity
  int insensitivity_servers = 200;
  int insensitivity_seeds = 10;
  double insensitivity_horizon = 2e4;
  double insensitivity_patience_shape = 0.4;
  // 11: determinism
  int determinism_servers = 10;
  double determinism_horizon = 500.0;
};

/// Reads the optional "verify" object of a config document.
VerifyPlan parse_verify_plan(std::string_view json_text);

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

std::string_view criterion_name(int id);

/// Runs one criterion against `base` (which supplies rho and the service and
/// patience laws for the simulation checks).
CheckResult run_criterion(int id, const SystemConfig& base, const VerifyPlan& plan);

/// Runs every criterion of the plan in order, reporting each as it finishes.
std::vector<CheckResult> run_verification(const SystemConfig& base, const VerifyPlan& plan,
                                          const std::function<void(const CheckResult&)>& on_result = {});

std::string verification_report_json(std::span<const CheckResult> results);

/// "PASS [ 1] name (0.01 s): detail"
std::string format_result_line(const CheckResult& r);

}  // namespace srptq
