#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srptq/dists.hpp"

namespace srptq {

enum class Discipline { SRPT, FCFS, LCFS, PriorityLoss };

std::string_view to_string(Discipline d);
Discipline parse_discipline(std::string_view name);  // throws UnknownDiscipline

struct RateTriple {
  double lambda = 0.0;
  int servers = 0;
  double rho = 0.0;
};

/// Completes {lambda, servers, rho} from any two of them via lambda = rho s mu.
/// When all three are given they must agree to 1e-9 relative.
RateTriple resolve_rates(std::optional<double> lambda, std::optional<int> servers,
                         std::optional<double> rho, double mu);

struct SystemConfig {
  double lambda = 14.0;
  int servers = 10;
  double rho = 1.4;
  Distribution service = Distribution::exponential(1.0);
  Distribution patience = Distribution::exponential(1.0);
  Discipline discipline = Discipline::SRPT;
  double horizon = 1e4;
  double warmup = 1e3;
  std::vector<std::uint64_t> seeds{1};
  int batches = 20;
  bool debug_invariants = false;

  double mu() const { return 1.0 / service.mean(); }

  /// tau when overloaded with a continuous service distribution, else +inf.
  double threshold() const;

  /// Re-derives lambda from (rho, servers).
  SystemConfig with_servers(int s) const;

  /// Checks every cross-field invariant; throws InvalidArgument/NotOverloaded.
  void validate() const;
};

/// Parses a distribution object such as {"family":"weibull","shape":0.4,"mean":1}.
/// `field` is used in diagnostics.
Distribution parse_distribution(std::string_view json_text, std::string_view field);

/// Parses a config document; errors carry the offending field or the line and
/// column of a syntax error.
SystemConfig parse_config(std::string_view json_text);
SystemConfig load_config(const std::filesystem::path& path);

std::string to_json(const SystemConfig& cfg);

/// seed_base, seed_base+1, ..., seed_base+count-1
std::vector<std::uint64_t> expand_seeds(std::uint64_t seed_base, std::size_t count);

}  // namespace srptq
