#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "srptq/dists.hpp"
#include "srptq/random.hpp"

namespace srptq {

enum class Status : std::uint8_t { InQueue, InService, Served, Abandoned, Lost };
enum class JobClass : std::uint8_t { Short, Long };  // S <= tau, S > tau

std::string_view to_string(Status status);
std::string_view to_string(JobClass cls);

inline bool is_terminal(Status s) {
  return s == Status::Served || s == Status::Abandoned || s == Status::Lost;
}

/// One arriving customer as drawn from the input streams.
struct Arrival {
  double time = 0.0;
  double service = 0.0;   // S
  double patience = 0.0;  // T
};

/// Per-customer record kept in the trace. While the customer is in the system
/// the engine keeps remaining_service and queue_time_used current at every
/// state change; after the horizon they are brought up to the horizon.
struct Customer {
  std::uint64_t id = 0;
  double arrival_time = 0.0;
  double service_req = 0.0;
  double remaining_service = 0.0;
  double patience = 0.0;
  double queue_time_used = 0.0;
  double exit_time = 0.0;  // departure, abandonment or loss epoch; NaN while in system
  JobClass class_label = JobClass::Short;
  Status status = Status::InQueue;
};

/// Pull-style producer of arrivals in nondecreasing time order.
class CustomerSource {
 public:
  virtual ~CustomerSource() = default;
  virtual std::optional<Arrival> next() = 0;
};

/// Poisson arrivals with i.i.d. service and patience, one RNG stream each.
/// A patience time is drawn for every arrival even where the discipline
/// ignores it, so draw indices stay aligned across coupled systems.
class PoissonSource final : public CustomerSource {
 public:
  PoissonSource(double lambda, Distribution service, Distribution patience, std::uint64_t seed);
  std::optional<Arrival> next() override;

 private:
  double lambda_;
  Distribution service_;
  Distribution patience_;
  RandomStream interarrival_;
  RandomStream service_stream_;
  RandomStream patience_stream_;
  double clock_ = 0.0;
};

class ScriptedSource final : public CustomerSource {
 public:
  explicit ScriptedSource(std::vector<Arrival> arrivals);
  std::optional<Arrival> next() override;

 private:
  std::vector<Arrival> arrivals_;
  std::size_t pos_ = 0;
};

/// Passes through only the arrivals accepted by `keep`.
class FilteredSource final : public CustomerSource {
 public:
  FilteredSource(std::unique_ptr<CustomerSource> inner, std::function<bool(const Arrival&)> keep);
  std::optional<Arrival> next() override;

 private:
  std::unique_ptr<CustomerSource> inner_;
  std::function<bool(const Arrival&)> keep_;
};

}  // namespace srptq
