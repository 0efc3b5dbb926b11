#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <memory_resource>
#include <optional>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "srptq/config.hpp"
#include "srptq/customer.hpp"
#include "srptq/event_calendar.hpp"

namespace srptq {

struct EngineOptions {
  Discipline discipline = Discipline::SRPT;
  int servers = 1;
  double tau = std::numeric_limits<double>::infinity();  // class boundary
  double horizon = 0.0;
  bool debug_invariants = false;
  std::size_t expected_arrivals = 0;  // reservation hint only
};

struct ClassCounters {
  std::uint64_t arrivals = 0;
  std::uint64_t served = 0;
  std::uint64_t abandoned = 0;
  std::uint64_t lost = 0;
};

struct SimTrace {
  Discipline discipline = Discipline::SRPT;
  int servers = 0;
  double tau = 0.0;
  double horizon = 0.0;
  std::vector<Customer> customers;     // in arrival order, id == index
  std::array<ClassCounters, 2> counters{};  // indexed by JobClass
  double busy_area = 0.0;              // integral of busy servers over [0, horizon]
  double queue_area = 0.0;             // integral of queue length over [0, horizon]
  std::uint64_t events = 0;
  std::uint64_t preemptions = 0;

  std::uint64_t arrivals() const { return counters[0].arrivals + counters[1].arrivals; }
  std::uint64_t served() const { return counters[0].served + counters[1].served; }
  std::uint64_t in_system() const;
};

/// Writes the line-per-customer debug CSV: id,arrival,S,T,wait,status,class.
void write_trace_csv(std::ostream& os, const SimTrace& trace);

/// Discrete-event engine for the M/GI/s+GI queue and the two-class loss system.
///
/// SRPT: an arrival that finds all servers busy preempts the in-service
/// customer with the longest remaining work iff that work strictly exceeds its
/// own requirement; the preempted customer queues with its patience clock
/// resumed. FCFS/LCFS are non-preemptive. A customer abandons once cumulative
/// queue time reaches its patience; customers in service never abandon.
///
/// PriorityLoss: no waiting room. Class-1 (S <= tau) arrivals take an idle
/// server, else displace the longest-remaining class-2 customer (who is lost),
/// else are lost. Class-2 arrivals take an idle server or are lost.
///
/// Single-threaded; a run is a pure function of options and source.
class Engine {
 public:
  Engine(EngineOptions opts, std::unique_ptr<CustomerSource> source);
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  /// Time of the next event if one is due at or before the horizon.
  std::optional<double> next_event_time() const;

  /// Processes the next due event. Precondition: next_event_time() has a value.
  EventKind step();

  void run_to_horizon();

  /// Closes the accumulators at the horizon and hands over the trace.
  SimTrace finish();

  double clock() const noexcept { return clock_; }
  int busy() const noexcept { return static_cast<int>(in_service_.size()); }
  std::size_t queue_length() const noexcept { return queue_.size(); }
  std::uint64_t served(JobClass c) const { return trace_.counters[static_cast<int>(c)].served; }
  std::uint64_t served_total() const { return trace_.served(); }
  const EngineOptions& options() const noexcept { return opts_; }

  /// Throws std::logic_error if any structural invariant is broken.
  void check_invariants() const;

 private:
  // (key, id): completion epoch for customers in service; remaining work
  // (SRPT) or 0 (FCFS/LCFS, so ids order the queue) for queued customers.
  using Slot = std::pair<double, std::uint64_t>;
  using SlotSet = std::pmr::set<Slot>;

  struct Live {
    Event pending;       // departure while in service, abandonment while queued
    double since = 0.0;  // epoch the customer last entered the queue
  };

  void advance_clock(double t);
  void schedule_next_arrival();
  void on_arrival();
  void on_arrival_loss(Customer& c);
  void on_departure(std::uint64_t id);
  void on_abandonment(std::uint64_t id);

  void start_service(Customer& c);
  void enqueue(Customer& c);
  void take_from_queue(std::uint64_t id);
  void preempt_to_queue(std::uint64_t id);
  void lose_in_service(std::uint64_t id);
  ClassCounters& counters(const Customer& c) {
    return trace_.counters[static_cast<int>(c.class_label)];
  }

  EngineOptions opts_;
  std::unique_ptr<CustomerSource> source_;
  std::optional<Arrival> pending_arrival_;
  EventCalendar calendar_;
  std::pmr::unsynchronized_pool_resource pool_;
  SlotSet in_service_;
  SlotSet class2_in_service_;  // PriorityLoss only
  SlotSet queue_;
  std::unordered_map<std::uint64_t, Live> live_;
  SimTrace trace_;
  double clock_ = 0.0;
  bool finished_ = false;
};

/// Runs from empty to the horizon with fresh streams from `seed`.
SimTrace simulate(const EngineOptions& opts, std::unique_ptr<CustomerSource> source);
SimTrace run(const SystemConfig& cfg, std::uint64_t seed);
SimTrace run_loss(const SystemConfig& cfg, double tau, std::uint64_t seed);

EngineOptions engine_options(const SystemConfig& cfg);

/// Served counts of the coupled loss (class 1) and original systems.
struct CoupledCounters {
  std::uint64_t n_L1 = 0;
  std::uint64_t n_O = 0;
  std::uint64_t epochs_checked = 0;
  std::uint64_t violations = 0;
  std::int64_t min_slack = 0;  // min over epochs of n_O - n_L1
};

struct CoupledRun {
  SimTrace original;
  SimTrace loss;
  CoupledCounters counters;
};

/// Advances both engines in time order. After every epoch with a departure in
/// either system, checks n_L1 <= n_O. With `strict`, the first violation
/// throws CouplingViolation.
CoupledCounters drive_coupled(Engine& original, Engine& loss, bool strict = true);

/// SRPT and PriorityLoss(tau) on identical arrival, service and patience streams.
CoupledRun run_coupled(const SystemConfig& cfg, double tau, std::uint64_t seed, bool strict = true);

}  // namespace srptq
