#include "srptq/engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "srptq/csv.hpp"
#include "srptq/error.hpp"

namespace srptq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void broken(const std::string& what) {
  throw std::logic_error("engine invariant violated: " + what);
}

}  // namespace

std::uint64_t SimTrace::in_system() const {
  std::uint64_t n = 0;
  for (const auto& c : counters) n += c.arrivals - c.served - c.abandoned - c.lost;
  return n;
}

void write_trace_csv(std::ostream& os, const SimTrace& trace) {
  os << "# srptq trace v1\n";
  os << "id,arrival,S,T,wait,status,class\n";
  for (const auto& c : trace.customers) {
    CsvRow row;
    row.add(c.id).add(c.arrival_time).add(c.service_req).add(c.patience).add(c.queue_time_used);
    row.add(to_string(c.status)).add(to_string(c.class_label));
    os << row.str() << '\n';
  }
}

Engine::Engine(EngineOptions opts, std::unique_ptr<CustomerSource> source)
    : opts_(opts),
      source_(std::move(source)),
      in_service_(&pool_),
      class2_in_service_(&pool_),
      queue_(&pool_) {
  if (!(opts_.horizon > 0.0)) throw Error(ErrorCode::NonpositiveHorizon, "horizon must be positive");
  if (opts_.servers < 1) throw Error(ErrorCode::InvalidArgument, "servers must be >= 1");
  if (!(opts_.tau >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be nonnegative");
  switch (opts_.discipline) {
    case Discipline::SRPT:
    case Discipline::FCFS:
    case Discipline::LCFS:
    case Discipline::PriorityLoss: break;
    default: throw Error(ErrorCode::UnknownDiscipline, "engine does not know this discipline");
  }
  trace_.discipline = opts_.discipline;
  trace_.servers = opts_.servers;
  trace_.tau = opts_.tau;
  trace_.horizon = opts_.horizon;
  trace_.customers.reserve(opts_.expected_arrivals);
  live_.reserve(static_cast<std::size_t>(opts_.servers) * 4 + 64);
  schedule_next_arrival();
}

void Engine::schedule_next_arrival() {
  pending_arrival_ = source_->next();
  if (pending_arrival_ && pending_arrival_->time <= opts_.horizon)
    calendar_.schedule(pending_arrival_->time, EventKind::Arrival, trace_.customers.size());
}

std::optional<double> Engine::next_event_time() const {
  if (finished_ || calendar_.empty()) return std::nullopt;
  const double t = calendar_.top().time;
  if (t > opts_.horizon) return std::nullopt;
  return t;
}

void Engine::advance_clock(double t) {
  const double dt = t - clock_;
  trace_.busy_area += dt * static_cast<double>(in_service_.size());
  trace_.queue_area += dt * static_cast<double>(queue_.size());
  clock_ = t;
}

EventKind Engine::step() {
  const Event e = calendar_.pop();
  advance_clock(e.time);
  ++trace_.events;
  switch (e.kind) {
    case EventKind::Arrival: on_arrival(); break;
    case EventKind::Departure: on_departure(e.customer); break;
    case EventKind::Abandonment: on_abandonment(e.customer); break;
  }
  if (opts_.debug_invariants) check_invariants();
  return e.kind;
}

void Engine::run_to_horizon() {
  while (next_event_time()) step();
}

void Engine::start_service(Customer& c) {
  const double completion = clock_ + c.remaining_service;
  c.status = Status::InService;
  auto& live = live_[c.id];
  live.pending = calendar_.schedule(completion, EventKind::Departure, c.id);
  in_service_.emplace(completion, c.id);
  if (opts_.discipline == Discipline::PriorityLoss && c.class_label == JobClass::Long)
    class2_in_service_.emplace(completion, c.id);
}

void Engine::enqueue(Customer& c) {
  c.status = Status::InQueue;
  auto& live = live_[c.id];
  live.since = clock_;
  live.pending =
      calendar_.schedule(clock_ + (c.patience - c.queue_time_used), EventKind::Abandonment, c.id);
  const double key = opts_.discipline == Discipline::SRPT ? c.remaining_service : 0.0;
  queue_.emplace(key, c.id);
}

void Engine::take_from_queue(std::uint64_t id) {
  Customer& c = trace_.customers[id];
  Live& live = live_.at(id);
  const double key = opts_.discipline == Discipline::SRPT ? c.remaining_service : 0.0;
  queue_.erase({key, id});
  calendar_.cancel(live.pending);
  c.queue_time_used = std::min(c.patience, c.queue_time_used + (clock_ - live.since));
  start_service(c);
}

void Engine::preempt_to_queue(std::uint64_t id) {
  Customer& c = trace_.customers[id];
  Live& live = live_.at(id);
  const double completion = live.pending.time;
  in_service_.erase({completion, id});
  calendar_.cancel(live.pending);
  c.remaining_service = std::max(0.0, completion - clock_);
  ++trace_.preemptions;
  enqueue(c);
}

void Engine::lose_in_service(std::uint64_t id) {
  Customer& c = trace_.customers[id];
  Live& live = live_.at(id);
  const double completion = live.pending.time;
  in_service_.erase({completion, id});
  class2_in_service_.erase({completion, id});
  calendar_.cancel(live.pending);
  c.remaining_service = std::max(0.0, completion - clock_);
  c.status = Status::Lost;
  c.exit_time = clock_;
  ++trace_.preemptions;
  ++counters(c).lost;
  live_.erase(id);
}

void Engine::on_arrival() {
  const Arrival a = *pending_arrival_;
  Customer c;
  c.id = trace_.customers.size();
  c.arrival_time = a.time;
  c.service_req = a.service;
  c.remaining_service = a.service;
  c.patience = a.patience;
  c.exit_time = kNaN;
  c.class_label = a.service <= opts_.tau ? JobClass::Short : JobClass::Long;
  trace_.customers.push_back(c);
  Customer& cust = trace_.customers.back();
  ++counters(cust).arrivals;

  if (opts_.discipline == Discipline::PriorityLoss) {
    on_arrival_loss(cust);
  } else if (busy() < opts_.servers) {
    start_service(cust);
  } else if (opts_.discipline == Discipline::SRPT) {
    // Longest remaining work in service is the latest completion epoch.
    const Slot longest = *in_service_.rbegin();
    if (longest.first - clock_ > cust.service_req) {
      preempt_to_queue(longest.second);
      start_service(cust);
    } else {
      enqueue(cust);
    }
  } else {
    enqueue(cust);
  }
  schedule_next_arrival();
}

void Engine::on_arrival_loss(Customer& c) {
  if (busy() < opts_.servers) {
    start_service(c);
    return;
  }
  if (c.class_label == JobClass::Short && !class2_in_service_.empty()) {
    lose_in_service(class2_in_service_.rbegin()->second);
    start_service(c);
    return;
  }
  c.status = Status::Lost;
  c.exit_time = clock_;
  ++counters(c).lost;
}

void Engine::on_departure(std::uint64_t id) {
  Customer& c = trace_.customers[id];
  in_service_.erase({clock_, id});
  if (opts_.discipline == Discipline::PriorityLoss) class2_in_service_.erase({clock_, id});
  c.remaining_service = 0.0;
  c.status = Status::Served;
  c.exit_time = clock_;
  ++counters(c).served;
  live_.erase(id);

  if (queue_.empty()) return;
  // SRPT: smallest remaining work (ties: earliest arrival). FCFS: oldest. LCFS: newest.
  const std::uint64_t next =
      opts_.discipline == Discipline::LCFS ? queue_.rbegin()->second : queue_.begin()->second;
  take_from_queue(next);
}

void Engine::on_abandonment(std::uint64_t id) {
  Customer& c = trace_.customers[id];
  const double key = opts_.discipline == Discipline::SRPT ? c.remaining_service : 0.0;
  queue_.erase({key, id});
  c.queue_time_used = c.patience;
  c.status = Status::Abandoned;
  c.exit_time = clock_;
  ++counters(c).abandoned;
  live_.erase(id);
}

void Engine::check_invariants() const {
  if (busy() > opts_.servers) broken("more customers in service than servers");
  if (!queue_.empty() && busy() < opts_.servers) broken("idle server with a nonempty queue");
  if (opts_.discipline == Discipline::SRPT && !queue_.empty() && !in_service_.empty()) {
    const double longest_in_service = in_service_.rbegin()->first - clock_;
    const double shortest_queued = queue_.begin()->first;
    if (longest_in_service > shortest_queued * (1.0 + 1e-12) + 1e-12)
      broken("queued customer has less remaining work than one in service");
  }
  for (const auto& [id, live] : live_) {
    const Customer& c = trace_.customers[id];
    if (c.remaining_service < 0.0 || c.remaining_service > c.service_req)
      broken("remaining service outside [0, S]");
    if (c.status == Status::InQueue) {
      const double used = c.queue_time_used + (clock_ - live.since);
      if (used > c.patience * (1.0 + 1e-12) + 1e-12) broken("queue time exceeds patience");
    }
  }
  if (live_.size() != in_service_.size() + queue_.size()) broken("live set out of sync");
}

SimTrace Engine::finish() {
  if (!finished_) {
    advance_clock(opts_.horizon);
    for (const auto& [id, live] : live_) {
      Customer& c = trace_.customers[id];
      if (c.status == Status::InService) {
        c.remaining_service = std::max(0.0, live.pending.time - clock_);
      } else {
        c.queue_time_used = std::min(c.patience, c.queue_time_used + (clock_ - live.since));
      }
    }
    finished_ = true;
  }
  return std::move(trace_);
}

EngineOptions engine_options(const SystemConfig& cfg) {
  EngineOptions o;
  o.discipline = cfg.discipline;
  o.servers = cfg.servers;
  o.tau = cfg.threshold();
  o.horizon = cfg.horizon;
  o.debug_invariants = cfg.debug_invariants;
  o.expected_arrivals = static_cast<std::size_t>(cfg.lambda * cfg.horizon * 1.02) + 64;
  return o;
}

SimTrace simulate(const EngineOptions& opts, std::unique_ptr<CustomerSource> source) {
  Engine engine(opts, std::move(source));
  engine.run_to_horizon();
  return engine.finish();
}

SimTrace run(const SystemConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  return simulate(engine_options(cfg),
                  std::make_unique<PoissonSource>(cfg.lambda, cfg.service, cfg.patience, seed));
}

SimTrace run_loss(const SystemConfig& cfg, double tau, std::uint64_t seed) {
  cfg.validate();
  EngineOptions o = engine_options(cfg);
  o.discipline = Discipline::PriorityLoss;
  o.tau = tau;
  return simulate(o, std::make_unique<PoissonSource>(cfg.lambda, cfg.service, cfg.patience, seed));
}

CoupledCounters drive_coupled(Engine& original, Engine& loss, bool strict) {
  CoupledCounters cc;
  bool first_epoch = true;
  for (;;) {
    const auto to = original.next_event_time();
    const auto tl = loss.next_event_time();
    if (!to && !tl) break;
    const double t = std::min(to.value_or(std::numeric_limits<double>::infinity()),
                              tl.value_or(std::numeric_limits<double>::infinity()));
    // Settle every event at this instant in both systems before comparing.
    bool departed = false;
    while (original.next_event_time() == t)
      departed |= original.step() == EventKind::Departure;
    while (loss.next_event_time() == t) departed |= loss.step() == EventKind::Departure;
    if (!departed) continue;

    cc.n_L1 = loss.served(JobClass::Short);
    cc.n_O = original.served_total();
    ++cc.epochs_checked;
    const auto slack = static_cast<std::int64_t>(cc.n_O) - static_cast<std::int64_t>(cc.n_L1);
    cc.min_slack = first_epoch ? slack : std::min(cc.min_slack, slack);
    first_epoch = false;
    if (slack < 0) {
      ++cc.violations;
      if (strict)
        throw Error(ErrorCode::CouplingViolation,
                    "n_L1=" + std::to_string(cc.n_L1) + " > n_O=" + std::to_string(cc.n_O) +
                        " at t=" + std::to_string(t));
    }
  }
  cc.n_L1 = loss.served(JobClass::Short);
  cc.n_O = original.served_total();
  return cc;
}

CoupledRun run_coupled(const SystemConfig& cfg, double tau, std::uint64_t seed, bool strict) {
  cfg.validate();
  EngineOptions oo = engine_options(cfg);
  oo.discipline = Discipline::SRPT;
  oo.tau = tau;
  EngineOptions lo = oo;
  lo.discipline = Discipline::PriorityLoss;

  Engine original(oo, std::make_unique<PoissonSource>(cfg.lambda, cfg.service, cfg.patience, seed));
  Engine loss(lo, std::make_unique<PoissonSource>(cfg.lambda, cfg.service, cfg.patience, seed));
  CoupledRun out;
  out.counters = drive_coupled(original, loss, strict);
  out.original = original.finish();
  out.loss = loss.finish();
  return out;
}

}  // namespace srptq
