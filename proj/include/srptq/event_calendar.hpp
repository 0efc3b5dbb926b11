#pragma once

#include <cstdint>
#include <memory_resource>
#include <set>

namespace srptq {

// Lower rank is processed first among events at the same instant; departures
// precede abandonments so a customer reaching a server at its deadline is served.
enum class EventKind : std::uint8_t { Departure = 0, Arrival = 1, Abandonment = 2 };

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::Arrival;
  std::uint64_t seq = 0;
  std::uint64_t customer = 0;
};

struct EventOrder {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time < b.time;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.seq < b.seq;
  }
};

/// Time-ordered event set with cancellation. Ties break on (kind, insertion
/// sequence), so a run is a pure function of its inputs.
class EventCalendar {
 public:
  EventCalendar() : events_(&pool_) {}
  EventCalendar(const EventCalendar&) = delete;
  EventCalendar& operator=(const EventCalendar&) = delete;

  Event schedule(double time, EventKind kind, std::uint64_t customer) {
    Event e{time, kind, next_seq_++, customer};
    events_.insert(e);
    return e;
  }

  bool cancel(const Event& e) { return events_.erase(e) > 0; }

  bool empty() const noexcept { return events_.empty(); }
  std::size_t size() const noexcept { return events_.size(); }
  const Event& top() const { return *events_.begin(); }

  Event pop() {
    Event e = *events_.begin();
    events_.erase(events_.begin());
    return e;
  }

 private:
  std::pmr::unsynchronized_pool_resource pool_;
  std::pmr::set<Event, EventOrder> events_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace srptq
