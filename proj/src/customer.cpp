#include "srptq/customer.hpp"

#include <algorithm>
#include <cmath>

#include "srptq/error.hpp"

namespace srptq {

std::string_view to_string(Status status) {
  switch (status) {
    case Status::InQueue: return "in_queue";
    case Status::InService: return "in_service";
    case Status::Served: return "served";
    case Status::Abandoned: return "abandoned";
    case Status::Lost: return "lost";
  }
  return "?";
}

std::string_view to_string(JobClass cls) { return cls == JobClass::Short ? "short" : "long"; }

PoissonSource::PoissonSource(double lambda, Distribution service, Distribution patience,
                             std::uint64_t seed)
    : lambda_(lambda),
      service_(service),
      patience_(patience),
      interarrival_(seed, StreamId::Interarrival),
      service_stream_(seed, StreamId::Service),
      patience_stream_(seed, StreamId::Patience) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::InvalidArgument, "arrival rate must be positive");
}

std::optional<Arrival> PoissonSource::next() {
  clock_ += -std::log(interarrival_.uniform()) / lambda_;
  Arrival a;
  a.time = clock_;
  a.service = service_.sample(service_stream_);
  a.patience = patience_.sample(patience_stream_);
  return a;
}

ScriptedSource::ScriptedSource(std::vector<Arrival> arrivals) : arrivals_(std::move(arrivals)) {
  if (!std::is_sorted(arrivals_.begin(), arrivals_.end(),
                      [](const Arrival& a, const Arrival& b) { return a.time < b.time; }))
    throw Error(ErrorCode::InvalidArgument, "scripted arrivals must be sorted by time");
  for (const auto& a : arrivals_)
    if (!(a.service > 0.0) || !(a.patience > 0.0) || !(a.time >= 0.0))
      throw Error(ErrorCode::InvalidArgument, "scripted arrival with nonpositive field");
}

std::optional<Arrival> ScriptedSource::next() {
  if (pos_ >= arrivals_.size()) return std::nullopt;
  return arrivals_[pos_++];
}

FilteredSource::FilteredSource(std::unique_ptr<CustomerSource> inner,
                               std::function<bool(const Arrival&)> keep)
    : inner_(std::move(inner)), keep_(std::move(keep)) {}

std::optional<Arrival> FilteredSource::next() {
  while (auto a = inner_->next())
    if (keep_(*a)) return a;
  return std::nullopt;
}

}  // namespace srptq
