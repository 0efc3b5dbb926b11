#pragma once

#include <cstdint>
#include <random>

namespace srptq {

/// Stream identifiers for the three independent inputs of a replication.
enum class StreamId : std::uint64_t { Interarrival = 1, Service = 2, Patience = 3 };

std::uint64_t splitmix64(std::uint64_t x);

/// Derives the seed of one stream from (base seed, stream id). Two engines built
/// from the same base seed therefore consume identical inputs.
std::uint64_t derive_seed(std::uint64_t base, StreamId stream);

/// Single-owner uniform stream. Draws are reproducible across platforms since the
/// mapping from engine output to (0,1) is fixed here instead of left to <random>.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t base, StreamId stream) : engine_(derive_seed(base, stream)) {}

  /// Uniform on the open interval (0,1).
  double uniform() {
    ++draws_;
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t draws() const noexcept { return draws_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

}  // namespace srptq
