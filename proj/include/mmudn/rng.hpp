#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace mmudn {

/// 64-bit key of the stream (master seed, replication, name).
std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t replication, std::string_view name);

/// SplitMix64 generator; cheap to construct, used for per-tile streams.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Named random stream. Streams are keyed by (master seed, replication,
/// name) so that every stochastic step of a replication draws from its own
/// reproducible sequence, independent of thread scheduling.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t replication, std::string_view name);

  double uniform(double lo, double hi);
  /// Unit-mean exponential draw.
  double exponential();
  std::uint64_t poisson(double mean);
  /// Uniform index in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  std::mt19937_64& engine() { return engine_; }
  const std::string& name() const { return name_; }

 private:
  std::mt19937_64 engine_;
  std::string name_;
};

}  // namespace mmudn
