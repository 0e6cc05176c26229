#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace asep {

/// Counter-based Philox4x32-10 generator.
///
/// The 64-bit seed is the key; the stream id occupies the upper half of the
/// 128-bit counter, so distinct streams never share a block. Identical
/// (seed, stream) pairs yield identical sequences.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform draw in the open interval (0, 1).
  double uniform();

  /// Exponential waiting time with the given rate (> 0).
  double exponential(double rate);

  bool bernoulli(double prob) { return uniform() < prob; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Raw Philox4x32-10 block function; exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox_block(std::array<std::uint32_t, 4> counter,
                                                   std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

}  // namespace asep
