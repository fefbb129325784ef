#pragma once

#include <cstdint>

namespace adamcheck {

// Counter-based random stream (philox4x32-10). A stream is addressed by the
// key (base_seed, trajectory_id, step_index); draws within a stream advance a
// block counter only. Streams with distinct keys never share state, so cells
// of an experiment can run in any order or in parallel without changing a
// single drawn value.
class rng_stream {
 public:
  rng_stream(std::uint64_t base_seed, std::uint64_t trajectory_id,
             std::uint32_t step_index) noexcept;

  std::uint64_t next_u64();

  /// Uniform double in [0, 1).
  double next_unit();

  /// Standard normal draw (Box-Muller, pairs cached).
  double next_gaussian();

  /// Uniform integer in {0, ..., n-1}; rejection-sampled, so unbiased.
  std::uint64_t next_below(std::uint64_t n);

 private:
  void refill();

  std::uint32_t key_[2];
  std::uint32_t counter_[4];
  std::uint64_t buffer_[2] = {0, 0};
  int available_ = 0;
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

}  // namespace adamcheck
