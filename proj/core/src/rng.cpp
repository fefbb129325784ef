#include "adamcheck/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace adamcheck {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::uint32_t c[4], std::uint32_t k0, std::uint32_t k1) {
  const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
  const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  c[0] = hi1 ^ c[1] ^ k0;
  c[1] = lo1;
  c[2] = hi0 ^ c[3] ^ k1;
  c[3] = lo0;
}

}  // namespace

rng_stream::rng_stream(std::uint64_t base_seed, std::uint64_t trajectory_id,
                       std::uint32_t step_index) noexcept {
  key_[0] = static_cast<std::uint32_t>(base_seed);
  key_[1] = static_cast<std::uint32_t>(base_seed >> 32);
  counter_[0] = 0;  // block counter, bumps once per refill
  counter_[1] = step_index;
  counter_[2] = static_cast<std::uint32_t>(trajectory_id);
  counter_[3] = static_cast<std::uint32_t>(trajectory_id >> 32);
}

void rng_stream::refill() {
  std::uint32_t c[4] = {counter_[0], counter_[1], counter_[2], counter_[3]};
  std::uint32_t k0 = key_[0];
  std::uint32_t k1 = key_[1];
  for (int round = 0; round < 10; ++round) {
    philox_round(c, k0, k1);
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  buffer_[0] = (std::uint64_t{c[1]} << 32) | c[0];
  buffer_[1] = (std::uint64_t{c[3]} << 32) | c[2];
  available_ = 2;
  ++counter_[0];
}

std::uint64_t rng_stream::next_u64() {
  if (available_ == 0) {
    refill();
  }
  return buffer_[2 - available_--];
}

double rng_stream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double rng_stream::next_gaussian() {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  // u1 in (0, 1] so the logarithm is finite.
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = next_unit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_gaussian_ = radius * std::sin(angle);
  has_cached_gaussian_ = true;
  return radius * std::cos(angle);
}

std::uint64_t rng_stream::next_below(std::uint64_t n) {
  if (n == 0) {
    throw std::invalid_argument("rng_stream::next_below: n must be positive");
  }
  const std::uint64_t rem =
      (std::numeric_limits<std::uint64_t>::max() % n + 1) % n;
  if (rem == 0) {
    return next_u64() % n;
  }
  const std::uint64_t limit = 0 - rem;  // largest multiple of n representable
  std::uint64_t draw = next_u64();
  while (draw >= limit) {
    draw = next_u64();
  }
  return draw % n;
}

}  // namespace adamcheck
