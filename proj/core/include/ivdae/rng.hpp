#pragma once

#include <cstdint>

namespace ivdae {

/// Counter-based generator: the i-th draw of stream `s` under seed `k` is a pure
/// function of (k, s, i), so parallel consumers reproduce serial ones.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept;
  /// Standard normal via Box-Muller (no cached second deviate).
  double normal() noexcept;

  /// Independent generator for a sub-task.
  CounterRng fork(std::uint64_t stream) const noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace ivdae
