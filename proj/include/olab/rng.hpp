#pragma once

#include <cstdint>
#include <span>

namespace olab {

/// Counter-based random stream. The n-th draw is a pure function of
/// (key, n), so streams can be split per episode or per purpose without
/// sharing state, and a run is bit-reproducible from its seed.
///
/// The mixing function is the SplitMix64 finalizer applied to a Weyl
/// sequence over the key. Distribution helpers are implemented here rather
/// than through <random> distributions, whose output is not specified
/// across standard library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer on [0, n). Requires n > 0.
  int uniform_int(int n);
  double normal();
  /// Draws an index with probability proportional to probs[i].
  int categorical(std::span<const double> probs);

  /// Independent child stream; the parent is not advanced.
  [[nodiscard]] RngStream split(std::uint64_t id) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  struct FromKey {};
  RngStream(FromKey, std::uint64_t key) : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace olab
