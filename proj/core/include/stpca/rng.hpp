#pragma once

#include <array>
#include <cstdint>

namespace stpca {

/// Role tag partitioning the random streams of one run. Together with
/// (seed, step) it addresses an independent stream, so every consumer of
/// randomness draws from its own counter space and results do not depend
/// on scheduling or thread count.
enum class RngRole : std::uint64_t {
  StiefelInit = 0,  // initial iterate X_0
  GroundTruth = 1,  // haar-mode spikes
  NoiseStep = 2,    // per-step noise gradient (step = SGD step index)
  PresetInit = 3,   // population-preset initial correlations
  Generic = 4,      // tests / utilities
};

/// Counter-based Philox4x64-10 generator.
///
/// Stream addressing: key = (seed, 0), counter = (block, step, role, 0)
/// where block counts 256-bit output blocks within the stream starting at
/// zero. Word layout and round function match numpy.random.Philox's keyed
/// block function, pinned by frozen reference vectors in the unit tests
/// (numpy's stream wrapper advances its counter before the first block, so
/// whole streams are offset by one block). Instances are cheap to
/// construct; create one per (seed, step, role) and draw sequentially.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t step, RngRole role);

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01();

  /// Standard normal via Box-Muller; the second value of each pair is
  /// cached, so consecutive calls consume uniforms in a fixed pattern.
  double normal();

  /// Fair +-1.
  double rademacher();

  /// One keyed block: 10 Philox rounds of `counter` under `key`.
  static std::array<std::uint64_t, 4> philox4x64(
      std::array<std::uint64_t, 4> counter, std::array<std::uint64_t, 2> key);

 private:
  void refill();

  std::array<std::uint64_t, 2> key_;
  std::uint64_t step_;
  std::uint64_t role_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 4> buf_{};
  int buf_pos_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace stpca
