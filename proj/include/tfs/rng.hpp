#ifndef TFS_RNG_HPP
#define TFS_RNG_HPP

#include <array>
#include <cstdint>

namespace tfs {

/// Deterministic counter-based random stream (Philox 4x32-10).
///
/// Contract: the draw sequence is a pure function of (seed, stream_id), so a
/// stream replays bit-identically across runs, platforms and thread counts.
/// Distinct stream ids give statistically independent streams, which is how
/// replicate- and task-level parallelism stays reproducible: hand each worker
/// its own stream and never share one.
///
/// Distributions are implemented here rather than with <random> adapters
/// because the standard library does not pin their bit-level behaviour.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1), 53 random bits.
  double uniform();

  /// Standard normal via Box-Muller; draws two uniforms per pair and caches
  /// the second value.
  double normal();

  /// Independent child stream. Children with distinct keys are distinct from
  /// each other and (up to 64-bit hashing) from the parent.
  RngStream substream(std::uint64_t key) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_;
  int block_pos_;  // consumed 32-bit words in block_, 0..4
  double cached_normal_;
  bool has_cached_normal_;
};

/// Raw Philox 4x32-10 block function (pure; exposed for known-answer tests).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer; used for key derivation and task-seed hashing.
std::uint64_t mix64(std::uint64_t x);

/// Order-sensitive combine of hash values, for deriving one stream id per
/// (cell, t, replicate, ...) task independently of dispatch order.
std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v);

}  // namespace tfs

#endif  // TFS_RNG_HPP
