#pragma once

#include <cstdint>

namespace aebt {

// Derives a well-mixed 64-bit key from a (base, child) pair. Chaining calls
// gives a stable addressing scheme for nested substreams.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t child);

// Splittable 64-bit PRNG (splitmix64 core). A stream is addressed by
// (seed, stream_id); distinct ids yield statistically independent streams,
// which is what makes Monte Carlo output independent of scheduling: every
// replicate, permutation and projection owns its own stream.
//
// Streams are small value types; copying one forks its current state.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01();
  // Uniform on (0, 1]; safe to feed to log().
  double uniform01_pos();
  // Unbiased uniform integer in [0, bound); bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Standard normal via Box-Muller. Two uniforms per variate; no cached
  // spare, so the draw count per call is fixed.
  double normal();
  // Gamma(shape, 1) via the Marsaglia-Tsang squeeze, with the u^(1/a)
  // boost for shape < 1.
  double gamma(double shape);
  // Exponential with the given mean (inverse CDF).
  double exponential(double mean);

  // Independent child stream addressed by (this stream's key, child_id).
  RngStream substream(std::uint64_t child_id) const;

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;    // stream identity, fixed at construction
  std::uint64_t state_;  // advances with each draw
};

}  // namespace aebt
