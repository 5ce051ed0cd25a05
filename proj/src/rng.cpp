#include "aebt/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aebt {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t sm64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t child) {
  return sm64_mix(base + kGolden * (child + 0x632BE59BD9B4E019ull));
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : key_(mix_seed(seed, stream_id)), state_(key_) {}

RngStream RngStream::substream(std::uint64_t child_id) const {
  return RngStream(key_, child_id);
}

std::uint64_t RngStream::next_u64() {
  state_ += kGolden;
  return sm64_mix(state_);
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform01_pos() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
  // Reject the top partial block so the modulus is unbiased.
  const std::uint64_t threshold = (0 - bound) % bound;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x < threshold);
  return x % bound;
}

double RngStream::normal() {
  const double u1 = uniform01_pos();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
  if (shape < 1.0) {
    // Boost: if G ~ Gamma(shape + 1) and U ~ U(0,1], G * U^(1/shape) ~ Gamma(shape).
    const double boost = std::pow(uniform01_pos(), 1.0 / shape);
    return gamma(shape + 1.0) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01_pos();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RngStream::exponential(double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("exponential: mean must be positive");
  return -mean * std::log(uniform01_pos());
}

}  // namespace aebt
