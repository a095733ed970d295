#pragma once
#include <array>
#include <cmath>
#include <cstdint>

namespace photocount {

// Counter-based random numbers (Philox4x32-10). Every draw is a pure function
// of (seed, stream, index), so trajectories can be generated in any order, on
// any number of threads, and still reproduce bit-identical sequences. Streams
// with distinct (stream, index) pairs never share a counter block.
namespace philox {

inline void rounds(std::uint32_t c[4], std::uint32_t k0, std::uint32_t k1) {
  for (int round = 0;; ++round) {
    const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
    const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    c[0] = hi1 ^ c[1] ^ k0;
    c[1] = lo1;
    c[2] = hi0 ^ c[3] ^ k1;
    c[3] = lo0;
    if (round == 9)
      break;
    k0 += 0x9E3779B9u;
    k1 += 0xBB67AE85u;
  }
}

// 128-bit counter split as (hi, lo), 64-bit key; ten rounds.
inline std::array<std::uint32_t, 4> block(std::uint64_t key, std::uint64_t hi,
                                          std::uint64_t lo) {
  std::uint32_t c[4] = {
      static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(lo >> 32),
      static_cast<std::uint32_t>(hi), static_cast<std::uint32_t>(hi >> 32)};
  rounds(c, static_cast<std::uint32_t>(key),
         static_cast<std::uint32_t>(key >> 32));
  return {c[0], c[1], c[2], c[3]};
}

} // namespace philox

/// Composes a stream id from a lane (trajectory, gap or path index) and a
/// role tag. Callers must use distinct tags for draws that would otherwise
/// share (stream, index); see the tag constants in montecarlo.hpp.
constexpr std::uint64_t stream_id(std::uint64_t lane, unsigned tag) {
  return (std::uint64_t{tag} << 56) | (lane & ((std::uint64_t{1} << 56) - 1));
}

/// Stateless generator: draws are addressed, not consumed. Skipping a draw
/// costs nothing and does not shift any other draw.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t stream, std::uint64_t index) const {
    const auto b = philox::block(seed_, stream, index);
    const std::uint64_t v = b[0] | (std::uint64_t{b[1]} << 32);
    return (static_cast<double>(v >> 11) + 0.5) * 0x1p-53;
  }

  /// Standard normal via Box-Muller; one block per draw.
  double normal(std::uint64_t stream, std::uint64_t index) const {
    const auto b = philox::block(seed_, stream, index);
    const std::uint64_t v0 = b[0] | (std::uint64_t{b[1]} << 32);
    const std::uint64_t v1 = b[2] | (std::uint64_t{b[3]} << 32);
    const double u1 = (static_cast<double>(v0 >> 11) + 1.0) * 0x1p-53; // (0,1]
    const double u2 = static_cast<double>(v1 >> 11) * 0x1p-53;         // [0,1)
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

private:
  std::uint64_t seed_;
};

} // namespace photocount
