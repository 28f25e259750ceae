#pragma once

// Counter-based random numbers: Philox4x32 with 10 rounds (Salmon et al.,
// "Parallel random numbers: as easy as 1, 2, 3", SC'11). Every output block is
// a pure function of (key, counter), so any walker's stream can be
// regenerated in isolation and in any order.

#include <array>
#include <cstdint>

namespace ctrw {

class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit constexpr Philox4x32(Key key) : key_(key) {}

  constexpr Block operator()(Block counter) const {
    Key key = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      counter = single_round(counter, key);
    }
    return counter;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

  static constexpr Block single_round(const Block& c, const Key& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }

  Key key_;
};

/// Uniform on the open interval (0, 1): midpoints of a 2^-52 grid, all
/// exactly representable, built from two 32-bit words.
constexpr double uniform_open(std::uint32_t high, std::uint32_t low) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(high) << 20) | (low >> 12);
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

/// Pair of uniforms driving step k of one walker.
struct StepUniforms {
  double wait;
  double jump;
};

/// Random stream of one walker: the Philox counter is (step, walker) and the
/// key is the seed. Words 0-1 of each block feed the waiting time, words 2-3
/// the jump, so the two channels never share bits.
class WalkerStream {
 public:
  constexpr WalkerStream(std::uint64_t seed, std::uint64_t walker)
      : philox_({static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}),
        walker_(walker) {}

  constexpr StepUniforms operator()(std::uint64_t step) const {
    const auto block = philox_({static_cast<std::uint32_t>(step),
                                static_cast<std::uint32_t>(step >> 32),
                                static_cast<std::uint32_t>(walker_),
                                static_cast<std::uint32_t>(walker_ >> 32)});
    return {uniform_open(block[0], block[1]), uniform_open(block[2], block[3])};
  }

 private:
  Philox4x32 philox_;
  std::uint64_t walker_;
};

}  // namespace ctrw
