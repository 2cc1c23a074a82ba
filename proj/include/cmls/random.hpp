#pragma once

#include <array>
#include <cstdint>

namespace cmls {

/// SplitMix64 step. Used to expand seeds and to mix row indices into hash seeds.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stateless 64-bit finalizer: splitmix64 applied to a copy of `x`.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept { return splitmix64(x); }

/// xoroshiro128++ (Blackman & Vigna). 16 bytes of state, serialized as two
/// little-endian u64 words `s0, s1`.
class Xoroshiro128pp {
 public:
  using result_type = std::uint64_t;
  using State = std::array<std::uint64_t, 2>;

  /// Seeds both words from successive SplitMix64 outputs of `seed`.
  explicit Xoroshiro128pp(std::uint64_t seed = 0) noexcept {
    std::uint64_t sm = seed;
    s_[0] = splitmix64(sm);
    s_[1] = splitmix64(sm);
  }

  static Xoroshiro128pp from_state(const State& s) noexcept {
    Xoroshiro128pp r;
    r.s_ = s;
    return r;
  }

  const State& state() const noexcept { return s_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t s0 = s_[0];
    std::uint64_t s1 = s_[1];
    const std::uint64_t result = rotl(s0 + s1, 17) + s0;
    s1 ^= s0;
    s_[0] = rotl(s0, 49) ^ s1 ^ (s1 << 21);
    s_[1] = rotl(s1, 28);
    return result;
  }

  /// Uniform double in [0, 1) from the top 53 bits of one draw.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  friend bool operator==(const Xoroshiro128pp&, const Xoroshiro128pp&) = default;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  State s_{};
};

}  // namespace cmls
