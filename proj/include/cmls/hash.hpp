#pragma once

#include <cstdint>
#include <string_view>

namespace cmls {

// Seeded byte-string hash used for sketch rows.
//
//   h = seed ^ (len * 0x9e3779b97f4a7c15)
//   for each 8-byte little-endian block m:  h = mix64(h ^ m)
//   tail (1..7 bytes, little-endian, zero padded) t:  h = mix64(h ^ t ^ 0xff << 56)
//   return mix64(h)
//
// mix64 is the SplitMix64 output function (see random.hpp). The result does
// not depend on host endianness.
std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t seed) noexcept;

// Seed of row k: mix64(seed ^ mix64(k + 1)).
std::uint64_t row_seed(std::uint64_t seed, std::uint32_t row) noexcept;

}  // namespace cmls
