#include "cmls/hash.hpp"

#include "cmls/random.hpp"

namespace cmls {

namespace {

std::uint64_t load_le(const unsigned char* p, std::size_t n) noexcept {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < n; ++i) v |= std::uint64_t{p[i]} << (8 * i);
  return v;
}

}  // namespace

std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t seed) noexcept {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  std::size_t n = bytes.size();
  std::uint64_t h = seed ^ (static_cast<std::uint64_t>(n) * 0x9e3779b97f4a7c15ULL);
  while (n >= 8) {
    h = mix64(h ^ load_le(p, 8));
    p += 8;
    n -= 8;
  }
  if (n > 0) h = mix64(h ^ load_le(p, n) ^ (std::uint64_t{0xff} << 56));
  return mix64(h);
}

std::uint64_t row_seed(std::uint64_t seed, std::uint32_t row) noexcept {
  return mix64(seed ^ mix64(std::uint64_t{row} + 1));
}

}  // namespace cmls
