#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

#include "cmls/corpus.hpp"

namespace cmls {

/// Bytes of one exact counter in the perfect-storage reference.
inline constexpr std::uint64_t kPerfectCounterBytes = 4;

/// Memory to hold one exact 32-bit counter per distinct element, keys excluded.
constexpr std::uint64_t perfect_storage_bytes(std::uint64_t distinct) noexcept {
  return distinct * kPerfectCounterBytes;
}

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

/// Ground-truth counts of an n-gram stream.
class ExactCountTable {
 public:
  struct Entry {
    NgramKind kind;
    std::uint64_t count;
  };
  using Map = std::unordered_map<std::string, Entry, StringHash, std::equal_to<>>;

  void add(const NgramEvent& event);

  /// 0 for unseen keys.
  std::uint64_t count(std::string_view key) const;

  std::uint64_t total_unigrams() const noexcept { return total_unigrams_; }
  std::uint64_t total_bigrams() const noexcept { return total_bigrams_; }
  std::uint64_t distinct() const noexcept { return counts_.size(); }
  std::uint64_t distinct_bigrams() const noexcept { return distinct_bigrams_; }

  const Map& entries() const noexcept { return counts_; }

  /// "key,kind,count" rows sorted by key; the bigram separator is written as a space.
  void write_csv(const std::filesystem::path& path) const;

  friend bool operator==(const ExactCountTable& a, const ExactCountTable& b);

 private:
  Map counts_;
  std::uint64_t total_unigrams_ = 0;
  std::uint64_t total_bigrams_ = 0;
  std::uint64_t distinct_bigrams_ = 0;
};

ExactCountTable count_exact(std::span<const NgramEvent> events);

}  // namespace cmls
