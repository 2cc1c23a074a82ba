#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cmls/counter_cell.hpp"
#include "cmls/random.hpp"

namespace cmls {

struct SketchConfig {
  CounterSemantics semantics = CounterSemantics::linear();
  std::uint32_t depth = 1;
  std::uint64_t width = 1;
  std::uint64_t seed = 0;

  /// Widest sketch of the given depth whose cells fit in `budget_bytes`:
  /// width = floor(budget / (depth * cell_bytes)). Throws if that is 0.
  static SketchConfig from_budget(const CounterSemantics& sem, std::uint32_t depth,
                                  std::uint64_t budget_bytes, std::uint64_t seed);

  /// Cell storage only, metadata excluded.
  std::uint64_t storage_bytes() const noexcept {
    return std::uint64_t{depth} * width * semantics.cell_bytes();
  }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  friend bool operator==(const SketchConfig&, const SketchConfig&) = default;
};

/// Seed of the per-sketch update RNG, derived from SketchConfig::seed.
std::uint64_t update_rng_seed(std::uint64_t seed) noexcept;

enum class DecodeErrorKind {
  BadMagic,
  UnsupportedVersion,
  Truncated,
  InvalidHeader,
  CellOverflow,
  TrailingBytes,
};

class DecodeError : public std::runtime_error {
 public:
  DecodeError(DecodeErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  DecodeErrorKind kind() const noexcept { return kind_; }

 private:
  DecodeErrorKind kind_;
};

/// Count-Min grid with conservative update over linear or logarithmic cells.
///
/// Snapshot layout (little-endian):
///   "CMLS" | version u8 = 1 | mode u8 | cell_bits u8 | reserved u8 = 0 |
///   depth u32 | width u64 | base f64 | seed u64 | rng s0 u64 | rng s1 u64 |
///   update_count u64 | depth*width cells, row-major, cell_bits/8 bytes each
///
/// update() needs exclusive access. Concurrent const calls are fine.
class Sketch {
 public:
  static constexpr std::uint8_t kFormatVersion = 1;
  static constexpr std::size_t kHeaderBytes = 60;

  explicit Sketch(const SketchConfig& config);

  const SketchConfig& config() const noexcept { return config_; }
  const CounterSemantics& semantics() const noexcept { return config_.semantics; }
  std::uint32_t depth() const noexcept { return config_.depth; }
  std::uint64_t width() const noexcept { return config_.width; }
  std::uint64_t storage_bytes() const noexcept { return config_.storage_bytes(); }
  std::uint64_t update_count() const noexcept { return update_count_; }
  const Xoroshiro128pp& rng() const noexcept { return rng_; }

  /// Column of `element` in row `row`: hash_bytes(element, row_seed(seed, row)) mod width.
  std::uint64_t row_index(std::string_view element, std::uint32_t row) const noexcept;

  CellValue cell(std::uint32_t row, std::uint64_t column) const noexcept;

  /// Minimum level over the element's cells.
  CellValue min_level(std::string_view element) const noexcept;

  void update(std::string_view element);

  /// cell_value of the element's minimum level.
  double query(std::string_view element) const noexcept { return cell_value(min_level(element), semantics()); }

  std::vector<std::uint8_t> serialize() const;
  static Sketch deserialize(std::span<const std::uint8_t> bytes);

  /// Same config, rng state, counter and grid.
  friend bool operator==(const Sketch& a, const Sketch& b);

  using Grid = std::variant<std::vector<std::uint8_t>, std::vector<std::uint16_t>,
                            std::vector<std::uint32_t>>;

 private:
  SketchConfig config_;
  Grid grid_;
  Xoroshiro128pp rng_;
  std::uint64_t update_count_ = 0;
  std::vector<std::uint64_t> scratch_;  // per-row cell offsets during update()
};

}  // namespace cmls
