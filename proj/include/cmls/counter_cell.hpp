#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "cmls/random.hpp"

namespace cmls {

enum class CounterMode : std::uint8_t { Linear = 0, Logarithmic = 1 };

using CellValue = std::uint32_t;

/// How a single counter cell counts: plain integer increments, or Morris-style
/// logarithmic levels where level c stands for roughly (b^c - 1)/(b - 1) events.
class CounterSemantics {
 public:
  /// Throws std::invalid_argument for cell_bits outside {8, 16, 32} or, in
  /// logarithmic mode, for a base that is not strictly greater than 1.
  CounterSemantics(CounterMode mode, double base, unsigned cell_bits);

  static CounterSemantics linear(unsigned cell_bits = 32) {
    return CounterSemantics(CounterMode::Linear, 1.0, cell_bits);
  }
  static CounterSemantics logarithmic(double base, unsigned cell_bits) {
    return CounterSemantics(CounterMode::Logarithmic, base, cell_bits);
  }

  CounterMode mode() const noexcept { return mode_; }
  double base() const noexcept { return base_; }
  unsigned cell_bits() const noexcept { return cell_bits_; }
  unsigned cell_bytes() const noexcept { return cell_bits_ / 8; }
  CellValue max_cell() const noexcept { return max_cell_; }
  bool is_linear() const noexcept { return mode_ == CounterMode::Linear; }

  friend bool operator==(const CounterSemantics&, const CounterSemantics&) = default;

 private:
  CounterMode mode_;
  double base_;
  unsigned cell_bits_;
  CellValue max_cell_;
};

/// Decides whether a cell at level `c` moves to `c + 1`.
///
/// Linear mode never touches `rng`. Logarithmic mode consumes exactly one
/// uniform draw u and accepts iff u < b^(-c). A saturated cell (c == max_cell)
/// always rejects; in logarithmic mode the draw is still consumed so the draw
/// sequence depends only on the number of calls.
bool increase_decision(CellValue c, const CounterSemantics& sem, Xoroshiro128pp& rng) noexcept;

/// Estimated weight of the single increment that took a cell to level `c`:
/// 0 for c == 0, else b^(c-1). Identity in linear mode.
double point_value(CellValue c, const CounterSemantics& sem) noexcept;

/// Estimated count represented by a cell at level `c`: the sum of point_value(i)
/// for i in 1..c, i.e. (b^c - 1)/(b - 1). Identity in linear mode.
double cell_value(CellValue c, const CounterSemantics& sem) noexcept;

}  // namespace cmls
