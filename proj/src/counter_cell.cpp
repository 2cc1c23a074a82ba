#include "cmls/counter_cell.hpp"

#include <cmath>

namespace cmls {

CounterSemantics::CounterSemantics(CounterMode mode, double base, unsigned cell_bits)
    : mode_(mode), base_(base), cell_bits_(cell_bits) {
  if (cell_bits != 8 && cell_bits != 16 && cell_bits != 32) {
    throw std::invalid_argument("cell_bits must be 8, 16 or 32, got " + std::to_string(cell_bits));
  }
  if (mode == CounterMode::Logarithmic && !(base > 1.0 && std::isfinite(base))) {
    throw std::invalid_argument("base must be finite and > 1 in logarithmic mode, got " +
                                std::to_string(base));
  }
  if (mode != CounterMode::Linear && mode != CounterMode::Logarithmic) {
    throw std::invalid_argument("unknown counter mode");
  }
  max_cell_ = cell_bits == 32 ? CellValue{0xffffffffu} : ((CellValue{1} << cell_bits) - 1);
}

bool increase_decision(CellValue c, const CounterSemantics& sem, Xoroshiro128pp& rng) noexcept {
  if (sem.is_linear()) return c < sem.max_cell();
  const double u = rng.uniform();
  if (c >= sem.max_cell()) return false;
  return u < std::exp(-static_cast<double>(c) * std::log(sem.base()));
}

double point_value(CellValue c, const CounterSemantics& sem) noexcept {
  if (sem.is_linear()) return static_cast<double>(c);
  if (c == 0) return 0.0;
  return std::exp(static_cast<double>(c - 1) * std::log(sem.base()));
}

double cell_value(CellValue c, const CounterSemantics& sem) noexcept {
  if (sem.is_linear()) return static_cast<double>(c);
  if (c <= 1) return point_value(c, sem);
  // (b^c - 1)/(b - 1); expm1 keeps precision when b is close to 1.
  const double b = sem.base();
  return std::expm1(static_cast<double>(c) * std::log(b)) / (b - 1.0);
}

}  // namespace cmls
