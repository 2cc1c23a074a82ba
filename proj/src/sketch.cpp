#include "cmls/sketch.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <limits>

#include "cmls/hash.hpp"

namespace cmls {

namespace {

constexpr char kMagic[4] = {'C', 'M', 'L', 'S'};

class Writer {
 public:
  explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.push_back(v); }
  void uint(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u32(std::uint32_t v) { uint(v, 4); }
  void u64(std::uint64_t v) { uint(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

 private:
  std::vector<std::uint8_t>& out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::size_t remaining() const noexcept { return in_.size() - pos_; }

  std::uint64_t uint(int bytes, const char* field) {
    if (remaining() < static_cast<std::size_t>(bytes)) {
      throw DecodeError(DecodeErrorKind::Truncated,
                        std::string("snapshot truncated while reading ") + field);
    }
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= std::uint64_t{in_[pos_ + i]} << (8 * i);
    pos_ += bytes;
    return v;
  }
  std::uint8_t u8(const char* field) { return static_cast<std::uint8_t>(uint(1, field)); }
  std::uint32_t u32(const char* field) { return static_cast<std::uint32_t>(uint(4, field)); }
  std::uint64_t u64(const char* field) { return uint(8, field); }
  double f64(const char* field) { return std::bit_cast<double>(u64(field)); }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

Sketch::Grid make_grid(unsigned cell_bits, std::size_t cells) {
  switch (cell_bits) {
    case 8: return std::vector<std::uint8_t>(cells, 0);
    case 16: return std::vector<std::uint16_t>(cells, 0);
    default: return std::vector<std::uint32_t>(cells, 0);
  }
}

}  // namespace

SketchConfig SketchConfig::from_budget(const CounterSemantics& sem, std::uint32_t depth,
                                       std::uint64_t budget_bytes, std::uint64_t seed) {
  if (depth == 0) throw std::invalid_argument("depth must be >= 1");
  const std::uint64_t width = budget_bytes / (std::uint64_t{depth} * sem.cell_bytes());
  if (width == 0) {
    throw std::invalid_argument("storage budget of " + std::to_string(budget_bytes) +
                                " bytes is too small for depth " + std::to_string(depth) + " with " +
                                std::to_string(sem.cell_bits()) + "-bit cells (width would be 0)");
  }
  SketchConfig cfg{sem, depth, width, seed};
  cfg.validate();
  return cfg;
}

void SketchConfig::validate() const {
  if (depth == 0) throw std::invalid_argument("depth must be >= 1");
  if (width == 0) throw std::invalid_argument("width must be >= 1");
  const std::uint64_t max_cells = std::numeric_limits<std::size_t>::max() / 4;
  if (width > max_cells / depth) throw std::invalid_argument("width * depth overflows");
}

std::uint64_t update_rng_seed(std::uint64_t seed) noexcept {
  return mix64(seed ^ 0x636d6c735f726e67ULL);  // "cmls_rng"
}

Sketch::Sketch(const SketchConfig& config)
    : config_(config), rng_(update_rng_seed(config.seed)), scratch_(config.depth) {
  config_.validate();
  grid_ = make_grid(config_.semantics.cell_bits(),
                    static_cast<std::size_t>(config_.depth) * config_.width);
}

std::uint64_t Sketch::row_index(std::string_view element, std::uint32_t row) const noexcept {
  return hash_bytes(element, row_seed(config_.seed, row)) % config_.width;
}

CellValue Sketch::cell(std::uint32_t row, std::uint64_t column) const noexcept {
  const std::size_t offset = static_cast<std::size_t>(row) * config_.width + column;
  return std::visit([offset](const auto& g) { return static_cast<CellValue>(g[offset]); }, grid_);
}

CellValue Sketch::min_level(std::string_view element) const noexcept {
  return std::visit(
      [&](const auto& g) {
        CellValue c = std::numeric_limits<CellValue>::max();
        for (std::uint32_t k = 0; k < config_.depth; ++k) {
          const std::size_t offset = static_cast<std::size_t>(k) * config_.width + row_index(element, k);
          c = std::min<CellValue>(c, g[offset]);
        }
        return c;
      },
      grid_);
}

void Sketch::update(std::string_view element) {
  ++update_count_;
  std::visit(
      [&](auto& g) {
        using Cell = typename std::decay_t<decltype(g)>::value_type;
        CellValue c = std::numeric_limits<CellValue>::max();
        for (std::uint32_t k = 0; k < config_.depth; ++k) {
          scratch_[k] = static_cast<std::size_t>(k) * config_.width + row_index(element, k);
          c = std::min<CellValue>(c, g[scratch_[k]]);
        }
        if (!increase_decision(c, config_.semantics, rng_)) return;
        for (const std::uint64_t offset : scratch_) {
          if (g[offset] == c) g[offset] = static_cast<Cell>(c + 1);
        }
      },
      grid_);
}

std::vector<std::uint8_t> Sketch::serialize() const {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + storage_bytes());
  Writer w(out);
  for (char ch : kMagic) w.u8(static_cast<std::uint8_t>(ch));
  w.u8(kFormatVersion);
  w.u8(static_cast<std::uint8_t>(semantics().mode()));
  w.u8(static_cast<std::uint8_t>(semantics().cell_bits()));
  w.u8(0);
  w.u32(config_.depth);
  w.u64(config_.width);
  w.f64(semantics().base());
  w.u64(config_.seed);
  w.u64(rng_.state()[0]);
  w.u64(rng_.state()[1]);
  w.u64(update_count_);
  const int bytes = static_cast<int>(semantics().cell_bytes());
  std::visit(
      [&](const auto& g) {
        for (const auto v : g) w.uint(v, bytes);
      },
      grid_);
  return out;
}

Sketch Sketch::deserialize(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  for (char ch : kMagic) {
    if (r.u8("magic") != static_cast<std::uint8_t>(ch)) {
      throw DecodeError(DecodeErrorKind::BadMagic, "bad snapshot magic (expected \"CMLS\")");
    }
  }
  const std::uint8_t version = r.u8("version");
  if (version != kFormatVersion) {
    throw DecodeError(DecodeErrorKind::UnsupportedVersion,
                      "unsupported snapshot version " + std::to_string(version));
  }
  const std::uint8_t mode = r.u8("mode");
  const std::uint8_t cell_bits = r.u8("cell_bits");
  const std::uint8_t reserved = r.u8("reserved");
  const std::uint32_t depth = r.u32("depth");
  const std::uint64_t width = r.u64("width");
  const double base = r.f64("base");
  const std::uint64_t seed = r.u64("seed");
  const Xoroshiro128pp::State state{r.u64("rng_state"), r.u64("rng_state")};
  const std::uint64_t update_count = r.u64("update_count");

  if (mode > 1) throw DecodeError(DecodeErrorKind::InvalidHeader, "invalid mode " + std::to_string(mode));
  if (reserved != 0) throw DecodeError(DecodeErrorKind::InvalidHeader, "reserved byte is not zero");
  SketchConfig cfg;
  try {
    cfg = SketchConfig{CounterSemantics(static_cast<CounterMode>(mode), base, cell_bits), depth, width, seed};
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw DecodeError(DecodeErrorKind::InvalidHeader, std::string("invalid snapshot header: ") + e.what());
  }

  const std::uint64_t cell_bytes = cfg.semantics.cell_bytes();
  const std::uint64_t cells = std::uint64_t{depth} * width;
  if (r.remaining() / cell_bytes < cells) {
    throw DecodeError(DecodeErrorKind::Truncated, "snapshot truncated in cell data");
  }
  if (r.remaining() != cells * cell_bytes) {
    throw DecodeError(DecodeErrorKind::TrailingBytes, "trailing bytes after cell data");
  }

  Sketch sk(cfg);
  sk.rng_ = Xoroshiro128pp::from_state(state);
  sk.update_count_ = update_count;
  const CellValue max_cell = cfg.semantics.max_cell();
  std::visit(
      [&](auto& g) {
        using Cell = typename std::decay_t<decltype(g)>::value_type;
        for (auto& v : g) {
          const std::uint64_t raw = r.uint(static_cast<int>(cell_bytes), "cells");
          if (raw > max_cell) {
            throw DecodeError(DecodeErrorKind::CellOverflow,
                              "cell value " + std::to_string(raw) + " exceeds max_cell");
          }
          v = static_cast<Cell>(raw);
        }
      },
      sk.grid_);
  return sk;
}

bool operator==(const Sketch& a, const Sketch& b) {
  return a.config_ == b.config_ && a.rng_ == b.rng_ && a.update_count_ == b.update_count_ &&
         a.grid_ == b.grid_;
}

}  // namespace cmls
