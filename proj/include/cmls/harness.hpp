#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cmls/corpus.hpp"
#include "cmls/counter_cell.hpp"
#include "cmls/metrics.hpp"
#include "cmls/oracle.hpp"
#include "cmls/sketch.hpp"

namespace cmls {

/// Preset sketch flavours compared by the benchmark.
enum class Variant : std::uint8_t {
  CmsCu,     // linear 32-bit cells
  Cmls16Cu,  // log base 1.00025, 16-bit cells
  Cmls8Cu,   // log base 1.08, 8-bit cells
};

inline constexpr Variant kAllVariants[] = {Variant::CmsCu, Variant::Cmls16Cu, Variant::Cmls8Cu};

std::string_view variant_label(Variant v) noexcept;
/// Accepts the labels "CMS-CU", "CMLS16-CU", "CMLS8-CU" (case-insensitive).
Variant parse_variant(std::string_view label);
CounterSemantics variant_semantics(Variant v);

/// perfect/16, perfect/8, ..., perfect*16. Budgets that would be 0 are dropped.
std::vector<std::uint64_t> default_budgets(std::uint64_t perfect_bytes);

/// Seed of the sketch built for (variant, budget) under a master seed.
std::uint64_t sketch_seed(std::uint64_t master, Variant v, std::uint64_t budget) noexcept;

/// One pass of `events` into a fresh sketch.
Sketch build_sketch(const SketchConfig& config, std::span<const NgramEvent> events);

struct ExperimentSpec {
  /// A corpus file/directory or a synthetic Zipf stream.
  std::variant<std::filesystem::path, ZipfSpec> source = ZipfSpec{};
  std::size_t max_tokens = 0;  // corpus only; 0 = everything
  std::uint32_t depth = 2;
  std::vector<std::uint64_t> budgets;  // empty: default_budgets(perfect storage)
  std::vector<Variant> variants{std::begin(kAllVariants), std::end(kAllVariants)};
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> hist_budget;  // empty: largest budget <= perfect, else smallest
  unsigned hist_bins = kDefaultHistogramBins;
  double hist_lo = kDefaultHistogramLo;
  double hist_hi = kDefaultHistogramHi;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct MetricRow {
  std::string variant;
  std::uint64_t storage_bytes = 0;  // d * w * cell bytes of the sketch actually built
  std::uint32_t depth = 0;
  std::uint64_t width = 0;
  unsigned cell_bits = 0;
  double base = 1.0;
  double are = 0.0;
  double pmi_rmse = 0.0;
  std::uint64_t pmi_skipped_pairs = 0;
  std::uint64_t perfect_storage_bytes = 0;

  friend bool operator==(const MetricRow&, const MetricRow&) = default;
};

struct ExperimentReport {
  std::vector<MetricRow> rows;  // ordered by (variant, budget ascending)
  std::uint64_t perfect_storage_bytes = 0;
  std::uint64_t hist_budget = 0;
  std::vector<PmiHistogram> histograms;  // "exact" first, then one per variant
};

/// Loads the source and runs the sweep.
ExperimentReport run_experiment(const ExperimentSpec& spec);

/// Runs the sweep over an already materialised event stream.
ExperimentReport run_experiment(const ExperimentSpec& spec, std::span<const NgramEvent> events);

/// Events of spec.source.
std::vector<NgramEvent> load_events(const ExperimentSpec& spec);

inline constexpr std::string_view kMetricsCsvHeader =
    "variant,storage_bytes,depth,width,cell_bits,base,are,pmi_rmse,pmi_skipped_pairs,perfect_storage_bytes";
inline constexpr std::string_view kHistogramCsvHeader = "series,bin_lo,bin_hi,count";

std::string metrics_csv(std::span<const MetricRow> rows);
std::string histogram_csv(std::span<const PmiHistogram> histograms);
/// Inverse of metrics_csv. Throws std::runtime_error on malformed input.
std::vector<MetricRow> parse_metrics_csv(std::string_view csv);

/// Writes through a temporary sibling file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

void emit_csv(const ExperimentReport& report, const std::filesystem::path& metrics_out,
              const std::filesystem::path& hist_out);

}  // namespace cmls
