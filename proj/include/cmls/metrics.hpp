#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cmls/oracle.hpp"
#include "cmls/sketch.hpp"

namespace cmls {

/// Point-query estimator over element keys.
using Estimator = std::function<double(std::string_view)>;

inline Estimator estimator_of(const Sketch& sk) {
  return [&sk](std::string_view key) { return sk.query(key); };
}

/// Pairwise (cascade) summation in the given order.
double pairwise_sum(std::span<const double> values) noexcept;

/// Mean over distinct keys of |estimate - exact| / exact. Terms are summed in
/// sorted order so the result does not depend on hash-map iteration order.
/// Throws std::invalid_argument on an empty table.
double average_relative_error(const ExactCountTable& exact, const Estimator& estimate_of);

/// Same as average_relative_error without the absolute value.
double mean_signed_relative_error(const ExactCountTable& exact, const Estimator& estimate_of);

/// ln( (bigram/total_bigrams) / ((left/total_unigrams) * (right/total_unigrams)) ).
/// std::nullopt when any count or total is not strictly positive.
std::optional<double> pmi(double bigram_count, double left_count, double right_count,
                          std::uint64_t total_bigrams, std::uint64_t total_unigrams) noexcept;

struct PmiComparison {
  double rmse = 0.0;
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;  // pairs whose estimated PMI is undefined
};

/// RMSE between exact-count PMI and estimated PMI over every distinct bigram.
/// Totals come from the exact table on both sides. Throws std::invalid_argument
/// when the table has no bigram, or when every pair is skipped.
PmiComparison pmi_rmse(const ExactCountTable& exact, const Estimator& estimate_of);

inline PmiComparison pmi_rmse(const ExactCountTable& exact, const Sketch& sk) {
  return pmi_rmse(exact, estimator_of(sk));
}

/// PMI of every distinct bigram from `estimate_of`, undefined pairs dropped.
/// Order follows sorted bigram keys.
std::vector<double> bigram_pmis(const ExactCountTable& exact, const Estimator& estimate_of);

/// Estimator returning the exact counts of `exact`.
Estimator exact_estimator(const ExactCountTable& exact);

struct PmiHistogram {
  std::string label;
  std::vector<double> bin_edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t underflow = 0;  // values < lo
  std::uint64_t overflow = 0;   // values > hi
};

inline constexpr unsigned kDefaultHistogramBins = 100;
inline constexpr double kDefaultHistogramLo = -5.0;
inline constexpr double kDefaultHistogramHi = 15.0;

/// Equal-width bins over [lo, hi]; hi itself lands in the last bin.
PmiHistogram pmi_histogram(std::span<const double> values, unsigned bin_count, double lo, double hi,
                           std::string label = {});

}  // namespace cmls
