#include "cmls/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cmls {

namespace {

double sorted_mean(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  return pairwise_sum(terms) / static_cast<double>(terms.size());
}

std::vector<double> relative_errors(const ExactCountTable& exact, const Estimator& estimate_of) {
  if (exact.distinct() == 0) throw std::invalid_argument("relative error of an empty count table");
  std::vector<double> terms;
  terms.reserve(exact.distinct());
  for (const auto& [key, entry] : exact.entries()) {
    const auto truth = static_cast<double>(entry.count);
    terms.push_back((estimate_of(key) - truth) / truth);
  }
  return terms;
}

std::vector<std::string_view> sorted_bigram_keys(const ExactCountTable& exact) {
  std::vector<std::string_view> keys;
  keys.reserve(exact.distinct_bigrams());
  for (const auto& [key, entry] : exact.entries()) {
    if (entry.kind == NgramKind::Bigram) keys.push_back(key);
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::optional<double> bigram_pmi(const ExactCountTable& exact, std::string_view key,
                                 const Estimator& estimate_of) {
  const auto [left, right] = split_bigram(key);
  return pmi(estimate_of(key), estimate_of(left), estimate_of(right), exact.total_bigrams(),
             exact.total_unigrams());
}

}  // namespace

double pairwise_sum(std::span<const double> values) noexcept {
  constexpr std::size_t kBlock = 8;
  if (values.size() <= kBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double average_relative_error(const ExactCountTable& exact, const Estimator& estimate_of) {
  auto terms = relative_errors(exact, estimate_of);
  for (auto& t : terms) t = std::abs(t);
  return sorted_mean(std::move(terms));
}

double mean_signed_relative_error(const ExactCountTable& exact, const Estimator& estimate_of) {
  return sorted_mean(relative_errors(exact, estimate_of));
}

std::optional<double> pmi(double bigram_count, double left_count, double right_count,
                          std::uint64_t total_bigrams, std::uint64_t total_unigrams) noexcept {
  if (!(bigram_count > 0.0) || !(left_count > 0.0) || !(right_count > 0.0) || total_bigrams == 0 ||
      total_unigrams == 0) {
    return std::nullopt;
  }
  const double tb = static_cast<double>(total_bigrams);
  const double tu = static_cast<double>(total_unigrams);
  return std::log(bigram_count / tb) - std::log(left_count / tu) - std::log(right_count / tu);
}

Estimator exact_estimator(const ExactCountTable& exact) {
  return [&exact](std::string_view key) { return static_cast<double>(exact.count(key)); };
}

PmiComparison pmi_rmse(const ExactCountTable& exact, const Estimator& estimate_of) {
  if (exact.distinct_bigrams() == 0) throw std::invalid_argument("PMI RMSE needs at least one bigram");
  const Estimator truth = exact_estimator(exact);
  PmiComparison result;
  std::vector<double> squared;
  squared.reserve(exact.distinct_bigrams());
  for (const auto key : sorted_bigram_keys(exact)) {
    const auto reference = bigram_pmi(exact, key, truth);
    const auto estimated = bigram_pmi(exact, key, estimate_of);
    if (!reference || !estimated) {
      ++result.skipped;
      continue;
    }
    const double diff = *estimated - *reference;
    squared.push_back(diff * diff);
  }
  result.evaluated = squared.size();
  if (squared.empty()) throw std::invalid_argument("every bigram has an undefined estimated PMI");
  result.rmse = std::sqrt(sorted_mean(std::move(squared)));
  return result;
}

std::vector<double> bigram_pmis(const ExactCountTable& exact, const Estimator& estimate_of) {
  std::vector<double> out;
  out.reserve(exact.distinct_bigrams());
  for (const auto key : sorted_bigram_keys(exact)) {
    if (const auto v = bigram_pmi(exact, key, estimate_of)) out.push_back(*v);
  }
  return out;
}

PmiHistogram pmi_histogram(std::span<const double> values, unsigned bin_count, double lo, double hi,
                           std::string label) {
  if (bin_count < 1) throw std::invalid_argument("histogram needs at least one bin");
  if (!(lo < hi)) throw std::invalid_argument("histogram range must satisfy lo < hi");
  PmiHistogram h;
  h.label = std::move(label);
  h.bin_edges.resize(bin_count + 1);
  const double step = (hi - lo) / bin_count;
  for (unsigned i = 0; i <= bin_count; ++i) h.bin_edges[i] = lo + step * i;
  h.bin_edges.back() = hi;
  h.counts.assign(bin_count, 0);
  for (const double v : values) {
    if (v < lo) {
      ++h.underflow;
    } else if (v > hi || std::isnan(v)) {
      ++h.overflow;
    } else {
      auto bin = static_cast<std::size_t>((v - lo) / step);
      bin = std::min<std::size_t>(bin, bin_count - 1);
      // Keep the bin consistent with the stored edges under rounding.
      while (bin > 0 && v < h.bin_edges[bin]) --bin;
      while (bin + 1 < bin_count && v >= h.bin_edges[bin + 1]) ++bin;
      ++h.counts[bin];
    }
  }
  return h;
}

}  // namespace cmls
