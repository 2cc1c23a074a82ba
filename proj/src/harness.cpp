#include "cmls/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "cmls/random.hpp"

namespace cmls {

namespace {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view field, std::string_view name) {
  T value{};
  const char* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw std::runtime_error("malformed " + std::string(name) + " field: '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint64_t pick_hist_budget(const ExperimentSpec& spec, std::span<const std::uint64_t> budgets,
                               std::uint64_t perfect) {
  if (spec.hist_budget) return *spec.hist_budget;
  std::optional<std::uint64_t> best;
  for (const auto b : budgets) {
    if (b <= perfect && (!best || b > *best)) best = b;
  }
  return best ? *best : *std::min_element(budgets.begin(), budgets.end());
}

// Runs fn(i) for i in [0, n) on up to `threads` workers; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::string_view variant_label(Variant v) noexcept {
  switch (v) {
    case Variant::CmsCu: return "CMS-CU";
    case Variant::Cmls16Cu: return "CMLS16-CU";
    case Variant::Cmls8Cu: return "CMLS8-CU";
  }
  return "?";
}

Variant parse_variant(std::string_view label) {
  std::string upper(label);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const auto v : kAllVariants) {
    if (upper == variant_label(v)) return v;
  }
  throw std::invalid_argument("unknown variant '" + std::string(label) +
                              "' (expected CMS-CU, CMLS16-CU or CMLS8-CU)");
}

CounterSemantics variant_semantics(Variant v) {
  switch (v) {
    case Variant::CmsCu: return CounterSemantics::linear(32);
    case Variant::Cmls16Cu: return CounterSemantics::logarithmic(1.00025, 16);
    case Variant::Cmls8Cu: return CounterSemantics::logarithmic(1.08, 8);
  }
  throw std::invalid_argument("unknown variant");
}

std::vector<std::uint64_t> default_budgets(std::uint64_t perfect_bytes) {
  std::vector<std::uint64_t> out;
  for (int shift = -4; shift <= 4; ++shift) {
    const std::uint64_t b = shift < 0 ? perfect_bytes >> -shift : perfect_bytes << shift;
    if (b > 0 && (out.empty() || out.back() != b)) out.push_back(b);
  }
  return out;
}

std::uint64_t sketch_seed(std::uint64_t master, Variant v, std::uint64_t budget) noexcept {
  std::uint64_t s = mix64(master);
  s = mix64(s ^ (static_cast<std::uint64_t>(v) + 1));
  return mix64(s ^ budget);
}

Sketch build_sketch(const SketchConfig& config, std::span<const NgramEvent> events) {
  Sketch sk(config);
  for (const auto& e : events) sk.update(e.key);
  return sk;
}

std::vector<NgramEvent> load_events(const ExperimentSpec& spec) {
  if (const auto* zipf = std::get_if<ZipfSpec>(&spec.source)) {
    const auto tokens = zipf_generate(*zipf);
    return ngram_stream(tokens);
  }
  const auto docs = read_corpus(std::get<std::filesystem::path>(spec.source), spec.max_tokens);
  return corpus_events(docs);
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  const auto events = load_events(spec);
  return run_experiment(spec, events);
}

ExperimentReport run_experiment(const ExperimentSpec& spec, std::span<const NgramEvent> events) {
  if (spec.variants.empty()) throw std::invalid_argument("no variants selected");
  const ExactCountTable exact = count_exact(events);
  if (exact.distinct_bigrams() == 0) {
    throw std::invalid_argument("input yields no bigrams (need at least two tokens)");
  }

  ExperimentReport report;
  report.perfect_storage_bytes = perfect_storage_bytes(exact.distinct());
  std::vector<std::uint64_t> budgets = spec.budgets.empty() ? default_budgets(report.perfect_storage_bytes)
                                                            : spec.budgets;
  std::sort(budgets.begin(), budgets.end());
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());
  if (budgets.empty()) throw std::invalid_argument("empty budget sweep");
  report.hist_budget = pick_hist_budget(spec, budgets, report.perfect_storage_bytes);

  struct Task {
    Variant variant;
    std::uint64_t budget;
    bool metrics;    // produces a MetricRow
    bool histogram;  // produces the variant's PMI histogram
  };
  std::vector<Task> tasks;
  for (const auto v : spec.variants) {
    bool hist_done = false;
    for (const auto b : budgets) {
      const bool hist = b == report.hist_budget;
      hist_done |= hist;
      tasks.push_back({v, b, true, hist});
    }
    if (!hist_done) tasks.push_back({v, report.hist_budget, false, true});
  }
  // Validate every configuration before doing any work.
  std::vector<SketchConfig> configs;
  for (const auto& t : tasks) {
    configs.push_back(SketchConfig::from_budget(variant_semantics(t.variant), spec.depth, t.budget,
                                                sketch_seed(spec.seed, t.variant, t.budget)));
  }

  std::vector<std::optional<MetricRow>> rows(tasks.size());
  std::vector<std::optional<PmiHistogram>> hists(tasks.size());
  parallel_for(tasks.size(), spec.threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    const Sketch sk = build_sketch(configs[i], events);
    const Estimator est = estimator_of(sk);
    if (t.metrics) {
      const auto sem = sk.semantics();
      const auto pmi = pmi_rmse(exact, est);
      rows[i] = MetricRow{std::string(variant_label(t.variant)),
                          sk.storage_bytes(),
                          sk.depth(),
                          sk.width(),
                          sem.cell_bits(),
                          sem.base(),
                          average_relative_error(exact, est),
                          pmi.rmse,
                          pmi.skipped,
                          report.perfect_storage_bytes};
    }
    if (t.histogram) {
      const auto values = bigram_pmis(exact, est);
      hists[i] = pmi_histogram(values, spec.hist_bins, spec.hist_lo, spec.hist_hi,
                               std::string(variant_label(t.variant)));
    }
  });

  const auto exact_values = bigram_pmis(exact, exact_estimator(exact));
  report.histograms.push_back(pmi_histogram(exact_values, spec.hist_bins, spec.hist_lo, spec.hist_hi, "exact"));
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (rows[i]) report.rows.push_back(std::move(*rows[i]));
    if (hists[i]) report.histograms.push_back(std::move(*hists[i]));
  }
  return report;
}

std::string metrics_csv(std::span<const MetricRow> rows) {
  std::string out(kMetricsCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.variant + ',' + std::to_string(r.storage_bytes) + ',' + std::to_string(r.depth) + ',' +
           std::to_string(r.width) + ',' + std::to_string(r.cell_bits) + ',' + format_double(r.base) + ',' +
           format_double(r.are) + ',' + format_double(r.pmi_rmse) + ',' + std::to_string(r.pmi_skipped_pairs) +
           ',' + std::to_string(r.perfect_storage_bytes) + '\n';
  }
  return out;
}

std::string histogram_csv(std::span<const PmiHistogram> histograms) {
  std::string out(kHistogramCsvHeader);
  out += '\n';
  auto row = [&out](const std::string& series, double lo, double hi, std::uint64_t count) {
    out += series + ',' + format_double(lo) + ',' + format_double(hi) + ',' + std::to_string(count) + '\n';
  };
  for (const auto& h : histograms) {
    const double inf = std::numeric_limits<double>::infinity();
    row(h.label, -inf, h.bin_edges.front(), h.underflow);
    for (std::size_t i = 0; i < h.counts.size(); ++i) row(h.label, h.bin_edges[i], h.bin_edges[i + 1], h.counts[i]);
    row(h.label, h.bin_edges.back(), inf, h.overflow);
  }
  return out;
}

std::vector<MetricRow> parse_metrics_csv(std::string_view csv) {
  std::vector<MetricRow> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < csv.size()) {
    auto end = csv.find('\n', start);
    if (end == std::string_view::npos) end = csv.size();
    const std::string_view line = csv.substr(start, end - start);
    start = end + 1;
    if (line_no++ == 0) {
      if (line != kMetricsCsvHeader) throw std::runtime_error("unexpected metrics CSV header");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 10) {
      throw std::runtime_error("metrics CSV line " + std::to_string(line_no) + " has " +
                               std::to_string(f.size()) + " fields, expected 10");
    }
    MetricRow r;
    r.variant = std::string(f[0]);
    r.storage_bytes = parse_number<std::uint64_t>(f[1], "storage_bytes");
    r.depth = parse_number<std::uint32_t>(f[2], "depth");
    r.width = parse_number<std::uint64_t>(f[3], "width");
    r.cell_bits = parse_number<unsigned>(f[4], "cell_bits");
    r.base = parse_number<double>(f[5], "base");
    r.are = parse_number<double>(f[6], "are");
    r.pmi_rmse = parse_number<double>(f[7], "pmi_rmse");
    r.pmi_skipped_pairs = parse_number<std::uint64_t>(f[8], "pmi_skipped_pairs");
    r.perfect_storage_bytes = parse_number<std::uint64_t>(f[9], "perfect_storage_bytes");
    rows.push_back(std::move(r));
  }
  if (line_no == 0) throw std::runtime_error("empty metrics CSV");
  return rows;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw std::runtime_error("error writing " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw std::runtime_error("cannot write " + path.string() + ": " + ec.message());
  }
}

void emit_csv(const ExperimentReport& report, const std::filesystem::path& metrics_out,
              const std::filesystem::path& hist_out) {
  if (!metrics_out.empty()) write_file_atomic(metrics_out, metrics_csv(report.rows));
  if (!hist_out.empty()) write_file_atomic(hist_out, histogram_csv(report.histograms));
}

}  // namespace cmls
