#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cmls/harness.hpp"
#include "doctest.h"

using namespace cmls;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.source = ZipfSpec{400, 1.1, 6000, 3};
  spec.seed = 99;
  spec.budgets = {512, 2048, 8192};
  return spec;
}

}  // namespace

TEST_CASE("variant presets") {
  CHECK(variant_semantics(Variant::CmsCu) == CounterSemantics::linear(32));
  CHECK(variant_semantics(Variant::Cmls16Cu) == CounterSemantics::logarithmic(1.00025, 16));
  CHECK(variant_semantics(Variant::Cmls8Cu) == CounterSemantics::logarithmic(1.08, 8));
  for (const auto v : kAllVariants) CHECK(parse_variant(variant_label(v)) == v);
  CHECK(parse_variant("cmls8-cu") == Variant::Cmls8Cu);
  CHECK_THROWS_AS(parse_variant("CMS"), std::invalid_argument);
}

TEST_CASE("default budget sweep") {
  const auto b = default_budgets(1600);
  CHECK(b == std::vector<std::uint64_t>{100, 200, 400, 800, 1600, 3200, 6400, 12800, 25600});
  CHECK(default_budgets(4) == std::vector<std::uint64_t>{1, 2, 4, 8, 16, 32, 64});
}

TEST_CASE("collision-free linear sketch is exact") {
  ExperimentSpec spec;
  spec.variants = {Variant::CmsCu};
  spec.seed = 1;
  const auto events = ngram_stream(std::vector<std::string>{"a", "b"});  // a, a.b, b
  const auto perfect = perfect_storage_bytes(3);
  spec.budgets = {10 * perfect};
  const auto report = run_experiment(spec, events);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.perfect_storage_bytes == 12);
  CHECK(report.rows[0].width == 15);
  CHECK(report.rows[0].are == 0.0);
  CHECK(report.rows[0].pmi_rmse == 0.0);
}

TEST_CASE("report shape and determinism") {
  auto spec = small_spec();
  spec.threads = 1;
  const auto a = run_experiment(spec);
  spec.threads = 4;
  const auto b = run_experiment(spec);
  CHECK(metrics_csv(a.rows) == metrics_csv(b.rows));
  CHECK(histogram_csv(a.histograms) == histogram_csv(b.histograms));

  REQUIRE(a.rows.size() == 9);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& r = a.rows[i];
    CHECK(r.variant == variant_label(kAllVariants[i / 3]));
    CHECK(r.storage_bytes <= spec.budgets[i % 3]);
    CHECK(r.depth == 2);
    CHECK(r.perfect_storage_bytes == a.perfect_storage_bytes);
    CHECK(std::isfinite(r.are));
    CHECK(std::isfinite(r.pmi_rmse));
  }
  // largest budget not above perfect storage
  CHECK(a.hist_budget <= a.perfect_storage_bytes);
  REQUIRE(a.histograms.size() == 4);
  CHECK(a.histograms[0].label == "exact");
  CHECK(a.histograms[3].label == "CMLS8-CU");
  for (const auto& h : a.histograms) CHECK(h.counts.size() == kDefaultHistogramBins);

  SUBCASE("linear rows overestimate, so ARE equals the signed mean") {
    const auto events = load_events(spec);
    const auto exact = count_exact(events);
    for (const auto budget : spec.budgets) {
      const auto sk = build_sketch(
          SketchConfig::from_budget(variant_semantics(Variant::CmsCu), 2, budget, sketch_seed(9, Variant::CmsCu, budget)),
          events);
      const auto est = estimator_of(sk);
      CHECK(average_relative_error(exact, est) == doctest::Approx(mean_signed_relative_error(exact, est)).epsilon(1e-12));
    }
  }
}

TEST_CASE("histogram at an off-sweep budget") {
  auto spec = small_spec();
  spec.variants = {Variant::Cmls8Cu};
  spec.hist_budget = 1000;
  spec.hist_bins = 10;
  spec.hist_lo = -2;
  spec.hist_hi = 8;
  const auto r = run_experiment(spec);
  CHECK(r.rows.size() == 3);
  CHECK(r.hist_budget == 1000);
  REQUIRE(r.histograms.size() == 2);
  CHECK(r.histograms[1].bin_edges.front() == -2.0);
  CHECK(r.histograms[1].bin_edges.back() == 8.0);
}

TEST_CASE("errors") {
  auto spec = small_spec();
  spec.budgets = {3};
  CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);

  spec = small_spec();
  spec.source = fs::path("/nonexistent/corpus/dir");
  CHECK_THROWS(run_experiment(spec));

  spec = small_spec();
  spec.source = ZipfSpec{10, 1.0, 1, 1};  // one token, no bigram
  CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);

  CHECK_THROWS_AS(write_file_atomic("/nonexistent/dir/out.csv", "x"), std::runtime_error);
  try {
    write_file_atomic("/nonexistent/dir/out.csv", "x");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/out.csv") != std::string::npos);
  }
}

TEST_CASE("csv output") {
  CHECK(metrics_csv({}) == std::string(kMetricsCsvHeader) + "\n");
  CHECK(parse_metrics_csv(metrics_csv({})).empty());

  const MetricRow row{"CMLS8-CU", 1000, 2, 500, 8, 1.08, 0.123456789012345, 0.1 + 0.2, 3, 4000};
  const auto one = metrics_csv(std::vector<MetricRow>{row});
  CHECK(std::count(one.begin(), one.end(), '\n') == 2);
  CHECK(parse_metrics_csv(one) == std::vector<MetricRow>{row});

  const auto report = run_experiment(small_spec());
  CHECK(parse_metrics_csv(metrics_csv(report.rows)) == report.rows);
  CHECK_THROWS(parse_metrics_csv("bogus\n"));
  CHECK_THROWS(parse_metrics_csv(std::string(kMetricsCsvHeader) + "\nCMS-CU,1,2\n"));

  const fs::path dir = fs::temp_directory_path() / "cmls_harness_test";
  fs::create_directories(dir);
  emit_csv(report, dir / "m.csv", dir / "h.csv");
  CHECK(slurp(dir / "m.csv") == metrics_csv(report.rows));
  const auto hist = slurp(dir / "h.csv");
  CHECK(hist.rfind(std::string(kHistogramCsvHeader) + "\n", 0) == 0);
  // header + (bins + 2 overflow rows) per series
  CHECK(static_cast<std::size_t>(std::count(hist.begin(), hist.end(), '\n')) ==
        1 + report.histograms.size() * (kDefaultHistogramBins + 2));
  CHECK_FALSE(fs::exists(dir / "m.csv.tmp"));
  fs::remove_all(dir);
}
