#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cmls/corpus.hpp"
#include "cmls/counter_cell.hpp"
#include "cmls/harness.hpp"
#include "cmls/metrics.hpp"
#include "cmls/oracle.hpp"
#include "cmls/sketch.hpp"

namespace py = pybind11;
using namespace cmls;

namespace {

py::bytes to_bytes(const std::vector<std::uint8_t>& v) {
  return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

Sketch from_bytes(const py::bytes& b) {
  const std::string_view view = b;
  return Sketch::deserialize(
      std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(view.data()), view.size()));
}

std::vector<NgramEvent> events_from_tokens(const std::vector<std::string>& tokens) { return ngram_stream(tokens); }

ExperimentReport run(std::optional<std::string> input, std::optional<std::tuple<std::uint64_t, double, std::uint64_t>> zipf,
                     std::uint32_t depth, std::vector<std::uint64_t> budgets, std::vector<std::string> variants,
                     std::uint64_t seed, std::optional<std::uint64_t> hist_budget, unsigned hist_bins,
                     std::pair<double, double> hist_range, unsigned threads, std::size_t max_words) {
  ExperimentSpec spec;
  if (input && zipf) throw std::invalid_argument("pass either input or zipf, not both");
  if (input) {
    spec.source = std::filesystem::path(*input);
  } else if (zipf) {
    spec.source = ZipfSpec{std::get<0>(*zipf), std::get<1>(*zipf), std::get<2>(*zipf), seed};
  } else {
    throw std::invalid_argument("one of input or zipf is required");
  }
  spec.max_tokens = max_words;
  spec.depth = depth;
  spec.budgets = std::move(budgets);
  if (!variants.empty()) {
    spec.variants.clear();
    for (const auto& v : variants) spec.variants.push_back(parse_variant(v));
  }
  spec.seed = seed;
  spec.hist_budget = hist_budget;
  spec.hist_bins = hist_bins;
  spec.hist_lo = hist_range.first;
  spec.hist_hi = hist_range.second;
  spec.threads = threads;
  py::gil_scoped_release release;
  return run_experiment(spec);
}

}  // namespace

PYBIND11_MODULE(_cmls, m) {
  m.doc() = "Count-Min / Count-Min-Log sketches";

  static py::exception<DecodeError> decode_error(m, "DecodeError", PyExc_ValueError);
  static py::exception<EncodingError> encoding_error(m, "EncodingError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DecodeError& e) {
      decode_error(e.what());
    } catch (const EncodingError& e) {
      encoding_error(e.what());
    }
  });

  py::enum_<CounterMode>(m, "CounterMode")
      .value("Linear", CounterMode::Linear)
      .value("Logarithmic", CounterMode::Logarithmic);

  py::class_<CounterSemantics>(m, "CounterSemantics")
      .def(py::init<CounterMode, double, unsigned>(), py::arg("mode"), py::arg("base"), py::arg("cell_bits"))
      .def_static("linear", &CounterSemantics::linear, py::arg("cell_bits") = 32)
      .def_static("logarithmic", &CounterSemantics::logarithmic, py::arg("base"), py::arg("cell_bits"))
      .def_property_readonly("mode", &CounterSemantics::mode)
      .def_property_readonly("base", &CounterSemantics::base)
      .def_property_readonly("cell_bits", &CounterSemantics::cell_bits)
      .def_property_readonly("max_cell", &CounterSemantics::max_cell)
      .def(py::self == py::self);

  m.def("point_value", &point_value, py::arg("c"), py::arg("semantics"));
  m.def("cell_value", &cell_value, py::arg("c"), py::arg("semantics"));

  py::class_<SketchConfig>(m, "SketchConfig")
      .def(py::init([](const CounterSemantics& sem, std::uint32_t depth, std::uint64_t width, std::uint64_t seed) {
             SketchConfig c{sem, depth, width, seed};
             c.validate();
             return c;
           }),
           py::arg("semantics"), py::arg("depth"), py::arg("width"), py::arg("seed") = 0)
      .def_static("from_budget", &SketchConfig::from_budget, py::arg("semantics"), py::arg("depth"),
                  py::arg("budget_bytes"), py::arg("seed") = 0)
      .def_readonly("semantics", &SketchConfig::semantics)
      .def_readonly("depth", &SketchConfig::depth)
      .def_readonly("width", &SketchConfig::width)
      .def_readonly("seed", &SketchConfig::seed)
      .def_property_readonly("storage_bytes", &SketchConfig::storage_bytes);

  py::class_<Sketch>(m, "Sketch")
      .def(py::init<const SketchConfig&>(), py::arg("config"))
      .def_property_readonly("config", &Sketch::config)
      .def_property_readonly("depth", &Sketch::depth)
      .def_property_readonly("width", &Sketch::width)
      .def_property_readonly("storage_bytes", &Sketch::storage_bytes)
      .def_property_readonly("update_count", &Sketch::update_count)
      .def("update", [](Sketch& s, const std::string& e) { s.update(e); }, py::arg("element"))
      .def(
          "update_many",
          [](Sketch& s, const std::vector<std::string>& elements) {
            for (const auto& e : elements) s.update(e);
          },
          py::arg("elements"))
      .def("query", [](const Sketch& s, const std::string& e) { return s.query(e); }, py::arg("element"))
      .def("min_level", [](const Sketch& s, const std::string& e) { return s.min_level(e); }, py::arg("element"))
      .def("row_index", [](const Sketch& s, const std::string& e, std::uint32_t row) { return s.row_index(e, row); },
           py::arg("element"), py::arg("row"))
      .def("cell", &Sketch::cell, py::arg("row"), py::arg("column"))
      .def("serialize", [](const Sketch& s) { return to_bytes(s.serialize()); })
      .def_static("deserialize", &from_bytes, py::arg("data"))
      .def(py::self == py::self)
      .def(py::pickle([](const Sketch& s) { return to_bytes(s.serialize()); }, &from_bytes));

  py::enum_<NgramKind>(m, "NgramKind").value("Unigram", NgramKind::Unigram).value("Bigram", NgramKind::Bigram);

  py::class_<NgramEvent>(m, "NgramEvent")
      .def_readonly("kind", &NgramEvent::kind)
      .def_readonly("key", &NgramEvent::key)
      .def("__repr__", [](const NgramEvent& e) {
        return std::string(e.kind == NgramKind::Unigram ? "U(" : "B(") + e.key + ")";
      });

  m.def("tokenize", [](const std::string& text) { return tokenize(text); }, py::arg("text"));
  m.def("ngram_stream", &events_from_tokens, py::arg("tokens"));
  m.def("bigram_key", [](const std::string& a, const std::string& b) { return bigram_key(a, b); });
  m.def(
      "zipf_generate",
      [](std::uint64_t vocab, double s, std::uint64_t n, std::uint64_t seed) {
        return zipf_generate({vocab, s, n, seed});
      },
      py::arg("vocab_size"), py::arg("exponent"), py::arg("length"), py::arg("seed") = 0);

  py::class_<ExactCountTable>(m, "ExactCountTable")
      .def("count", [](const ExactCountTable& t, const std::string& k) { return t.count(k); }, py::arg("key"))
      .def_property_readonly("total_unigrams", &ExactCountTable::total_unigrams)
      .def_property_readonly("total_bigrams", &ExactCountTable::total_bigrams)
      .def_property_readonly("distinct", &ExactCountTable::distinct)
      .def_property_readonly("distinct_bigrams", &ExactCountTable::distinct_bigrams)
      .def("to_dict", [](const ExactCountTable& t) {
        py::dict d;
        for (const auto& [k, e] : t.entries()) d[py::str(k)] = e.count;
        return d;
      });

  m.def("count_exact", [](const std::vector<NgramEvent>& ev) { return count_exact(ev); }, py::arg("events"));
  m.def("perfect_storage_bytes", &perfect_storage_bytes, py::arg("distinct"));

  m.def("average_relative_error", py::overload_cast<const ExactCountTable&, const Estimator&>(&average_relative_error),
        py::arg("exact"), py::arg("estimate_of"));
  m.def(
      "average_relative_error",
      [](const ExactCountTable& t, const Sketch& s) { return average_relative_error(t, estimator_of(s)); },
      py::arg("exact"), py::arg("sketch"));
  m.def("pmi", &pmi, py::arg("bigram_count"), py::arg("left_count"), py::arg("right_count"),
        py::arg("total_bigrams"), py::arg("total_unigrams"));
  m.def(
      "pmi_rmse",
      [](const ExactCountTable& t, const Sketch& s) {
        const auto r = pmi_rmse(t, s);
        return py::make_tuple(r.rmse, r.evaluated, r.skipped);
      },
      py::arg("exact"), py::arg("sketch"), "Returns (rmse, evaluated_pairs, skipped_pairs).");
  m.def(
      "pmi_rmse",
      [](const ExactCountTable& t, const Estimator& f) {
        const auto r = pmi_rmse(t, f);
        return py::make_tuple(r.rmse, r.evaluated, r.skipped);
      },
      py::arg("exact"), py::arg("estimate_of"));

  py::class_<PmiHistogram>(m, "PmiHistogram")
      .def_readonly("label", &PmiHistogram::label)
      .def_readonly("bin_edges", &PmiHistogram::bin_edges)
      .def_readonly("counts", &PmiHistogram::counts)
      .def_readonly("underflow", &PmiHistogram::underflow)
      .def_readonly("overflow", &PmiHistogram::overflow);
  m.def(
      "pmi_histogram",
      [](const std::vector<double>& v, unsigned bins, double lo, double hi, std::string label) {
        return pmi_histogram(v, bins, lo, hi, std::move(label));
      },
      py::arg("values"), py::arg("bin_count") = kDefaultHistogramBins, py::arg("lo") = kDefaultHistogramLo,
      py::arg("hi") = kDefaultHistogramHi, py::arg("label") = "");

  py::class_<MetricRow>(m, "MetricRow")
      .def_readonly("variant", &MetricRow::variant)
      .def_readonly("storage_bytes", &MetricRow::storage_bytes)
      .def_readonly("depth", &MetricRow::depth)
      .def_readonly("width", &MetricRow::width)
      .def_readonly("cell_bits", &MetricRow::cell_bits)
      .def_readonly("base", &MetricRow::base)
      .def_readonly("are", &MetricRow::are)
      .def_readonly("pmi_rmse", &MetricRow::pmi_rmse)
      .def_readonly("pmi_skipped_pairs", &MetricRow::pmi_skipped_pairs)
      .def_readonly("perfect_storage_bytes", &MetricRow::perfect_storage_bytes)
      .def(py::self == py::self);

  py::class_<ExperimentReport>(m, "ExperimentReport")
      .def_readonly("rows", &ExperimentReport::rows)
      .def_readonly("perfect_storage_bytes", &ExperimentReport::perfect_storage_bytes)
      .def_readonly("hist_budget", &ExperimentReport::hist_budget)
      .def_readonly("histograms", &ExperimentReport::histograms);

  m.def("variant_semantics", [](const std::string& label) { return variant_semantics(parse_variant(label)); },
        py::arg("variant"));
  m.def("default_budgets", &default_budgets, py::arg("perfect_bytes"));
  m.def("run_experiment", &run, py::kw_only(), py::arg("input") = py::none(), py::arg("zipf") = py::none(),
        py::arg("depth") = 2, py::arg("budgets") = std::vector<std::uint64_t>{},
        py::arg("variants") = std::vector<std::string>{}, py::arg("seed") = 0, py::arg("hist_budget") = py::none(),
        py::arg("hist_bins") = kDefaultHistogramBins,
        py::arg("hist_range") = std::make_pair(kDefaultHistogramLo, kDefaultHistogramHi), py::arg("threads") = 0,
        py::arg("max_words") = 0);
  m.def("metrics_csv", [](const ExperimentReport& r) { return metrics_csv(r.rows); }, py::arg("report"));
  m.def("histogram_csv", [](const ExperimentReport& r) { return histogram_csv(r.histograms); }, py::arg("report"));
  m.def("parse_metrics_csv", [](const std::string& csv) { return parse_metrics_csv(csv); }, py::arg("csv"));
}
