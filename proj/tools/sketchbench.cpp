// sketchbench: Count-Min / Count-Min-Log accuracy sweeps and sketch snapshots.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cmls/corpus.hpp"
#include "cmls/harness.hpp"
#include "cmls/oracle.hpp"
#include "cmls/sketch.hpp"

namespace {

struct SourceOptions {
  std::string input;
  std::string zipf;  // vocab,s,n[,seed]
  std::size_t max_words = 0;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_field(const std::string& text, const char* what) {
  std::istringstream ss(text);
  T value{};
  ss >> value;
  if (ss.fail() || !ss.eof()) throw std::invalid_argument(std::string("invalid ") + what + ": '" + text + "'");
  return value;
}

void add_source_options(CLI::App* cmd, SourceOptions& src) {
  auto* input = cmd->add_option("--input", src.input, "Text file or directory of text files");
  auto* zipf = cmd->add_option("--zipf", src.zipf, "Synthetic Zipf stream: vocab,s,n[,seed]");
  input->excludes(zipf);
  cmd->add_option("--max-words", src.max_words, "Stop reading the corpus after this many tokens (0 = all)");
}

void apply_source(const SourceOptions& src, std::uint64_t seed, cmls::ExperimentSpec& spec) {
  if (!src.input.empty()) {
    spec.source = std::filesystem::path(src.input);
    spec.max_tokens = src.max_words;
    return;
  }
  if (src.zipf.empty()) throw std::invalid_argument("one of --input or --zipf is required");
  const auto parts = split_list(src.zipf);
  if (parts.size() != 3 && parts.size() != 4) {
    throw std::invalid_argument("--zipf expects vocab,s,n[,seed]");
  }
  cmls::ZipfSpec z;
  z.vocab_size = parse_field<std::uint64_t>(parts[0], "zipf vocab");
  z.exponent = parse_field<double>(parts[1], "zipf exponent");
  z.length = parse_field<std::uint64_t>(parts[2], "zipf length");
  z.seed = parts.size() == 4 ? parse_field<std::uint64_t>(parts[3], "zipf seed") : seed;
  z.validate();
  spec.source = z;
}

int run_command(const SourceOptions& src, std::uint32_t depth, const std::string& budgets,
                const std::string& variants, std::uint64_t seed, const std::string& metrics_out,
                const std::string& hist_out, std::optional<std::uint64_t> hist_budget, unsigned hist_bins,
                const std::string& hist_range, unsigned threads) {
  cmls::ExperimentSpec spec;
  apply_source(src, seed, spec);
  spec.depth = depth;
  spec.seed = seed;
  spec.threads = threads;
  for (const auto& b : split_list(budgets)) spec.budgets.push_back(parse_field<std::uint64_t>(b, "budget"));
  if (!variants.empty()) {
    spec.variants.clear();
    for (const auto& v : split_list(variants)) spec.variants.push_back(cmls::parse_variant(v));
  }
  spec.hist_budget = hist_budget;
  spec.hist_bins = hist_bins;
  if (!hist_range.empty()) {
    const auto r = split_list(hist_range);
    if (r.size() != 2) throw std::invalid_argument("--hist-range expects lo,hi");
    spec.hist_lo = parse_field<double>(r[0], "histogram lo");
    spec.hist_hi = parse_field<double>(r[1], "histogram hi");
  }

  const auto report = cmls::run_experiment(spec);
  cmls::emit_csv(report, metrics_out, hist_out);
  if (metrics_out.empty()) std::cout << cmls::metrics_csv(report.rows);
  std::cerr << "perfect storage: " << report.perfect_storage_bytes << " bytes, " << report.rows.size()
            << " rows\n";
  return 0;
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int snapshot_save(const SourceOptions& src, const std::string& path, const std::string& variant,
                  std::uint64_t budget, std::uint32_t depth, std::uint64_t seed) {
  cmls::ExperimentSpec spec;
  apply_source(src, seed, spec);
  const auto events = cmls::load_events(spec);
  const auto v = cmls::parse_variant(variant);
  const auto cfg = cmls::SketchConfig::from_budget(cmls::variant_semantics(v), depth, budget,
                                                   cmls::sketch_seed(seed, v, budget));
  const auto sk = cmls::build_sketch(cfg, events);
  const auto bytes = sk.serialize();
  cmls::write_file_atomic(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  std::cout << "wrote " << path << " (" << bytes.size() << " bytes, " << sk.update_count() << " updates)\n";
  return 0;
}

int snapshot_load(const std::string& path, const std::vector<std::string>& queries) {
  const auto bytes = read_bytes(path);
  const auto sk = cmls::Sketch::deserialize(bytes);
  const auto& sem = sk.semantics();
  std::cout << "mode=" << (sem.is_linear() ? "linear" : "logarithmic") << " cell_bits=" << sem.cell_bits()
            << " base=" << sem.base() << " depth=" << sk.depth() << " width=" << sk.width()
            << " storage_bytes=" << sk.storage_bytes() << " updates=" << sk.update_count() << '\n';
  for (const auto& q : queries) {
    const auto tokens = cmls::tokenize(q);
    std::string key;
    if (tokens.size() == 1) {
      key = tokens[0];
    } else if (tokens.size() == 2) {
      key = cmls::bigram_key(tokens[0], tokens[1]);
    } else {
      throw std::invalid_argument("query '" + q + "' must be one or two tokens");
    }
    std::cout << q << '\t' << sk.query(key) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Count-Min / Count-Min-Log sketch benchmark"};
  app.require_subcommand(1);

  SourceOptions run_src;
  std::uint32_t depth = 2;
  std::string budgets, variants, metrics_out, hist_out, hist_range;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> hist_budget;
  unsigned hist_bins = cmls::kDefaultHistogramBins;
  unsigned threads = 0;

  auto* run = app.add_subcommand("run", "Sweep sketch variants over storage budgets");
  add_source_options(run, run_src);
  run->add_option("--depth", depth, "Rows per sketch")->capture_default_str();
  run->add_option("--budgets", budgets, "Comma-separated storage budgets in bytes (default: perfect/16..perfect*16)");
  run->add_option("--variants", variants, "Comma-separated subset of CMS-CU,CMLS16-CU,CMLS8-CU");
  run->add_option("--seed", seed, "Master seed")->capture_default_str();
  run->add_option("--metrics-out", metrics_out, "Metrics CSV path (stdout when omitted)");
  run->add_option("--hist-out", hist_out, "Histogram CSV path");
  run->add_option("--hist-budget", hist_budget, "Budget at which PMI histograms are taken");
  run->add_option("--hist-bins", hist_bins, "Histogram bin count")->capture_default_str();
  run->add_option("--hist-range", hist_range, "Histogram range lo,hi (default -5,15)");
  run->add_option("--threads", threads, "Worker threads (0 = hardware)")->capture_default_str();

  SourceOptions snap_src;
  std::string save_path, load_path, snap_variant = "CMLS8-CU";
  std::uint64_t snap_budget = 0, snap_seed = 0;
  std::uint32_t snap_depth = 2;
  std::vector<std::string> queries;
  auto* snap = app.add_subcommand("snapshot", "Save or inspect a binary sketch snapshot");
  auto* save_opt = snap->add_option("--save", save_path, "Build a sketch from the source and write it here");
  auto* load_opt = snap->add_option("--load", load_path, "Read a snapshot and print its header");
  save_opt->excludes(load_opt);
  add_source_options(snap, snap_src);
  snap->add_option("--variant", snap_variant, "Sketch variant")->capture_default_str();
  snap->add_option("--budget", snap_budget, "Storage budget in bytes");
  snap->add_option("--depth", snap_depth, "Rows")->capture_default_str();
  snap->add_option("--seed", snap_seed, "Master seed")->capture_default_str();
  snap->add_option("--query", queries, "Element to estimate after --load; repeatable; a quoted pair like \"a b\" queries that bigram");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) {
      return run_command(run_src, depth, budgets, variants, seed, metrics_out, hist_out, hist_budget, hist_bins,
                         hist_range, threads);
    }
    if (!save_path.empty()) {
      if (snap_budget == 0) throw std::invalid_argument("--save requires --budget");
      return snapshot_save(snap_src, save_path, snap_variant, snap_budget, snap_depth, snap_seed);
    }
    if (!load_path.empty()) return snapshot_load(load_path, queries);
    throw std::invalid_argument("snapshot needs --save or --load");
  } catch (const std::exception& e) {
    std::cerr << "sketchbench: " << e.what() << '\n';
    return 1;
  }
}
