#include "cmls/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cmls/random.hpp"

namespace cmls {

namespace {

// Length of the well-formed UTF-8 sequence starting at text[i], or 0.
std::size_t utf8_sequence_length(std::string_view text, std::size_t i) {
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
  const unsigned char lead = byte(i);
  std::size_t len = 0;
  unsigned char lo = 0x80, hi = 0xbf;  // bounds on the second byte
  if (lead < 0x80) return 1;
  if (lead >= 0xc2 && lead <= 0xdf) {
    len = 2;
  } else if (lead >= 0xe0 && lead <= 0xef) {
    len = 3;
    if (lead == 0xe0) lo = 0xa0;  // overlong
    if (lead == 0xed) hi = 0x9f;  // surrogates
  } else if (lead >= 0xf0 && lead <= 0xf4) {
    len = 4;
    if (lead == 0xf0) lo = 0x90;  // overlong
    if (lead == 0xf4) hi = 0x8f;  // > U+10FFFF
  } else {
    return 0;
  }
  if (i + len > text.size()) return 0;
  if (byte(i + 1) < lo || byte(i + 1) > hi) return 0;
  for (std::size_t k = 2; k < len; ++k) {
    if ((byte(i + k) & 0xc0) != 0x80) return 0;
  }
  return len;
}

bool is_ascii_alnum(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw std::runtime_error("error reading " + path.string());
  return std::move(ss).str();
}

}  // namespace

std::string bigram_key(std::string_view left, std::string_view right) {
  std::string key;
  key.reserve(left.size() + right.size() + 1);
  key.append(left);
  key.push_back(kBigramSeparator);
  key.append(right);
  return key;
}

std::pair<std::string_view, std::string_view> split_bigram(std::string_view key) {
  const auto pos = key.find(kBigramSeparator);
  if (pos == std::string_view::npos || key.find(kBigramSeparator, pos + 1) != std::string_view::npos) {
    throw std::invalid_argument("not a bigram key");
  }
  return {key.substr(0, pos), key.substr(pos + 1)};
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t len = utf8_sequence_length(text, i);
    if (len == 0) {
      throw EncodingError(i, "invalid UTF-8 at byte offset " + std::to_string(i));
    }
    const auto c = static_cast<unsigned char>(text[i]);
    if (len > 1) {
      current.append(text.substr(i, len));
    } else if (is_ascii_alnum(c)) {
      current.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
    i += len;
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<NgramEvent> ngram_stream(std::span<const std::string> tokens) {
  std::vector<NgramEvent> events;
  if (tokens.empty()) return events;
  events.reserve(2 * tokens.size() - 1);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) events.push_back({NgramKind::Bigram, bigram_key(tokens[i - 1], tokens[i])});
    events.push_back({NgramKind::Unigram, tokens[i]});
  }
  return events;
}

void ZipfSpec::validate() const {
  if (vocab_size < 1) throw std::invalid_argument("zipf vocab_size must be >= 1");
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    throw std::invalid_argument("zipf exponent must be finite and > 0");
  }
}

std::vector<std::string> zipf_generate(const ZipfSpec& spec) {
  spec.validate();
  std::vector<double> cdf(spec.vocab_size);
  double total = 0.0;
  for (std::uint64_t r = 0; r < spec.vocab_size; ++r) {
    total += std::pow(static_cast<double>(r + 1), -spec.exponent);
    cdf[r] = total;
  }
  for (auto& v : cdf) v /= total;
  cdf.back() = 1.0;

  Xoroshiro128pp rng(spec.seed);
  std::vector<std::string> tokens;
  tokens.reserve(spec.length);
  for (std::uint64_t i = 0; i < spec.length; ++i) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto rank = static_cast<std::uint64_t>(std::distance(cdf.begin(), it)) + 1;
    tokens.push_back("w" + std::to_string(rank));
  }
  return tokens;
}

std::vector<std::vector<std::string>> read_corpus(const std::filesystem::path& path,
                                                  std::size_t max_tokens) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    for (fs::recursive_directory_iterator it(path, ec), end; !ec && it != end; it.increment(ec)) {
      if (it->is_regular_file()) files.push_back(it->path());
    }
    if (ec) throw std::runtime_error("cannot list " + path.string() + ": " + ec.message());
    std::sort(files.begin(), files.end());
  } else if (fs::is_regular_file(path, ec)) {
    files.push_back(path);
  } else {
    throw std::runtime_error("input not found: " + path.string());
  }

  std::vector<std::vector<std::string>> documents;
  std::size_t seen = 0;
  for (const auto& file : files) {
    std::vector<std::string> tokens;
    try {
      tokens = tokenize(read_file(file));
    } catch (const EncodingError& e) {
      throw EncodingError(e.offset(), file.string() + ": " + e.what());
    }
    if (max_tokens != 0 && seen + tokens.size() > max_tokens) tokens.resize(max_tokens - seen);
    seen += tokens.size();
    documents.push_back(std::move(tokens));
    if (max_tokens != 0 && seen >= max_tokens) break;
  }
  return documents;
}

std::vector<NgramEvent> corpus_events(std::span<const std::vector<std::string>> documents) {
  std::vector<NgramEvent> events;
  for (const auto& doc : documents) {
    auto part = ngram_stream(doc);
    std::move(part.begin(), part.end(), std::back_inserter(events));
  }
  return events;
}

}  // namespace cmls
