#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cmls {

enum class NgramKind : std::uint8_t { Unigram = 0, Bigram = 1 };

/// Separator between the two tokens of a bigram key. Never part of a token.
inline constexpr char kBigramSeparator = '\x1f';

struct NgramEvent {
  NgramKind kind;
  std::string key;

  friend bool operator==(const NgramEvent&, const NgramEvent&) = default;
};

std::string bigram_key(std::string_view left, std::string_view right);

/// Splits a bigram key at its separator. Throws std::invalid_argument if the
/// key does not contain exactly one separator.
std::pair<std::string_view, std::string_view> split_bigram(std::string_view key);

class EncodingError : public std::runtime_error {
 public:
  EncodingError(std::size_t offset, const std::string& what)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Splits UTF-8 text into lowercase tokens.
///
/// Token characters are ASCII letters and digits plus every non-ASCII code
/// point; everything else in ASCII separates tokens. Only ASCII is case-folded.
/// Throws EncodingError with the byte offset of the first malformed sequence.
std::vector<std::string> tokenize(std::string_view text);

/// One unigram per token and one bigram per adjacent pair, interleaved in
/// document order: U(t0), B(t0 t1), U(t1), B(t1 t2), ..., U(tn).
std::vector<NgramEvent> ngram_stream(std::span<const std::string> tokens);

struct ZipfSpec {
  std::uint64_t vocab_size = 1;
  double exponent = 1.0;
  std::uint64_t length = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// `length` i.i.d. ranks drawn with p(r) proportional to r^-s, rendered "w<rank>".
std::vector<std::string> zipf_generate(const ZipfSpec& spec);

/// Tokens of a file, or of every regular file under a directory visited in
/// lexicographic path order. Files are read as-is (mail headers included).
/// Stops after `max_tokens` tokens when nonzero.
std::vector<std::vector<std::string>> read_corpus(const std::filesystem::path& path,
                                                  std::size_t max_tokens = 0);

/// ngram_stream of each document, concatenated. No bigram spans two documents.
std::vector<NgramEvent> corpus_events(std::span<const std::vector<std::string>> documents);

}  // namespace cmls
