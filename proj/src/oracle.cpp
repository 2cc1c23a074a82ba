#include "cmls/oracle.hpp"

#include <algorithm>
#include <fstream>
#include <vector>

namespace cmls {

void ExactCountTable::add(const NgramEvent& event) {
  auto [it, inserted] = counts_.try_emplace(event.key, Entry{event.kind, 0});
  ++it->second.count;
  if (event.kind == NgramKind::Unigram) {
    ++total_unigrams_;
  } else {
    ++total_bigrams_;
    if (inserted) ++distinct_bigrams_;
  }
}

std::uint64_t ExactCountTable::count(std::string_view key) const {
  const auto it = counts_.find(key);
  return it == counts_.end() ? 0 : it->second.count;
}

void ExactCountTable::write_csv(const std::filesystem::path& path) const {
  std::vector<const std::pair<const std::string, Entry>*> rows;
  rows.reserve(counts_.size());
  for (const auto& kv : counts_) rows.push_back(&kv);
  std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->first < b->first; });

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "key,kind,count\n";
  for (const auto* row : rows) {
    std::string key = row->first;
    std::replace(key.begin(), key.end(), kBigramSeparator, ' ');
    out << key << ',' << (row->second.kind == NgramKind::Unigram ? "unigram" : "bigram") << ','
        << row->second.count << '\n';
  }
  if (!out) throw std::runtime_error("error writing " + path.string());
}

bool operator==(const ExactCountTable& a, const ExactCountTable& b) {
  if (a.total_unigrams_ != b.total_unigrams_ || a.total_bigrams_ != b.total_bigrams_ ||
      a.counts_.size() != b.counts_.size()) {
    return false;
  }
  for (const auto& [key, entry] : a.counts_) {
    const auto it = b.counts_.find(key);
    if (it == b.counts_.end() || it->second.kind != entry.kind || it->second.count != entry.count) {
      return false;
    }
  }
  return true;
}

ExactCountTable count_exact(std::span<const NgramEvent> events) {
  ExactCountTable table;
  for (const auto& e : events) table.add(e);
  return table;
}

}  // namespace cmls
