#include "intergrams/oracle.hpp"

#include <unordered_set>

namespace intergrams {

GramCountMap naive_count(const Corpus& corpus, size_t n, CountMode mode,
                         uint64_t max_corpus_bytes) {
  if (n < 1) throw ConfigError("gram length must be >= 1");
  GramCountMap map;
  uint64_t bytes_seen = 0;
  corpus.for_each([&](const Sequence& seq) {
    bytes_seen += seq.bytes.size();
    if (bytes_seen > max_corpus_bytes) {
      throw ConfigError("oracle corpus size guard exceeded (" +
                        std::to_string(max_corpus_bytes) + " bytes)");
    }
    if (seq.bytes.size() < n) return;
    if (mode == CountMode::kAll) {
      for (size_t i = 0; i + n <= seq.bytes.size(); ++i) {
        map[seq.bytes.substr(i, n)] += 1;
      }
    } else {
      std::unordered_set<std::string_view> seen;
      const std::string_view bytes(seq.bytes);
      for (size_t i = 0; i + n <= bytes.size(); ++i) {
        seen.insert(bytes.substr(i, n));
      }
      for (const auto& gram : seen) {
        map[std::string(gram)] += 1;
      }
    }
  });
  return map;
}

TopKList naive_topk(const GramCountMap& map, size_t k) {
  if (k < 1) throw ConfigError("top-k requires k >= 1");
  TopKList list;
  list.reserve(map.size());
  for (const auto& [gram, count] : map) {
    list.push_back(GramCount{gram, count});
  }
  canonical_sort(list);
  if (list.size() > k) list.resize(k);
  return list;
}

}  // namespace intergrams
