// intergrams.hpp: the multi-pass driver. A dense 3-gram pass seeds the
// candidate prefixes; each later pass j counts only j-grams whose
// (j-1)-byte prefix survived the previous top-k' cut, over a candidate
// space of 256 * k'.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "intergrams/corpus.hpp"
#include "intergrams/counting.hpp"
#include "intergrams/pipeline.hpp"
#include "intergrams/trie.hpp"

namespace intergrams {

struct IntergramConfig {
  size_t n = 6;
  size_t k = 10000;
  double z = 1.5;  // oversample factor; k' = ceil(z*k) candidates kept
  CountMode mode = CountMode::kOnce;
  MergeStrategy merge = MergeStrategy::kBatchedFlush;
  size_t workers = 1;
  size_t flush_batch_size = 8;
  bool frequency_ordered_trie = true;

  size_t k_prime() const {
    return static_cast<size_t>(std::ceil(z * static_cast<double>(k)));
  }
  void validate() const;
};

struct PassResult {
  std::string label;
  size_t gram_len = 0;
  double seconds = 0.0;
  uint64_t bytes_processed = 0;  // 0 for selection/trie-build steps
  size_t candidate_space = 0;
  size_t retained = 0;
  bool retained_short = false;  // fewer nonzero candidates than requested

  double throughput_bps() const {
    return seconds > 0.0 ? static_cast<double>(bytes_processed) / seconds : 0.0;
  }
};

struct IntergramsResult {
  TopKList topk;
  std::vector<PassResult> passes;
  std::vector<std::string> diagnostics;
};

// Index into the 256*k' candidate space of an extension pass.
inline size_t candidate_id(size_t prefix_ordinal, unsigned last_byte) {
  assert(last_byte <= 255);
  return prefix_ordinal * 256 + last_byte;
}

// Gram bytes for an extension-pass candidate id.
inline std::string candidate_gram(const TopKList& prefixes, size_t id) {
  std::string gram = prefixes[id >> 8].gram;
  gram.push_back(static_cast<char>(id & 0xff));
  return gram;
}

// Counts j-grams whose (j-1)-prefix is in the trie; trie.depth() must equal
// j-1. The table spans 256 * trie.size() candidate ids.
CountTable extend_pass(const Corpus& corpus, const PrefixTrie& trie, size_t j,
                       const CountingOptions& opt,
                       uint64_t* bytes_processed = nullptr);

IntergramsResult run_intergrams(const Corpus& corpus,
                                const IntergramConfig& cfg);

}  // namespace intergrams
