// hashgram.hpp: the two-pass hash-gramming baseline. Pass 1 counts n-gram
// hashes into B buckets (dedup per sequence in ONCE mode); the top-k buckets
// are kept; pass 2 exactly counts only n-grams hashing into those buckets.
// The second pass can use either a general-purpose map or a counting byte
// trie; both produce identical results.
#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "intergrams/corpus.hpp"
#include "intergrams/counting.hpp"
#include "intergrams/intergrams.hpp"
#include "intergrams/pipeline.hpp"

namespace intergrams {

struct HashgramConfig {
  uint64_t buckets = uint64_t{1} << 31;  // B
  size_t n = 6;
  size_t k = 10000;
  CountMode mode = CountMode::kOnce;
  uint64_t seed = 0;
  MergeStrategy merge = MergeStrategy::kBatchedFlush;
  size_t workers = 1;
  size_t flush_batch_size = 8;
  bool trie_second_pass = false;  // counting-trie dictionary instead of a map

  void validate() const;
};

// Seeded 64-bit avalanche mix of the gram bytes (MurmurHash2 64A), reduced
// mod `buckets`. Deterministic for a fixed seed.
uint64_t mix64(std::string_view bytes, uint64_t seed);

inline uint64_t hash_ngram(std::string_view gram, uint64_t seed,
                           uint64_t buckets) {
  return mix64(gram, seed) % buckets;
}

// Membership test for "h(x) in H": dense bitset when B fits 2^32 bits,
// otherwise binary search over the sorted bucket ids.
class BucketSet {
 public:
  BucketSet(const std::vector<uint64_t>& buckets_kept, uint64_t bucket_count);

  bool contains(uint64_t bucket) const {
    if (!bits_.empty()) {
      return (bits_[bucket >> 6] >> (bucket & 63)) & 1;
    }
    return std::binary_search(sorted_.begin(), sorted_.end(), bucket);
  }

 private:
  std::vector<uint64_t> bits_;
  std::vector<uint64_t> sorted_;
};

struct BucketCount {
  uint64_t bucket = 0;
  uint64_t count = 0;
};

// Top-k buckets by count descending, bucket id ascending.
std::vector<BucketCount> topk_buckets(const CountTable& table, size_t k);

struct HashgramResult {
  TopKList topk;
  std::vector<PassResult> passes;
};

HashgramResult run_hashgram(const Corpus& corpus, const HashgramConfig& cfg);

}  // namespace intergrams
