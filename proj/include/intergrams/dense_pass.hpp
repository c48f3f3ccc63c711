// dense_pass.hpp: exact dense counting of every possible n-gram for
// n <= 3 (capacity 256^n). The 3-gram instance is the first pass of the
// multi-pass algorithm; the per-sequence bitset spans all 16,777,216
// candidates and the global table is flushed sequentially.
#pragma once

#include <string>

#include "intergrams/corpus.hpp"
#include "intergrams/counting.hpp"
#include "intergrams/pipeline.hpp"

namespace intergrams {

inline constexpr size_t kMaxDenseGramLen = 3;

// 256^n candidate ids; id = b0*256^(n-1) + ... + b_{n-1}, bijective with
// byte n-tuples and ordered like the gram bytes.
size_t dense_capacity(size_t n);
std::string dense_gram(size_t id, size_t n);

// Exact counts over the full 256^n space. n must be in [1, 3].
CountTable count_dense(const Corpus& corpus, size_t n,
                       const CountingOptions& opt);

// Canonical top-k of a dense table.
TopKList topk_dense(const CountTable& table, size_t n, size_t k);

// The 3-gram specializations used as the first multi-pass stage.
inline CountTable count_trigrams(const Corpus& corpus,
                                 const CountingOptions& opt) {
  return count_dense(corpus, 3, opt);
}
inline TopKList topk_trigrams(const CountTable& table, size_t k_prime) {
  return topk_dense(table, 3, k_prime);
}

}  // namespace intergrams
