// oracle.hpp: naive exact dictionary counting. Definitionally correct and
// deliberately simple; every other algorithm's correctness tests reduce to
// equality with this module. Desk scale only.
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>

#include "intergrams/corpus.hpp"
#include "intergrams/counting.hpp"

namespace intergrams {

using GramCountMap = std::unordered_map<std::string, uint64_t>;

inline constexpr uint64_t kOracleCorpusGuard = 256ull << 20;  // 256 MB

// Exact per-gram counts. Throws ConfigError once the corpus exceeds
// `max_corpus_bytes` (guard against accidental full-scale runs).
GramCountMap naive_count(const Corpus& corpus, size_t n, CountMode mode,
                         uint64_t max_corpus_bytes = kOracleCorpusGuard);

// Canonical top-k of a count map; returns the whole map sorted when
// k >= map size.
TopKList naive_topk(const GramCountMap& map, size_t k);

}  // namespace intergrams
