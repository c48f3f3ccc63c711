// counting.hpp: the shared counting substrate - per-sequence seen-bitsets,
// dense count tables, batched sequential flushes, and canonical top-k.
#pragma once

#include <atomic>
#include <cassert>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "intergrams/common.hpp"

namespace intergrams {

// ONCE: a gram contributes at most 1 per sequence containing it.
// ALL: every occurrence contributes.
enum class CountMode { kOnce, kAll };

// How worker results reach the global table.
//   kBatchedFlush: workers hand filled bitsets to one merger that flushes
//                  batches sequentially under exclusive table access.
//   kAtomic:       per-counter atomic additions.
enum class MergeStrategy { kBatchedFlush, kAtomic };

struct GramCount {
  std::string gram;
  uint64_t count = 0;

  bool operator==(const GramCount&) const = default;
};

// Ranked (gram, count) list. Canonical total order everywhere: count
// descending, then gram bytes ascending.
using TopKList = std::vector<GramCount>;

inline bool canonical_less(const GramCount& a, const GramCount& b) {
  if (a.count != b.count) return a.count > b.count;
  return a.gram < b.gram;
}

inline void canonical_sort(TopKList& list) {
  std::sort(list.begin(), list.end(), canonical_less);
}

// Per-sequence dedup bit vector over the current pass's candidate space.
class SeenBitset {
 public:
  explicit SeenBitset(size_t capacity)
      : capacity_(capacity), words_((capacity + 63) / 64, 0) {}

  size_t capacity() const { return capacity_; }

  void mark(size_t id) {
    assert(id < capacity_);
    words_[id >> 6] |= (uint64_t{1} << (id & 63));
  }

  bool test(size_t id) const {
    assert(id < capacity_);
    return (words_[id >> 6] >> (id & 63)) & 1;
  }

  uint64_t popcount() const;
  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  std::span<const uint64_t> words() const { return words_; }
  std::span<uint64_t> words() { return words_; }

 private:
  size_t capacity_;
  std::vector<uint64_t> words_;
};

// Dense array of 64-bit counters indexed by candidate id.
class CountTable {
 public:
  explicit CountTable(size_t capacity) : counts_(capacity, 0) {}

  size_t capacity() const { return counts_.size(); }
  uint64_t operator[](size_t id) const { return counts_[id]; }

  void increment_all(size_t id, uint64_t times) {
    assert(id < counts_.size());
    counts_[id] += times;
  }

  void atomic_add(size_t id, uint64_t v) {
    assert(id < counts_.size());
    std::atomic_ref<uint64_t>(counts_[id]).fetch_add(v, std::memory_order_relaxed);
  }

  void reset() { std::fill(counts_.begin(), counts_.end(), 0); }

  uint64_t total() const;
  size_t nonzero() const;

  std::span<const uint64_t> raw() const { return counts_; }

 private:
  std::vector<uint64_t> counts_;
};

// Adds every batch bitset's bits into the table, traversing the candidate
// space sequentially by id, then clears the bitsets. All bitsets must match
// the table capacity.
void flush_batch(std::span<SeenBitset* const> batch, CountTable& table);

// Canonical top-k of the nonzero table entries. `id_to_gram` materializes the
// gram bytes for a candidate id and must be injective over the candidate
// space. Returns fewer than k entries when fewer candidates are nonzero.
TopKList top_k(const CountTable& table, size_t k,
               const std::function<std::string(size_t)>& id_to_gram);

}  // namespace intergrams
