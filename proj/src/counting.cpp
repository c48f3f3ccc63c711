#include "intergrams/counting.hpp"

#include <algorithm>
#include <bit>
#include <queue>

namespace intergrams {

uint64_t SeenBitset::popcount() const {
  uint64_t total = 0;
  for (uint64_t w : words_) total += static_cast<uint64_t>(std::popcount(w));
  return total;
}

uint64_t CountTable::total() const {
  uint64_t sum = 0;
  for (uint64_t c : counts_) sum += c;
  return sum;
}

size_t CountTable::nonzero() const {
  size_t n = 0;
  for (uint64_t c : counts_) n += (c != 0);
  return n;
}

void flush_batch(std::span<SeenBitset* const> batch, CountTable& table) {
  if (batch.empty()) return;
  const size_t words = (table.capacity() + 63) / 64;
  for (SeenBitset* bits : batch) {
    if (bits->capacity() != table.capacity()) {
      throw std::logic_error("flush_batch: bitset/table capacity mismatch");
    }
  }
  // Word-index-major traversal keeps the table walk sequential while the
  // whole batch shares the hot counter lines.
  uint64_t* counts = const_cast<uint64_t*>(table.raw().data());
  for (size_t w = 0; w < words; ++w) {
    const size_t base = w * 64;
    for (SeenBitset* bits : batch) {
      uint64_t word = bits->words()[w];
      while (word != 0) {
        const int bit = std::countr_zero(word);
        counts[base + static_cast<size_t>(bit)] += 1;
        word &= word - 1;
      }
    }
  }
  for (SeenBitset* bits : batch) bits->clear();
}

TopKList top_k(const CountTable& table, size_t k,
               const std::function<std::string(size_t)>& id_to_gram) {
  if (k < 1) throw ConfigError("top_k requires k >= 1");

  // Min-heap of the k best so far; top() is the worst kept entry. Gram bytes
  // only get materialized when an id survives the count comparison, so the
  // scan stays cheap over large candidate spaces.
  struct Entry {
    uint64_t count;
    std::string gram;
  };
  const auto worse = [](const Entry& a, const Entry& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.gram < b.gram;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);

  const auto counts = table.raw();
  for (size_t id = 0; id < counts.size(); ++id) {
    const uint64_t count = counts[id];
    if (count == 0) continue;
    if (heap.size() < k) {
      heap.push(Entry{count, id_to_gram(id)});
      continue;
    }
    const Entry& worst = heap.top();
    if (count < worst.count) continue;
    if (count == worst.count) {
      std::string gram = id_to_gram(id);
      if (!(gram < worst.gram)) continue;
      heap.pop();
      heap.push(Entry{count, std::move(gram)});
    } else {
      heap.pop();
      heap.push(Entry{count, id_to_gram(id)});
    }
  }

  TopKList out;
  out.resize(heap.size());
  for (size_t i = heap.size(); i-- > 0;) {
    out[i] = GramCount{std::move(const_cast<Entry&>(heap.top()).gram),
                       heap.top().count};
    heap.pop();
  }
  return out;
}

}  // namespace intergrams
