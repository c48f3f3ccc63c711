#include "intergrams/hashgram.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstring>
#include <mutex>
#include <queue>
#include <unordered_map>

#include "intergrams/oracle.hpp"

namespace intergrams {

void HashgramConfig::validate() const {
  if (buckets < 1) throw ConfigError("bucket count B must be >= 1");
  if (n < 1) throw ConfigError("gram length n must be >= 1");
  if (k < 1) throw ConfigError("k must be >= 1");
}

uint64_t mix64(std::string_view bytes, uint64_t seed) {
  constexpr uint64_t m = 0xc6a4a7935bd1e995ull;
  constexpr int r = 47;
  uint64_t h = seed ^ (bytes.size() * m);

  const unsigned char* data =
      reinterpret_cast<const unsigned char*>(bytes.data());
  size_t len = bytes.size();
  while (len >= 8) {
    uint64_t k = static_cast<uint64_t>(data[0]) |
                 (static_cast<uint64_t>(data[1]) << 8) |
                 (static_cast<uint64_t>(data[2]) << 16) |
                 (static_cast<uint64_t>(data[3]) << 24) |
                 (static_cast<uint64_t>(data[4]) << 32) |
                 (static_cast<uint64_t>(data[5]) << 40) |
                 (static_cast<uint64_t>(data[6]) << 48) |
                 (static_cast<uint64_t>(data[7]) << 56);
    k *= m;
    k ^= k >> r;
    k *= m;
    h ^= k;
    h *= m;
    data += 8;
    len -= 8;
  }
  uint64_t tail = 0;
  for (size_t i = len; i-- > 0;) {
    tail = (tail << 8) | data[i];
  }
  if (len > 0) {
    h ^= tail;
    h *= m;
  }
  h ^= h >> r;
  h *= m;
  h ^= h >> r;
  return h;
}

BucketSet::BucketSet(const std::vector<uint64_t>& buckets_kept,
                     uint64_t bucket_count) {
  if (bucket_count <= (uint64_t{1} << 32)) {
    bits_.assign((bucket_count + 63) / 64, 0);
    for (uint64_t b : buckets_kept) {
      bits_[b >> 6] |= uint64_t{1} << (b & 63);
    }
  } else {
    sorted_ = buckets_kept;
    std::sort(sorted_.begin(), sorted_.end());
  }
}

std::vector<BucketCount> topk_buckets(const CountTable& table, size_t k) {
  if (k < 1) throw ConfigError("top-k requires k >= 1");
  // Min-heap of the k best; worst on top (lowest count, then highest id).
  const auto better = [](const BucketCount& a, const BucketCount& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.bucket < b.bucket;
  };
  std::priority_queue<BucketCount, std::vector<BucketCount>, decltype(better)>
      heap(better);
  const auto counts = table.raw();
  for (size_t id = 0; id < counts.size(); ++id) {
    const uint64_t count = counts[id];
    if (count == 0) continue;
    const BucketCount entry{id, count};
    if (heap.size() < k) {
      heap.push(entry);
    } else if (better(entry, heap.top())) {
      heap.pop();
      heap.push(entry);
    }
  }
  std::vector<BucketCount> out(heap.size());
  for (size_t i = heap.size(); i-- > 0;) {
    out[i] = heap.top();
    heap.pop();
  }
  return out;
}

namespace {

class StopWatch {
 public:
  StopWatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }
  void reset() { start_ = std::chrono::steady_clock::now(); }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Exact dictionary over full gram bytes; per-sequence dedup via a
// last-seen-sequence stamp (ids are stored +1 so 0 means "never").
class MapDictionary {
 public:
  explicit MapDictionary(size_t) {}

  void add(std::string_view gram, uint64_t seq_id, CountMode mode) {
    auto [it, inserted] = map_.try_emplace(std::string(gram), Entry{0, 0});
    Entry& e = it->second;
    if (mode == CountMode::kAll) {
      e.count += 1;
    } else if (e.last_seq != seq_id + 1) {
      e.count += 1;
      e.last_seq = seq_id + 1;
    }
  }

  void drain_into(GramCountMap& global) {
    for (auto& [gram, entry] : map_) {
      global[gram] += entry.count;
    }
    map_.clear();
  }

 private:
  struct Entry {
    uint64_t count;
    uint64_t last_seq;
  };
  std::unordered_map<std::string, Entry> map_;
};

// Counting byte trie used as the pass-2 dictionary: fixed key length,
// micro-array child dispatch upgraded to a 256-entry table past 4 children,
// leaf slots hold (count, last-seen stamp).
class TrieDictionary {
 public:
  explicit TrieDictionary(size_t depth) : depth_(depth) { nodes_.emplace_back(); }

  void add(std::string_view gram, uint64_t seq_id, CountMode mode) {
    uint32_t node = 0;
    for (size_t level = 0;; ++level) {
      const uint8_t b = static_cast<uint8_t>(gram[level]);
      const bool last = (level + 1 == depth_);
      uint32_t ref = child_of(node, b);
      if (ref == kAbsent) {
        if (last) {
          ref = static_cast<uint32_t>(leaves_.size());
          leaves_.push_back(Leaf{0, 0});
        } else {
          ref = static_cast<uint32_t>(nodes_.size());
          nodes_.emplace_back();
        }
        link_child(node, b, ref);
      }
      if (last) {
        Leaf& leaf = leaves_[ref];
        if (mode == CountMode::kAll) {
          leaf.count += 1;
        } else if (leaf.last_seq != seq_id + 1) {
          leaf.count += 1;
          leaf.last_seq = seq_id + 1;
        }
        return;
      }
      node = ref;
    }
  }

  void drain_into(GramCountMap& global) {
    if (!leaves_.empty()) {
      std::string gram(depth_, '\0');
      visit(0, 0, gram, global);
    }
    nodes_.clear();
    luts_.clear();
    leaves_.clear();
    nodes_.emplace_back();
  }

 private:
  static constexpr uint32_t kAbsent = 0xffffffffu;
  static constexpr uint32_t kNoLut = 0xffffffffu;
  static constexpr size_t kInlineChildren = 4;

  struct Node {
    uint16_t child_count = 0;
    std::array<uint8_t, kInlineChildren> bytes{};
    std::array<uint32_t, kInlineChildren> refs{};
    uint32_t lut = kNoLut;
  };
  struct Leaf {
    uint64_t count;
    uint64_t last_seq;
  };

  uint32_t child_of(uint32_t node_idx, uint8_t b) const {
    const Node& node = nodes_[node_idx];
    if (node.lut != kNoLut) return luts_[node.lut + b];
    for (size_t i = 0; i < node.child_count; ++i) {
      if (node.bytes[i] == b) return node.refs[i];
    }
    return kAbsent;
  }

  void link_child(uint32_t node_idx, uint8_t b, uint32_t ref) {
    Node& node = nodes_[node_idx];
    if (node.lut != kNoLut) {
      luts_[node.lut + b] = ref;
      node.child_count += 1;
      return;
    }
    if (node.child_count < kInlineChildren) {
      // Keep the micro-array byte-sorted.
      size_t pos = node.child_count;
      while (pos > 0 && node.bytes[pos - 1] > b) {
        node.bytes[pos] = node.bytes[pos - 1];
        node.refs[pos] = node.refs[pos - 1];
        --pos;
      }
      node.bytes[pos] = b;
      node.refs[pos] = ref;
      node.child_count += 1;
      return;
    }
    // Fifth child: migrate to a lookup table.
    const uint32_t lut = static_cast<uint32_t>(luts_.size());
    luts_.resize(luts_.size() + 256, kAbsent);
    for (size_t i = 0; i < kInlineChildren; ++i) {
      luts_[lut + node.bytes[i]] = node.refs[i];
    }
    luts_[lut + b] = ref;
    node.lut = lut;
    node.child_count += 1;
  }

  void visit(uint32_t node_idx, size_t level, std::string& gram,
             GramCountMap& global) const {
    const Node& node = nodes_[node_idx];
    const bool last = (level + 1 == depth_);
    const auto emit = [&](uint8_t b, uint32_t ref) {
      gram[level] = static_cast<char>(b);
      if (last) {
        if (leaves_[ref].count > 0) global[gram] += leaves_[ref].count;
      } else {
        visit(ref, level + 1, gram, global);
      }
    };
    if (node.lut != kNoLut) {
      for (unsigned b = 0; b < 256; ++b) {
        const uint32_t ref = luts_[node.lut + b];
        if (ref != kAbsent) emit(static_cast<uint8_t>(b), ref);
      }
    } else {
      for (size_t i = 0; i < node.child_count; ++i) {
        emit(node.bytes[i], node.refs[i]);
      }
    }
  }

  size_t depth_;
  std::vector<Node> nodes_;
  std::vector<uint32_t> luts_;
  std::vector<Leaf> leaves_;
};

constexpr size_t kMergeEverySequences = 64;

template <typename Dictionary>
void exact_pass(const Corpus& corpus, const HashgramConfig& cfg,
                const BucketSet& kept, GramCountMap& global,
                uint64_t* bytes_processed) {
  std::mutex global_mutex;
  const size_t workers = std::max<size_t>(1, cfg.workers);
  std::vector<Dictionary> dicts(workers, Dictionary(cfg.n));
  std::vector<size_t> pending(workers, 0);
  std::atomic<uint64_t> bytes{0};

  for_each_parallel_indexed(
      corpus, workers, 0, [&](size_t w, const Sequence& seq) {
        bytes.fetch_add(seq.bytes.size(), std::memory_order_relaxed);
        Dictionary& dict = dicts[w];
        if (seq.bytes.size() >= cfg.n) {
          const char* data = seq.bytes.data();
          const size_t last = seq.bytes.size() - cfg.n;
          for (size_t pos = 0; pos <= last; ++pos) {
            const std::string_view gram(data + pos, cfg.n);
            if (kept.contains(hash_ngram(gram, cfg.seed, cfg.buckets))) {
              dict.add(gram, seq.id, cfg.mode);
            }
          }
        }
        if (++pending[w] >= kMergeEverySequences) {
          pending[w] = 0;
          std::lock_guard lock(global_mutex);
          dict.drain_into(global);
        }
      });
  for (auto& dict : dicts) {
    dict.drain_into(global);
  }
  if (bytes_processed != nullptr) *bytes_processed = bytes.load();
}

}  // namespace

HashgramResult run_hashgram(const Corpus& corpus, const HashgramConfig& cfg) {
  cfg.validate();
  HashgramResult result;

  CountingOptions opt;
  opt.mode = cfg.mode;
  opt.merge = cfg.merge;
  opt.workers = cfg.workers;
  opt.flush_batch_size = cfg.flush_batch_size;

  // Pass 1: bucket hash counts.
  StopWatch clock;
  std::atomic<uint64_t> pass1_bytes{0};
  CountTable bucket_counts(cfg.buckets);
  count_sequences(corpus, bucket_counts, opt,
                  [&cfg, &pass1_bytes](const Sequence& seq, auto&& sink) {
                    pass1_bytes.fetch_add(seq.bytes.size(),
                                          std::memory_order_relaxed);
                    if (seq.bytes.size() < cfg.n) return;
                    const char* data = seq.bytes.data();
                    const size_t last = seq.bytes.size() - cfg.n;
                    for (size_t pos = 0; pos <= last; ++pos) {
                      sink(hash_ngram(std::string_view(data + pos, cfg.n),
                                      cfg.seed, cfg.buckets));
                    }
                  });
  result.passes.push_back(PassResult{"hash pass", cfg.n, clock.seconds(),
                                     pass1_bytes.load(), cfg.buckets, 0,
                                     false});

  clock.reset();
  std::vector<BucketCount> top_buckets = topk_buckets(bucket_counts, cfg.k);
  std::vector<uint64_t> kept_ids;
  kept_ids.reserve(top_buckets.size());
  for (const auto& bc : top_buckets) kept_ids.push_back(bc.bucket);
  bucket_counts = CountTable(0);
  const BucketSet kept(kept_ids, cfg.buckets);
  result.passes.push_back(PassResult{"top-k buckets", cfg.n, clock.seconds(),
                                     0, 0, kept_ids.size(),
                                     kept_ids.size() < cfg.k});

  // Pass 2: exact counts of surviving grams.
  clock.reset();
  GramCountMap exact;
  uint64_t pass2_bytes = 0;
  if (cfg.trie_second_pass) {
    exact_pass<TrieDictionary>(corpus, cfg, kept, exact, &pass2_bytes);
  } else {
    exact_pass<MapDictionary>(corpus, cfg, kept, exact, &pass2_bytes);
  }
  result.passes.push_back(PassResult{"exact pass", cfg.n, clock.seconds(),
                                     pass2_bytes, 0, exact.size(), false});

  clock.reset();
  result.topk = naive_topk(exact, cfg.k);
  result.passes.push_back(PassResult{"top-k grams", cfg.n, clock.seconds(), 0,
                                     0, result.topk.size(), false});
  return result;
}

}  // namespace intergrams
