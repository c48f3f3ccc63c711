#include "intergrams/intergrams.hpp"

#include <atomic>
#include <chrono>

#include "intergrams/dense_pass.hpp"

namespace intergrams {

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

CountingOptions counting_options(const IntergramConfig& cfg) {
  CountingOptions opt;
  opt.mode = cfg.mode;
  opt.merge = cfg.merge;
  opt.workers = cfg.workers;
  opt.flush_batch_size = cfg.flush_batch_size;
  return opt;
}

}  // namespace

void IntergramConfig::validate() const {
  if (n < 1) throw ConfigError("gram length n must be >= 1");
  if (k < 1) throw ConfigError("k must be >= 1");
  if (!(z >= 1.0)) throw ConfigError("oversample factor z must be >= 1");
  if (flush_batch_size < 1) throw ConfigError("flush batch size must be >= 1");
}

CountTable extend_pass(const Corpus& corpus, const PrefixTrie& trie, size_t j,
                       const CountingOptions& opt, uint64_t* bytes_processed) {
  if (j < 2 || trie.depth() != j - 1) {
    throw ConfigError("extension pass needs a trie of depth j-1");
  }
  CountTable table(256 * trie.size());
  std::atomic<uint64_t> bytes{0};
  count_sequences(
      corpus, table, opt, [&trie, j, &bytes](const Sequence& seq, auto&& sink) {
        bytes.fetch_add(seq.bytes.size(), std::memory_order_relaxed);
        if (seq.bytes.size() < j) return;
        const char* data = seq.bytes.data();
        const size_t last = seq.bytes.size() - j;
        for (size_t pos = 0; pos <= last; ++pos) {
          const auto ordinal = trie.lookup(std::string_view(data + pos, j - 1));
          if (!ordinal) continue;
          sink(candidate_id(*ordinal,
                            static_cast<unsigned char>(data[pos + j - 1])));
        }
      });
  if (bytes_processed != nullptr) *bytes_processed = bytes.load();
  return table;
}

IntergramsResult run_intergrams(const Corpus& corpus,
                                const IntergramConfig& cfg) {
  cfg.validate();
  IntergramsResult result;
  const CountingOptions opt = counting_options(cfg);
  const size_t k_prime = cfg.k_prime();

  // Dense stage; for n <= 3 it already covers the full problem.
  const size_t n0 = std::min(cfg.n, kMaxDenseGramLen);
  StopWatch pass_clock;
  std::atomic<uint64_t> dense_bytes{0};
  CountTable table = [&] {
    const size_t capacity = dense_capacity(n0);
    const size_t mask = capacity - 1;
    CountTable t(capacity);
    count_sequences(corpus, t, opt,
                    [n0, mask, &dense_bytes](const Sequence& seq, auto&& sink) {
                      dense_bytes.fetch_add(seq.bytes.size(),
                                            std::memory_order_relaxed);
                      const auto& bytes = seq.bytes;
                      if (bytes.size() < n0) return;
                      size_t id = 0;
                      for (size_t i = 0; i + 1 < n0; ++i) {
                        id = (id << 8) | static_cast<unsigned char>(bytes[i]);
                      }
                      for (size_t i = n0 - 1; i < bytes.size(); ++i) {
                        id = ((id << 8) | static_cast<unsigned char>(bytes[i])) &
                             mask;
                        sink(id);
                      }
                    });
    return t;
  }();
  result.passes.push_back(PassResult{std::to_string(n0) + "-gram pass", n0,
                                     pass_clock.seconds(), dense_bytes.load(),
                                     dense_capacity(n0), 0, false});

  if (cfg.n <= kMaxDenseGramLen) {
    pass_clock.reset();
    result.topk = topk_dense(table, cfg.n, cfg.k);
    result.passes.push_back(PassResult{"top-k " + std::to_string(cfg.n) +
                                           "-grams",
                                       cfg.n, pass_clock.seconds(), 0, 0,
                                       result.topk.size(), false});
    return result;
  }

  pass_clock.reset();
  TopKList survivors = topk_trigrams(table, k_prime);
  table = CountTable(0);  // release the dense table before the next pass
  PrefixTrie trie = PrefixTrie::build(survivors, cfg.frequency_ordered_trie);
  {
    const bool short_pass = survivors.size() < k_prime;
    if (short_pass) {
      result.diagnostics.push_back(
          "pass 3 retained " + std::to_string(survivors.size()) +
          " candidates (requested " + std::to_string(k_prime) + ")");
    }
    result.passes.push_back(PassResult{"top-zk 3-grams/trie building", 3,
                                       pass_clock.seconds(), 0, 0,
                                       survivors.size(), short_pass});
  }

  for (size_t j = 4; j <= cfg.n; ++j) {
    pass_clock.reset();
    uint64_t pass_bytes = 0;
    CountTable counts = extend_pass(corpus, trie, j, opt, &pass_bytes);
    result.passes.push_back(PassResult{std::to_string(j) + "-gram pass", j,
                                       pass_clock.seconds(), pass_bytes,
                                       counts.capacity(), 0, false});

    pass_clock.reset();
    const TopKList* prefix_list = &survivors;
    const auto gram_of = [prefix_list](size_t id) {
      return candidate_gram(*prefix_list, id);
    };
    if (j < cfg.n) {
      TopKList next = top_k(counts, k_prime, gram_of);
      const bool short_pass = next.size() < k_prime;
      if (short_pass) {
        result.diagnostics.push_back(
            "pass " + std::to_string(j) + " retained " +
            std::to_string(next.size()) + " candidates (requested " +
            std::to_string(k_prime) + ")");
      }
      survivors = std::move(next);
      trie = PrefixTrie::build(survivors, cfg.frequency_ordered_trie);
      result.passes.push_back(
          PassResult{"top-zk " + std::to_string(j) + "-grams/trie building", j,
                     pass_clock.seconds(), 0, 0, survivors.size(), short_pass});
    } else {
      result.topk = top_k(counts, cfg.k, gram_of);
      result.passes.push_back(PassResult{
          "top-k " + std::to_string(j) + "-grams", j, pass_clock.seconds(), 0,
          0, result.topk.size(), false});
    }
  }
  return result;
}

}  // namespace intergrams
