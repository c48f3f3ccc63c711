#include <doctest.h>

#include <random>
#include <unordered_set>

#include "helpers.hpp"
#include "intergrams/intergrams.hpp"
#include "intergrams/metrics.hpp"
#include "intergrams/oracle.hpp"
#include "intergrams/synth.hpp"

using namespace intergrams;

namespace {

IntergramConfig config(size_t n, size_t k, double z, CountMode mode,
                       size_t workers = 1) {
  IntergramConfig cfg;
  cfg.n = n;
  cfg.k = k;
  cfg.z = z;
  cfg.mode = mode;
  cfg.workers = workers;
  return cfg;
}

// z large enough that k' can never drop a candidate on any pass.
double full_retention_z(const Corpus& corpus, size_t k) {
  const auto st = corpus.stats(1);
  const double k_needed = static_cast<double>(st.bytes_total + 1);
  return std::max(1.0, k_needed / static_cast<double>(k));
}

TopKList oracle_topk(const Corpus& corpus, size_t n, CountMode mode,
                     size_t k) {
  return naive_topk(naive_count(corpus, n, mode), k);
}

}  // namespace

TEST_CASE("candidate_id arithmetic") {
  CHECK(candidate_id(0, 0) == 0);
  CHECK(candidate_id(5, 32) == 1312);
  const size_t k_prime = 1000;
  CHECK(candidate_id(k_prime - 1, 255) == 256 * k_prime - 1);
}

TEST_CASE("extend_pass counts only grams whose prefix survived") {
  const Corpus corpus = make_memory_corpus({"abab"});
  CountingOptions opt;
  opt.mode = CountMode::kOnce;

  SUBCASE("prefix present as a 4-gram start") {
    TopKList prefixes{GramCount{"aba", 1}};
    const PrefixTrie trie = PrefixTrie::build(prefixes);
    const CountTable table = extend_pass(corpus, trie, 4, opt);
    CHECK(table.capacity() == 256);
    CHECK(table[candidate_id(0, static_cast<unsigned char>('b'))] == 1);
    CHECK(table.total() == 1);
  }
  SUBCASE("prefix occurring only as a suffix extends nothing") {
    TopKList prefixes{GramCount{"bab", 1}};
    const PrefixTrie trie = PrefixTrie::build(prefixes);
    const CountTable table = extend_pass(corpus, trie, 4, opt);
    CHECK(table.total() == 0);
  }
}

TEST_CASE("extend_pass equals the prefix-filtered naive oracle") {
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 15; ++trial) {
    const auto seqs = testutil::random_corpus(rng, 10, 120, 6);
    const Corpus corpus = make_memory_corpus(seqs);
    const size_t j = 4 + trial % 2;  // extension pass for j-grams

    // Build a trie over a random subset of the true (j-1)-grams.
    const TopKList all_prefixes =
        oracle_topk(corpus, j - 1, CountMode::kOnce, 1 << 20);
    if (all_prefixes.empty()) continue;
    TopKList kept;
    for (const auto& gc : all_prefixes) {
      if (rng() % 2 == 0) kept.push_back(gc);
    }
    if (kept.empty()) kept.push_back(all_prefixes[0]);
    const PrefixTrie trie = PrefixTrie::build(kept);

    for (const CountMode mode : {CountMode::kOnce, CountMode::kAll}) {
      CountingOptions opt;
      opt.mode = mode;
      const CountTable table = extend_pass(corpus, trie, j, opt);

      GramCountMap expected;
      for (const auto& [gram, count] : naive_count(corpus, j, mode)) {
        if (trie.contains(std::string_view(gram).substr(0, j - 1))) {
          expected[gram] = count;
        }
      }
      uint64_t expected_total = 0;
      for (const auto& [gram, count] : expected) {
        const auto ordinal = trie.lookup(std::string_view(gram).substr(0, j - 1));
        REQUIRE(ordinal.has_value());
        CHECK(table[candidate_id(*ordinal,
                                 static_cast<unsigned char>(gram.back()))] ==
              count);
        expected_total += count;
      }
      CHECK(table.total() == expected_total);
    }
  }
}

TEST_CASE("extend_pass requires a trie of depth j-1") {
  const Corpus corpus = make_memory_corpus({"abcd"});
  const PrefixTrie trie = PrefixTrie::build(TopKList{GramCount{"ab", 1}});
  CountingOptions opt;
  CHECK_THROWS_AS(extend_pass(corpus, trie, 4, opt), ConfigError);
}

TEST_CASE("four-way tie resolves canonically") {
  const Corpus corpus = make_memory_corpus({"abab", "abba"});
  const auto result =
      run_intergrams(corpus, config(4, 1, 100.0, CountMode::kOnce));
  REQUIRE(result.topk.size() == 1);
  CHECK(result.topk[0] == GramCount{"abab", 1});
}

TEST_CASE("n = 3 degenerates to the dense pass") {
  std::mt19937_64 rng(7);
  const auto seqs = testutil::random_corpus(rng, 8, 90, 5);
  const Corpus corpus = make_memory_corpus(seqs);
  const auto result =
      run_intergrams(corpus, config(3, 7, 2.0, CountMode::kOnce));
  CHECK(result.topk == oracle_topk(corpus, 3, CountMode::kOnce, 7));
  // one counting pass plus one selection step
  CHECK(result.passes.size() == 2);
}

TEST_CASE("n < 3 delegates to the dense pass") {
  std::mt19937_64 rng(8);
  const auto seqs = testutil::random_corpus(rng, 8, 90, 200);
  const Corpus corpus = make_memory_corpus(seqs);
  for (const size_t n : {size_t{1}, size_t{2}}) {
    const auto result =
        run_intergrams(corpus, config(n, 5, 1.0, CountMode::kAll));
    CHECK(result.topk == oracle_topk(corpus, n, CountMode::kAll, 5));
  }
}

TEST_CASE("full retention reproduces the oracle exactly") {
  std::mt19937_64 rng(909);
  for (int trial = 0; trial < 10; ++trial) {
    const auto seqs = testutil::random_corpus(rng, 8, 200, 4);
    const Corpus corpus = make_memory_corpus(seqs);
    const size_t k = 16;
    const double z = full_retention_z(corpus, k);
    for (const CountMode mode : {CountMode::kOnce, CountMode::kAll}) {
      const auto result = run_intergrams(corpus, config(5, k, z, mode));
      CHECK(result.topk == oracle_topk(corpus, 5, mode, k));
    }
  }
}

TEST_CASE("output grams have their prefixes in the final trie") {
  // Prefix consistency: with aggressive truncation (z = 1) every returned
  // n-gram's (n-1)-prefix must still be one of the retained candidates.
  SynthSpec spec;
  spec.a = 1.1;
  spec.ranks = 400;
  spec.gram_len = 5;
  spec.sequences = 30;
  spec.sequence_len = 600;
  spec.seed = 99;
  const Corpus corpus = make_memory_corpus(generate_sequences(spec));

  const size_t k = 20;
  IntergramConfig cfg = config(5, k, 1.0, CountMode::kOnce);
  const auto result = run_intergrams(corpus, cfg);
  REQUIRE(!result.topk.empty());

  // Reconstruct the surviving 4-gram set the same way the driver does.
  const size_t k_prime = cfg.k_prime();
  IntergramConfig cfg4 = config(4, k_prime, 1.0, CountMode::kOnce);
  cfg4.z = 1.0;
  const auto pass4 = run_intergrams(corpus, cfg4);
  std::unordered_set<std::string> survivors;
  for (const auto& gc : pass4.topk) survivors.insert(gc.gram);

  for (const auto& gc : result.topk) {
    CHECK(survivors.count(gc.gram.substr(0, 4)) == 1);
  }
}

TEST_CASE("reported counts never exceed the prefix count") {
  std::mt19937_64 rng(3110);
  for (int trial = 0; trial < 6; ++trial) {
    const auto seqs = testutil::random_corpus(rng, 10, 150, 4);
    const Corpus corpus = make_memory_corpus(seqs);
    for (const CountMode mode : {CountMode::kOnce, CountMode::kAll}) {
      const auto result = run_intergrams(corpus, config(5, 12, 1.5, mode));
      const GramCountMap prefix_counts = naive_count(corpus, 4, mode);
      for (const auto& gc : result.topk) {
        const auto it = prefix_counts.find(gc.gram.substr(0, 4));
        REQUIRE(it != prefix_counts.end());
        CHECK(gc.count <= it->second);
      }
    }
  }
}

TEST_CASE("degenerate corpora keep every nonzero candidate and say so") {
  const Corpus corpus = make_memory_corpus({"aaaa", "aaab"});
  const auto result =
      run_intergrams(corpus, config(4, 5, 10.0, CountMode::kOnce));
  // 50 candidates requested between passes; only 2 trigrams exist.
  CHECK(!result.diagnostics.empty());
  CHECK(result.topk == oracle_topk(corpus, 4, CountMode::kOnce, 5));
}

TEST_CASE("per-pass results carry timing and throughput structure") {
  std::mt19937_64 rng(5);
  const auto seqs = testutil::random_corpus(rng, 6, 300, 30);
  const Corpus corpus = make_memory_corpus(seqs);
  const auto result =
      run_intergrams(corpus, config(6, 4, 2.0, CountMode::kOnce));
  // counting passes for 3,4,5,6-grams plus selection/trie steps
  size_t counting_rows = 0;
  uint64_t bytes = 0;
  for (const auto& p : result.passes) {
    if (p.bytes_processed > 0) {
      ++counting_rows;
      bytes = p.bytes_processed;
      CHECK(p.seconds >= 0.0);
    }
  }
  CHECK(counting_rows == 4);
  CHECK(bytes == corpus.stats(1).bytes_total);
}

TEST_CASE("invalid configs are rejected") {
  CHECK_THROWS_AS(config(0, 1, 1.0, CountMode::kOnce).validate(), ConfigError);
  CHECK_THROWS_AS(config(4, 0, 1.0, CountMode::kOnce).validate(), ConfigError);
  CHECK_THROWS_AS(config(4, 1, 0.5, CountMode::kOnce).validate(), ConfigError);
}
