#include <doctest.h>

#include "helpers.hpp"
#include "intergrams/corpus.hpp"
#include "intergrams/oracle.hpp"

using namespace intergrams;

namespace {
std::vector<Sequence> collect(const Corpus& corpus) {
  std::vector<Sequence> out;
  corpus.for_each([&](const Sequence& seq) { out.push_back(seq); });
  return out;
}
}  // namespace

TEST_CASE("in-memory corpus enumerates in order") {
  const Corpus corpus = make_memory_corpus({"ab", "cd"});
  const auto seqs = collect(corpus);
  REQUIRE(seqs.size() == 2);
  CHECK(seqs[0].id == 0);
  CHECK(seqs[0].bytes == "ab");
  CHECK(seqs[1].id == 1);
  CHECK(seqs[1].bytes == "cd");
}

TEST_CASE("empty directory yields an empty stream") {
  testutil::TempDir dir("empty");
  CorpusSpec spec;
  spec.roots = {dir.path()};
  const Corpus corpus(spec);
  CHECK(collect(corpus).empty());
  const auto st = corpus.stats(3);
  CHECK(st.sequences == 0);
  CHECK(st.ngrams == 0);
}

TEST_CASE("files enumerate lexicographically by path") {
  testutil::TempDir dir("lex");
  dir.write_file("b.bin", "BB");
  dir.write_file("a.bin", "AA");
  CorpusSpec spec;
  spec.roots = {dir.path()};
  const Corpus corpus(spec);
  const auto seqs = collect(corpus);
  REQUIRE(seqs.size() == 2);
  CHECK(seqs[0].bytes == "AA");
  CHECK(seqs[1].bytes == "BB");
}

TEST_CASE("missing root is a configuration error") {
  CorpusSpec spec;
  spec.roots = {"/nonexistent/intergrams/component"};
  CHECK_THROWS_AS(Corpus{spec}, ConfigError);
}

TEST_CASE("corpus stats") {
  SUBCASE("single sequence") {
    const auto st = make_memory_corpus({"abcd"}).stats(3);
    CHECK(st.sequences == 1);
    CHECK(st.ngrams == 2);
    CHECK(st.bytes_total == 4);
  }
  SUBCASE("sequence shorter than n contributes zero grams") {
    const auto st = make_memory_corpus({"ab"}).stats(3);
    CHECK(st.sequences == 1);
    CHECK(st.ngrams == 0);
  }
  SUBCASE("sums across sequences") {
    const auto st = make_memory_corpus({"abc", "abcd"}).stats(3);
    CHECK(st.sequences == 2);
    CHECK(st.ngrams == 3);
  }
}

TEST_CASE("line mode splits on newlines") {
  testutil::TempDir dir("lines");
  dir.write_file("t.txt", "a\nbb\n\nccc");
  CorpusSpec spec;
  spec.roots = {dir.path()};
  spec.line_mode = true;
  const auto seqs = collect(Corpus(spec));
  REQUIRE(seqs.size() == 4);
  CHECK(seqs[0].bytes == "a");
  CHECK(seqs[1].bytes == "bb");
  CHECK(seqs[2].bytes == "");
  CHECK(seqs[3].bytes == "ccc");
}

TEST_CASE("line mode: trailing newline adds no empty record") {
  testutil::TempDir dir("lines2");
  dir.write_file("t.txt", "x\ny\n");
  CorpusSpec spec;
  spec.roots = {dir.path()};
  spec.line_mode = true;
  const auto seqs = collect(Corpus(spec));
  REQUIRE(seqs.size() == 2);
  CHECK(seqs[1].bytes == "y");
}

TEST_CASE("chunk mode splits files into fixed-size records") {
  testutil::TempDir dir("chunks");
  dir.write_file("t.bin", "0123456789");
  CorpusSpec spec;
  spec.roots = {dir.path()};
  spec.chunk_size = 4;
  const auto seqs = collect(Corpus(spec));
  REQUIRE(seqs.size() == 3);
  CHECK(seqs[0].bytes == "0123");
  CHECK(seqs[1].bytes == "4567");
  CHECK(seqs[2].bytes == "89");
}

TEST_CASE("re-iteration yields byte-identical streams") {
  testutil::TempDir dir("reiter");
  std::mt19937_64 rng(7);
  dir.write_file("a.bin", testutil::random_bytes(rng, 5000, 256));
  dir.write_file("b.bin", testutil::random_bytes(rng, 3001, 256));
  CorpusSpec spec;
  spec.roots = {dir.path()};
  spec.chunk_size = 512;
  const Corpus corpus(spec);
  const auto first = collect(corpus);
  const auto second = collect(corpus);
  REQUIRE(first.size() == second.size());
  for (size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].id == second[i].id);
    CHECK(first[i].bytes == second[i].bytes);
  }
}

TEST_CASE("stats N matches the occurrences visited by a counting pass") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const auto seqs = testutil::random_corpus(rng, 10, 200, 8);
    const Corpus corpus = make_memory_corpus(seqs);
    const size_t n = 2 + trial % 3;
    const auto st = corpus.stats(n);
    uint64_t total = 0;
    for (const auto& [gram, count] : naive_count(corpus, n, CountMode::kAll)) {
      total += count;
    }
    CHECK(st.ngrams == total);
  }
}

TEST_CASE("recursive enumeration is opt-in") {
  testutil::TempDir dir("recurse");
  std::filesystem::create_directories(dir.path() / "sub");
  dir.write_file("top.bin", "T");
  dir.write_file("sub/inner.bin", "I");

  CorpusSpec flat;
  flat.roots = {dir.path()};
  CHECK(collect(Corpus(flat)).size() == 1);

  CorpusSpec deep = flat;
  deep.recurse = true;
  CHECK(collect(Corpus(deep)).size() == 2);
}
