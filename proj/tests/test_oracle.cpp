#include <doctest.h>

#include "helpers.hpp"
#include "intergrams/oracle.hpp"

using namespace intergrams;

TEST_CASE("count-once with overlapping grams") {
  const auto map =
      naive_count(make_memory_corpus({"abcab"}), 3, CountMode::kOnce);
  REQUIRE(map.size() == 3);
  CHECK(map.at("abc") == 1);
  CHECK(map.at("bca") == 1);
  CHECK(map.at("cab") == 1);
}

TEST_CASE("count-once sums per-sequence indicators") {
  const auto map =
      naive_count(make_memory_corpus({"abcab", "abc"}), 3, CountMode::kOnce);
  CHECK(map.at("abc") == 2);
  CHECK(map.at("bca") == 1);
  CHECK(map.at("cab") == 1);
}

TEST_CASE("count-once vs count-all on repeats") {
  const Corpus corpus = make_memory_corpus({"aaaa"});
  const auto once = naive_count(corpus, 3, CountMode::kOnce);
  REQUIRE(once.size() == 1);
  CHECK(once.at("aaa") == 1);
  const auto all = naive_count(corpus, 3, CountMode::kAll);
  CHECK(all.at("aaa") == 2);
}

TEST_CASE("only observed grams are stored") {
  const auto map = naive_count(make_memory_corpus({"ab"}), 3, CountMode::kAll);
  CHECK(map.empty());
}

TEST_CASE("naive_topk") {
  GramCountMap map{{"x", 5}, {"y", 2}};
  SUBCASE("k = 1") {
    const auto top = naive_topk(map, 1);
    REQUIRE(top.size() == 1);
    CHECK(top[0] == GramCount{"x", 5});
  }
  SUBCASE("equal counts order byte-ascending") {
    GramCountMap ties{{"b", 3}, {"a", 3}, {"c", 3}};
    const auto top = naive_topk(ties, 3);
    CHECK(top[0].gram == "a");
    CHECK(top[1].gram == "b");
    CHECK(top[2].gram == "c");
  }
  SUBCASE("k beyond map size returns the whole map sorted") {
    const auto top = naive_topk(map, 10);
    REQUIRE(top.size() == 2);
    CHECK(top[0].gram == "x");
    CHECK(top[1].gram == "y");
  }
}

TEST_CASE("corpus size guard") {
  const Corpus corpus = make_memory_corpus({"0123456789"});
  CHECK_THROWS_AS(naive_count(corpus, 3, CountMode::kOnce, 5), ConfigError);
}
