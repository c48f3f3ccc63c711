// synth.hpp: deterministic synthetic corpora whose constructed grams follow
// a Zipf rank distribution. Sequences are concatenations of grams sampled
// i.i.d. from a rank-to-gram table; identical spec + seed reproduces the
// corpus byte for byte.
//
// Reproducibility contract (part of the external interface): the generator
// is std::mt19937_64 seeded directly with `seed`; doubles are derived as
// (x >> 11) * 2^-53; bounded draws use rejection below 2^64 mod bound; rank
// sampling inverts the cumulative Zipf weights by binary search.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "intergrams/corpus.hpp"

namespace intergrams {

struct SynthSpec {
  double a = 1.2;              // Zipf exponent over gram ranks
  uint64_t ranks = 1000;       // D: number of distinct grams
  size_t gram_len = 3;         // n
  uint64_t sequences = 10;     // m
  uint64_t sequence_len = 1200;  // bytes; rounded down to a gram multiple
  uint64_t seed = 0;
  unsigned alphabet = 256;     // gram bytes drawn from [0, alphabet)

  uint64_t record_len() const {
    return sequence_len - sequence_len % gram_len;
  }
  uint64_t total_bytes() const { return sequences * record_len(); }
  void validate() const;
};

// The deterministic rank -> gram table (rank 0 = most probable).
std::vector<std::string> rank_grams(const SynthSpec& spec);

// Streams the corpus through `sink`, one sequence at a time, in order.
void generate(const SynthSpec& spec,
              const std::function<void(std::string&&)>& sink);

std::vector<std::string> generate_sequences(const SynthSpec& spec);

// Writes corpus files plus a manifest.json into `dir` and returns a
// CorpusSpec (chunked by record length) that re-reads them. Files hold whole
// sequences and are named so lexicographic order matches generation order.
CorpusSpec generate_to_dir(const SynthSpec& spec,
                           const std::filesystem::path& dir,
                           uint64_t target_file_bytes = 256ull << 20);

// In-memory below `memory_threshold` total bytes, otherwise spilled to
// `scratch_dir`.
CorpusSpec generate_corpus(const SynthSpec& spec,
                           const std::filesystem::path& scratch_dir,
                           uint64_t memory_threshold = 64ull << 20);

}  // namespace intergrams
