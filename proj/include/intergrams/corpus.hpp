// corpus.hpp: deterministic, re-iterable streaming of sequences from files,
// directories, or in-memory lists.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "intergrams/common.hpp"

namespace intergrams {

// One input record. `id` is the ordinal within one corpus enumeration and is
// stable across repeated walks of the same spec.
struct Sequence {
  uint64_t id = 0;
  std::string bytes;
};

struct CorpusSpec {
  std::vector<std::filesystem::path> roots;
  bool recurse = false;
  // Newline-delimited text mode: each '\n'-separated segment is one sequence.
  // A trailing segment without a final newline is a sequence iff non-empty.
  bool line_mode = false;
  // When > 0, each file is split into fixed-size records of this many bytes
  // (the final record may be short). Records never stitch across files.
  uint64_t chunk_size = 0;
  // Test mode: sequences supplied directly, in order. Roots are ignored.
  std::optional<std::vector<std::string>> in_memory;
};

struct CorpusStats {
  uint64_t sequences = 0;    // m
  uint64_t ngrams = 0;       // N = sum over sequences of max(0, len - n + 1)
  uint64_t bytes_total = 0;
};

// Re-iterable sequence source. Enumeration order is deterministic:
// regular files gathered from all roots, sorted lexicographically by path,
// then records in file order. Two walks yield byte-identical (id, bytes)
// pairs, which the multi-pass algorithms rely on.
class Corpus {
 public:
  explicit Corpus(CorpusSpec spec);

  // Visits every sequence in enumeration order, single-threaded.
  void for_each(const std::function<void(const Sequence&)>& fn) const;

  CorpusStats stats(size_t n) const;

  const std::vector<std::filesystem::path>& files() const { return files_; }
  const CorpusSpec& spec() const { return spec_; }

 private:
  void walk_file(const std::filesystem::path& path, uint64_t& next_id,
                 const std::function<void(const Sequence&)>& fn) const;

  CorpusSpec spec_;
  std::vector<std::filesystem::path> files_;
};

// Convenience for tests and small drivers.
Corpus make_memory_corpus(std::vector<std::string> sequences);

}  // namespace intergrams
