// Shared test utilities: temp dirs, random corpora, and independent
// reference implementations used as oracles.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "intergrams/corpus.hpp"
#include "intergrams/counting.hpp"

namespace testutil {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<uint64_t> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("intergrams-test-" + tag + "-" +
             std::to_string(::getpid()) + "-" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

  std::filesystem::path write_file(const std::string& name,
                                   const std::string& bytes) const {
    const auto p = path_ / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string random_bytes(std::mt19937_64& rng, size_t len,
                                unsigned alphabet) {
  std::string s(len, '\0');
  for (auto& c : s) {
    c = static_cast<char>(rng() % alphabet);
  }
  return s;
}

// Random corpus: m in [1, max_m], lengths in [0, max_len].
inline std::vector<std::string> random_corpus(std::mt19937_64& rng,
                                              size_t max_m, size_t max_len,
                                              unsigned alphabet) {
  const size_t m = 1 + rng() % max_m;
  std::vector<std::string> seqs;
  seqs.reserve(m);
  for (size_t i = 0; i < m; ++i) {
    seqs.push_back(random_bytes(rng, rng() % (max_len + 1), alphabet));
  }
  return seqs;
}

// Scalar reference for the batched flush: one bitset at a time, bit by bit.
inline void scalar_flush_reference(
    const std::vector<intergrams::SeenBitset*>& batch,
    std::vector<uint64_t>& counts) {
  for (const auto* bits : batch) {
    for (size_t id = 0; id < bits->capacity(); ++id) {
      if (bits->test(id)) counts[id] += 1;
    }
  }
}

// Full-sort reference for top-k over a dense table.
inline intergrams::TopKList full_sort_topk(
    const std::vector<uint64_t>& counts, size_t k,
    const std::function<std::string(size_t)>& id_to_gram) {
  intergrams::TopKList all;
  for (size_t id = 0; id < counts.size(); ++id) {
    if (counts[id] > 0) all.push_back({id_to_gram(id), counts[id]});
  }
  intergrams::canonical_sort(all);
  if (all.size() > k) all.resize(k);
  return all;
}

// Upper chi-square critical value via the Wilson-Hilferty approximation.
inline double chi2_critical(double df, double z_alpha) {
  const double t = 2.0 / (9.0 * df);
  const double base = 1.0 - t + z_alpha * std::sqrt(t);
  return df * base * base * base;
}

}  // namespace testutil
