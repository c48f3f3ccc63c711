// metrics.hpp: result comparison (Jaccard over gram sets), prefix-recall
// measurement, Boolean feature-matrix construction, and run reports with
// per-pass timing/throughput rows.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "intergrams/corpus.hpp"
#include "intergrams/counting.hpp"
#include "intergrams/intergrams.hpp"
#include "intergrams/oracle.hpp"

namespace intergrams {

// |grams(A) ∩ grams(B)| / |grams(A) ∪ grams(B)|; counts are ignored. Both
// empty -> 1.0.
double jaccard(const TopKList& a, const TopKList& b);

// Fraction of the true top-k (n_small+1)-grams whose n_small-byte prefix is
// in the true top-ceil(z*k) n_small-grams. Both sides come from the naive
// oracle; desk scale only. No (n_small+1)-grams -> 1.0.
double prefix_recall(const Corpus& corpus, size_t k, double z, size_t n_small,
                     CountMode mode = CountMode::kOnce,
                     uint64_t oracle_guard = kOracleCorpusGuard);

// Same, evaluated for several z values with the oracle work shared.
std::vector<double> prefix_recall_curve(const Corpus& corpus, size_t k,
                                        const std::vector<double>& zs,
                                        size_t n_small,
                                        CountMode mode = CountMode::kOnce,
                                        uint64_t oracle_guard =
                                            kOracleCorpusGuard);

// Sparse Boolean occurrence matrix: entry (i, j) = 1 iff vocab gram j occurs
// in sequence i. Row order = corpus order, column order = vocab rank order.
struct FeatureMatrix {
  uint64_t rows = 0;
  uint64_t cols = 0;
  // (row, col) coordinates of set entries, sorted by row then col.
  std::vector<std::pair<uint64_t, uint32_t>> entries;

  std::vector<uint64_t> column_popcounts() const;
};

FeatureMatrix featurize(const Corpus& corpus, const TopKList& vocab,
                        size_t workers = 1);

// Table-4-style report: one row per pass plus totals.
struct RunReport {
  std::string algorithm;
  std::string config_echo;
  std::vector<PassResult> passes;
  double total_seconds = 0.0;
  std::optional<double> jaccard_vs_reference;

  std::string to_tsv() const;
  std::string to_json() const;  // carries schema_version
};

RunReport make_report(std::string algorithm, std::string config_echo,
                      std::vector<PassResult> passes);

// Bit-exact result serialization: per gram, lowercase hex (2n chars), tab,
// decimal count, newline, in canonical order.
std::string topk_to_tsv(const TopKList& list);
TopKList topk_from_tsv(const std::string& text);

}  // namespace intergrams
