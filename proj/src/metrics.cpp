#include "intergrams/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "intergrams/pipeline.hpp"

namespace intergrams {

double jaccard(const TopKList& a, const TopKList& b) {
  std::unordered_set<std::string_view> set_a;
  set_a.reserve(a.size());
  for (const auto& gc : a) set_a.insert(gc.gram);
  std::unordered_set<std::string_view> set_b;
  set_b.reserve(b.size());
  for (const auto& gc : b) set_b.insert(gc.gram);

  size_t intersection = 0;
  for (const auto& gram : set_a) {
    intersection += set_b.count(gram);
  }
  const size_t unions = set_a.size() + set_b.size() - intersection;
  if (unions == 0) return 1.0;
  return static_cast<double>(intersection) / static_cast<double>(unions);
}

std::vector<double> prefix_recall_curve(const Corpus& corpus, size_t k,
                                        const std::vector<double>& zs,
                                        size_t n_small, CountMode mode,
                                        uint64_t oracle_guard) {
  if (k < 1) throw ConfigError("prefix_recall requires k >= 1");
  for (double z : zs) {
    if (!(z >= 1.0)) throw ConfigError("prefix_recall requires z >= 1");
  }
  const GramCountMap small_counts =
      naive_count(corpus, n_small, mode, oracle_guard);
  const GramCountMap big_counts =
      naive_count(corpus, n_small + 1, mode, oracle_guard);
  const TopKList top_big = naive_topk(big_counts, k);

  std::vector<double> out;
  out.reserve(zs.size());
  for (double z : zs) {
    const size_t keep = static_cast<size_t>(
        std::ceil(z * static_cast<double>(k)));
    const TopKList top_small = naive_topk(small_counts, keep);
    std::unordered_set<std::string_view> prefixes;
    prefixes.reserve(top_small.size());
    for (const auto& gc : top_small) prefixes.insert(gc.gram);

    if (top_big.empty()) {
      out.push_back(1.0);
      continue;
    }
    size_t hit = 0;
    for (const auto& gc : top_big) {
      const std::string_view prefix(gc.gram.data(), n_small);
      hit += prefixes.count(prefix);
    }
    out.push_back(static_cast<double>(hit) /
                  static_cast<double>(top_big.size()));
  }
  return out;
}

double prefix_recall(const Corpus& corpus, size_t k, double z, size_t n_small,
                     CountMode mode, uint64_t oracle_guard) {
  return prefix_recall_curve(corpus, k, {z}, n_small, mode, oracle_guard)[0];
}

std::vector<uint64_t> FeatureMatrix::column_popcounts() const {
  std::vector<uint64_t> pops(cols, 0);
  for (const auto& [row, col] : entries) pops[col] += 1;
  return pops;
}

FeatureMatrix featurize(const Corpus& corpus, const TopKList& vocab,
                        size_t workers) {
  FeatureMatrix mat;
  mat.cols = vocab.size();
  if (!vocab.empty()) {
    const size_t n = vocab[0].gram.size();
    for (const auto& gc : vocab) {
      if (gc.gram.size() != n) {
        throw std::invalid_argument("featurize: vocab grams must share one length");
      }
    }
  }

  std::unordered_map<std::string_view, uint32_t> columns;
  columns.reserve(vocab.size());
  for (uint32_t j = 0; j < vocab.size(); ++j) {
    columns.emplace(vocab[j].gram, j);
  }
  const size_t n = vocab.empty() ? 0 : vocab[0].gram.size();

  std::mutex collect_mutex;
  std::atomic<uint64_t> rows{0};
  for_each_parallel(corpus, std::max<size_t>(1, workers), 0,
                    [&](const Sequence& seq) {
                      uint64_t prev = rows.load(std::memory_order_relaxed);
                      while (prev < seq.id + 1 &&
                             !rows.compare_exchange_weak(prev, seq.id + 1)) {
                      }
                      if (vocab.empty() || seq.bytes.size() < n) return;
                      std::unordered_set<uint32_t> cols_here;
                      const char* data = seq.bytes.data();
                      const size_t last = seq.bytes.size() - n;
                      for (size_t pos = 0; pos <= last; ++pos) {
                        const auto it =
                            columns.find(std::string_view(data + pos, n));
                        if (it != columns.end()) cols_here.insert(it->second);
                      }
                      if (cols_here.empty()) return;
                      std::vector<uint32_t> sorted(cols_here.begin(),
                                                   cols_here.end());
                      std::sort(sorted.begin(), sorted.end());
                      std::lock_guard lock(collect_mutex);
                      for (uint32_t col : sorted) {
                        mat.entries.emplace_back(seq.id, col);
                      }
                    });
  mat.rows = rows.load();
  std::sort(mat.entries.begin(), mat.entries.end());
  return mat;
}

RunReport make_report(std::string algorithm, std::string config_echo,
                      std::vector<PassResult> passes) {
  RunReport report;
  report.algorithm = std::move(algorithm);
  report.config_echo = std::move(config_echo);
  report.passes = std::move(passes);
  for (const auto& p : report.passes) report.total_seconds += p.seconds;
  return report;
}

namespace {
std::string format_throughput(double bps) {
  char buf[64];
  if (bps <= 0.0) {
    return "-";
  }
  std::snprintf(buf, sizeof(buf), "%.3f MB/s", bps / 1e6);
  return buf;
}
}  // namespace

std::string RunReport::to_tsv() const {
  std::ostringstream out;
  out << "step\truntime_s\tthroughput\n";
  for (const auto& p : passes) {
    char secs[32];
    std::snprintf(secs, sizeof(secs), "%.4f", p.seconds);
    out << p.label << "\t" << secs << "\t"
        << format_throughput(p.throughput_bps()) << "\n";
  }
  char total[32];
  std::snprintf(total, sizeof(total), "%.4f", total_seconds);
  out << "total\t" << total << "\t-\n";
  if (jaccard_vs_reference.has_value()) {
    char j[32];
    std::snprintf(j, sizeof(j), "%.6f", *jaccard_vs_reference);
    out << "jaccard\t" << j << "\t-\n";
  }
  return out.str();
}

std::string RunReport::to_json() const {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& p : passes) {
    steps.push_back({
        {"label", p.label},
        {"gram_len", p.gram_len},
        {"seconds", p.seconds},
        {"bytes_processed", p.bytes_processed},
        {"throughput_bps", p.throughput_bps()},
        {"candidate_space", p.candidate_space},
        {"retained", p.retained},
        {"retained_short", p.retained_short},
    });
  }
  nlohmann::json j = {
      {"schema_version", 1},
      {"algorithm", algorithm},
      {"config", config_echo},
      {"steps", steps},
      {"total_seconds", total_seconds},
  };
  if (jaccard_vs_reference.has_value()) {
    j["jaccard_vs_reference"] = *jaccard_vs_reference;
  }
  return j.dump(2);
}

std::string topk_to_tsv(const TopKList& list) {
  std::string out;
  for (const auto& gc : list) {
    out += to_hex(gc.gram);
    out += '\t';
    out += std::to_string(gc.count);
    out += '\n';
  }
  return out;
}

TopKList topk_from_tsv(const std::string& text) {
  TopKList list;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string_view line(text.data() + start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw ConfigError("malformed result line (no tab): " + std::string(line));
    }
    GramCount gc;
    gc.gram = from_hex(line.substr(0, tab));
    gc.count = std::stoull(std::string(line.substr(tab + 1)));
    list.push_back(std::move(gc));
  }
  return list;
}

}  // namespace intergrams
