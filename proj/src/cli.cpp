#include "intergrams/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "intergrams/corpus.hpp"
#include "intergrams/hashgram.hpp"
#include "intergrams/intergrams.hpp"
#include "intergrams/metrics.hpp"
#include "intergrams/oracle.hpp"
#include "intergrams/synth.hpp"
#include "intergrams/theory.hpp"

namespace intergrams {

namespace {

size_t default_workers() {
  if (const char* env = std::getenv("INTERGRAMS_WORKERS")) {
    const long v = std::atol(env);
    if (v >= 1) return static_cast<size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct CorpusFlags {
  std::vector<std::string> inputs;
  bool recurse = false;
  bool line_mode = false;
  uint64_t chunk_size = 0;

  CorpusSpec to_spec() const {
    CorpusSpec spec;
    for (const auto& p : inputs) spec.roots.emplace_back(p);
    spec.recurse = recurse;
    spec.line_mode = line_mode;
    spec.chunk_size = chunk_size;
    return spec;
  }
};

void add_corpus_flags(CLI::App* cmd, CorpusFlags& flags) {
  cmd->add_option("inputs", flags.inputs, "input files or directories")
      ->required();
  cmd->add_flag("-r,--recurse", flags.recurse, "descend into subdirectories");
  cmd->add_flag("--line-mode", flags.line_mode,
                "each newline-delimited line is one sequence");
  cmd->add_option("--chunk-size", flags.chunk_size,
                  "split files into fixed-size records of this many bytes");
}

struct CountFlags {
  CorpusFlags corpus;
  std::string algorithm = "intergrams";
  size_t n = 6;
  size_t k = 10000;
  double z = 1.5;
  std::string mode = "once";
  uint64_t buckets = uint64_t{1} << 31;
  uint64_t seed = 0;
  size_t workers = default_workers();
  size_t flush_batch = 8;
  std::string merge = "flush";
  bool hashgram_trie = false;
  bool plain_trie_layout = false;
  std::string output;

  CountMode count_mode() const {
    return mode == "all" ? CountMode::kAll : CountMode::kOnce;
  }
  MergeStrategy merge_strategy() const {
    return merge == "atomic" ? MergeStrategy::kAtomic
                             : MergeStrategy::kBatchedFlush;
  }
  std::string echo() const {
    std::ostringstream os;
    os << "algorithm=" << algorithm << " n=" << n << " k=" << k;
    if (algorithm == "intergrams") os << " z=" << z;
    if (algorithm == "hashgram") os << " B=" << buckets << " seed=" << seed;
    os << " mode=" << mode << " workers=" << workers
       << " flush-batch=" << flush_batch << " merge=" << merge;
    return os.str();
  }
};

void add_count_flags(CLI::App* cmd, CountFlags& flags) {
  add_corpus_flags(cmd, flags.corpus);
  cmd->add_option("-a,--algorithm", flags.algorithm)
      ->check(CLI::IsMember({"intergrams", "hashgram", "naive"}));
  cmd->add_option("-n,--n", flags.n, "gram length");
  cmd->add_option("-k,--k", flags.k, "number of grams to return");
  cmd->add_option("-z,--oversample", flags.z,
                  "oversample factor; k' = ceil(z*k) candidates kept");
  cmd->add_option("--mode", flags.mode)->check(CLI::IsMember({"once", "all"}));
  cmd->add_option("-B,--buckets", flags.buckets, "hashgram bucket count");
  cmd->add_option("--seed", flags.seed, "hashgram hash seed");
  cmd->add_option("-w,--workers", flags.workers, "counting worker threads");
  cmd->add_option("--flush-batch", flags.flush_batch,
                  "bitsets flushed together");
  cmd->add_option("--merge", flags.merge)
      ->check(CLI::IsMember({"flush", "atomic"}));
  cmd->add_flag("--hashgram-trie", flags.hashgram_trie,
                "counting-trie dictionary in the hashgram exact pass");
  cmd->add_flag("--plain-trie-layout", flags.plain_trie_layout,
                "disable the frequency-ordered trie layout");
  cmd->add_option("-o,--output", flags.output, "result file (default stdout)");
}

struct CountOutcome {
  TopKList topk;
  std::vector<PassResult> passes;
};

CountOutcome run_count_algorithm(const CountFlags& flags) {
  const Corpus corpus(flags.corpus.to_spec());
  CountOutcome outcome;
  if (flags.algorithm == "naive") {
    outcome.topk =
        naive_topk(naive_count(corpus, flags.n, flags.count_mode()), flags.k);
  } else if (flags.algorithm == "hashgram") {
    HashgramConfig cfg;
    cfg.buckets = flags.buckets;
    cfg.n = flags.n;
    cfg.k = flags.k;
    cfg.mode = flags.count_mode();
    cfg.seed = flags.seed;
    cfg.merge = flags.merge_strategy();
    cfg.workers = flags.workers;
    cfg.flush_batch_size = flags.flush_batch;
    cfg.trie_second_pass = flags.hashgram_trie;
    auto result = run_hashgram(corpus, cfg);
    outcome.topk = std::move(result.topk);
    outcome.passes = std::move(result.passes);
  } else {
    IntergramConfig cfg;
    cfg.n = flags.n;
    cfg.k = flags.k;
    cfg.z = flags.z;
    cfg.mode = flags.count_mode();
    cfg.merge = flags.merge_strategy();
    cfg.workers = flags.workers;
    cfg.flush_batch_size = flags.flush_batch;
    cfg.frequency_ordered_trie = !flags.plain_trie_layout;
    auto result = run_intergrams(corpus, cfg);
    outcome.topk = std::move(result.topk);
    outcome.passes = std::move(result.passes);
  }
  return outcome;
}

void write_text(const std::string& path, const std::string& text,
                std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"top-k n-gram counting toolkit"};
  app.require_subcommand(1);

  // count
  CountFlags count_flags;
  CLI::App* count = app.add_subcommand(
      "count", "compute the top-k n-grams of a corpus");
  add_count_flags(count, count_flags);

  // bench
  CountFlags bench_flags;
  std::string report_format = "tsv";
  std::string report_file;
  std::string reference_file;
  CLI::App* bench = app.add_subcommand(
      "bench", "run one algorithm and report per-pass timings");
  add_count_flags(bench, bench_flags);
  bench->add_option("--report", report_format)
      ->check(CLI::IsMember({"tsv", "json"}));
  bench->add_option("--report-file", report_file,
                    "write the report here instead of stdout");
  bench->add_option("--reference", reference_file,
                    "result TSV to compute Jaccard against");

  // theory
  double th_a = 0.0;
  uint64_t th_dnext = 0;
  uint64_t th_k = 100;
  double th_beta_eff = -1.0;
  double th_beta = -1.0;
  uint64_t th_m = 0, th_total = 0, th_dn = 0, th_kprime = 0;
  double th_delta = 0.05;
  CLI::App* theory_cmd =
      app.add_subcommand("theory", "evaluate the Zipf recall bounds");
  theory_cmd->add_option("--a", th_a, "Zipf exponent")->required();
  theory_cmd->add_option("--dnext", th_dnext, "support of (n+1)-grams")
      ->required();
  theory_cmd->add_option("--k", th_k, "top-k of interest");
  theory_cmd->add_option("--beta-eff", th_beta_eff,
                         "effective retained mass fraction");
  theory_cmd->add_option("--beta", th_beta, "retained n-gram mass fraction");
  theory_cmd->add_option("--m", th_m, "sequence count");
  theory_cmd->add_option("--total-ngrams", th_total, "total n-grams N");
  theory_cmd->add_option("--dn", th_dn, "support of n-grams");
  theory_cmd->add_option("--kprime", th_kprime, "candidates kept per pass");
  theory_cmd->add_option("--delta", th_delta, "failure probability");

  // synth
  SynthSpec synth_spec;
  std::string synth_out;
  uint64_t synth_file_bytes = 256ull << 20;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "generate a deterministic Zipf corpus");
  synth_cmd->add_option("--a", synth_spec.a, "Zipf exponent");
  synth_cmd->add_option("--ranks", synth_spec.ranks, "distinct grams D");
  synth_cmd->add_option("--gram-len", synth_spec.gram_len, "sampled gram length");
  synth_cmd->add_option("--sequences", synth_spec.sequences, "sequence count");
  synth_cmd->add_option("--seq-len", synth_spec.sequence_len,
                        "bytes per sequence");
  synth_cmd->add_option("--seed", synth_spec.seed, "generator seed");
  synth_cmd->add_option("--alphabet", synth_spec.alphabet, "alphabet size");
  synth_cmd->add_option("--out", synth_out, "output directory");
  synth_cmd->add_option("--file-size", synth_file_bytes,
                        "target bytes per corpus file");

  // compare
  std::vector<std::string> compare_files;
  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "Jaccard similarity of two result files");
  compare_cmd->add_option("files", compare_files, "two result TSV files")
      ->expected(2);

  // featurize
  CorpusFlags feat_corpus;
  std::string feat_vocab;
  std::string feat_matrix_out;
  std::string feat_vocab_out;
  size_t feat_workers = default_workers();
  CLI::App* feat_cmd = app.add_subcommand(
      "featurize", "Boolean occurrence matrix for a gram vocabulary");
  add_corpus_flags(feat_cmd, feat_corpus);
  feat_cmd->add_option("--vocab", feat_vocab, "vocabulary TSV (from count)")
      ->required();
  feat_cmd->add_option("--matrix-out", feat_matrix_out,
                       "coordinate-list output file")
      ->required();
  feat_cmd->add_option("--vocab-out", feat_vocab_out,
                       "sidecar vocab file (default <matrix-out>.vocab)");
  feat_cmd->add_option("-w,--workers", feat_workers, "worker threads");

  std::vector<char*> argv;
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.push_back("intergrams");
  for (const auto& a : args) storage.push_back(a);
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  if (count->parsed()) {
    const CountOutcome outcome = run_count_algorithm(count_flags);
    write_text(count_flags.output, topk_to_tsv(outcome.topk), out);
    return 0;
  }

  if (bench->parsed()) {
    const CountOutcome outcome = run_count_algorithm(bench_flags);
    RunReport report = make_report(bench_flags.algorithm, bench_flags.echo(),
                                   outcome.passes);
    if (!reference_file.empty()) {
      std::ifstream in(reference_file, std::ios::binary);
      if (!in) throw IoError("cannot open reference: " + reference_file);
      std::stringstream buf;
      buf << in.rdbuf();
      report.jaccard_vs_reference =
          jaccard(outcome.topk, topk_from_tsv(buf.str()));
    }
    if (!bench_flags.output.empty()) {
      write_text(bench_flags.output, topk_to_tsv(outcome.topk), out);
    }
    write_text(report_file,
               report_format == "json" ? report.to_json() + "\n"
                                       : report.to_tsv(),
               out);
    return 0;
  }

  if (theory_cmd->parsed()) {
    char line[128];
    if (th_beta_eff >= 0.0) {
      const double u = theory::u_bound(th_dnext, th_a, th_beta_eff);
      const double recall =
          theory::recall_bound(th_k, th_dnext, th_a, th_beta_eff);
      std::snprintf(line, sizeof(line), "beta_eff\t%.6f\n", th_beta_eff);
      out << line;
      std::snprintf(line, sizeof(line), "u_bound\t%.6f\n", u);
      out << line;
      std::snprintf(line, sizeof(line), "recall_bound\t%.6f\n", recall);
      out << line;
      return 0;
    }
    if (th_beta < 0.0 || th_m == 0 || th_total == 0 || th_dn == 0) {
      throw ConfigError(
          "theory: provide either --beta-eff or all of --beta --m "
          "--total-ngrams --dn (and optionally --kprime, --delta)");
    }
    theory::BoundInputs in;
    in.k = th_k;
    in.k_prime = th_kprime == 0 ? th_k : th_kprime;
    in.beta = th_beta;
    in.m = th_m;
    in.total_ngrams = th_total;
    in.delta = th_delta;
    in.support_n = th_dn;
    const auto nb = theory::noisy_bounds(in, th_a, th_dnext);
    std::snprintf(line, sizeof(line), "beta\t%.6f\n", th_beta);
    out << line;
    std::snprintf(line, sizeof(line), "beta_prime\t%.6f\n",
                  theory::beta_prime(th_beta, th_m, th_total));
    out << line;
    std::snprintf(line, sizeof(line), "delta_width\t%.6f\n",
                  theory::concentration_delta(th_delta, in.k_prime, th_dn,
                                              th_total));
    out << line;
    std::snprintf(line, sizeof(line), "beta_double_prime\t%.6f\n",
                  nb.beta_double_prime);
    out << line;
    std::snprintf(line, sizeof(line), "u_bound\t%.6f\n", nb.u);
    out << line;
    std::snprintf(line, sizeof(line), "recall_bound\t%.6f\n", nb.recall);
    out << line;
    std::snprintf(line, sizeof(line), "vacuous\t%s\n",
                  nb.vacuous ? "true" : "false");
    out << line;
    return 0;
  }

  if (synth_cmd->parsed()) {
    if (synth_out.empty()) {
      if (const char* scratch = std::getenv("INTERGRAMS_SCRATCH")) {
        synth_out = std::string(scratch) + "/synth";
      } else {
        throw ConfigError(
            "synth: --out is required (or set INTERGRAMS_SCRATCH)");
      }
    }
    generate_to_dir(synth_spec, synth_out, synth_file_bytes);
    out << "wrote corpus + manifest.json to " << synth_out << "\n";
    return 0;
  }

  if (compare_cmd->parsed()) {
    TopKList lists[2];
    for (int i = 0; i < 2; ++i) {
      std::ifstream in(compare_files[i], std::ios::binary);
      if (!in) throw IoError("cannot open result file: " + compare_files[i]);
      std::stringstream buf;
      buf << in.rdbuf();
      lists[i] = topk_from_tsv(buf.str());
    }
    char line[64];
    std::snprintf(line, sizeof(line), "%.6f\n", jaccard(lists[0], lists[1]));
    out << line;
    return 0;
  }

  if (feat_cmd->parsed()) {
    std::ifstream in(feat_vocab, std::ios::binary);
    if (!in) throw IoError("cannot open vocab file: " + feat_vocab);
    std::stringstream buf;
    buf << in.rdbuf();
    const TopKList vocab = topk_from_tsv(buf.str());

    const Corpus corpus(feat_corpus.to_spec());
    const FeatureMatrix mat = featurize(corpus, vocab, feat_workers);

    std::string coo;
    for (const auto& [row, col] : mat.entries) {
      coo += std::to_string(row);
      coo += '\t';
      coo += std::to_string(col);
      coo += '\n';
    }
    write_text(feat_matrix_out, coo, out);

    std::string vocab_path = feat_vocab_out.empty()
                                 ? feat_matrix_out + ".vocab"
                                 : feat_vocab_out;
    std::string sidecar;
    for (const auto& gc : vocab) {
      sidecar += to_hex(gc.gram);
      sidecar += '\n';
    }
    write_text(vocab_path, sidecar, out);
    err << "rows=" << mat.rows << " cols=" << mat.cols
        << " nnz=" << mat.entries.size() << "\n";
    return 0;
  }

  err << "error: no subcommand\n";
  return 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace intergrams
