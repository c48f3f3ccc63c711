#include "intergrams/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <unordered_set>

#include <json.hpp>

namespace intergrams {

namespace {

class SynthRng {
 public:
  explicit SynthRng(uint64_t seed) : rng_(seed) {}

  uint64_t next_u64() { return rng_(); }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, bound) without modulo bias.
  uint64_t next_bounded(uint64_t bound) {
    const uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const uint64_t x = rng_();
      if (x >= threshold) return x % bound;
    }
  }

 private:
  std::mt19937_64 rng_;
};

// alphabet^n, saturating at 2^63 (treated as "effectively unbounded").
uint64_t gram_space(unsigned alphabet, size_t n) {
  uint64_t space = 1;
  for (size_t i = 0; i < n; ++i) {
    if (space > (uint64_t{1} << 63) / alphabet) return uint64_t{1} << 63;
    space *= alphabet;
  }
  return space;
}

std::string gram_from_index(uint64_t index, unsigned alphabet, size_t n) {
  std::string gram(n, '\0');
  for (size_t i = n; i-- > 0;) {
    gram[i] = static_cast<char>(index % alphabet);
    index /= alphabet;
  }
  return gram;
}

}  // namespace

void SynthSpec::validate() const {
  if (!(a > 0.0)) throw ConfigError("synth: Zipf exponent must be > 0");
  if (ranks < 1) throw ConfigError("synth: rank count must be >= 1");
  if (gram_len < 1) throw ConfigError("synth: gram length must be >= 1");
  if (alphabet < 1 || alphabet > 256) {
    throw ConfigError("synth: alphabet size must be in [1, 256]");
  }
  if (sequence_len < gram_len) {
    throw ConfigError("synth: sequence length shorter than one gram");
  }
  if (gram_space(alphabet, gram_len) < ranks) {
    throw ConfigError("synth: alphabet too small for requested distinct grams");
  }
}

std::vector<std::string> rank_grams(const SynthSpec& spec) {
  spec.validate();
  SynthRng rng(spec.seed);
  const uint64_t space = gram_space(spec.alphabet, spec.gram_len);
  std::vector<std::string> grams;
  grams.reserve(spec.ranks);

  if (space <= (uint64_t{1} << 22)) {
    // Small space: partial Fisher-Yates over the full enumeration.
    std::vector<uint64_t> ids(space);
    for (uint64_t i = 0; i < space; ++i) ids[i] = i;
    for (uint64_t i = 0; i < spec.ranks; ++i) {
      const uint64_t j = i + rng.next_bounded(space - i);
      std::swap(ids[i], ids[j]);
      grams.push_back(gram_from_index(ids[i], spec.alphabet, spec.gram_len));
    }
  } else {
    // Large space: draw-and-dedupe.
    std::unordered_set<std::string> seen;
    while (grams.size() < spec.ranks) {
      std::string gram(spec.gram_len, '\0');
      for (size_t i = 0; i < spec.gram_len; ++i) {
        gram[i] = static_cast<char>(rng.next_bounded(spec.alphabet));
      }
      if (seen.insert(gram).second) grams.push_back(std::move(gram));
    }
  }
  return grams;
}

void generate(const SynthSpec& spec,
              const std::function<void(std::string&&)>& sink) {
  spec.validate();
  const std::vector<std::string> grams = rank_grams(spec);

  // Cumulative (unnormalized) Zipf weights for inversion sampling. The
  // sequence generator is seeded separately from the table so that the table
  // stays a pure function of (seed, spec).
  std::vector<double> cumulative(spec.ranks);
  double total = 0.0;
  for (uint64_t r = 0; r < spec.ranks; ++r) {
    total += std::pow(static_cast<double>(r + 1), -spec.a);
    cumulative[r] = total;
  }

  SynthRng rng(spec.seed ^ 0x5eed5eed5eed5eedull);
  const uint64_t grams_per_seq = spec.record_len() / spec.gram_len;
  for (uint64_t s = 0; s < spec.sequences; ++s) {
    std::string seq;
    seq.reserve(spec.record_len());
    for (uint64_t g = 0; g < grams_per_seq; ++g) {
      const double x = rng.next_double() * total;
      const auto it =
          std::upper_bound(cumulative.begin(), cumulative.end(), x);
      const size_t rank = std::min<size_t>(it - cumulative.begin(),
                                           spec.ranks - 1);
      seq.append(grams[rank]);
    }
    sink(std::move(seq));
  }
}

std::vector<std::string> generate_sequences(const SynthSpec& spec) {
  std::vector<std::string> out;
  out.reserve(spec.sequences);
  generate(spec, [&](std::string&& seq) { out.push_back(std::move(seq)); });
  return out;
}

CorpusSpec generate_to_dir(const SynthSpec& spec,
                           const std::filesystem::path& dir,
                           uint64_t target_file_bytes) {
  spec.validate();
  std::filesystem::create_directories(dir);

  const uint64_t record = spec.record_len();
  const uint64_t per_file = std::max<uint64_t>(1, target_file_bytes / record);

  std::vector<std::string> file_names;
  std::ofstream out;
  uint64_t in_file = per_file;  // force open on first sequence
  uint64_t file_index = 0;
  generate(spec, [&](std::string&& seq) {
    if (in_file >= per_file) {
      char name[32];
      std::snprintf(name, sizeof(name), "corpus-%06llu.bin",
                    static_cast<unsigned long long>(file_index++));
      out.close();
      out.open(dir / name, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot create corpus file: " + (dir / name).string());
      file_names.push_back(name);
      in_file = 0;
    }
    out.write(seq.data(), static_cast<std::streamsize>(seq.size()));
    if (!out) throw IoError("write failed in: " + dir.string());
    ++in_file;
  });
  out.close();

  nlohmann::json manifest = {
      {"schema_version", 1},
      {"prng", "mt19937_64"},
      {"a", spec.a},
      {"ranks", spec.ranks},
      {"gram_len", spec.gram_len},
      {"sequences", spec.sequences},
      {"sequence_len", spec.sequence_len},
      {"record_len", record},
      {"seed", spec.seed},
      {"alphabet", spec.alphabet},
      {"files", file_names},
  };
  std::ofstream mf(dir / "manifest.json", std::ios::trunc);
  mf << manifest.dump(2) << "\n";

  CorpusSpec cs;
  for (const auto& name : file_names) cs.roots.push_back(dir / name);
  cs.chunk_size = record;
  return cs;
}

CorpusSpec generate_corpus(const SynthSpec& spec,
                           const std::filesystem::path& scratch_dir,
                           uint64_t memory_threshold) {
  if (spec.total_bytes() <= memory_threshold) {
    CorpusSpec cs;
    cs.in_memory = generate_sequences(spec);
    return cs;
  }
  return generate_to_dir(spec, scratch_dir);
}

}  // namespace intergrams
