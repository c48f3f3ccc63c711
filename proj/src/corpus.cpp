#include "intergrams/corpus.hpp"

#include <algorithm>
#include <fstream>

namespace intergrams {

namespace fs = std::filesystem;

namespace {
constexpr size_t kReadBlock = 1 << 20;

void collect_regular_files(const fs::path& root, bool recurse,
                           std::vector<fs::path>& out) {
  std::error_code ec;
  if (fs::is_regular_file(root, ec)) {
    out.push_back(root);
    return;
  }
  if (fs::is_directory(root, ec)) {
    if (recurse) {
      for (fs::recursive_directory_iterator it(root, ec), end; it != end;
           it.increment(ec)) {
        if (ec) throw IoError("cannot traverse directory: " + root.string());
        if (it->is_regular_file()) out.push_back(it->path());
      }
    } else {
      for (fs::directory_iterator it(root, ec), end; it != end;
           it.increment(ec)) {
        if (ec) throw IoError("cannot traverse directory: " + root.string());
        if (it->is_regular_file()) out.push_back(it->path());
      }
    }
    return;
  }
  throw ConfigError("corpus root does not exist: " + root.string());
}
}  // namespace

Corpus::Corpus(CorpusSpec spec) : spec_(std::move(spec)) {
  if (spec_.in_memory.has_value()) return;
  if (spec_.roots.empty()) {
    throw ConfigError("corpus spec has no roots and no in-memory data");
  }
  for (const auto& root : spec_.roots) {
    collect_regular_files(root, spec_.recurse, files_);
  }
  std::sort(files_.begin(), files_.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.native() < b.native();
            });
  files_.erase(std::unique(files_.begin(), files_.end()), files_.end());
}

void Corpus::walk_file(const fs::path& path, uint64_t& next_id,
                       const std::function<void(const Sequence&)>& fn) const {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());

  Sequence seq;
  if (spec_.line_mode) {
    // Records are the '\n'-separated segments; interior empty segments are
    // legal zero-length sequences.
    std::string carry;
    std::string block(kReadBlock, '\0');
    for (;;) {
      in.read(block.data(), static_cast<std::streamsize>(block.size()));
      const size_t got = static_cast<size_t>(in.gcount());
      if (in.bad()) throw IoError("read error: " + path.string());
      size_t start = 0;
      for (size_t i = 0; i < got; ++i) {
        if (block[i] == '\n') {
          seq.id = next_id++;
          seq.bytes = std::move(carry);
          seq.bytes.append(block, start, i - start);
          carry.clear();
          fn(seq);
          start = i + 1;
        }
      }
      carry.append(block, start, got - start);
      if (got < block.size()) break;
    }
    if (!carry.empty()) {
      seq.id = next_id++;
      seq.bytes = std::move(carry);
      fn(seq);
    }
  } else if (spec_.chunk_size > 0) {
    std::string chunk;
    for (;;) {
      chunk.resize(spec_.chunk_size);
      in.read(chunk.data(), static_cast<std::streamsize>(spec_.chunk_size));
      const size_t got = static_cast<size_t>(in.gcount());
      if (in.bad()) throw IoError("read error: " + path.string());
      if (got == 0) break;
      chunk.resize(got);
      seq.id = next_id++;
      seq.bytes = std::move(chunk);
      fn(seq);
      chunk.clear();
      if (got < spec_.chunk_size) break;
    }
  } else {
    // Whole file as a single sequence, read in blocks.
    std::string data;
    std::string block(kReadBlock, '\0');
    for (;;) {
      in.read(block.data(), static_cast<std::streamsize>(block.size()));
      const size_t got = static_cast<size_t>(in.gcount());
      if (in.bad()) throw IoError("read error: " + path.string());
      data.append(block, 0, got);
      if (got < block.size()) break;
    }
    seq.id = next_id++;
    seq.bytes = std::move(data);
    fn(seq);
  }
}

void Corpus::for_each(const std::function<void(const Sequence&)>& fn) const {
  uint64_t next_id = 0;
  if (spec_.in_memory.has_value()) {
    Sequence seq;
    for (const auto& bytes : *spec_.in_memory) {
      seq.id = next_id++;
      seq.bytes = bytes;
      fn(seq);
    }
    return;
  }
  for (const auto& path : files_) {
    walk_file(path, next_id, fn);
  }
}

CorpusStats Corpus::stats(size_t n) const {
  if (n < 1) throw ConfigError("gram length must be >= 1");
  CorpusStats st;
  for_each([&](const Sequence& seq) {
    ++st.sequences;
    st.bytes_total += seq.bytes.size();
    if (seq.bytes.size() + 1 > n) st.ngrams += seq.bytes.size() - n + 1;
  });
  return st;
}

Corpus make_memory_corpus(std::vector<std::string> sequences) {
  CorpusSpec spec;
  spec.in_memory = std::move(sequences);
  return Corpus(std::move(spec));
}

}  // namespace intergrams
