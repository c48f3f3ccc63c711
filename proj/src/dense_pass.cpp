#include "intergrams/dense_pass.hpp"

namespace intergrams {

size_t dense_capacity(size_t n) {
  if (n < 1 || n > kMaxDenseGramLen) {
    throw ConfigError("dense pass supports gram lengths 1..3");
  }
  return size_t{1} << (8 * n);
}

std::string dense_gram(size_t id, size_t n) {
  std::string gram(n, '\0');
  for (size_t i = n; i-- > 0;) {
    gram[i] = static_cast<char>(id & 0xff);
    id >>= 8;
  }
  return gram;
}

CountTable count_dense(const Corpus& corpus, size_t n,
                       const CountingOptions& opt) {
  const size_t capacity = dense_capacity(n);
  const size_t mask = capacity - 1;
  CountTable table(capacity);
  count_sequences(corpus, table, opt, [n, mask](const Sequence& seq, auto&& sink) {
    const auto& bytes = seq.bytes;
    if (bytes.size() < n) return;
    size_t id = 0;
    for (size_t i = 0; i + 1 < n; ++i) {
      id = (id << 8) | static_cast<unsigned char>(bytes[i]);
    }
    for (size_t i = n - 1; i < bytes.size(); ++i) {
      id = ((id << 8) | static_cast<unsigned char>(bytes[i])) & mask;
      sink(id);
    }
  });
  return table;
}

TopKList topk_dense(const CountTable& table, size_t n, size_t k) {
  return top_k(table, k, [n](size_t id) { return dense_gram(id, n); });
}

}  // namespace intergrams
