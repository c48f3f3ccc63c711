// trie.hpp: immutable byte trie over the retained prefixes. Lookup of a
// window returns the prefix's rank ordinal; this sits in the innermost loop
// of every extension pass, so nodes live in one contiguous pool with 32-bit
// references, small nodes dispatch through a sorted micro-array, and wide
// nodes through a 256-entry lookup table.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "intergrams/counting.hpp"

namespace intergrams {

class PrefixTrie {
 public:
  // Empty trie: depth 0, contains nothing.
  PrefixTrie() = default;

  // Builds from equal-length grams; ordinal(gram) = its index in `prefixes`
  // (rank order, 0 = most frequent). With frequency_ordered_layout the node
  // pool is permuted so paths of more frequent prefixes come first; the
  // toggle never changes lookup results.
  static PrefixTrie build(const TopKList& prefixes,
                          bool frequency_ordered_layout = true);

  size_t depth() const { return depth_; }
  size_t size() const { return size_; }
  size_t node_count() const { return nodes_.size(); }

  // window.size() must equal depth(). Early-outs at the first byte with no
  // matching child.
  std::optional<uint32_t> lookup(std::string_view window) const {
    const uint32_t ref = lookup_ref(window);
    if (ref == kAbsent) return std::nullopt;
    return ref;
  }

  bool contains(std::string_view window) const {
    return lookup_ref(window) != kAbsent;
  }

 private:
  static constexpr uint32_t kAbsent = 0xffffffffu;
  static constexpr uint32_t kNoLut = 0xffffffffu;
  static constexpr size_t kInlineChildren = 4;

  struct Node {
    uint16_t child_count = 0;
    std::array<uint8_t, kInlineChildren> bytes{};
    std::array<uint32_t, kInlineChildren> refs{};
    uint32_t lut = kNoLut;  // element offset into luts_ when count > 4
  };

  uint32_t child_of(const Node& node, uint8_t b) const {
    if (node.lut != kNoLut) return luts_[node.lut + b];
    const size_t n = node.child_count;
    for (size_t i = 0; i < n; ++i) {
      if (node.bytes[i] == b) return node.refs[i];
    }
    return kAbsent;
  }

  uint32_t lookup_ref(std::string_view window) const;

  size_t depth_ = 0;
  size_t size_ = 0;
  std::vector<Node> nodes_;
  std::vector<uint32_t> luts_;
};

}  // namespace intergrams
