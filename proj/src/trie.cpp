#include "intergrams/trie.hpp"

#include <algorithm>
#include <stdexcept>

namespace intergrams {

namespace {

// Mutable build-side node. Children keep insertion order; since grams are
// inserted in rank order, the first touch of a node records the best
// (minimum) rank that passes through it.
struct BuildNode {
  std::vector<std::pair<uint8_t, uint32_t>> children;  // byte -> node or ordinal
  uint32_t min_rank = 0;
};

}  // namespace

PrefixTrie PrefixTrie::build(const TopKList& prefixes,
                             bool frequency_ordered_layout) {
  PrefixTrie trie;
  if (prefixes.empty()) return trie;

  const size_t depth = prefixes[0].gram.size();
  if (depth == 0) throw std::invalid_argument("trie prefixes must be non-empty");
  if (prefixes.size() > (size_t{1} << 31)) {
    throw std::invalid_argument("too many prefixes for 32-bit ordinals");
  }

  std::vector<BuildNode> build;
  build.emplace_back();  // root
  for (size_t rank = 0; rank < prefixes.size(); ++rank) {
    const std::string& gram = prefixes[rank].gram;
    if (gram.size() != depth) {
      throw std::invalid_argument("trie prefixes must share one length");
    }
    uint32_t node = 0;
    for (size_t level = 0; level < depth; ++level) {
      const uint8_t b = static_cast<uint8_t>(gram[level]);
      auto& children = build[node].children;
      auto it = std::find_if(children.begin(), children.end(),
                             [b](const auto& c) { return c.first == b; });
      if (level + 1 == depth) {
        if (it != children.end()) {
          throw std::invalid_argument("duplicate prefix in trie input");
        }
        children.emplace_back(b, static_cast<uint32_t>(rank));
      } else if (it == children.end()) {
        const uint32_t next = static_cast<uint32_t>(build.size());
        children.emplace_back(b, next);
        build.emplace_back();
        build.back().min_rank = static_cast<uint32_t>(rank);
        node = next;
      } else {
        node = it->second;
      }
    }
  }

  // Flatten in DFS preorder. With the frequency-ordered layout children are
  // visited best-rank first, so the most common prefixes' nodes end up
  // earliest and contiguous; otherwise children go in byte order.
  trie.depth_ = depth;
  trie.size_ = prefixes.size();
  trie.nodes_.reserve(build.size());

  struct Patch {
    uint32_t final_node;
    size_t slot;      // index into micro-array, or byte value for LUT nodes
    uint32_t target;  // build-node index to resolve
  };

  const auto emit = [&](auto&& self, uint32_t build_idx, size_t level) -> uint32_t {
    const BuildNode& bn = build[build_idx];
    const uint32_t me = static_cast<uint32_t>(trie.nodes_.size());
    trie.nodes_.emplace_back();

    const bool last_level = (level + 1 == depth);
    {
      Node& node = trie.nodes_[me];
      node.child_count = static_cast<uint16_t>(bn.children.size());
    }

    // Sort child visit order. At the last level the stored value is the
    // ordinal itself, which equals the rank, so min-rank ordering and
    // ordinal ordering coincide.
    std::vector<size_t> order(bn.children.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (frequency_ordered_layout) {
      std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        const uint32_t ra = last_level ? bn.children[a].second
                                       : build[bn.children[a].second].min_rank;
        const uint32_t rb = last_level ? bn.children[b].second
                                       : build[bn.children[b].second].min_rank;
        return ra < rb;
      });
    } else {
      std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return bn.children[a].first < bn.children[b].first;
      });
    }

    if (bn.children.size() > kInlineChildren) {
      const uint32_t lut = static_cast<uint32_t>(trie.luts_.size());
      trie.luts_.resize(trie.luts_.size() + 256, kAbsent);
      trie.nodes_[me].lut = lut;
      for (size_t idx : order) {
        const auto [byte, target] = bn.children[idx];
        const uint32_t ref =
            last_level ? target : self(self, target, level + 1);
        trie.luts_[lut + byte] = ref;
      }
    } else {
      // Micro-array is byte-sorted for the linear scan; emission order still
      // follows `order` so the layout permutation applies to descendants.
      std::array<std::pair<uint8_t, uint32_t>, kInlineChildren> slots{};
      size_t filled = 0;
      for (size_t idx : order) {
        const auto [byte, target] = bn.children[idx];
        const uint32_t ref =
            last_level ? target : self(self, target, level + 1);
        slots[filled++] = {byte, ref};
      }
      std::sort(slots.begin(), slots.begin() + filled,
                [](const auto& a, const auto& b) { return a.first < b.first; });
      Node& node = trie.nodes_[me];
      for (size_t i = 0; i < filled; ++i) {
        node.bytes[i] = slots[i].first;
        node.refs[i] = slots[i].second;
      }
    }
    return me;
  };
  emit(emit, 0, 0);
  return trie;
}

uint32_t PrefixTrie::lookup_ref(std::string_view window) const {
  if (size_ == 0) return kAbsent;
  if (window.size() != depth_) {
    throw std::invalid_argument("trie lookup window length != depth");
  }
  const Node* node = &nodes_[0];
  for (size_t level = 0;; ++level) {
    const uint32_t ref = child_of(*node, static_cast<uint8_t>(window[level]));
    if (ref == kAbsent) return kAbsent;
    if (level + 1 == depth_) return ref;
    node = &nodes_[ref];
  }
}

}  // namespace intergrams
