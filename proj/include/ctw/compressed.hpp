#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ctw/words.hpp"

namespace ctw::slp {

using Length = unsigned __int128;
using NodeId = std::uint32_t;
inline constexpr NodeId kEmpty = 0;

inline std::string length_string(Length n) {
  if (n == 0) return "0";
  std::string s;
  while (n > 0) {
    s.insert(s.begin(), char('0' + int(n % 10)));
    n /= 10;
  }
  return s;
}

// Arena of freely reduced words kept as a hash-consed straight-line program.
// Equality of factors is tested with two polynomial hashes modulo 2^61-1, so
// common-prefix queries cost O(depth * log length) instead of O(length).
class Store {
 public:
  Store() {
    nodes_.push_back(Node{});  // empty word
    nodes_[0].pw = {1, 1};
  }

  std::size_t node_count() const { return nodes_.size(); }
  Length length(NodeId n) const { return nodes_[n].len; }
  std::uint32_t depth(NodeId n) const { return nodes_[n].depth; }

  NodeId letter(int code) {
    auto it = letters_.find(code);
    if (it != letters_.end()) return it->second;
    Node n;
    n.code = code;
    n.len = 1;
    n.depth = 1;
    for (int k = 0; k < 2; ++k) {
      n.h[k] = std::uint64_t(code) + 1;
      n.pw[k] = kBase[k];
    }
    nodes_.push_back(n);
    NodeId id = NodeId(nodes_.size() - 1);
    letters_.emplace(code, id);
    return id;
  }

  // Concatenation without reduction.
  NodeId concat(NodeId a, NodeId b) {
    if (a == kEmpty) return b;
    if (b == kEmpty) return a;
    std::uint64_t key = (std::uint64_t(a) << 32) | b;
    auto it = concats_.find(key);
    if (it != concats_.end()) return it->second;
    const Node &A = nodes_[a], &B = nodes_[b];
    Node n;
    n.left = a;
    n.right = b;
    n.len = A.len + B.len;
    n.depth = std::max(A.depth, B.depth) + 1;
    for (int k = 0; k < 2; ++k) {
      n.h[k] = add(A.h[k], mul(A.pw[k], B.h[k]));
      n.pw[k] = mul(A.pw[k], B.pw[k]);
    }
    nodes_.push_back(n);
    NodeId id = NodeId(nodes_.size() - 1);
    concats_.emplace(key, id);
    return id;
  }

  NodeId inverse(NodeId n) {
    if (n == kEmpty) return kEmpty;
    auto it = inverses_.find(n);
    if (it != inverses_.end()) return it->second;
    NodeId r;
    if (nodes_[n].code >= 0) {
      r = letter(inverse_code(nodes_[n].code));
    } else {
      NodeId L = nodes_[n].left, R = nodes_[n].right;
      NodeId iR = inverse(R);
      NodeId iL = inverse(L);
      r = concat(iR, iL);
    }
    inverses_.emplace(n, r);
    inverses_.emplace(r, n);
    return r;
  }

  // Factor [from, to) of n.
  NodeId slice(NodeId n, Length from, Length to) {
    if (from >= to) return kEmpty;
    if (from == 0 && to == nodes_[n].len) return n;
    NodeId L = nodes_[n].left, R = nodes_[n].right;
    Length ll = nodes_[L].len;
    if (to <= ll) return slice(L, from, to);
    if (from >= ll) return slice(R, from - ll, to - ll);
    NodeId a = slice(L, from, ll);
    NodeId b = slice(R, 0, to - ll);
    return concat(a, b);
  }

  int letter_at(NodeId n, Length i) const {
    for (;;) {
      const Node& N = nodes_[n];
      if (N.code >= 0) return N.code;
      Length ll = nodes_[N.left].len;
      if (i < ll) {
        n = N.left;
      } else {
        i -= ll;
        n = N.right;
      }
    }
  }

  bool prefix_equal(NodeId a, NodeId b, Length k) const { return prefix_hash(a, k) == prefix_hash(b, k); }

  Length lcp(NodeId a, NodeId b) const {
    Length m = std::min(nodes_[a].len, nodes_[b].len);
    if (m == 0 || letter_at(a, 0) != letter_at(b, 0)) return 0;
    if (a == b) return m;
    Length lo = 1, step = 1;  // prefix of length lo agrees
    Length hi = m + 1;        // prefix of length hi disagrees (or is out of range)
    for (;;) {
      Length probe = lo + step;
      if (probe > m) break;
      if (!prefix_equal(a, b, probe)) {
        hi = probe;
        break;
      }
      lo = probe;
      step *= 2;
    }
    while (hi - lo > 1) {
      Length mid = lo + (hi - lo) / 2;
      if (prefix_equal(a, b, mid)) lo = mid; else hi = mid;
    }
    return lo;
  }

  // Free reduction of a*b for reduced a and b.
  NodeId reduce_concat(NodeId a, NodeId b) {
    if (a == kEmpty) return b;
    if (b == kEmpty) return a;
    Length k = lcp(inverse(a), b);
    NodeId x = slice(a, 0, nodes_[a].len - k);
    NodeId y = slice(b, k, nodes_[b].len);
    return concat(x, y);
  }

  NodeId power(NodeId n, std::uint64_t k) {
    NodeId result = kEmpty, base = n;
    while (k > 0) {
      if (k & 1) result = concat(result, base);
      k >>= 1;
      if (k) base = concat(base, base);
    }
    return result;
  }

  // Balanced program for a word given by runs; the word is freely reduced first.
  NodeId from_word(const Word& w) {
    std::vector<NodeId> parts;
    Word reduced = free_reduce(w);
    for (const auto& r : reduced.runs()) parts.push_back(power(letter(r.letter.code()), r.count));
    return balanced(parts, 0, parts.size());
  }

  NodeId from_codes(const std::vector<int>& codes) {
    std::vector<NodeId> parts;
    for (int c : codes) parts.push_back(letter(c));
    return balanced(parts, 0, parts.size());
  }

  std::vector<int> expand(NodeId n, std::uint64_t cap) const {
    if (nodes_[n].len > cap)
      throw LengthCapExceeded("compressed word of length " + length_string(nodes_[n].len) + " exceeds cap " +
                              std::to_string(cap));
    std::vector<int> out;
    out.reserve(std::size_t(nodes_[n].len));
    std::vector<NodeId> st{n};
    while (!st.empty()) {
      NodeId x = st.back();
      st.pop_back();
      if (x == kEmpty) continue;
      const Node& N = nodes_[x];
      if (N.code >= 0) {
        out.push_back(N.code);
      } else {
        st.push_back(N.right);
        st.push_back(N.left);
      }
    }
    return out;
  }

  Word to_word(NodeId n, const AlphabetPtr& alpha) const {
    return Word::from_codes(alpha, expand(n, length_cap()));
  }

  bool equal(NodeId a, NodeId b) const {
    return nodes_[a].len == nodes_[b].len && nodes_[a].h == nodes_[b].h;
  }

  // Image of n under the morphism letter code -> images[code]; images of
  // inverse codes must be the inverses of the positive ones.
  NodeId map(NodeId n, const std::vector<NodeId>& images, std::unordered_map<NodeId, NodeId>& memo) {
    if (n == kEmpty) return kEmpty;
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    NodeId r;
    const Node N = nodes_[n];
    if (N.code >= 0) {
      r = images.at(std::size_t(N.code));
    } else {
      NodeId a = map(N.left, images, memo);
      NodeId b = map(N.right, images, memo);
      r = reduce_concat(a, b);
    }
    memo.emplace(n, r);
    return r;
  }

  bool is_letter(NodeId n) const { return nodes_[n].code >= 0; }
  int code(NodeId n) const { return nodes_[n].code; }
  NodeId left(NodeId n) const { return nodes_[n].left; }
  NodeId right(NodeId n) const { return nodes_[n].right; }

 private:
  static constexpr std::uint64_t kMod = (std::uint64_t(1) << 61) - 1;
  static constexpr std::uint64_t kBase[2] = {0x1f3a5c7e9b2d4f61ULL % kMod, 0x2b7e151628aed2a6ULL % kMod};

  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 p = (unsigned __int128)a * b;
    std::uint64_t lo = std::uint64_t(p & kMod), hi = std::uint64_t(p >> 61);
    std::uint64_t s = lo + hi;
    return s >= kMod ? s - kMod : s;
  }
  static std::uint64_t add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b;
    return s >= kMod ? s - kMod : s;
  }

  struct Node {
    NodeId left = kEmpty, right = kEmpty;
    int code = -1;
    std::uint32_t depth = 0;
    Length len = 0;
    std::array<std::uint64_t, 2> h{0, 0};
    std::array<std::uint64_t, 2> pw{1, 1};
  };

  std::array<std::uint64_t, 2> prefix_hash(NodeId n, Length k) const {
    std::array<std::uint64_t, 2> acc{0, 0}, scale{1, 1};
    while (k > 0) {
      const Node& N = nodes_[n];
      if (k == N.len) {
        for (int i = 0; i < 2; ++i) acc[i] = add(acc[i], mul(scale[i], N.h[i]));
        break;
      }
      const Node& L = nodes_[N.left];
      if (k <= L.len) {
        n = N.left;
        continue;
      }
      for (int i = 0; i < 2; ++i) {
        acc[i] = add(acc[i], mul(scale[i], L.h[i]));
        scale[i] = mul(scale[i], L.pw[i]);
      }
      k -= L.len;
      n = N.right;
    }
    return acc;
  }

  NodeId balanced(const std::vector<NodeId>& parts, std::size_t lo, std::size_t hi) {
    if (lo >= hi) return kEmpty;
    if (hi - lo == 1) return parts[lo];
    std::size_t mid = lo + (hi - lo) / 2;
    NodeId a = balanced(parts, lo, mid);
    NodeId b = balanced(parts, mid, hi);
    return concat(a, b);
  }

  std::vector<Node> nodes_;
  std::unordered_map<int, NodeId> letters_;
  std::unordered_map<std::uint64_t, NodeId> concats_;
  std::unordered_map<NodeId, NodeId> inverses_;
};

// Reads compressed reduced words in a deterministic automaton exposing
// step(v, code) -> v' or -1. Results are memoised per (node, state).
template <class Graph>
class Reader {
 public:
  Reader(const Store& store, const Graph& g) : store_(store), g_(g) {}

  int read(NodeId n, int v) {
    if (n == kEmpty || v < 0) return v;
    if (store_.is_letter(n)) return g_.step(v, store_.code(n));
    std::uint64_t key = (std::uint64_t(n) << 32) | std::uint32_t(v);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    int mid = read(store_.left(n), v);
    int end = mid < 0 ? -1 : read(store_.right(n), mid);
    memo_.emplace(key, end);
    return end;
  }

 private:
  const Store& store_;
  const Graph& g_;
  std::unordered_map<std::uint64_t, int> memo_;
};

// As Reader, also multiplying edge weights (words over basis letters) into a
// compressed word in the same store.
template <class Graph>
class WeightedReader {
 public:
  WeightedReader(Store& store, const Graph& g) : store_(store), g_(g) {}

  std::pair<int, NodeId> read(NodeId n, int v) {
    if (n == kEmpty || v < 0) return {v, kEmpty};
    if (store_.is_letter(n)) {
      int c = store_.code(n);
      int nv = g_.step(v, c);
      if (nv < 0) return {-1, kEmpty};
      return {nv, weight_node(v, c)};
    }
    std::uint64_t key = (std::uint64_t(n) << 32) | std::uint32_t(v);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    auto [mid, wl] = read(store_.left(n), v);
    std::pair<int, NodeId> res{-1, kEmpty};
    if (mid >= 0) {
      auto [end, wr] = read(store_.right(n), mid);
      if (end >= 0) res = {end, store_.reduce_concat(wl, wr)};
    }
    memo_.emplace(key, res);
    return res;
  }

 private:
  NodeId weight_node(int v, int c) {
    std::uint64_t key = (std::uint64_t(std::uint32_t(v)) << 32) | std::uint32_t(c);
    auto it = weights_.find(key);
    if (it != weights_.end()) return it->second;
    NodeId id = store_.from_word(g_.weight(v, c));
    weights_.emplace(key, id);
    return id;
  }

  Store& store_;
  const Graph& g_;
  std::unordered_map<std::uint64_t, std::pair<int, NodeId>> memo_;
  std::unordered_map<std::uint64_t, NodeId> weights_;
};

}  // namespace ctw::slp
