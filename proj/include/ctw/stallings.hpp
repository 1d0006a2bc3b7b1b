#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ctw/smallcancel.hpp"
#include "ctw/words.hpp"

namespace ctw {

inline AlphabetPtr basis_alphabet(std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= std::max<std::size_t>(k, 1); ++i) names.push_back("e" + std::to_string(i));
  return make_alphabet(names);
}

// Folded core graph of a finitely generated subgroup of a free group. Each
// directed edge carries a weight in the free group on the basis letters, so
// reading a based loop also yields its expression in the given basis.
class SubgroupGraph {
 public:
  static SubgroupGraph build(const AlphabetPtr& alpha, const std::vector<Word>& basis) {
    Folder f(alpha, basis_alphabet(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (!same_alphabet(alpha, basis[i].alphabet())) throw AlphabetMismatch();
      f.add_petal(free_reduce(basis[i]), i);
    }
    f.fold();
    f.prune();
    return f.finish(basis);
  }

  const AlphabetPtr& alphabet() const { return alpha_; }
  const AlphabetPtr& basis_letters() const { return basis_alpha_; }
  const std::vector<Word>& basis() const { return basis_; }
  std::size_t vertex_count() const { return nverts_; }
  std::size_t edge_count() const { return nedges_; }
  std::size_t rank() const { return nedges_ + 1 - nverts_; }
  static constexpr int base() { return 0; }

  int step(int v, int code) const { return next_[std::size_t(v) * width_ + std::size_t(code)]; }
  const Word& weight(int v, int code) const { return weight_[std::size_t(v) * width_ + std::size_t(code)]; }

  // End vertex of reading w from the base, or -1.
  int read(const Word& w) const {
    check(w);
    int v = base();
    for (const auto& r : w.runs())
      for (std::uint64_t i = 0; i < r.count; ++i) {
        v = step(v, r.letter.code());
        if (v < 0) return -1;
      }
    return v;
  }

  bool contains(const Word& w) const { return read(free_reduce(w)) == base(); }

  Word express_in_basis(const Word& w) const {
    check(w);
    auto red = free_reduce(w);
    FreeReducer acc(basis_alpha_);
    int v = base();
    for (const auto& r : red.runs())
      for (std::uint64_t i = 0; i < r.count; ++i) {
        int c = r.letter.code();
        int nv = step(v, c);
        if (nv < 0) throw NotMember("word is not in the subgroup");
        acc.push(weight(v, c));
        v = nv;
      }
    if (v != base()) throw NotMember("word is not in the subgroup");
    return acc.take();
  }

  // Edge list after breadth-first relabelling from the base with fixed letter order.
  std::string canonical_form() const {
    std::vector<int> label(nverts_, -1);
    std::deque<int> q{base()};
    label[base()] = 0;
    int next = 1;
    std::vector<std::tuple<int, int, int>> edges;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (std::size_t c = 0; c < width_; ++c) {
        int u = step(v, int(c));
        if (u < 0) continue;
        if (label[u] < 0) {
          label[u] = next++;
          q.push_back(u);
        }
        if (c % 2 == 0) edges.emplace_back(label[v], int(c / 2), label[u]);
      }
    }
    std::sort(edges.begin(), edges.end());
    std::ostringstream os;
    os << nverts_ << ':';
    for (auto [a, g, b] : edges) os << ' ' << a << '-' << alpha_->name(Generator(g)) << "->" << b;
    return os.str();
  }

 private:
  struct Edge {
    int from, to;
    Generator gen;
    Word weight;  // read from `from` to `to`
    bool alive = true;
  };

  class Folder {
   public:
    Folder(AlphabetPtr alpha, AlphabetPtr balpha) : alpha_(std::move(alpha)), balpha_(std::move(balpha)) {
      new_vertex();
    }

    void add_petal(const Word& u, std::size_t i) {
      if (u.empty()) return;
      auto codes = u.codes();
      int prev = 0;
      for (std::size_t k = 0; k < codes.size(); ++k) {
        int nxt = k + 1 == codes.size() ? 0 : new_vertex();
        Word w(balpha_);
        if (k == 0) w.push({Generator(i), false});
        Letter l = Letter::from_code(codes[k]);
        if (!l.inverse)
          add_edge(prev, nxt, l.gen, w);
        else
          add_edge(nxt, prev, l.gen, invert(w));
        prev = nxt;
      }
    }

    void fold() {
      std::vector<int> work;
      for (int v = 0; v < int(inc_.size()); ++v) work.push_back(v);
      while (!work.empty()) {
        int v = work.back();
        work.pop_back();
        if (dead_[v]) continue;
        std::map<int, std::pair<int, Word>> seen;  // code -> (edge, weight read from v)
        bool folded = false;
        for (int e : inc_[v]) {
          if (!edges_[e].alive) continue;
          for (int side = 0; side < 2 && !folded; ++side) {
            const Edge& E = edges_[e];
            if (side == 0 && E.from != v) continue;
            if (side == 1 && E.to != v) continue;
            int code = 2 * E.gen + side;
            Word w = side == 0 ? E.weight : invert(E.weight);
            auto it = seen.find(code);
            if (it == seen.end()) {
              seen.emplace(code, std::make_pair(e, w));
              continue;
            }
            if (it->second.first == e) continue;
            int survivor = fold_pair(v, code, it->second.first, it->second.second, e, w);
            work.push_back(survivor);
            if (!dead_[v]) work.push_back(v);
            folded = true;
          }
          if (folded) break;
        }
      }
    }

    void prune() {
      std::vector<int> deg(inc_.size(), 0);
      for (const auto& E : edges_)
        if (E.alive) {
          ++deg[E.from];
          ++deg[E.to];
        }
      std::vector<int> work;
      for (int v = 1; v < int(inc_.size()); ++v)
        if (!dead_[v] && deg[v] <= 1) work.push_back(v);
      while (!work.empty()) {
        int v = work.back();
        work.pop_back();
        if (dead_[v] || v == 0 || deg[v] > 1) continue;
        for (int e : inc_[v]) {
          if (!edges_[e].alive) continue;
          edges_[e].alive = false;
          int u = edges_[e].from == v ? edges_[e].to : edges_[e].from;
          --deg[v];
          --deg[u];
          if (u != 0 && deg[u] <= 1) work.push_back(u);
        }
        dead_[v] = true;
      }
    }

    SubgroupGraph finish(const std::vector<Word>& basis) {
      SubgroupGraph g;
      g.alpha_ = alpha_;
      g.basis_alpha_ = balpha_;
      g.basis_ = basis;
      g.width_ = 2 * alpha_->size();
      std::vector<int> id(inc_.size(), -1);
      int n = 0;
      for (int v = 0; v < int(inc_.size()); ++v)
        if (!dead_[v]) id[v] = n++;
      g.nverts_ = std::size_t(n);
      g.next_.assign(g.nverts_ * g.width_, -1);
      g.weight_.assign(g.nverts_ * g.width_, Word(balpha_));
      for (const auto& E : edges_) {
        if (!E.alive) continue;
        ++g.nedges_;
        int a = id[E.from], b = id[E.to];
        std::size_t c = 2 * E.gen;
        g.next_[std::size_t(a) * g.width_ + c] = b;
        g.weight_[std::size_t(a) * g.width_ + c] = E.weight;
        g.next_[std::size_t(b) * g.width_ + c + 1] = a;
        g.weight_[std::size_t(b) * g.width_ + c + 1] = invert(E.weight);
      }
      return g;
    }

   private:
    int new_vertex() {
      inc_.emplace_back();
      dead_.push_back(false);
      return int(inc_.size()) - 1;
    }

    void add_edge(int from, int to, Generator g, Word w) {
      edges_.push_back({from, to, g, std::move(w)});
      int e = int(edges_.size()) - 1;
      inc_[from].push_back(e);
      if (to != from) inc_[to].push_back(e);
    }

    // Two half-edges at v with the same code; returns the surviving far vertex.
    int fold_pair(int v, int code, int e1, const Word& w1, int e2, const Word& w2) {
      int x = far_end(e1, v, code), y = far_end(e2, v, code);
      if (x == y) {
        // Parallel edges: dropping one loses only a relation among basis letters.
        edges_[e2].alive = false;
        return x;
      }
      int e_keep = e1, e_drop = e2;
      Word wk = w1, wd = w2;
      if (y == 0) {
        std::swap(x, y);
        std::swap(e_keep, e_drop);
        std::swap(wk, wd);
      }
      // Merge y into x; re-weight y's edges so weights of paths from the base are unchanged.
      Word delta = concat(invert(wk), wd);
      Word delta_inv = invert(delta);
      for (int e : inc_[y]) {
        Edge& E = edges_[e];
        if (!E.alive) continue;
        if (E.from == y) E.weight = concat(delta, E.weight);
        if (E.to == y) E.weight = concat(E.weight, delta_inv);
        if (E.from == y) E.from = x;
        if (E.to == y) E.to = x;
        if (e != e_drop) inc_[x].push_back(e);
      }
      edges_[e_drop].alive = false;
      inc_[y].clear();
      dead_[y] = true;
      dedupe(x);
      (void)code;
      return x;
    }

    int far_end(int e, int v, int code) const {
      const Edge& E = edges_[e];
      return (code % 2 == 0) ? (E.from == v ? E.to : E.from) : (E.to == v ? E.from : E.to);
    }

    void dedupe(int x) {
      auto& l = inc_[x];
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
      l.erase(std::remove_if(l.begin(), l.end(), [&](int e) { return !edges_[e].alive; }), l.end());
    }

    AlphabetPtr alpha_, balpha_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> inc_;
    std::vector<bool> dead_;
  };

  void check(const Word& w) const {
    if (!same_alphabet(alpha_, w.alphabet())) throw AlphabetMismatch();
  }

  AlphabetPtr alpha_, basis_alpha_;
  std::vector<Word> basis_;
  std::size_t width_ = 0, nverts_ = 0, nedges_ = 0;
  std::vector<int> next_;
  std::vector<Word> weight_;
};

inline SubgroupGraph build_subgroup_graph(const AlphabetPtr& alpha, const std::vector<Word>& basis) {
  return SubgroupGraph::build(alpha, basis);
}

struct NielsenReport {
  bool n0 = true, n1 = true, n2 = true;
  std::string first_violation;         // "N0", "N1", "N2" or empty
  std::vector<Word> violating;         // the offending v1[, v2[, v3]]
  std::size_t set_size = 0;

  bool passes() const { return n0 && n1 && n2; }
};

// N0-N2 over all v1, v2, v3 in U^{+-1}.
inline NielsenReport nielsen_check(const std::vector<Word>& U) {
  if (U.empty()) throw InvalidParameter("empty word set");
  NielsenReport rep;
  std::vector<Word> V;
  for (const auto& u : U) {
    V.push_back(free_reduce(u));
    V.push_back(invert(V.back()));
  }
  rep.set_size = V.size();
  auto flag = [&](bool& cond, const char* name, std::vector<Word> ws) {
    if (cond) {
      cond = false;
      if (rep.first_violation.empty()) {
        rep.first_violation = name;
        rep.violating = std::move(ws);
      }
    }
  };
  for (const auto& v : V)
    if (v.empty()) flag(rep.n0, "N0", {v});
  std::vector<std::vector<Word>> prod(V.size(), std::vector<Word>(V.size()));
  for (std::size_t i = 0; i < V.size(); ++i)
    for (std::size_t j = 0; j < V.size(); ++j) {
      prod[i][j] = concat(V[i], V[j]);
      const auto& p = prod[i][j];
      if (p.empty()) continue;
      if (p.length() < V[i].length() || p.length() < V[j].length()) flag(rep.n1, "N1", {V[i], V[j]});
    }
  for (std::size_t i = 0; i < V.size(); ++i)
    for (std::size_t j = 0; j < V.size(); ++j) {
      if (prod[i][j].empty()) continue;
      for (std::size_t k = 0; k < V.size(); ++k) {
        if (prod[j][k].empty()) continue;
        auto p = concat(prod[i][j], V[k]);
        auto lhs = static_cast<long long>(p.length());
        auto rhs = static_cast<long long>(V[i].length()) - static_cast<long long>(V[j].length()) +
                   static_cast<long long>(V[k].length());
        if (!(lhs > rhs)) flag(rep.n2, "N2", {V[i], V[j], V[k]});
      }
    }
  return rep;
}

// C'(1/2) among the symmetrized words of U. Only defined for nonempty
// cyclically reduced words; anything else is reported as false.
inline bool cprime_half_sufficient(const std::vector<Word>& U) {
  if (U.empty()) throw InvalidParameter("empty word set");
  for (const auto& u : U)
    if (u.empty() || !is_cyclically_reduced(u)) return false;
  return check_cprime(Presentation(U.front().alphabet(), U), Fraction{1, 2}).holds;
}

}  // namespace ctw
