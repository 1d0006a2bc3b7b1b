#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctw/compressed.hpp"
#include "ctw/random.hpp"
#include "ctw/rips.hpp"
#include "ctw/smallcancel.hpp"
#include "ctw/stallings.hpp"
#include "ctw/words.hpp"

namespace ctw {

// One HNN level t^-1 b t = phi(b) whose associated subgroups lie in the free
// group on the non-stable letters.
struct HNNLevel {
  std::string stable_name;
  Generator stable = 0;
  std::vector<Word> b_basis, image_basis;
  std::shared_ptr<const SubgroupGraph> b_graph, image_graph;
  NielsenReport image_certificate;
};

inline HNNLevel make_level(const AlphabetPtr& alpha, const std::string& stable, std::vector<Word> b_basis,
                           std::vector<Word> image_basis) {
  if (b_basis.size() != image_basis.size()) throw InvalidParameter("basis and image sizes differ");
  HNNLevel L;
  L.stable_name = stable;
  L.stable = alpha->at(stable);
  for (const auto* ws : {&b_basis, &image_basis})
    for (const auto& w : *ws) {
      if (!same_alphabet(alpha, w.alphabet())) throw AlphabetMismatch();
      for (const auto& r : w.runs())
        if (r.letter.gen == L.stable) throw InvalidParameter("associated subgroup contains the stable letter");
    }
  L.image_certificate = nielsen_check(image_basis);
  L.b_graph = std::make_shared<const SubgroupGraph>(build_subgroup_graph(alpha, b_basis));
  L.image_graph = std::make_shared<const SubgroupGraph>(build_subgroup_graph(alpha, image_basis));
  // Core graph rank equal to the basis size means the basis is free, even
  // where the Nielsen conditions fail (small r).
  if (L.b_graph->rank() != b_basis.size() || L.image_graph->rank() != image_basis.size())
    throw InvalidParameter("associated subgroup basis is not free");
  L.b_basis = std::move(b_basis);
  L.image_basis = std::move(image_basis);
  return L;
}

struct TowerWord {
  std::vector<Word> segments;  // stables.size() + 1 entries
  std::vector<Letter> stables;

  std::size_t stable_count() const { return stables.size(); }
};

inline TowerWord split_tower(const Word& w, const std::vector<Generator>& stable_gens) {
  TowerWord t;
  t.segments.emplace_back(w.alphabet());
  for (const auto& r : w.runs()) {
    bool is_stable = std::find(stable_gens.begin(), stable_gens.end(), r.letter.gen) != stable_gens.end();
    if (!is_stable) {
      t.segments.back().push(r.letter, r.count);
      continue;
    }
    for (std::uint64_t i = 0; i < r.count; ++i) {
      t.stables.push_back(r.letter);
      t.segments.emplace_back(w.alphabet());
    }
  }
  return t;
}

inline Word join_tower(const TowerWord& t) {
  Word w(t.segments.front().alphabet());
  for (std::size_t i = 0; i < t.segments.size(); ++i) {
    w.append(t.segments[i]);
    if (i < t.stables.size()) w.push(t.stables[i]);
  }
  return w;
}

inline std::string to_string(const TowerWord& t) {
  Word w = join_tower(t);
  return to_string(w);
}

enum class PinchOrder { InnermostLeftmost, Random };

struct BrittonResult {
  std::vector<Letter> stables;
  std::vector<slp::Length> segment_lengths;
  std::optional<TowerWord> form;  // present when every segment fits under the length cap
  std::size_t pinches = 0;
  std::size_t store_nodes = 0;

  std::size_t stable_count() const { return stables.size(); }
  bool trivial() const { return stables.empty() && segment_lengths.size() == 1 && segment_lengths[0] == 0; }
};

// Britton reduction over a tower of HNN levels sharing one free base group.
// Segments between stable letters are compressed words, so the expansions
// produced by nested pinches are never written out.
class BrittonTower {
 public:
  BrittonTower(AlphabetPtr alpha, std::vector<HNNLevel> levels)
      : alpha_(std::move(alpha)), levels_(std::move(levels)), level_of_(alpha_->size(), -1) {
    for (std::size_t i = 0; i < levels_.size(); ++i) level_of_[levels_[i].stable] = int(i);
  }

  const AlphabetPtr& alphabet() const { return alpha_; }
  const std::vector<HNNLevel>& levels() const { return levels_; }

  std::vector<Generator> stable_generators() const {
    std::vector<Generator> g;
    for (const auto& L : levels_) g.push_back(L.stable);
    return g;
  }

  BrittonResult reduce(const Word& w, PinchOrder order = PinchOrder::InnermostLeftmost, std::uint64_t seed = 0,
                       bool materialize = true) const {
    if (!same_alphabet(alpha_, w.alphabet())) throw AlphabetMismatch();
    Session s(*this);
    if (order == PinchOrder::InnermostLeftmost)
      s.run_stack(w);
    else
      s.run_random(w, seed);
    return s.result(materialize);
  }

  bool is_trivial(const Word& w) const { return reduce(w, PinchOrder::InnermostLeftmost, 0, false).trivial(); }

 private:
  struct Tok {
    bool stable = false;
    int level = -1;
    bool inv = false;
    slp::NodeId seg = slp::kEmpty;
  };

  class Session {
   public:
    explicit Session(const BrittonTower& t) : t_(t) {
      for (const auto& L : t.levels_) {
        LevelState st;
        st.b_reader = std::make_unique<slp::Reader<SubgroupGraph>>(store_, *L.b_graph);
        st.img_reader = std::make_unique<slp::Reader<SubgroupGraph>>(store_, *L.image_graph);
        st.b_weights = std::make_unique<slp::WeightedReader<SubgroupGraph>>(store_, *L.b_graph);
        st.img_weights = std::make_unique<slp::WeightedReader<SubgroupGraph>>(store_, *L.image_graph);
        for (std::size_t i = 0; i < L.b_basis.size(); ++i) {
          auto im = store_.from_word(L.image_basis[i]);
          auto pre = store_.from_word(L.b_basis[i]);
          st.phi.push_back(im);
          st.phi.push_back(store_.inverse(im));
          st.phi_inv.push_back(pre);
          st.phi_inv.push_back(store_.inverse(pre));
        }
        levels_.push_back(std::move(st));
      }
      toks_.push_back(Tok{});
    }

    void run_stack(const Word& w) {
      for (const auto& r : w.runs()) {
        int lv = t_.level_of_[r.letter.gen];
        if (lv < 0) {
          auto piece = store_.power(store_.letter(r.letter.code()), r.count);
          toks_.back().seg = store_.reduce_concat(toks_.back().seg, piece);
          continue;
        }
        for (std::uint64_t i = 0; i < r.count; ++i) push_stable(lv, r.letter.inverse);
      }
    }

    void run_random(const Word& w, std::uint64_t seed) {
      for (const auto& r : w.runs()) {
        int lv = t_.level_of_[r.letter.gen];
        if (lv < 0) {
          auto piece = store_.power(store_.letter(r.letter.code()), r.count);
          toks_.back().seg = store_.reduce_concat(toks_.back().seg, piece);
          continue;
        }
        for (std::uint64_t i = 0; i < r.count; ++i) {
          toks_.push_back(Tok{true, lv, r.letter.inverse, slp::kEmpty});
          toks_.push_back(Tok{});
        }
      }
      Rng rng(seed);
      for (;;) {
        std::vector<std::pair<std::size_t, slp::NodeId>> sites;
        for (std::size_t i = 1; i + 2 < toks_.size(); i += 2) {
          auto g = pinch(toks_[i], toks_[i + 1].seg, toks_[i + 2]);
          if (g) sites.emplace_back(i, *g);
        }
        if (sites.empty()) break;
        auto [i, g] = sites[std::uniform_int_distribution<std::size_t>(0, sites.size() - 1)(rng)];
        slp::NodeId merged = store_.reduce_concat(store_.reduce_concat(toks_[i - 1].seg, g), toks_[i + 3].seg);
        toks_[i - 1].seg = merged;
        toks_.erase(toks_.begin() + std::ptrdiff_t(i), toks_.begin() + std::ptrdiff_t(i + 4));
        ++pinches_;
      }
    }

    BrittonResult result(bool materialize) {
      BrittonResult res;
      res.pinches = pinches_;
      res.store_nodes = store_.node_count();
      bool fits = true;
      for (const auto& tk : toks_) {
        if (tk.stable) {
          res.stables.push_back({t_.levels_[tk.level].stable, tk.inv});
        } else {
          res.segment_lengths.push_back(store_.length(tk.seg));
          if (store_.length(tk.seg) > length_cap()) fits = false;
        }
      }
      if (materialize && fits) {
        TowerWord tw;
        for (const auto& tk : toks_)
          if (!tk.stable) tw.segments.push_back(store_.to_word(tk.seg, t_.alpha_));
        tw.stables = res.stables;
        res.form = std::move(tw);
      }
      return res;
    }

   private:
    struct LevelState {
      std::unique_ptr<slp::Reader<SubgroupGraph>> b_reader, img_reader;
      std::unique_ptr<slp::WeightedReader<SubgroupGraph>> b_weights, img_weights;
      std::vector<slp::NodeId> phi, phi_inv;  // indexed by basis letter code
      std::unordered_map<slp::NodeId, slp::NodeId> phi_memo, phi_inv_memo;
    };

    // Replacement for open * seg * close when it is a pinch.
    std::optional<slp::NodeId> pinch(const Tok& open, slp::NodeId seg, const Tok& close) {
      if (open.level != close.level || open.inv == close.inv) return std::nullopt;
      auto& st = levels_[std::size_t(open.level)];
      if (open.inv) {  // t^-1 b t -> phi(b)
        if (st.b_reader->read(seg, SubgroupGraph::base()) != SubgroupGraph::base()) return std::nullopt;
        auto [end, x] = st.b_weights->read(seg, SubgroupGraph::base());
        (void)end;
        return store_.map(x, st.phi, st.phi_memo);
      }
      // t c t^-1 -> phi^-1(c)
      if (st.img_reader->read(seg, SubgroupGraph::base()) != SubgroupGraph::base()) return std::nullopt;
      auto [end, x] = st.img_weights->read(seg, SubgroupGraph::base());
      (void)end;
      return store_.map(x, st.phi_inv, st.phi_inv_memo);
    }

    void push_stable(int lv, bool inv) {
      Tok close{true, lv, inv, slp::kEmpty};
      if (toks_.size() >= 3) {
        const Tok& open = toks_[toks_.size() - 2];
        auto g = pinch(open, toks_.back().seg, close);
        if (g) {
          toks_.pop_back();
          toks_.pop_back();
          toks_.back().seg = store_.reduce_concat(toks_.back().seg, *g);
          ++pinches_;
          return;
        }
      }
      toks_.push_back(close);
      toks_.push_back(Tok{});
    }

    const BrittonTower& t_;
    slp::Store store_;
    std::vector<LevelState> levels_;
    std::vector<Tok> toks_;
    std::size_t pinches_ = 0;
  };

  AlphabetPtr alpha_;
  std::vector<HNNLevel> levels_;
  std::vector<int> level_of_;
};

inline HNNLevel level_c(const RipsParams& p, const AlphabetPtr& alpha, int i) {
  std::string c = "c" + std::to_string(i);
  return make_level(alpha, c, {letter_word(alpha, "d1"), letter_word(alpha, "d2")},
                    {word_Dij(p, i, 1, alpha), word_Dij(p, i, 2, alpha)});
}

inline BrittonTower tower_Gc1d(const RipsParams& p) {
  auto a = alphabets::Gc1d();
  return BrittonTower(a, {level_c(p, a, 1)});
}

// c1 is the inner level and c2 the outer one; both associated subgroups lie in F(d1, d2).
inline BrittonTower tower_Gcd(const RipsParams& p) {
  auto a = alphabets::Gcd();
  return BrittonTower(a, {level_c(p, a, 1), level_c(p, a, 2)});
}

inline TowerWord britton_reduce(const TowerWord& w, const BrittonTower& tower) {
  auto res = tower.reduce(join_tower(w));
  if (!res.form) throw LengthCapExceeded("reduced form exceeds the length cap");
  return *res.form;
}

inline bool is_trivial_Gc1d(const Word& w, const RipsParams& p) { return tower_Gc1d(p).is_trivial(w); }
inline bool is_trivial_Gcd(const Word& w, const RipsParams& p) { return tower_Gcd(p).is_trivial(w); }

struct IntersectionReport {
  std::size_t trials = 0, failures = 0, maxlen = 0;
  std::uint64_t seed = 0;
  std::optional<std::pair<Word, Word>> first_failure;
};

// Random nonempty c-words u and d-words v; u v^-1 must be nontrivial in G_cd.
inline IntersectionReport sample_intersection_triviality(const BrittonTower& gcd, std::size_t trials,
                                                         std::size_t maxlen, std::uint64_t seed) {
  IntersectionReport rep;
  rep.maxlen = maxlen;
  rep.seed = seed;
  Rng rng(seed);
  auto a = gcd.alphabet();
  auto cg = generators_named(a, {"c1", "c2"}), dg = generators_named(a, {"d1", "d2"});
  for (std::size_t t = 0; t < trials; ++t) {
    Word u = random_reduced_word(rng, a, cg, uniform_size(rng, 1, maxlen));
    Word v = random_reduced_word(rng, a, dg, uniform_size(rng, 1, maxlen));
    ++rep.trials;
    if (gcd.is_trivial(concat(u, invert(v)))) {
      ++rep.failures;
      if (!rep.first_failure) rep.first_failure = std::make_pair(u, v);
    }
  }
  return rep;
}

struct CrossOracleReport {
  int r = 0;
  std::size_t trials = 0, maxlen = 0, agreements = 0, trivial = 0;
  std::uint64_t seed = 0;
  std::size_t max_store_nodes = 0, total_pinches = 0;
  std::optional<Word> first_disagreement;
  double seconds = 0;

  bool passed() const { return agreements == trials; }
};

// Dehn's algorithm on the G_cd presentation against the Britton tower, on
// uniformly random (unreduced) words of length 1..maxlen.
inline CrossOracleReport cross_oracle(const RipsParams& p, std::size_t trials, std::size_t maxlen, std::uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  CrossOracleReport rep;
  rep.r = p.r;
  rep.maxlen = maxlen;
  rep.seed = seed;
  DehnOracle dehn(presentation_Gcd(p));
  auto tower = tower_Gcd(p);
  auto a = tower.alphabet();
  auto gens = all_generators(a);
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Word w = random_word(rng, a, gens, uniform_size(rng, 1, maxlen));
    bool d = dehn.is_trivial(w);
    auto br = tower.reduce(w, PinchOrder::InnermostLeftmost, 0, false);
    bool b = br.trivial();
    rep.max_store_nodes = std::max(rep.max_store_nodes, br.store_nodes);
    rep.total_pinches += br.pinches;
    ++rep.trials;
    if (d) ++rep.trivial;
    if (d == b)
      ++rep.agreements;
    else if (!rep.first_disagreement)
      rep.first_disagreement = w;
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace ctw
