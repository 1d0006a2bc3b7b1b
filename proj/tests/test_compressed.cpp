#include <catch_amalgamated.hpp>

#include "ctw/compressed.hpp"
#include "ctw/random.hpp"
#include "ctw/rips.hpp"
#include "ctw/stallings.hpp"

using namespace ctw;
using slp::NodeId;
using slp::Store;

namespace {

std::vector<int> flat_reduce(const std::vector<int>& codes) {
  std::vector<int> st;
  for (int c : codes) {
    if (!st.empty() && st.back() == (c ^ 1))
      st.pop_back();
    else
      st.push_back(c);
  }
  return st;
}

std::vector<int> flat_inverse(std::vector<int> c) {
  std::reverse(c.begin(), c.end());
  for (int& x : c) x ^= 1;
  return c;
}

}  // namespace

TEST_CASE("store round-trips words") {
  Store s;
  auto a = alphabets::G();
  Rng rng(31);
  for (int t = 0; t < 1000; ++t) {
    Word w = free_reduce(random_word(rng, a, all_generators(a), uniform_size(rng, 0, 80)));
    NodeId n = s.from_word(w);
    CHECK(std::size_t(s.length(n)) == w.length());
    CHECK(s.to_word(n, a) == w);
    CHECK(s.expand(n, 1000) == w.codes());
    CHECK(s.equal(n, s.from_codes(w.codes())));
    CHECK(s.to_word(s.inverse(n), a) == invert(w));
    for (std::size_t i = 0; i < w.length(); i += 7) CHECK(s.letter_at(n, i) == w.codes()[i]);
  }
}

TEST_CASE("reduce_concat, slice and lcp agree with flat vectors") {
  Store s;
  auto a = alphabets::Gcd();
  Rng rng(32);
  auto gens = all_generators(a);
  for (int t = 0; t < 2000; ++t) {
    Word u = random_reduced_word(rng, a, gens, uniform_size(rng, 0, 40));
    Word v = random_reduced_word(rng, a, gens, uniform_size(rng, 0, 40));
    // Bias toward cancellation.
    if (t % 3 == 0) {
      auto uc = u.codes();
      uc.resize(uniform_size(rng, 0, uc.size()));
      v = concat(invert(Word::from_codes(a, uc)), v);
    }
    NodeId x = s.from_word(u), y = s.from_word(v);
    auto joined = flat_reduce([&] {
      auto c = u.codes();
      auto d = v.codes();
      c.insert(c.end(), d.begin(), d.end());
      return c;
    }());
    NodeId z = s.reduce_concat(x, y);
    CHECK(s.expand(z, 1000) == joined);

    auto uc = u.codes(), vc = v.codes();
    std::size_t k = 0;
    while (k < uc.size() && k < vc.size() && uc[k] == vc[k]) ++k;
    CHECK(std::size_t(s.lcp(x, y)) == k);

    std::size_t from = uniform_size(rng, 0, uc.size()), to = uniform_size(rng, from, uc.size());
    CHECK(s.expand(s.slice(x, from, to), 1000) == std::vector<int>(uc.begin() + std::ptrdiff_t(from), uc.begin() + std::ptrdiff_t(to)));
  }
}

TEST_CASE("huge powers stay small") {
  Store s;
  NodeId a = s.letter(0);
  NodeId big = s.power(a, std::uint64_t(1) << 60);
  CHECK(s.length(big) == slp::Length(1) << 60);
  NodeId bigger = s.power(big, std::uint64_t(1) << 40);
  CHECK(s.length(bigger) == slp::Length(1) << 100);
  CHECK(slp::length_string(s.length(bigger)) == "1267650600228229401496703205376");
  CHECK(s.node_count() < 300);
  CHECK(s.reduce_concat(bigger, s.inverse(bigger)) == slp::kEmpty);
  CHECK_THROWS_AS(s.expand(big, 1 << 20), LengthCapExceeded);
}

TEST_CASE("map is a homomorphism") {
  Store s;
  auto C = alphabets::C();
  RipsParams p(3);
  std::vector<Word> phi{word_Ci(p, 1, C), word_Ci(p, 2, C)};
  std::vector<NodeId> images;
  for (const auto& w : phi) {
    images.push_back(s.from_word(w));
    images.push_back(s.inverse(images.back()));
  }
  Rng rng(33);
  std::unordered_map<NodeId, NodeId> memo;
  for (int t = 0; t < 500; ++t) {
    Word w = free_reduce(random_word(rng, C, all_generators(C), uniform_size(rng, 0, 20)));
    NodeId m = s.map(s.from_word(w), images, memo);
    CHECK(s.to_word(m, C) == substitute(w, phi));
  }
}

TEST_CASE("compressed readers agree with flat reading") {
  RipsParams p(2);
  auto D = alphabets::D();
  std::vector<Word> basis{word_Dij(p, 1, 1, D), word_Dij(p, 1, 2, D)};
  auto g = build_subgroup_graph(D, basis);
  Store s;
  slp::Reader<SubgroupGraph> reader(s, g);
  slp::WeightedReader<SubgroupGraph> weighted(s, g);
  auto E = g.basis_letters();
  Rng rng(34);
  for (int t = 0; t < 1000; ++t) {
    Word w;
    if (t % 2) {
      Word x = random_reduced_word(rng, E, all_generators(E), uniform_size(rng, 0, 6));
      w = substitute(x, basis);
    } else {
      w = random_reduced_word(rng, D, all_generators(D), uniform_size(rng, 0, 20));
    }
    NodeId n = s.from_word(w);
    int end = reader.read(n, SubgroupGraph::base());
    CHECK(end == g.read(w));
    auto [wend, weight] = weighted.read(n, SubgroupGraph::base());
    CHECK(wend == end);
    if (end == SubgroupGraph::base()) CHECK(s.expand(weight, 1000) == g.express_in_basis(w).codes());
  }
}

TEST_CASE("inverse is an involution") {
  Store s;
  Rng rng(35);
  auto a = alphabets::G();
  for (int t = 0; t < 200; ++t) {
    Word w = random_reduced_word(rng, a, all_generators(a), uniform_size(rng, 0, 50));
    NodeId n = s.from_word(w);
    CHECK(s.equal(s.inverse(s.inverse(n)), n));
    CHECK(s.expand(s.inverse(n), 1000) == flat_inverse(w.codes()));
  }
}
