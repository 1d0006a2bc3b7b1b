#include <catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "ctw/random.hpp"
#include "ctw/rips.hpp"
#include "ctw/stallings.hpp"

using namespace ctw;

namespace {

// All free products of at most k basis letters (and inverses), reduced.
std::set<std::vector<int>> products_up_to(const std::vector<Word>& basis, int k) {
  std::vector<Word> letters;
  for (const auto& b : basis) {
    letters.push_back(b);
    letters.push_back(invert(b));
  }
  std::set<std::vector<int>> out;
  std::vector<Word> frontier{Word(basis.front().alphabet())};
  out.insert({});
  for (int d = 0; d < k; ++d) {
    std::vector<Word> next;
    for (const auto& w : frontier)
      for (const auto& l : letters) {
        Word x = concat(w, l);
        if (out.insert(x.codes()).second) next.push_back(x);
      }
    frontier = std::move(next);
  }
  return out;
}

std::vector<Word> family_D(const RipsParams& p, const AlphabetPtr& D) {
  return {word_Dj(p, 1, D), word_Dj(p, 2, D), word_Dij(p, 1, 1, D), word_Dij(p, 1, 2, D), word_Dij(p, 2, 1, D),
          word_Dij(p, 2, 2, D)};
}

}  // namespace

TEST_CASE("single-loop graph") {
  auto F = make_alphabet({"a", "b"});
  auto g = build_subgroup_graph(F, {letter_word(F, "a")});
  CHECK(g.vertex_count() == 1);
  CHECK(g.rank() == 1);
  for (int k = -5; k <= 5; ++k) CHECK(g.contains(letter_word(F, "a", k == 0 ? 1 : k)));
  CHECK(g.contains(Word(F)));
  CHECK_FALSE(g.contains(letter_word(F, "b")));
  auto empty = build_subgroup_graph(F, {});
  CHECK(empty.vertex_count() == 1);
  CHECK(empty.contains(Word(F)));
  CHECK_FALSE(empty.contains(letter_word(F, "a")));
}

TEST_CASE("membership in D-family subgroups") {
  auto D = alphabets::D();
  RipsParams p2(2);
  std::vector<Word> basis{word_Dij(p2, 2, 1, D), word_Dij(p2, 2, 2, D)};
  auto g = build_subgroup_graph(D, basis);
  CHECK(g.rank() == 2);
  CHECK(g.contains(basis[0]));
  CHECK(g.contains(concat({basis[0], invert(basis[1]), basis[0]})));
  CHECK_FALSE(g.contains(letter_word(D, "d1")));

  RipsParams p(kDefaultR);
  auto h = build_subgroup_graph(D, {word_Dij(p, 1, 1, D), word_Dij(p, 1, 2, D)});
  CHECK(h.contains(word_Dij(p, 1, 1, D)));
  CHECK_THROWS_AS(h.contains(letter_word(alphabets::C(), "c1")), AlphabetMismatch);
}

TEST_CASE("membership agrees with exhaustive products") {
  Rng rng(21);
  auto F = make_alphabet({"x", "y"});
  auto gens = all_generators(F);
  for (int t = 0; t < 20; ++t) {
    std::vector<Word> basis;
    std::size_t k = uniform_size(rng, 1, 3);
    while (basis.size() < k) {
      Word w = random_reduced_word(rng, F, gens, uniform_size(rng, 1, 4));
      if (!w.empty()) basis.push_back(w);
    }
    auto g = build_subgroup_graph(F, basis);
    auto members = products_up_to(basis, 3);
    for (const auto& m : members) CHECK(g.contains(Word::from_codes(F, m)));
    for (int s = 0; s < 200; ++s) {
      Word w = random_reduced_word(rng, F, gens, uniform_size(rng, 0, 3));
      if (g.contains(w))
        CHECK(substitute(g.express_in_basis(w), basis) == w);
      else
        CHECK(members.count(w.codes()) == 0);
    }
  }
}

TEST_CASE("membership is closed and ignores unreduced input") {
  Rng rng(22);
  RipsParams p(3);
  auto D = alphabets::D();
  auto basis = family_D(p, D);
  auto g = build_subgroup_graph(D, basis);
  CHECK(g.rank() == 6);
  auto E = basis_alphabet(basis.size());
  for (int t = 0; t < 1000; ++t) {
    Word x = random_word(rng, E, all_generators(E), uniform_size(rng, 0, 6));
    Word y = random_word(rng, E, all_generators(E), uniform_size(rng, 0, 6));
    Word u = substitute(x, basis), v = substitute(y, basis);
    CHECK(g.contains(u));
    CHECK(g.contains(concat(u, v)));
    CHECK(g.contains(invert(u)));
    Word noisy = Word::from_codes(D, [&] {
      auto c = u.codes();
      c.insert(c.begin(), {0, 1});
      c.insert(c.end(), {3, 2});
      return c;
    }());
    CHECK(g.contains(noisy));
  }
}

TEST_CASE("express_in_basis") {
  RipsParams p(kDefaultR);
  auto D = alphabets::D();
  std::vector<Word> basis{word_Dij(p, 1, 1, D), word_Dij(p, 1, 2, D)};
  auto g = build_subgroup_graph(D, basis);
  auto E = g.basis_letters();
  CHECK(g.express_in_basis(concat(invert(basis[1]), basis[0])) == parse_word(E, "e2^-1 e1"));
  CHECK(g.express_in_basis(Word(D)).empty());
  CHECK_THROWS_AS(g.express_in_basis(letter_word(D, "d1")), NotMember);

  Rng rng(23);
  auto big = family_D(RipsParams(4), D);
  auto h = build_subgroup_graph(D, big);
  auto EE = h.basis_letters();
  for (int t = 0; t < 1000; ++t) {
    Word x = random_reduced_word(rng, EE, all_generators(EE), uniform_size(rng, 0, 8));
    Word w = substitute(x, big);
    Word y = h.express_in_basis(w);
    CHECK(substitute(y, big) == w);
    CHECK(y == x);
  }
}

TEST_CASE("folding is confluent") {
  Rng rng(24);
  auto D = alphabets::D();
  for (int r : {1, 2, 5}) {
    auto basis = family_D(RipsParams(r), D);
    auto ref = build_subgroup_graph(D, basis).canonical_form();
    for (int t = 0; t < 20; ++t) {
      std::shuffle(basis.begin(), basis.end(), rng);
      CHECK(build_subgroup_graph(D, basis).canonical_form() == ref);
    }
  }
  auto F = make_alphabet({"x", "y"});
  auto g1 = build_subgroup_graph(F, {parse_word(F, "x y"), parse_word(F, "y")});
  auto g2 = build_subgroup_graph(F, {parse_word(F, "x"), parse_word(F, "y")});
  CHECK(g1.canonical_form() == g2.canonical_form());
}

TEST_CASE("Nielsen reduced sets") {
  RipsParams p(kDefaultR);
  auto C = alphabets::C();
  auto D = alphabets::D();
  auto c = nielsen_check({word_C(p, C), word_Ci(p, 1, C), word_Ci(p, 2, C)});
  CHECK(c.passes());
  auto d = nielsen_check(family_D(p, D));
  CHECK(d.passes());
  CHECK(d.set_size == 12);

  auto F = make_alphabet({"a", "b"});
  auto bad = nielsen_check({parse_word(F, "a b"), parse_word(F, "b^-1")});
  CHECK_FALSE(bad.n1);
  CHECK(bad.first_violation == "N1");
  REQUIRE(bad.violating.size() == 2);
  auto prod = concat(bad.violating[0], bad.violating[1]);
  CHECK(!prod.empty());
  CHECK((prod.length() < bad.violating[0].length() || prod.length() < bad.violating[1].length()));

  CHECK_FALSE(nielsen_check({parse_word(F, "a"), Word(F)}).n0);
  CHECK_THROWS_AS(nielsen_check({}), InvalidParameter);
}

TEST_CASE("C'(1/2) sufficient condition") {
  RipsParams p(kDefaultR);
  auto D = alphabets::D();
  CHECK(cprime_half_sufficient(family_D(p, D)));
  auto F = make_alphabet({"a", "b"});
  CHECK_FALSE(cprime_half_sufficient({parse_word(F, "a b"), parse_word(F, "b^-1")}));

  Rng rng(25);
  int implied = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<Word> U;
    std::size_t k = uniform_size(rng, 1, 4);
    for (std::size_t i = 0; i < k; ++i) U.push_back(random_positive_word(rng, F, all_generators(F), uniform_size(rng, 3, 12)));
    if (cprime_half_sufficient(U)) {
      ++implied;
      CHECK(nielsen_check(U).passes());
    }
  }
  CHECK(implied > 0);
}

TEST_CASE("Nielsen certified sets are free on samples") {
  Rng rng(26);
  RipsParams p(kDefaultR);
  auto D = alphabets::D();
  auto basis = family_D(p, D);
  REQUIRE(nielsen_check(basis).passes());
  auto E = basis_alphabet(basis.size());
  for (int t = 0; t < 1000; ++t) {
    Word x = random_reduced_word(rng, E, all_generators(E), uniform_size(rng, 1, 10));
    if (x.empty()) continue;
    CHECK_FALSE(substitute(x, basis).empty());
  }
}
