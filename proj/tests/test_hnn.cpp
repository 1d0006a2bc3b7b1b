#include <catch_amalgamated.hpp>

#include "ctw/hnn.hpp"
#include "ctw/random.hpp"
#include "ctw/smallcancel.hpp"

using namespace ctw;

namespace {

Word gcd(const std::string& s) { return parse_word(alphabets::Gcd(), s); }

}  // namespace

TEST_CASE("single pinches") {
  RipsParams p(kDefaultR);
  auto a = alphabets::Gcd();
  auto tower = tower_Gcd(p);

  auto r1 = britton_reduce(split_tower(gcd("c1^-1 d1 c1"), tower.stable_generators()), tower);
  CHECK(r1.stable_count() == 0);
  CHECK(join_tower(r1) == word_Dij(p, 1, 1, a));

  Word w2 = concat({gcd("c2"), word_Dij(p, 2, 1, a), gcd("c2^-1")});
  auto r2 = britton_reduce(split_tower(w2, tower.stable_generators()), tower);
  CHECK(r2.stable_count() == 0);
  CHECK(join_tower(r2) == gcd("d1"));

  auto r3 = britton_reduce(split_tower(gcd("c1 d1 c1^-1"), tower.stable_generators()), tower);
  CHECK(r3.stable_count() == 2);
  CHECK_FALSE(tower.levels()[0].image_graph->contains(gcd("d1")));

  CHECK(is_trivial_Gcd(concat(gcd("c2^-1 d2 c2"), invert(word_Dij(p, 2, 2, a))), p));
  for (int k = 1; k <= 5; ++k) CHECK_FALSE(is_trivial_Gcd(letter_word(a, "c1", k), p));
  CHECK(is_trivial_Gcd(Word(a), p));
}

TEST_CASE("levels") {
  RipsParams p(kDefaultR);
  auto tower = tower_Gcd(p);
  REQUIRE(tower.levels().size() == 2);
  for (const auto& L : tower.levels()) {
    CHECK(L.b_basis.size() == L.image_basis.size());
    CHECK(L.image_certificate.passes());
    CHECK(L.b_graph->rank() == 2);
    CHECK(L.image_graph->rank() == 2);
  }
  // At r = 1 the image pair fails N1 but is still a free basis.
  auto small = tower_Gcd(RipsParams(1));
  CHECK_FALSE(small.levels()[0].image_certificate.passes());
  CHECK(small.levels()[0].image_graph->rank() == 2);

  auto a = alphabets::Gcd();
  CHECK_THROWS_AS(make_level(a, "c1", {gcd("c1 d1")}, {gcd("d2")}), InvalidParameter);
  CHECK_THROWS_AS(make_level(a, "c1", {gcd("d1"), gcd("d1^2")}, {gcd("d1"), gcd("d2")}), InvalidParameter);
  CHECK_THROWS_AS(make_level(a, "c1", {gcd("d1")}, {}), InvalidParameter);
}

TEST_CASE("tower words split and join") {
  auto a = alphabets::Gcd();
  auto stables = generators_named(a, {"c1", "c2"});
  Rng rng(41);
  for (int t = 0; t < 1000; ++t) {
    Word w = random_word(rng, a, all_generators(a), uniform_size(rng, 0, 30));
    auto tw = split_tower(w, stables);
    CHECK(tw.segments.size() == tw.stables.size() + 1);
    CHECK(join_tower(tw) == w);
  }
}

TEST_CASE("reduced forms have no pinch and represent the input") {
  // Small r keeps materialized forms under the length cap.
  RipsParams p(2);
  auto tower = tower_Gcd(p);
  auto a = tower.alphabet();
  Rng rng(42);
  int skipped = 0;
  for (int t = 0; t < 300; ++t) {
    Word w = random_word(rng, a, all_generators(a), uniform_size(rng, 1, 12));
    auto res = tower.reduce(w);
    if (!res.form) {
      ++skipped;
      continue;
    }
    const auto& f = *res.form;
    CHECK(f.stable_count() <= split_tower(w, tower.stable_generators()).stable_count());
    for (std::size_t i = 0; i + 1 < f.stables.size(); ++i) {
      const auto &x = f.stables[i], &y = f.stables[i + 1];
      if (x.gen != y.gen || x.inverse == y.inverse) continue;
      const auto& L = tower.levels()[x.gen == tower.levels()[0].stable ? 0 : 1];
      const Word& mid = f.segments[i + 1];
      bool mid_free = true;
      for (const auto& r : mid.runs())
        if (r.letter.gen == tower.levels()[0].stable) mid_free = false;
      if (!mid_free) continue;
      // t^-1 b t with b in B, or t c t^-1 with c in phi(B), would be a pinch.
      if (x.inverse)
        CHECK_FALSE(L.b_graph->contains(mid));
      else
        CHECK_FALSE(L.image_graph->contains(mid));
    }
    CHECK(tower.is_trivial(concat(join_tower(f), invert(w))));
  }
  CHECK(skipped < 30);
}

TEST_CASE("pinch insertion keeps the element") {
  RipsParams p(kDefaultR);
  auto tower = tower_Gcd(p);
  auto a = tower.alphabet();
  Rng rng(43);
  for (int t = 0; t < 500; ++t) {
    Word w = random_word(rng, a, all_generators(a), uniform_size(rng, 0, 15));
    int i = int(uniform_size(rng, 1, 2));
    const auto& L = tower.levels()[std::size_t(i - 1)];
    Word x = random_reduced_word(rng, basis_alphabet(2), all_generators(basis_alphabet(2)), uniform_size(rng, 0, 4));
    Word b = substitute(x, L.b_basis);
    Word phib = substitute(x, L.image_basis);
    std::string c = "c" + std::to_string(i);
    Word pinch = concat({letter_word(a, c, -1), b, letter_word(a, c), invert(phib)});
    auto codes = w.codes();
    std::size_t pos = uniform_size(rng, 0, codes.size());
    Word left = Word::from_codes(a, std::vector<int>(codes.begin(), codes.begin() + std::ptrdiff_t(pos)));
    Word right = Word::from_codes(a, std::vector<int>(codes.begin() + std::ptrdiff_t(pos), codes.end()));
    Word w2 = concat({left, pinch, right});
    CHECK(tower.is_trivial(concat(w2, invert(w))));
    CHECK(tower.reduce(w2).stable_count() == tower.reduce(w).stable_count());
  }
}

TEST_CASE("stable count does not depend on pinch order") {
  RipsParams p(kDefaultR);
  auto tower = tower_Gcd(p);
  auto a = tower.alphabet();
  Rng rng(44);
  for (int t = 0; t < 300; ++t) {
    Word w = random_word(rng, a, all_generators(a), uniform_size(rng, 1, 20));
    auto base = tower.reduce(w, PinchOrder::InnermostLeftmost, 0, false);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      auto other = tower.reduce(w, PinchOrder::Random, seed, false);
      CHECK(other.stable_count() == base.stable_count());
      CHECK(other.trivial() == base.trivial());
    }
  }
}

TEST_CASE("free subgroup embeds") {
  RipsParams p(kDefaultR);
  auto tower = tower_Gcd(p);
  auto c1d = tower_Gc1d(p);
  auto a = tower.alphabet();
  auto dg = generators_named(a, {"d1", "d2"});
  Rng rng(45);
  for (int t = 0; t < 1000; ++t) {
    Word w = random_word(rng, a, dg, uniform_size(rng, 0, 20));
    CHECK(tower.is_trivial(w) == free_reduce(w).empty());
    Word v = rebase(w, alphabets::Gc1d());
    CHECK(c1d.is_trivial(v) == free_reduce(v).empty());
  }
}

TEST_CASE("F(c1,c2) meets F(d1,d2) trivially") {
  RipsParams p(kDefaultR);
  auto tower = tower_Gcd(p);
  auto a = tower.alphabet();
  CHECK_FALSE(tower.is_trivial(gcd("c1 d1^-1")));
  CHECK_FALSE(tower.is_trivial(concat(gcd("c1 c2"), invert(word_Dij(p, 2, 1, a)))));
  auto rep = sample_intersection_triviality(tower, 10000, 12, kDefaultSeed);
  CHECK(rep.trials == 10000);
  CHECK(rep.failures == 0);
  CHECK_FALSE(rep.first_failure);
}

TEST_CASE("Britton agrees with Dehn's algorithm") {
  auto rep = cross_oracle(RipsParams(kDefaultR), 10000, 40, kDefaultSeed);
  CHECK(rep.trials == 10000);
  CHECK(rep.passed());
  CHECK_FALSE(rep.first_disagreement);
  // Conjugates of relators must come out trivial in both.
  RipsParams p(kDefaultR);
  DehnOracle dehn(presentation_Gcd(p));
  auto tower = tower_Gcd(p);
  const auto& S = dehn.relator_set();
  auto a = tower.alphabet();
  Rng rng(46);
  for (int t = 0; t < 500; ++t) {
    Word g = random_word(rng, a, all_generators(a), uniform_size(rng, 0, 8));
    Word rho = S.element(uniform_size(rng, 0, S.size() - 1));
    Word w = concat({g, rho, invert(g)});
    CHECK(dehn.is_trivial(w));
    CHECK(tower.is_trivial(w));
  }
}

TEST_CASE("nested pinches stay compressed") {
  RipsParams p(kDefaultR);
  auto tower = tower_Gcd(p);
  auto a = tower.alphabet();
  // c1^-k d1 c1^k has length about |D11|^k; it reduces without expansion.
  for (int k = 1; k <= 6; ++k) {
    Word w = concat({letter_word(a, "c1", -k), gcd("d1"), letter_word(a, "c1", k)});
    auto res = tower.reduce(w, PinchOrder::InnermostLeftmost, 0, false);
    CHECK(res.stable_count() == 0);
    CHECK(res.segment_lengths.size() == 1);
    CHECK(res.segment_lengths[0] > 0);
    CHECK_FALSE(res.trivial());
  }
}
