#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ctw/words.hpp"

namespace ctw {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20240521;

inline std::vector<Generator> all_generators(const AlphabetPtr& alpha) {
  std::vector<Generator> g(alpha->size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = Generator(i);
  return g;
}

inline std::vector<Generator> generators_named(const AlphabetPtr& alpha, const std::vector<std::string>& names) {
  std::vector<Generator> g;
  for (const auto& n : names) g.push_back(alpha->at(n));
  return g;
}

inline Letter random_letter(Rng& rng, const std::vector<Generator>& gens) {
  std::uniform_int_distribution<std::size_t> pick(0, 2 * gens.size() - 1);
  auto k = pick(rng);
  return {gens[k / 2], (k % 2) == 1};
}

// Uniform letters, no reduction.
inline Word random_word(Rng& rng, const AlphabetPtr& alpha, const std::vector<Generator>& gens, std::size_t len) {
  Word w(alpha);
  for (std::size_t i = 0; i < len; ++i) w.push(random_letter(rng, gens));
  return w;
}

// Uniform among freely reduced words of the given length.
inline Word random_reduced_word(Rng& rng, const AlphabetPtr& alpha, const std::vector<Generator>& gens,
                                std::size_t len) {
  Word w(alpha);
  std::vector<Letter> letters;
  for (std::size_t i = 0; i < len; ++i) {
    Letter l;
    do l = random_letter(rng, gens);
    while (!letters.empty() && l == letters.back().inv());
    letters.push_back(l);
    w.push(l);
  }
  return w;
}

inline Word random_positive_word(Rng& rng, const AlphabetPtr& alpha, const std::vector<Generator>& gens,
                                 std::size_t len) {
  Word w(alpha);
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  for (std::size_t i = 0; i < len; ++i) w.push({gens[pick(rng)], false});
  return w;
}

inline std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace ctw
