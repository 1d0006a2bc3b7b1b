// Walkthrough of the library on the default parameters.

#include <cstdio>

#include "ctw/ctw.hpp"

using namespace ctw;

int main() {
  RipsParams p(kDefaultR);
  std::printf("r = %d, l = %d\n", p.r, p.l);

  auto pres = presentation_G(p);
  auto cert = check_cprime(pres, Fraction{1, 6});
  std::printf("C'(1/6) for G: %s, max piece %zu/%zu\n", cert.holds ? "holds" : "fails", cert.ratio_num,
              cert.ratio_den);

  // The same element through both word-problem oracles.
  auto a = alphabets::Gcd();
  Word w = concat(parse_word(a, "c1^-1 d2 c1"), invert(word_Dij(p, 1, 2, a)));
  DehnOracle dehn(presentation_Gcd(p));
  std::printf("c1^-1 d2 c1 D12^-1: dehn %s, britton %s\n", dehn.is_trivial(w) ? "trivial" : "nontrivial",
              is_trivial_Gcd(w, p) ? "trivial" : "nontrivial");

  // gamma_n is geodesic in G, yet its endpoints are n apart from lambda_n in H.
  auto ct = run_ct_experiment(p, 5);
  for (const auto& row : ct.rows)
    std::printf("n=%d |gamma|=%zu geodesic=%d h_distance=%s log10|w_n|=%.4g\n", row.n, row.gamma_len, row.geodesic,
                row.h_distance.value.get_str().c_str(), row.w_len.log10);
  std::printf("verdict: %s\n", ct.verdict ? "no Cannon-Thurston map on the tested range" : "inconclusive");
}
