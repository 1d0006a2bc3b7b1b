#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctw/growth.hpp"
#include "ctw/random.hpp"
#include "ctw/rips.hpp"
#include "ctw/smallcancel.hpp"
#include "ctw/words.hpp"

namespace ctw {

// b^-n a^-n d1 a^n b^n.
inline Word gamma_word(int n, const AlphabetPtr& alpha = alphabets::G()) {
  if (n < 1) throw InvalidParameter("n must be at least 1");
  Word w(alpha);
  Letter a{alpha->at("a"), false}, b{alpha->at("b"), false};
  w.push(b.inv(), std::uint64_t(n));
  w.push(a.inv(), std::uint64_t(n));
  w.push({alpha->at("d1"), false});
  w.push(a, std::uint64_t(n));
  w.push(b, std::uint64_t(n));
  return w;
}

// c + k * W for a symbolic nonnegative length W.
struct AffineLength {
  BigInt constant, coeff;

  friend AffineLength operator+(const AffineLength& x, const AffineLength& y) {
    return {x.constant + y.constant, x.coeff + y.coeff};
  }
  friend AffineLength operator-(const AffineLength& x, const AffineLength& y) {
    return {x.constant - y.constant, x.coeff - y.coeff};
  }
};

// (|x| + |y| - |x^-1 y|) / 2 in a free group, i.e. the distance from e to [x, y].
inline std::size_t gromov_product(const Word& x, const Word& y) {
  auto X = free_reduce(x), Y = free_reduce(y);
  auto d = concat(invert(X), Y);
  return (X.length() + Y.length() - d.length()) / 2;
}

// Distance from e to [x, y] in the Cayley tree, read off the common prefix.
inline std::size_t tree_distance_by_prefix(const Word& x, const Word& y) {
  auto a = free_reduce(x).codes(), b = free_reduce(y).codes();
  std::size_t k = 0;
  while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
  return k;
}

struct HDistance {
  BigInt value;
  bool symbolic = false;  // |w_n| cancelled without being known exactly
  bool positivity_certified = false;
};

// Endpoints p0 = b^n, p1 = b^n w_n with w_n positive on d1, d2, so |p1| = n + |w_n|
// and p0^-1 p1 = w_n. The |w_n| terms cancel in the Gromov product.
inline HDistance h_distance_to_lambda(int n, const RipsParams& p) {
  if (n < 1) throw InvalidParameter("n must be at least 1");
  HDistance h;
  if (n == 1) {
    h.positivity_certified = is_positive(word_Dj(p, 1, alphabets::D()));
  } else {
    h.positivity_certified = true;
    for (const char* x : {"ab", "c1", "c2"})
      for (const auto& w : endo_of_letter(p, x).images) h.positivity_certified = h.positivity_certified && is_positive(w);
  }
  AffineLength p0{BigInt(n), 0}, p1{BigInt(n), 1}, between{0, 1};
  AffineLength twice = p0 + p1 - between;
  if (twice.coeff != 0) throw Error("Gromov product does not cancel");
  h.symbolic = true;
  h.value = twice.constant / 2;
  return h;
}

// Same distance from an explicit w_n.
inline std::size_t h_distance_explicit(int n, const Word& w_n) {
  auto H = alphabets::H();
  Word b = letter_word(H, "b", n);
  Word w = rebase(w_n, H);
  return tree_distance_by_prefix(b, concat(b, w));
}

struct W1Report {
  bool trivial = false;
  std::size_t trace_steps = 0;
  AbelianVerdict abelian = AbelianVerdict::Inconclusive;
  BigInt w1_len, expected_len;

  bool passed() const { return trivial && trace_steps > 0 && w1_len == expected_len; }
};

inline W1Report verify_w1(const RipsParams& p) {
  auto G = alphabets::G();
  DehnOracle dehn(presentation_G(p));
  W1Report rep;
  Word D1 = word_Dj(p, 1, G);
  Word w = concat(gamma_word(1, G), invert(D1));
  auto trace = dehn.reduce(w);
  rep.trivial = trace.final_word.empty();
  rep.trace_steps = trace.steps.size();
  rep.abelian = abelianized_equal(gamma_word(1, G), D1, dehn.presentation());
  rep.w1_len = GrowthModel(p).length_w(1).exact.value_or(0);
  rep.expected_len = BigInt(p.r) + BigInt(p.r) * (3 * p.r + 1) / 2;
  return rep;
}

// Token-level replay of the induction writing a^n b^n as a positive word on
// {ab, c1, c2}. Every rewrite is an instance of a defining relation of G or a
// free insertion or cancellation.
class UDerivation {
 public:
  enum class Kind { A, B, Phi, AB };
  struct Tok {
    Kind kind;
    int value;  // exponent +-1 for A and B, k for Phi (phi^k(C))
    bool operator==(const Tok&) const = default;
  };

  explicit UDerivation(int n) : n_(n) {
    if (n < 1) throw InvalidParameter("n must be at least 1");
    for (int i = 0; i < n; ++i) cur_.push_back({Kind::A, 1});
    for (int i = 0; i < n; ++i) cur_.push_back({Kind::B, 1});
  }

  const std::vector<Tok>& tokens() const { return cur_; }
  std::size_t steps() const { return steps_; }
  std::size_t shape_checks() const { return checks_; }

  // Runs the derivation; returns false on the first step or shape mismatch.
  bool run() {
    try {
      for (int m = n_; m >= 1; --m) {
        // a^m b^m [tail] -> a^(m-1) (a b^m) [tail]
        std::size_t at = std::size_t(m - 1);
        prove_abn(at, m);
        // now a^(m-1) b^(m-1) a b Phi_1..Phi_(m-1) [tail]
        std::size_t pos = std::size_t(2 * (m - 1));
        group_ab(pos);
        expect_eq2(m);
      }
    } catch (const Error& e) {
      failure_ = e.what();
      return false;
    }
    return true;
  }

  const std::string& failure() const { return failure_; }

  std::vector<int> layout() const {
    std::vector<int> out;
    for (const auto& t : cur_) {
      if (t.kind == Kind::AB) out.push_back(-1);
      else if (t.kind == Kind::Phi) out.push_back(t.value);
      else throw Error("derivation left a bare a or b");
    }
    return out;
  }

 private:
  // a b^m at position pos -> b^(m-1) a b Phi_1 .. Phi_(m-1).
  void prove_abn(std::size_t pos, int m) {
    if (m == 1) {
      expect_eq1(pos, 1);
      return;
    }
    // (ab) b^(m-1) -> (b a C) b^(m-1)
    swap_ab(pos);
    // b a [b^(m-1) b^-(m-1)] Phi_0 b^(m-1)
    for (int i = 0; i < m - 1; ++i) insert_pair(pos + 2, true);
    // b^-(m-1) Phi_0 b^(m-1) -> Phi_(m-1), innermost first
    std::size_t phi = pos + 2 + std::size_t(2 * (m - 1));
    for (int i = 0; i < m - 1; ++i) {
      conjugate(phi - 1);
      --phi;
    }
    // b (a b^(m-1)) Phi_(m-1)
    prove_abn(pos + 1, m - 1);
    expect_eq1(pos, m);
  }

  void swap_ab(std::size_t pos) {
    need(pos + 1 < cur_.size() && cur_[pos] == Tok{Kind::A, 1} && cur_[pos + 1] == Tok{Kind::B, 1}, "ab -> baC");
    cur_[pos] = {Kind::B, 1};
    cur_[pos + 1] = {Kind::A, 1};
    cur_.insert(cur_.begin() + std::ptrdiff_t(pos + 2), Tok{Kind::Phi, 0});
    ++steps_;
  }

  // Inserts b^-1 b (inner) keeping the b-block shape: b^k b^-k grows to b^(k+1) b^-(k+1).
  void insert_pair(std::size_t pos, bool) {
    std::size_t mid = pos;
    while (mid < cur_.size() && cur_[mid] == Tok{Kind::B, 1}) ++mid;
    cur_.insert(cur_.begin() + std::ptrdiff_t(mid), {Tok{Kind::B, 1}, Tok{Kind::B, -1}});
    ++steps_;
  }

  // b^-1 Phi_k b -> Phi_(k+1) at pos.
  void conjugate(std::size_t pos) {
    need(pos + 2 < cur_.size() && cur_[pos] == Tok{Kind::B, -1} && cur_[pos + 1].kind == Kind::Phi &&
             cur_[pos + 2] == Tok{Kind::B, 1},
         "b^-1 phi^k(C) b -> phi^(k+1)(C)");
    int k = cur_[pos + 1].value;
    cur_.erase(cur_.begin() + std::ptrdiff_t(pos), cur_.begin() + std::ptrdiff_t(pos + 3));
    cur_.insert(cur_.begin() + std::ptrdiff_t(pos), Tok{Kind::Phi, k + 1});
    ++steps_;
  }

  void group_ab(std::size_t pos) {
    need(pos + 1 < cur_.size() && cur_[pos] == Tok{Kind::A, 1} && cur_[pos + 1] == Tok{Kind::B, 1}, "a b -> (ab)");
    cur_.erase(cur_.begin() + std::ptrdiff_t(pos + 1));
    cur_[pos] = {Kind::AB, 0};
    ++steps_;
  }

  // a b^m at pos became b^(m-1) a b Phi_1 .. Phi_(m-1).
  void expect_eq1(std::size_t pos, int m) {
    std::size_t i = pos;
    for (int k = 0; k < m - 1; ++k) need(at(i++) == Tok{Kind::B, 1}, "shape b^(m-1)");
    need(at(i++) == Tok{Kind::A, 1}, "shape a");
    need(at(i++) == Tok{Kind::B, 1}, "shape b");
    for (int k = 1; k <= m - 1; ++k) need(at(i++) == Tok{Kind::Phi, k}, "shape phi^k(C)");
    ++checks_;
  }

  // a^(m-1) b^(m-1) (ab) Phi_1 .. Phi_(m-1), followed by the already derived tail.
  void expect_eq2(int m) {
    std::size_t i = 0;
    for (int k = 0; k < m - 1; ++k) need(at(i++) == Tok{Kind::A, 1}, "shape a^(m-1)");
    for (int k = 0; k < m - 1; ++k) need(at(i++) == Tok{Kind::B, 1}, "shape b^(m-1)");
    need(at(i++) == Tok{Kind::AB, 0}, "shape ab");
    for (int k = 1; k <= m - 1; ++k) need(at(i++) == Tok{Kind::Phi, k}, "shape phi^k(C)");
    ++checks_;
  }

  Tok at(std::size_t i) const {
    if (i >= cur_.size()) throw Error("derivation ran off the end");
    return cur_[i];
  }

  static void need(bool ok, const char* what) {
    if (!ok) throw Error(std::string("rewrite does not apply: ") + what);
  }

  int n_;
  std::vector<Tok> cur_;
  std::size_t steps_ = 0, checks_ = 0;
  std::string failure_;
};

enum class UMode { RewriteProof, Dehn };

inline const char* to_string(UMode m) { return m == UMode::RewriteProof ? "rewrite-proof" : "dehn"; }

struct UReport {
  int n = 0;
  UMode mode = UMode::RewriteProof;
  bool passed = false;
  std::size_t steps = 0;
  BigInt u_len;
  bool expansion_compared = false;
  AbelianVerdict abelian = AbelianVerdict::Inconclusive;
  std::string detail;
};

// Relators used by the derivation must be defining relations of G.
inline bool derivation_relations_present(const RipsParams& p) {
  auto G = alphabets::G();
  auto pres = presentation_G(p);
  auto has = [&](const Word& r) {
    for (const auto& x : pres.relators())
      if (x == r) return true;
    return false;
  };
  bool ok = has(relator(parse_word(G, "a^-1 b^-1 a b"), word_C(p, G)));
  for (int i = 1; i <= 2; ++i)
    ok = ok && has(relator(concat({letter_word(G, "b", -1), letter_word(G, "c" + std::to_string(i)), letter_word(G, "b")}),
                           word_Ci(p, i, G)));
  return ok;
}

inline constexpr std::size_t kExpansionCompareLimit = 4'000'000;

inline UReport verify_u(int n, const RipsParams& p, UMode mode) {
  if (n < 1) throw InvalidParameter("n must be at least 1");
  auto G = alphabets::G();
  auto pres = presentation_G(p);
  UReport rep;
  rep.n = n;
  rep.mode = mode;
  GrowthModel growth(p);
  rep.u_len = growth.length_u(n);
  Word anbn = concat(letter_word(G, "a", n), letter_word(G, "b", n));

  // Abelianization from letter counts, so it is available without expanding u_n.
  std::vector<mpz_class> diff = exponent_vector(anbn);
  {
    auto phi = c_side_phi(p).matrix;
    std::array<BigInt, 2> c{BigInt(p.r), BigInt(0)}, tot{0, 0};
    for (int k = 1; k <= p.r; ++k) c[1] += k;
    std::vector<std::array<BigInt, 2>> powers{c};
    for (int k = 1; k < n; ++k) {
      auto& v = powers.back();
      powers.push_back({phi.a[0][0] * v[0] + phi.a[0][1] * v[1], phi.a[1][0] * v[0] + phi.a[1][1] * v[1]});
    }
    for (int m = 2; m <= n; ++m)
      for (int k = 1; k <= m - 1; ++k) {
        tot[0] += powers[std::size_t(k)][0];
        tot[1] += powers[std::size_t(k)][1];
      }
    diff[G->at("a")] -= n;
    diff[G->at("b")] -= n;
    diff[G->at("c1")] -= tot[0];
    diff[G->at("c2")] -= tot[1];
  }
  rep.abelian = relator_lattice(pres).contains(diff) ? AbelianVerdict::Inconclusive : AbelianVerdict::DistinctCertified;

  if (mode == UMode::RewriteProof) {
    if (!derivation_relations_present(p)) {
      rep.detail = "rewrite rules are not defining relations";
      return rep;
    }
    UDerivation d(n);
    bool ok = d.run();
    rep.steps = d.steps();
    if (!ok) {
      rep.detail = d.failure();
      return rep;
    }
    auto prog = build_u(n, p);
    if (d.layout() != prog.layout) {
      rep.detail = "derived layout differs from u_n";
      return rep;
    }
    if (big_from_length(prog.length()) != rep.u_len) {
      rep.detail = "program length differs from counted length";
      return rep;
    }
    if (rep.u_len <= BigInt(std::to_string(kExpansionCompareLimit))) {
      // Independent expansion of the derived tokens through words.substitute.
      auto U = alphabets::U();
      auto phi = c_side_phi(p);
      std::vector<Word> phik{word_C(p, alphabets::C())};
      int maxk = 0;
      for (int k : prog.layout) maxk = std::max(maxk, k);
      for (int k = 1; k <= maxk; ++k) phik.push_back(phi.apply(phik.back()));
      Word expanded(U);
      for (int k : prog.layout)
        expanded.append(k < 0 ? letter_word(U, "ab") : rebase(phik[std::size_t(k)], U));
      rep.expansion_compared = true;
      if (!(expanded == prog.expand())) {
        rep.detail = "token expansion differs from u_n";
        return rep;
      }
    }
    rep.passed = true;
    rep.detail = std::to_string(d.shape_checks()) + " shape checks";
    return rep;
  }

  DehnOracle dehn(pres);
  auto prog = build_u(n, p);
  Word u = u_word_in_G(prog.expand());
  Word w = concat(anbn, invert(u));
  auto trace = dehn.reduce(w, false);
  rep.passed = trace.final_word.empty();
  rep.expansion_compared = true;
  rep.detail = "word length " + std::to_string(anbn.length() + u.length());
  if (rep.abelian != abelianized_equal(anbn, u, pres)) {
    rep.passed = false;
    rep.detail += "; abelian verdicts disagree";
  }
  return rep;
}

struct FreenessReport {
  std::size_t trials = 0, maxlen = 0, failures = 0;
  std::uint64_t seed = 0;
  std::optional<Word> first_failure;
};

// Random nonempty reduced words on b, d1, d2 must be nontrivial in G_bcd.
inline FreenessReport sample_H_freeness(const RipsParams& p, std::size_t trials, std::size_t maxlen,
                                        std::uint64_t seed) {
  DehnOracle dehn(presentation_Gbcd(p));
  auto a = dehn.presentation().alphabet();
  auto gens = generators_named(a, {"b", "d1", "d2"});
  Rng rng(seed);
  FreenessReport rep;
  rep.maxlen = maxlen;
  rep.seed = seed;
  for (std::size_t t = 0; t < trials; ++t) {
    Word w = random_reduced_word(rng, a, gens, uniform_size(rng, 1, maxlen));
    ++rep.trials;
    if (dehn.is_trivial(w)) {
      ++rep.failures;
      if (!rep.first_failure) rep.first_failure = w;
    }
  }
  return rep;
}

struct MitraRow {
  int n = 0;
  Word gamma;
  std::size_t gamma_len = 0;
  bool strongly_reduced = false;
  bool geodesic = false;
  Word longest_match;
  std::size_t longest_position = 0;
  std::size_t ratio_num = 0, ratio_den = 1;
  WLength w_len;
  HDistance h_distance;
  BigInt g_distance;  // basepoint convention: gamma_n passes through e
};

struct CTReport {
  RipsParams params;
  int n_max = 0;
  std::uint64_t seed = kDefaultSeed;
  PieceReport certificate;
  std::vector<MitraRow> rows;
  bool verdict = false;  // M(N) <= 0 for every tested N
  bool longest_match_is_a_d1_a = false;
  std::vector<int> longest_match_exceptions;
};

inline CTReport run_ct_experiment(const RipsParams& p, int n_max, std::uint64_t seed = kDefaultSeed) {
  if (n_max < 1) throw InvalidParameter("n_max must be at least 1");
  auto G = alphabets::G();
  DehnOracle dehn(presentation_G(p));
  GrowthModel growth(p);
  CTReport rep;
  rep.params = p;
  rep.n_max = n_max;
  rep.seed = seed;
  rep.certificate = dehn.certificate();
  const Word ada = parse_word(G, "a^-1 d1 a");
  rep.verdict = true;
  rep.longest_match_is_a_d1_a = true;
  for (int n = 1; n <= n_max; ++n) {
    MitraRow row;
    row.n = n;
    row.gamma = gamma_word(n, G);
    row.gamma_len = row.gamma.length();
    auto rc = is_strongly_dehn_reduced(row.gamma, dehn.relator_set());
    row.strongly_reduced = rc.holds;
    row.geodesic = dehn.certify_geodesic(row.gamma);
    row.longest_match = rc.longest_match;
    row.longest_position = rc.longest_position;
    row.ratio_num = rc.ratio_num;
    row.ratio_den = rc.ratio_den;
    row.w_len = growth.length_w(n);
    row.h_distance = h_distance_to_lambda(n, p);
    row.g_distance = 0;
    if (!(row.longest_match == ada)) {
      rep.longest_match_is_a_d1_a = false;
      rep.longest_match_exceptions.push_back(n);
    }
    bool row_ok = row.geodesic && row.h_distance.positivity_certified && row.h_distance.value == n &&
                  row.g_distance == 0;
    rep.verdict = rep.verdict && row_ok;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

inline std::string mitra_csv(const CTReport& rep) {
  std::string out = "n,gamma_len,strongly_reduced,geodesic,longest_match,longest_match_len,h_distance,g_distance,w_len_log10\n";
  char buf[64];
  for (const auto& r : rep.rows) {
    std::snprintf(buf, sizeof buf, "%.10g", r.w_len.log10);
    out += std::to_string(r.n) + "," + std::to_string(r.gamma_len) + "," + (r.strongly_reduced ? "1" : "0") + "," +
           (r.geodesic ? "1" : "0") + ",\"" + to_string(r.longest_match) + "\"," +
           std::to_string(r.longest_match.length()) + "," + r.h_distance.value.get_str() + "," +
           r.g_distance.get_str() + "," + buf + "\n";
  }
  return out;
}

}  // namespace ctw
