#pragma once

#include <gmpxx.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctw/compressed.hpp"
#include "ctw/rips.hpp"
#include "ctw/words.hpp"

namespace ctw {

using BigInt = mpz_class;

inline constexpr std::size_t kDefaultExactBits = std::size_t(1) << 20;

inline double log10_big(const BigInt& x) {
  if (x <= 0) throw InvalidParameter("log10 of a nonpositive integer");
  long exp = 0;
  double m = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log10(m) + double(exp) * std::log10(2.0);
}

inline BigInt big_from_length(slp::Length n) {
  BigInt hi(std::to_string(std::uint64_t(n >> 64)));
  BigInt lo(std::to_string(std::uint64_t(n)));
  return (hi << 64) + lo;
}

// M[i][j] = occurrences of generator i in the image of generator j.
struct Mat2 {
  std::array<std::array<BigInt, 2>, 2> a{};

  static Mat2 identity() {
    Mat2 m;
    m.a[0][0] = 1;
    m.a[1][1] = 1;
    return m;
  }

  std::size_t max_bits() const {
    std::size_t b = 0;
    for (const auto& row : a)
      for (const auto& x : row) b = std::max(b, std::size_t(mpz_sizeinbase(x.get_mpz_t(), 2)));
    return b;
  }

  BigInt column_sum(int j) const { return a[0][j] + a[1][j]; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    Mat2 m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m.a[i][j] = x.a[i][0] * y.a[0][j] + x.a[i][1] * y.a[1][j];
    return m;
  }

  friend bool operator==(const Mat2& x, const Mat2& y) { return x.a == y.a; }
};

// Nonnegative matrix as 10^scale * m with max(m) == 1.
struct LogMat2 {
  std::array<std::array<double, 2>, 2> m{};
  double scale = 0;

  static LogMat2 identity() {
    LogMat2 l;
    l.m[0][0] = l.m[1][1] = 1;
    return l;
  }

  static LogMat2 from_exact(const Mat2& x) {
    LogMat2 l;
    double top = -INFINITY;
    std::array<std::array<double, 2>, 2> lg{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        lg[i][j] = x.a[i][j] > 0 ? log10_big(x.a[i][j]) : -INFINITY;
        top = std::max(top, lg[i][j]);
      }
    if (top == -INFINITY) return l;
    l.scale = top;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) l.m[i][j] = lg[i][j] == -INFINITY ? 0 : std::pow(10.0, lg[i][j] - top);
    return l;
  }

  double log10_entry(int i, int j) const { return m[i][j] > 0 ? scale + std::log10(m[i][j]) : -INFINITY; }
  double log10_column_sum(int j) const { return scale + std::log10(m[0][j] + m[1][j]); }

  friend LogMat2 operator*(const LogMat2& x, const LogMat2& y) {
    LogMat2 r;
    double top = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        r.m[i][j] = x.m[i][0] * y.m[0][j] + x.m[i][1] * y.m[1][j];
        top = std::max(top, r.m[i][j]);
      }
    r.scale = x.scale + y.scale;
    if (top > 0) {
      for (auto& row : r.m)
        for (auto& v : row) v /= top;
      r.scale += std::log10(top);
    }
    return r;
  }
};

// Exact entries while they stay under the bit threshold, log-domain always.
// The log part is carried independently of the exact one.
struct CountMatrix {
  std::optional<Mat2> exact;
  LogMat2 log;

  static CountMatrix identity() { return {Mat2::identity(), LogMat2::identity()}; }
  static CountMatrix of(const Mat2& m) { return {m, LogMat2::from_exact(m)}; }

  static CountMatrix mul(const CountMatrix& x, const CountMatrix& y, std::size_t exact_bits) {
    CountMatrix r;
    r.log = x.log * y.log;
    if (x.exact && y.exact && x.exact->max_bits() + y.exact->max_bits() + 1 <= exact_bits) r.exact = *x.exact * *y.exact;
    return r;
  }

  static CountMatrix pow(CountMatrix base, std::uint64_t e, std::size_t exact_bits) {
    CountMatrix r = identity();
    while (e > 0) {
      if (e & 1) r = mul(r, base, exact_bits);
      e >>= 1;
      if (e) base = mul(base, base, exact_bits);
    }
    return r;
  }
};

inline Mat2 count_matrix(const std::array<Word, 2>& images) {
  Mat2 m;
  for (int j = 0; j < 2; ++j) {
    auto c = letter_counts(images[j]);
    for (int i = 0; i < 2; ++i) m.a[i][j] = BigInt(std::to_string(c[i]));
  }
  return m;
}

// Positive endomorphism of the free monoid on two letters.
struct PositiveEndo {
  AlphabetPtr alpha;
  std::array<Word, 2> images;
  Mat2 matrix;

  PositiveEndo(AlphabetPtr a, std::array<Word, 2> im) : alpha(std::move(a)), images(std::move(im)) {
    if (alpha->size() != 2) throw InvalidParameter("endomorphism alphabet must have two letters");
    for (const auto& w : images) {
      if (!same_alphabet(alpha, w.alphabet())) throw AlphabetMismatch();
      if (!is_positive(w)) throw InvalidParameter("endomorphism image is not positive: " + to_string(w));
    }
    matrix = count_matrix(images);
  }

  Word apply(const Word& w) const { return substitute(w, std::vector<Word>(images.begin(), images.end())); }
};

// (f o g)(x) = f(g(x)).
inline PositiveEndo compose(const PositiveEndo& f, const PositiveEndo& g) {
  return PositiveEndo(f.alpha, {f.apply(g.images[0]), f.apply(g.images[1])});
}

// Conjugation action on F(d1, d2) by ab, c1 or c2.
inline PositiveEndo endo_of_letter(const RipsParams& p, const std::string& x) {
  auto d = alphabets::D();
  if (x == "ab") return PositiveEndo(d, {word_Dj(p, 1, d), word_Dj(p, 2, d)});
  if (x == "c1") return PositiveEndo(d, {word_Dij(p, 1, 1, d), word_Dij(p, 1, 2, d)});
  if (x == "c2") return PositiveEndo(d, {word_Dij(p, 2, 1, d), word_Dij(p, 2, 2, d)});
  throw InvalidParameter("no conjugation action for " + x);
}

// c_i -> C_i.
inline PositiveEndo c_side_phi(const RipsParams& p) {
  auto c = alphabets::C();
  return PositiveEndo(c, {word_Ci(p, 1, c), word_Ci(p, 2, c)});
}

struct WLength {
  std::optional<BigInt> exact;
  double log10 = 0;
};

// Letter-count matrices of the conjugation actions along u_n. For a word u
// over {ab, c1, c2}, Mat(u) counts letters of u^-1 d u, so Mat(uv) = Mat(v) Mat(u).
class GrowthModel {
 public:
  explicit GrowthModel(const RipsParams& p, std::size_t exact_bits = kDefaultExactBits)
      : p_(p), bits_(exact_bits) {
    p_.validate();
    ab_ = CountMatrix::of(endo_of_letter(p_, "ab").matrix);
    levels_.push_back({CountMatrix::of(endo_of_letter(p_, "c1").matrix), CountMatrix::of(endo_of_letter(p_, "c2").matrix)});
    auto phi = c_side_phi(p_).matrix;
    c_counts_ = {BigInt(p_.r), BigInt(0)};
    for (int k = 1; k <= p_.r; ++k) c_counts_[1] += k;
    phi_ = phi;
  }

  const RipsParams& params() const { return p_; }
  std::size_t exact_bits() const { return bits_; }
  const CountMatrix& ab_matrix() const { return ab_; }

  // A_i^(k) = Mat(phi^k(c_i)).
  const CountMatrix& level(int k, int i) {
    while (int(levels_.size()) <= k) {
      const auto& prev = levels_.back();
      std::array<CountMatrix, 2> next{staircase(prev, long(p_.r) * 1), staircase(prev, long(p_.r) * 2)};
      levels_.push_back(std::move(next));
    }
    return levels_[std::size_t(k)][std::size_t(i - 1)];
  }

  // Mat(phi^k(C)).
  CountMatrix phi_power_C(int k) {
    level(k, 1);
    return staircase(levels_[std::size_t(k)], 0);
  }

  CountMatrix u_matrix(int n) {
    if (n < 1) throw InvalidParameter("n must be at least 1");
    while (int(u_.size()) < n) {
      int m = int(u_.size()) + 1;
      CountMatrix cur = u_.empty() ? ab_ : CountMatrix::mul(ab_, u_.back(), bits_);
      if (m >= 2) {
        for (int k = 1; k <= m - 1; ++k) cur = CountMatrix::mul(phi_power_C(k), cur, bits_);
      }
      u_.push_back(cur);
    }
    return u_[std::size_t(n - 1)];
  }

  WLength length_w(int n) {
    auto m = u_matrix(n);
    WLength w;
    if (m.exact) w.exact = m.exact->column_sum(0);
    w.log10 = m.log.log10_column_sum(0);
    return w;
  }

  // |phi^k(C)| over {c1, c2}.
  BigInt length_phi_power_C(int k) const {
    std::array<BigInt, 2> v = c_counts_;
    for (int s = 0; s < k; ++s) v = {phi_.a[0][0] * v[0] + phi_.a[0][1] * v[1], phi_.a[1][0] * v[0] + phi_.a[1][1] * v[1]};
    return v[0] + v[1];
  }

  BigInt length_u(int n) const {
    if (n < 1) throw InvalidParameter("n must be at least 1");
    BigInt len = 1;
    for (int m = 2; m <= n; ++m) {
      len += 1;
      for (int k = 1; k <= m - 1; ++k) len += length_phi_power_C(k);
    }
    return len;
  }

 private:
  // Mat(prod_{k=1..r} c1 c2^(base+k)) with Mat(c_i) = A[i-1].
  CountMatrix staircase(const std::array<CountMatrix, 2>& A, long base) const {
    CountMatrix acc = CountMatrix::identity();
    for (int k = 1; k <= p_.r; ++k) {
      CountMatrix seg = CountMatrix::mul(CountMatrix::pow(A[1], std::uint64_t(base + k), bits_), A[0], bits_);
      acc = CountMatrix::mul(seg, acc, bits_);
    }
    return acc;
  }

  RipsParams p_;
  std::size_t bits_;
  CountMatrix ab_;
  std::vector<std::array<CountMatrix, 2>> levels_;
  std::vector<CountMatrix> u_;
  std::array<BigInt, 2> c_counts_;
  Mat2 phi_;
};

// u_n as a straight-line program over {ab, c1, c2}.
struct UProgram {
  slp::Store store;
  slp::NodeId root = slp::kEmpty;
  std::vector<slp::NodeId> phi_C;  // phi^k(C) for k = 0..n-1
  std::vector<int> layout;          // top-level factors: -1 for ab, k for phi^k(C)

  slp::Length length() const { return store.length(root); }
  Word expand() const { return store.to_word(root, alphabets::U()); }
};

inline UProgram build_u(int n, const RipsParams& p) {
  if (n < 1) throw InvalidParameter("n must be at least 1");
  auto U = alphabets::U();
  UProgram prog;
  auto& s = prog.store;
  const int ab = Letter{U->at("ab"), false}.code();
  const int c1 = Letter{U->at("c1"), false}.code();
  const int c2 = Letter{U->at("c2"), false}.code();
  std::vector<slp::NodeId> images(U->size() * 2, slp::kEmpty);
  images[std::size_t(ab)] = s.letter(ab);
  images[std::size_t(ab ^ 1)] = s.letter(ab ^ 1);
  images[std::size_t(c1)] = s.from_word(word_Ci(p, 1, U));
  images[std::size_t(c1 ^ 1)] = s.inverse(images[std::size_t(c1)]);
  images[std::size_t(c2)] = s.from_word(word_Ci(p, 2, U));
  images[std::size_t(c2 ^ 1)] = s.inverse(images[std::size_t(c2)]);
  prog.phi_C.push_back(s.from_word(word_C(p, U)));
  std::unordered_map<slp::NodeId, slp::NodeId> memo;
  for (int k = 1; k < n; ++k) prog.phi_C.push_back(s.map(prog.phi_C.back(), images, memo));
  slp::NodeId letter_ab = s.letter(ab);
  prog.root = letter_ab;
  prog.layout.push_back(-1);
  for (int m = 2; m <= n; ++m) {
    prog.root = s.concat(prog.root, letter_ab);
    prog.layout.push_back(-1);
    for (int k = 1; k <= m - 1; ++k) {
      prog.root = s.concat(prog.root, prog.phi_C[std::size_t(k)]);
      prog.layout.push_back(k);
    }
  }
  return prog;
}

// Rewrite a word over {ab, c1, c2} in the generators of G.
inline Word u_word_in_G(const Word& u) {
  auto G = alphabets::G();
  auto U = alphabets::U();
  if (!same_alphabet(U, u.alphabet())) throw AlphabetMismatch();
  return substitute(u, {parse_word(G, "a b"), letter_word(G, "c1"), letter_word(G, "c2")});
}

struct DistortionRow {
  int n = 0;
  BigInt gamma_len;
  WLength w_len;
};

inline std::vector<DistortionRow> distortion_table(const RipsParams& p, int n_max,
                                                   std::size_t exact_bits = kDefaultExactBits) {
  if (n_max < 1) throw InvalidParameter("n_max must be at least 1");
  GrowthModel g(p, exact_bits);
  std::vector<DistortionRow> rows;
  for (int n = 1; n <= n_max; ++n) rows.push_back({n, BigInt(4 * n + 1), g.length_w(n)});
  return rows;
}

inline std::string distortion_csv(const std::vector<DistortionRow>& rows) {
  std::string out = "n,gamma_len,w_len_exact,w_len_log10\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.10g", r.w_len.log10);
    out += std::to_string(r.n) + "," + r.gamma_len.get_str() + "," + (r.w_len.exact ? r.w_len.exact->get_str() : "") +
           "," + buf + "\n";
  }
  return out;
}

}  // namespace ctw
