#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ctw/rips.hpp"
#include "ctw/words.hpp"

namespace ctw {

struct Fraction {
  std::int64_t num = 1;
  std::int64_t den = 6;

  double value() const { return double(num) / double(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  static Fraction parse(std::string_view s) {
    Fraction f;
    auto slash = s.find('/');
    auto rd = [&](std::string_view t, std::int64_t& v) {
      auto res = std::from_chars(t.data(), t.data() + t.size(), v);
      if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ParseError("bad fraction '" + std::string(s) + "'");
    };
    if (slash == std::string_view::npos) {
      rd(s, f.num);
      f.den = 1;
    } else {
      rd(s.substr(0, slash), f.num);
      rd(s.substr(slash + 1), f.den);
    }
    if (f.den <= 0) throw ParseError("bad fraction '" + std::string(s) + "'");
    return f;
  }
};

// All rotations of the relators and their inverses, deduplicated and sorted
// lexicographically by letter code. Elements are stored implicitly as
// (relator, start, inverted); sorted order doubles as the prefix index.
class SymmetrizedRelatorSet {
 public:
  struct Range {
    std::uint32_t lo = 0, hi = 0;
    bool empty() const { return lo >= hi; }
    std::uint32_t size() const { return hi - lo; }
  };

  explicit SymmetrizedRelatorSet(const Presentation& p) : alpha_(p.alphabet()) {
    for (const auto& w : p.relators()) {
      auto core = cyclic_reduce(w).core;
      if (core.empty()) throw InvalidParameter("empty relator after cyclic reduction");
      rels_.push_back(core.codes());
    }
    for (std::uint32_t i = 0; i < rels_.size(); ++i) {
      auto n = std::uint32_t(rels_[i].size());
      max_len_ = std::max(max_len_, std::size_t(n));
      for (std::uint32_t s = 0; s < n; ++s) {
        elems_.push_back({i, s, false, n});
        elems_.push_back({i, s, true, n});
      }
    }
    std::sort(elems_.begin(), elems_.end(), [&](const Elem& a, const Elem& b) { return compare(a, b) < 0; });
    elems_.erase(std::unique(elems_.begin(), elems_.end(),
                             [&](const Elem& a, const Elem& b) { return compare(a, b) == 0; }),
                 elems_.end());
    lcp_.resize(elems_.empty() ? 0 : elems_.size() - 1);
    for (std::size_t i = 0; i + 1 < elems_.size(); ++i) lcp_[i] = common_prefix(elems_[i], elems_[i + 1]);
    build_min_table();
  }

  const AlphabetPtr& alphabet() const { return alpha_; }
  std::size_t size() const { return elems_.size(); }
  std::size_t length(std::size_t e) const { return elems_[e].len; }
  std::size_t max_length() const { return max_len_; }
  std::size_t relator_count() const { return rels_.size(); }

  int letter(std::size_t e, std::size_t d) const { return letter(elems_[e], d); }

  Word element(std::size_t e) const {
    std::vector<int> c(elems_[e].len);
    for (std::size_t d = 0; d < c.size(); ++d) c[d] = letter(e, d);
    return Word::from_codes(alpha_, c);
  }

  std::vector<Word> elements() const {
    std::vector<Word> out;
    for (std::size_t e = 0; e < size(); ++e) out.push_back(element(e));
    return out;
  }

  // Longest common prefix of sorted neighbours e and e+1.
  std::size_t adjacent_lcp(std::size_t e) const { return lcp_[e]; }

  Range full() const { return {0, std::uint32_t(elems_.size())}; }

  // Elements of r (which share their first d letters) whose d-th letter is `code`.
  Range narrow(Range r, std::size_t d, int code) const {
    if (r.empty()) return r;
    if (r.size() == 1) {
      const Elem& e = elems_[r.lo];
      if (d < e.len && letter(e, d) == code) return r;
      return {r.lo, r.lo};
    }
    auto key = [&](std::uint32_t i) { return d < elems_[i].len ? letter(elems_[i], d) : -1; };
    std::uint32_t lo = r.lo, hi = r.hi;
    while (lo < hi) {
      auto mid = lo + (hi - lo) / 2;
      if (key(mid) < code) lo = mid + 1; else hi = mid;
    }
    std::uint32_t first = lo;
    hi = r.hi;
    while (lo < hi) {
      auto mid = lo + (hi - lo) / 2;
      if (key(mid) <= code) lo = mid + 1; else hi = mid;
    }
    return {first, lo};
  }

  // Shortest element in a nonempty range; ties go to the smallest index.
  std::uint32_t shortest_in(Range r) const {
    if (r.size() == 1) return r.lo;
    unsigned k = 31 - __builtin_clz(r.size());
    auto a = table_[k][r.lo], b = table_[k][r.hi - (1u << k)];
    return better(a, b);
  }

 private:
  struct Elem {
    std::uint32_t rel, start;
    bool inv;
    std::uint32_t len;
  };

  int letter(const Elem& e, std::size_t d) const {
    const auto& R = rels_[e.rel];
    std::size_t n = R.size();
    if (!e.inv) return R[(e.start + d) % n];
    return inverse_code(R[(e.start + n - d % n) % n]);
  }

  std::size_t common_prefix(const Elem& a, const Elem& b) const {
    std::size_t m = std::min(a.len, b.len), d = 0;
    while (d < m && letter(a, d) == letter(b, d)) ++d;
    return d;
  }

  int compare(const Elem& a, const Elem& b) const {
    std::size_t d = common_prefix(a, b);
    if (d == a.len || d == b.len) return a.len == b.len ? 0 : (a.len < b.len ? -1 : 1);
    return letter(a, d) < letter(b, d) ? -1 : 1;
  }

  std::uint32_t better(std::uint32_t a, std::uint32_t b) const {
    if (elems_[a].len != elems_[b].len) return elems_[a].len < elems_[b].len ? a : b;
    return std::min(a, b);
  }

  void build_min_table() {
    std::size_t n = elems_.size();
    if (n == 0) return;
    table_.emplace_back(n);
    std::iota(table_[0].begin(), table_[0].end(), 0u);
    for (std::size_t k = 1; (std::size_t(1) << k) <= n; ++k) {
      std::size_t half = std::size_t(1) << (k - 1);
      std::vector<std::uint32_t> row(n - (std::size_t(1) << k) + 1);
      for (std::size_t i = 0; i < row.size(); ++i) row[i] = better(table_[k - 1][i], table_[k - 1][i + half]);
      table_.push_back(std::move(row));
    }
  }

  AlphabetPtr alpha_;
  std::vector<std::vector<int>> rels_;
  std::vector<Elem> elems_;
  std::vector<std::uint32_t> lcp_;
  std::vector<std::vector<std::uint32_t>> table_;
  std::size_t max_len_ = 0;
};

struct PieceReport {
  bool holds = true;
  Fraction lambda;
  std::size_t max_piece = 0;      // longest common prefix over all pairs
  std::size_t ratio_num = 0;      // max ratio = ratio_num / ratio_den
  std::size_t ratio_den = 1;
  std::optional<Word> element1, element2, prefix;
  std::size_t element_count = 0;
  std::size_t relator_count = 0;
  std::size_t pairs_examined = 0;
  std::size_t violating_pairs = 0;

  double max_ratio() const { return double(ratio_num) / double(ratio_den); }
};

// Neighbours in sorted order realise every maximal common prefix, so checking
// adjacent pairs decides the condition for all pairs.
inline PieceReport check_cprime(const SymmetrizedRelatorSet& S, Fraction lambda) {
  if (lambda.num <= 0 || lambda.num >= lambda.den) throw InvalidParameter("lambda must lie in (0,1)");
  PieceReport rep;
  rep.lambda = lambda;
  rep.element_count = S.size();
  rep.relator_count = S.relator_count();
  std::size_t best = S.size();
  for (std::size_t i = 0; i + 1 < S.size(); ++i) {
    std::size_t l = S.adjacent_lcp(i);
    std::size_t m = std::min(S.length(i), S.length(i + 1));
    ++rep.pairs_examined;
    rep.max_piece = std::max(rep.max_piece, l);
    if (std::int64_t(l) * lambda.den >= lambda.num * std::int64_t(m)) {
      rep.holds = false;
      ++rep.violating_pairs;
    }
    // l/m > num/den
    if (best == S.size() || l * rep.ratio_den > rep.ratio_num * m) {
      rep.ratio_num = l;
      rep.ratio_den = m;
      best = i;
    }
  }
  if (best != S.size()) {
    rep.element1 = S.element(best);
    rep.element2 = S.element(best + 1);
    std::vector<int> c;
    for (std::size_t d = 0; d < rep.ratio_num; ++d) c.push_back(S.letter(best, d));
    rep.prefix = Word::from_codes(S.alphabet(), c);
  }
  return rep;
}

inline PieceReport check_cprime(const Presentation& p, Fraction lambda) {
  if (p.relators().empty()) {
    PieceReport rep;
    rep.lambda = lambda;
    return rep;
  }
  return check_cprime(SymmetrizedRelatorSet(p), lambda);
}

// Least r >= 18 with P_G(r) satisfying C'(1/6) at l = 2; pinned by the test suite
// against find_min_r.
inline constexpr int kDefaultR = 21;

struct MinRResult {
  std::optional<int> r;
  std::vector<std::pair<int, PieceReport>> checked;
};

// Checks every r in [r_lo, r_hi] up to the first success; no monotonicity assumed.
inline MinRResult find_min_r(Fraction lambda, int r_lo, int r_hi, const std::string& group, int l = 2) {
  if (r_lo < 1 || r_lo > r_hi) throw InvalidParameter("need 1 <= r_lo <= r_hi");
  MinRResult out;
  for (int r = r_lo; r <= r_hi; ++r) {
    auto rep = check_cprime(presentation_by_name(group, RipsParams(r, l)), lambda);
    bool ok = rep.holds;
    out.checked.emplace_back(r, std::move(rep));
    if (ok) {
      out.r = r;
      break;
    }
  }
  return out;
}

struct DehnStep {
  std::size_t position = 0;
  Word alpha, rho, replacement;
};

struct DehnTrace {
  std::vector<DehnStep> steps;
  Word final_word;
};

namespace detail {

struct PrefixMatch {
  std::size_t len = 0;
  std::uint32_t elem = 0;
};

// Longest alpha at the current position with 2|alpha| > |rho| for some rho.
template <class At>
PrefixMatch longest_half_match(const SymmetrizedRelatorSet& S, std::size_t avail, At&& at) {
  PrefixMatch best;
  auto range = S.full();
  std::size_t limit = std::min(avail, S.max_length());
  for (std::size_t d = 0; d < limit; ++d) {
    range = S.narrow(range, d, at(d));
    if (range.empty()) break;
    auto e = S.shortest_in(range);
    if (2 * (d + 1) > S.length(e)) best = {d + 1, e};
  }
  return best;
}

}  // namespace detail

// Leftmost-then-longest Dehn reduction.
inline DehnTrace dehn_reduce(const Word& w, const SymmetrizedRelatorSet& S, bool record = true) {
  if (!same_alphabet(w.alphabet(), S.alphabet())) throw AlphabetMismatch();
  DehnTrace trace;
  auto codes = free_reduce(w).codes();
  std::vector<int> left, right(codes.rbegin(), codes.rend());
  left.reserve(codes.size());
  std::size_t back = S.max_length() > 0 ? S.max_length() - 1 : 0;
  while (!right.empty()) {
    auto at = [&](std::size_t d) { return right[right.size() - 1 - d]; };
    auto m = detail::longest_half_match(S, right.size(), at);
    if (m.len == 0) {
      left.push_back(right.back());
      right.pop_back();
      continue;
    }
    std::size_t L = S.length(m.elem);
    if (record) {
      DehnStep step;
      step.position = left.size();
      step.rho = S.element(m.elem);
      std::vector<int> a, b;
      for (std::size_t d = 0; d < m.len; ++d) a.push_back(S.letter(m.elem, d));
      for (std::size_t d = L; d > m.len; --d) b.push_back(inverse_code(S.letter(m.elem, d - 1)));
      step.alpha = Word::from_codes(S.alphabet(), a);
      step.replacement = Word::from_codes(S.alphabet(), b);
      trace.steps.push_back(std::move(step));
    }
    right.resize(right.size() - m.len);
    for (std::size_t d = m.len; d < L; ++d) {
      int x = inverse_code(S.letter(m.elem, d));
      if (!right.empty() && right.back() == inverse_code(x))
        right.pop_back();
      else
        right.push_back(x);
    }
    while (!left.empty() && !right.empty() && left.back() == inverse_code(right.back())) {
      left.pop_back();
      right.pop_back();
    }
    for (std::size_t k = std::min(left.size(), back); k > 0; --k) {
      right.push_back(left.back());
      left.pop_back();
    }
  }
  trace.final_word = Word::from_codes(S.alphabet(), left);
  return trace;
}

// Applies a trace to its input step by step; throws if a step does not match.
inline Word replay_trace(const Word& w, const DehnTrace& trace) {
  auto cur = free_reduce(w).codes();
  for (const auto& st : trace.steps) {
    auto a = st.alpha.codes();
    if (st.position + a.size() > cur.size() || !std::equal(a.begin(), a.end(), cur.begin() + std::ptrdiff_t(st.position)))
      throw Error("trace step does not match the current word");
    auto rho = concat(st.alpha, invert(st.replacement));
    if (!(rho == st.rho)) throw Error("trace step is not alpha * beta");
    Word next(w.alphabet());
    for (std::size_t i = 0; i < st.position; ++i) next.push(Letter::from_code(cur[i]));
    next.append(st.replacement);
    for (std::size_t i = st.position + a.size(); i < cur.size(); ++i) next.push(Letter::from_code(cur[i]));
    cur = free_reduce(next).codes();
  }
  return Word::from_codes(w.alphabet(), cur);
}

struct ReducedCheck {
  bool holds = true;
  Word longest_match;          // longest subword that is a prefix of some element
  std::size_t longest_position = 0;
  Word tightest_alpha, tightest_rho;  // realises max |alpha| / |rho|
  std::size_t ratio_num = 0, ratio_den = 1;
  std::optional<Word> longest_offender;
};

// A subword alpha offends when divisor * |alpha| > |rho| for some rho having alpha as prefix.
inline ReducedCheck check_reduced(const Word& w, const SymmetrizedRelatorSet& S, std::size_t divisor) {
  if (!same_alphabet(w.alphabet(), S.alphabet())) throw AlphabetMismatch();
  ReducedCheck out;
  auto codes = w.codes();
  out.longest_match = Word(S.alphabet());
  out.tightest_alpha = Word(S.alphabet());
  out.tightest_rho = Word(S.alphabet());
  std::size_t best_len = 0, offend_len = 0, offend_pos = 0;
  std::optional<std::pair<std::size_t, std::uint32_t>> tight;
  for (std::size_t s = 0; s < codes.size(); ++s) {
    auto range = S.full();
    std::size_t limit = std::min(codes.size() - s, S.max_length());
    for (std::size_t d = 0; d < limit; ++d) {
      range = S.narrow(range, d, codes[s + d]);
      if (range.empty()) break;
      std::size_t m = d + 1;
      auto e = S.shortest_in(range);
      if (m > best_len) {
        best_len = m;
        out.longest_position = s;
      }
      if (m * out.ratio_den > out.ratio_num * S.length(e)) {
        out.ratio_num = m;
        out.ratio_den = S.length(e);
        tight = {s, e};
      }
      if (divisor * m > S.length(e)) {
        out.holds = false;
        if (m > offend_len) {
          offend_len = m;
          offend_pos = s;
        }
      }
    }
  }
  auto sub = [&](std::size_t pos, std::size_t len) {
    return Word::from_codes(S.alphabet(), std::vector<int>(codes.begin() + std::ptrdiff_t(pos),
                                                          codes.begin() + std::ptrdiff_t(pos + len)));
  };
  out.longest_match = sub(out.longest_position, best_len);
  if (tight) {
    out.tightest_alpha = sub(tight->first, out.ratio_num);
    out.tightest_rho = S.element(tight->second);
  }
  if (offend_len > 0) out.longest_offender = sub(offend_pos, offend_len);
  return out;
}

inline ReducedCheck is_dehn_reduced(const Word& w, const SymmetrizedRelatorSet& S) { return check_reduced(w, S, 2); }
inline ReducedCheck is_strongly_dehn_reduced(const Word& w, const SymmetrizedRelatorSet& S) {
  return check_reduced(w, S, 6);
}

// Word problem for a presentation certified C'(1/6) at construction.
class DehnOracle {
 public:
  explicit DehnOracle(const Presentation& p) : pres_(p), set_(p) {
    certificate_ = check_cprime(set_, Fraction{1, 6});
    if (!certificate_.holds)
      throw NotSmallCancellation("presentation " + p.name() + " fails C'(1/6): max piece ratio " +
                                 std::to_string(certificate_.ratio_num) + "/" + std::to_string(certificate_.ratio_den));
  }

  const Presentation& presentation() const { return pres_; }
  const SymmetrizedRelatorSet& relator_set() const { return set_; }
  const PieceReport& certificate() const { return certificate_; }

  DehnTrace reduce(const Word& w, bool record = true) const { return dehn_reduce(w, set_, record); }
  bool is_trivial(const Word& w) const { return reduce(w, false).final_word.empty(); }

  // True certifies w as the unique geodesic for its element; false is inconclusive.
  bool certify_geodesic(const Word& w) const {
    if (!is_freely_reduced(w)) return false;
    return is_strongly_dehn_reduced(w, set_).holds;
  }

 private:
  Presentation pres_;
  SymmetrizedRelatorSet set_;
  PieceReport certificate_;
};

inline bool is_trivial(const Word& w, const Presentation& p) { return DehnOracle(p).is_trivial(w); }
inline bool certify_geodesic(const Word& w, const Presentation& p) { return DehnOracle(p).certify_geodesic(w); }

// Integer row lattice kept in echelon form.
class IntegerLattice {
 public:
  explicit IntegerLattice(std::size_t dim) : dim_(dim) {}

  static IntegerLattice from_rows(std::size_t dim, const std::vector<std::vector<mpz_class>>& rows) {
    IntegerLattice L(dim);
    std::vector<std::vector<mpz_class>> m = rows;
    std::size_t prow = 0;
    for (std::size_t c = 0; c < dim && prow < m.size(); ++c) {
      for (;;) {
        std::size_t piv = m.size();
        for (std::size_t i = prow; i < m.size(); ++i)
          if (m[i][c] != 0 && (piv == m.size() || abs(m[i][c]) < abs(m[piv][c]))) piv = i;
        if (piv == m.size()) break;
        std::swap(m[prow], m[piv]);
        bool clean = true;
        for (std::size_t i = prow + 1; i < m.size(); ++i) {
          if (m[i][c] == 0) continue;
          mpz_class q;
          mpz_fdiv_q(q.get_mpz_t(), m[i][c].get_mpz_t(), m[prow][c].get_mpz_t());
          for (std::size_t k = c; k < dim; ++k) m[i][k] -= q * m[prow][k];
          if (m[i][c] != 0) clean = false;
        }
        if (clean) break;
      }
      if (m[prow][c] != 0) {
        if (m[prow][c] < 0)
          for (auto& x : m[prow]) x = -x;
        L.rows_.push_back(m[prow]);
        L.pivots_.push_back(c);
        ++prow;
      }
    }
    return L;
  }

  bool contains(std::vector<mpz_class> v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      auto c = pivots_[i];
      if (v[c] == 0) continue;
      if (!mpz_divisible_p(v[c].get_mpz_t(), rows_[i][c].get_mpz_t())) return false;
      mpz_class q = v[c] / rows_[i][c];
      for (std::size_t k = c; k < dim_; ++k) v[k] -= q * rows_[i][k];
    }
    return std::all_of(v.begin(), v.end(), [](const mpz_class& x) { return x == 0; });
  }

  std::size_t rank() const { return rows_.size(); }
  const std::vector<std::vector<mpz_class>>& rows() const { return rows_; }

 private:
  std::size_t dim_;
  std::vector<std::vector<mpz_class>> rows_;
  std::vector<std::size_t> pivots_;
};

inline std::vector<mpz_class> exponent_vector(const Word& w) {
  auto s = exponent_sums(w);
  std::vector<mpz_class> v;
  for (auto x : s) v.emplace_back(static_cast<long>(x));
  return v;
}

inline IntegerLattice relator_lattice(const Presentation& p) {
  std::vector<std::vector<mpz_class>> rows;
  for (const auto& r : p.relators()) rows.push_back(exponent_vector(r));
  return IntegerLattice::from_rows(p.alphabet()->size(), rows);
}

enum class AbelianVerdict { DistinctCertified, Inconclusive };

inline const char* to_string(AbelianVerdict v) {
  return v == AbelianVerdict::DistinctCertified ? "distinct-certified" : "inconclusive";
}

inline AbelianVerdict abelianized_equal(const Word& u, const Word& v, const Presentation& p) {
  u.require_same(v);
  if (!same_alphabet(u.alphabet(), p.alphabet())) throw AlphabetMismatch();
  auto a = exponent_vector(u), b = exponent_vector(v);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return relator_lattice(p).contains(a) ? AbelianVerdict::Inconclusive : AbelianVerdict::DistinctCertified;
}

}  // namespace ctw
