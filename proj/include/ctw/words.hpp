#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ctw/errors.hpp"

namespace ctw {

using Generator = std::uint16_t;

// Letter codes order letters as g1, g1^-1, g2, g2^-1, ...
struct Letter {
  Generator gen = 0;
  bool inverse = false;

  int code() const { return 2 * int(gen) + (inverse ? 1 : 0); }
  Letter inv() const { return {gen, !inverse}; }
  static Letter from_code(int c) { return {Generator(c >> 1), (c & 1) != 0}; }
  friend bool operator==(Letter, Letter) = default;
};

inline int inverse_code(int c) { return c ^ 1; }

class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw InvalidParameter("empty alphabet");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      const auto& n = names_[i];
      if (n.empty() || n == "1" || n.find_first_of(" \t\n^") != std::string::npos)
        throw InvalidParameter("bad generator name '" + n + "'");
      if (!index_.emplace(n, Generator(i)).second)
        throw InvalidParameter("duplicate generator name '" + n + "'");
    }
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(Generator g) const { return names_.at(g); }
  const std::vector<std::string>& names() const { return names_; }

  Generator at(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw InvalidParameter("unknown generator '" + std::string(name) + "'");
    return it->second;
  }
  bool contains(std::string_view name) const { return index_.count(std::string(name)) != 0; }

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Generator> index_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

inline AlphabetPtr make_alphabet(std::vector<std::string> names) {
  return std::make_shared<const Alphabet>(std::move(names));
}

inline bool same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

namespace alphabets {

inline AlphabetPtr G() {
  static const AlphabetPtr a = make_alphabet({"a", "b", "c1", "c2", "d1", "d2"});
  return a;
}
inline AlphabetPtr Gbcd() {
  static const AlphabetPtr a = make_alphabet({"b", "c1", "c2", "d1", "d2"});
  return a;
}
inline AlphabetPtr Gcd() {
  static const AlphabetPtr a = make_alphabet({"c1", "c2", "d1", "d2"});
  return a;
}
inline AlphabetPtr Gc1d() {
  static const AlphabetPtr a = make_alphabet({"c1", "d1", "d2"});
  return a;
}
inline AlphabetPtr H() {
  static const AlphabetPtr a = make_alphabet({"b", "d1", "d2"});
  return a;
}
inline AlphabetPtr D() {
  static const AlphabetPtr a = make_alphabet({"d1", "d2"});
  return a;
}
inline AlphabetPtr C() {
  static const AlphabetPtr a = make_alphabet({"c1", "c2"});
  return a;
}
// Letters of the positive words u_n: ab is a single symbol.
inline AlphabetPtr U() {
  static const AlphabetPtr a = make_alphabet({"ab", "c1", "c2"});
  return a;
}

}  // namespace alphabets

inline std::atomic<std::uint64_t>& length_cap_storage() {
  static std::atomic<std::uint64_t> cap{std::uint64_t(1) << 27};
  return cap;
}
inline std::uint64_t length_cap() { return length_cap_storage().load(); }
inline void set_length_cap(std::uint64_t cap) { length_cap_storage().store(cap); }

class ScopedLengthCap {
 public:
  explicit ScopedLengthCap(std::uint64_t cap) : saved_(length_cap()) { set_length_cap(cap); }
  ~ScopedLengthCap() { set_length_cap(saved_); }
  ScopedLengthCap(const ScopedLengthCap&) = delete;
  ScopedLengthCap& operator=(const ScopedLengthCap&) = delete;

 private:
  std::uint64_t saved_;
};

inline void check_length(std::uint64_t len) {
  if (len > length_cap())
    throw LengthCapExceeded("word length " + std::to_string(len) + " exceeds cap " +
                            std::to_string(length_cap()));
}

struct Run {
  Letter letter;
  std::uint64_t count = 0;
  friend bool operator==(const Run&, const Run&) = default;
};

// Run-length encoded word. Runs are maximal but the word need not be freely reduced.
class Word {
 public:
  Word() = default;
  explicit Word(AlphabetPtr alphabet) : alpha_(std::move(alphabet)) {}

  static Word from_codes(AlphabetPtr alphabet, const std::vector<int>& codes) {
    Word w(std::move(alphabet));
    for (int c : codes) w.push(Letter::from_code(c));
    return w;
  }

  const AlphabetPtr& alphabet() const { return alpha_; }
  const std::vector<Run>& runs() const { return runs_; }
  std::uint64_t length() const { return len_; }
  bool empty() const { return len_ == 0; }

  void push(Letter l, std::uint64_t count = 1) {
    if (count == 0) return;
    if (alpha_ && l.gen >= alpha_->size()) throw InvalidParameter("generator index out of range");
    check_length(len_ + count);
    if (!runs_.empty() && runs_.back().letter == l)
      runs_.back().count += count;
    else
      runs_.push_back({l, count});
    len_ += count;
  }

  // Concatenation without free reduction.
  void append(const Word& w) {
    require_same(w);
    check_length(len_ + w.len_);
    for (const auto& r : w.runs_) push(r.letter, r.count);
  }

  std::vector<int> codes() const {
    std::vector<int> out;
    out.reserve(len_);
    for (const auto& r : runs_) out.insert(out.end(), r.count, r.letter.code());
    return out;
  }

  Letter first() const { return runs_.front().letter; }
  Letter last() const { return runs_.back().letter; }

  void require_same(const Word& other) const {
    if (!same_alphabet(alpha_, other.alpha_)) throw AlphabetMismatch();
  }

  friend bool operator==(const Word& a, const Word& b) {
    return same_alphabet(a.alpha_, b.alpha_) && a.runs_ == b.runs_;
  }

 private:
  AlphabetPtr alpha_;
  std::vector<Run> runs_;
  std::uint64_t len_ = 0;
};

// Lexicographic order on letter codes; a proper prefix sorts first.
inline bool lex_less(const Word& a, const Word& b) {
  auto ca = a.codes(), cb = b.codes();
  return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
}

// Incremental free reduction over a run stack.
class FreeReducer {
 public:
  explicit FreeReducer(AlphabetPtr alphabet) : alpha_(std::move(alphabet)) {}

  void push(Letter l, std::uint64_t count = 1) {
    while (count > 0) {
      if (!runs_.empty() && runs_.back().letter.gen == l.gen) {
        Run& top = runs_.back();
        if (top.letter == l) {
          check_length(len_ + count);
          top.count += count;
          len_ += count;
          return;
        }
        std::uint64_t k = std::min(top.count, count);
        top.count -= k;
        len_ -= k;
        count -= k;
        if (top.count == 0) runs_.pop_back();
        continue;
      }
      check_length(len_ + count);
      runs_.push_back({l, count});
      len_ += count;
      return;
    }
  }

  void push(const Word& w, bool inverted = false) {
    if (!same_alphabet(alpha_, w.alphabet())) throw AlphabetMismatch();
    if (!inverted) {
      for (const auto& r : w.runs()) push(r.letter, r.count);
    } else {
      for (auto it = w.runs().rbegin(); it != w.runs().rend(); ++it) push(it->letter.inv(), it->count);
    }
  }

  std::uint64_t length() const { return len_; }

  Word take() {
    Word w(alpha_);
    for (const auto& r : runs_) w.push(r.letter, r.count);
    runs_.clear();
    len_ = 0;
    return w;
  }

 private:
  AlphabetPtr alpha_;
  std::vector<Run> runs_;
  std::uint64_t len_ = 0;
};

inline Word free_reduce(const Word& w) {
  FreeReducer red(w.alphabet());
  red.push(w);
  return red.take();
}

inline bool is_freely_reduced(const Word& w) {
  const auto& rs = w.runs();
  for (std::size_t i = 1; i < rs.size(); ++i)
    if (rs[i].letter.gen == rs[i - 1].letter.gen) return false;
  return true;
}

inline Word invert(const Word& w) {
  Word out(w.alphabet());
  for (auto it = w.runs().rbegin(); it != w.runs().rend(); ++it) out.push(it->letter.inv(), it->count);
  return out;
}

// Freely reduced product.
inline Word concat(const Word& a, const Word& b) {
  a.require_same(b);
  FreeReducer red(a.alphabet());
  red.push(a);
  red.push(b);
  return red.take();
}

inline Word concat(std::initializer_list<Word> ws) {
  if (ws.size() == 0) throw InvalidParameter("concat of nothing");
  FreeReducer red(ws.begin()->alphabet());
  for (const auto& w : ws) red.push(w);
  return red.take();
}

inline Word power(const Word& w, long long k) {
  FreeReducer red(w.alphabet());
  for (long long i = 0; i < (k < 0 ? -k : k); ++i) red.push(w, k < 0);
  return red.take();
}

inline bool is_positive(const Word& w) {
  for (const auto& r : w.runs())
    if (r.letter.inverse) return false;
  return true;
}

// Occurrences of each generator, either sign.
inline std::vector<std::uint64_t> letter_counts(const Word& w) {
  std::vector<std::uint64_t> out(w.alphabet() ? w.alphabet()->size() : 0, 0);
  for (const auto& r : w.runs()) out[r.letter.gen] += r.count;
  return out;
}

inline std::vector<long long> exponent_sums(const Word& w) {
  std::vector<long long> out(w.alphabet() ? w.alphabet()->size() : 0, 0);
  for (const auto& r : w.runs())
    out[r.letter.gen] += r.letter.inverse ? -(long long)r.count : (long long)r.count;
  return out;
}

// Images indexed by generator of w's alphabet; all images share one alphabet.
inline Word substitute(const Word& w, const std::vector<Word>& images) {
  if (!w.alphabet() || images.size() != w.alphabet()->size())
    throw InvalidParameter("substitute needs one image per generator");
  AlphabetPtr target = images.front().alphabet();
  for (const auto& im : images)
    if (!same_alphabet(target, im.alphabet())) throw AlphabetMismatch();
  FreeReducer red(target);
  for (const auto& r : w.runs())
    for (std::uint64_t i = 0; i < r.count; ++i) red.push(images[r.letter.gen], r.letter.inverse);
  return red.take();
}

struct CyclicReduction {
  Word core;
  Word conjugator;  // w = conjugator * core * conjugator^-1
};

inline CyclicReduction cyclic_reduce(const Word& w) {
  Word red = free_reduce(w);
  std::vector<Run> rs = red.runs();
  std::size_t lo = 0, hi = rs.size();
  Word conj(w.alphabet());
  while (hi - lo >= 2 && rs[lo].letter.gen == rs[hi - 1].letter.gen &&
         rs[lo].letter.inverse != rs[hi - 1].letter.inverse) {
    std::uint64_t k = std::min(rs[lo].count, rs[hi - 1].count);
    conj.push(rs[lo].letter, k);
    rs[lo].count -= k;
    rs[hi - 1].count -= k;
    if (rs[lo].count == 0) ++lo;
    if (rs[hi - 1].count == 0) --hi;
  }
  Word core(w.alphabet());
  for (std::size_t i = lo; i < hi; ++i) core.push(rs[i].letter, rs[i].count);
  return {core, conj};
}

inline bool is_cyclically_reduced(const Word& w) {
  if (!is_freely_reduced(w)) return false;
  if (w.runs().size() < 2) return true;
  return !(w.first().gen == w.last().gen && w.first().inverse != w.last().inverse);
}

// Distinct rotations of w, sorted by letter codes.
inline std::vector<Word> cyclic_permutations(const Word& w) {
  auto c = w.codes();
  std::set<std::vector<int>> seen;
  for (std::size_t s = 0; s < std::max<std::size_t>(c.size(), 1); ++s) {
    std::vector<int> rot(c.begin() + std::ptrdiff_t(s), c.end());
    rot.insert(rot.end(), c.begin(), c.begin() + std::ptrdiff_t(s));
    seen.insert(std::move(rot));
  }
  std::vector<Word> out;
  for (const auto& rot : seen) out.push_back(Word::from_codes(w.alphabet(), rot));
  return out;
}

inline std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (const auto& r : w.runs()) {
    if (!out.empty()) out += ' ';
    out += w.alphabet()->name(r.letter.gen);
    if (r.count != 1 || r.letter.inverse) {
      out += '^';
      if (r.letter.inverse) out += '-';
      out += std::to_string(r.count);
    }
  }
  return out;
}

// Syntax: "c1 c2^3 d1^-2"; "1" is the empty word.
inline Word parse_word(const AlphabetPtr& alphabet, std::string_view text) {
  Word w(alphabet);
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) tokens.push_back(text.substr(i, j - i));
    i = j;
  }
  if (tokens.empty()) throw ParseError("empty word literal (use 1)");
  if (tokens.size() == 1 && tokens[0] == "1") return w;
  for (auto tok : tokens) {
    auto caret = tok.find('^');
    std::string_view name = tok.substr(0, caret);
    if (!alphabet->contains(name)) throw ParseError("unknown generator '" + std::string(name) + "'");
    long long e = 1;
    if (caret != std::string_view::npos) {
      auto ex = tok.substr(caret + 1);
      auto res = std::from_chars(ex.data(), ex.data() + ex.size(), e);
      if (ex.empty() || res.ec != std::errc() || res.ptr != ex.data() + ex.size())
        throw ParseError("bad exponent in '" + std::string(tok) + "'");
      if (e == 0) throw ParseError("zero exponent in '" + std::string(tok) + "'");
    }
    Letter l{alphabet->at(name), e < 0};
    w.push(l, std::uint64_t(e < 0 ? -e : e));
  }
  return w;
}

// Same word read in another alphabet with the same generator names.
inline Word rebase(const Word& w, const AlphabetPtr& target) {
  Word out(target);
  for (const auto& r : w.runs()) out.push({target->at(w.alphabet()->name(r.letter.gen)), r.letter.inverse}, r.count);
  return out;
}

inline Word letter_word(const AlphabetPtr& alphabet, std::string_view name, long long e = 1) {
  Word w(alphabet);
  w.push({alphabet->at(name), e < 0}, std::uint64_t(e < 0 ? -e : e));
  return w;
}

}  // namespace ctw
