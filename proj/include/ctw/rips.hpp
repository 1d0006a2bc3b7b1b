#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ctw/words.hpp"

namespace ctw {

struct RipsParams {
  int r = 1;
  int l = 2;

  RipsParams() = default;
  RipsParams(int r_, int l_ = 2) : r(r_), l(l_) { validate(); }

  void validate() const {
    if (r < 1) throw InvalidParameter("r must be at least 1");
    if (l < 2) throw InvalidParameter("l must be at least 2");
  }
};

namespace detail {

// prod_{k=1..r} x y^(base+k)
inline Word staircase(const AlphabetPtr& alpha, std::string_view x, std::string_view y, long long base, int r) {
  Word w(alpha);
  Letter lx{alpha->at(x), false}, ly{alpha->at(y), false};
  for (int k = 1; k <= r; ++k) {
    w.push(lx);
    w.push(ly, std::uint64_t(base + k));
  }
  return w;
}

inline void check_index(int i) {
  if (i != 1 && i != 2) throw InvalidParameter("index must be 1 or 2");
}

}  // namespace detail

inline Word word_C(const RipsParams& p, const AlphabetPtr& alpha = alphabets::G()) {
  p.validate();
  return detail::staircase(alpha, "c1", "c2", 0, p.r);
}

inline Word word_Ci(const RipsParams& p, int i, const AlphabetPtr& alpha = alphabets::G()) {
  p.validate();
  detail::check_index(i);
  return detail::staircase(alpha, "c1", "c2", (long long)p.r * i, p.r);
}

inline Word word_Dj(const RipsParams& p, int j, const AlphabetPtr& alpha = alphabets::G()) {
  p.validate();
  detail::check_index(j);
  return detail::staircase(alpha, "d1", "d2", (long long)p.r * j, p.r);
}

inline Word word_Dij(const RipsParams& p, int i, int j, const AlphabetPtr& alpha = alphabets::G()) {
  p.validate();
  detail::check_index(i);
  detail::check_index(j);
  return detail::staircase(alpha, "d1", "d2", (long long)p.r * (i * p.l + j), p.r);
}

class Presentation {
 public:
  Presentation(AlphabetPtr alphabet, std::vector<Word> relators, std::string name = {})
      : alpha_(std::move(alphabet)), relators_(std::move(relators)), name_(std::move(name)) {
    for (const auto& w : relators_) {
      if (!same_alphabet(alpha_, w.alphabet())) throw AlphabetMismatch();
      if (w.empty()) throw InvalidParameter("empty relator");
      if (!is_cyclically_reduced(w)) throw InvalidParameter("relator not cyclically reduced: " + to_string(w));
    }
  }

  const AlphabetPtr& alphabet() const { return alpha_; }
  const std::vector<Word>& relators() const { return relators_; }
  const std::string& name() const { return name_; }

 private:
  AlphabetPtr alpha_;
  std::vector<Word> relators_;
  std::string name_;
};

// Relation lhs = rhs stored as the cyclic core of lhs * rhs^-1.
inline Word relator(const Word& lhs, const Word& rhs) {
  auto red = cyclic_reduce(concat(lhs, invert(rhs)));
  if (red.core.empty()) throw InvalidParameter("relation is freely trivial");
  return red.core;
}

namespace detail {

inline Word lw(const AlphabetPtr& a, std::string_view text) { return parse_word(a, text); }

inline void add_bc(std::vector<Word>& rels, const RipsParams& p, const AlphabetPtr& a) {
  for (int i = 1; i <= 2; ++i) {
    std::string c = "c" + std::to_string(i);
    rels.push_back(relator(lw(a, "b^-1 " + c + " b"), word_Ci(p, i, a)));
  }
}

inline void add_abd(std::vector<Word>& rels, const RipsParams& p, const AlphabetPtr& a) {
  for (int j = 1; j <= 2; ++j) {
    std::string d = "d" + std::to_string(j);
    rels.push_back(relator(lw(a, "b^-1 a^-1 " + d + " a b"), word_Dj(p, j, a)));
  }
}

inline void add_cd(std::vector<Word>& rels, const RipsParams& p, const AlphabetPtr& a, int i_max) {
  for (int i = 1; i <= i_max; ++i)
    for (int j = 1; j <= 2; ++j) {
      std::string c = "c" + std::to_string(i), d = "d" + std::to_string(j);
      rels.push_back(relator(lw(a, c + "^-1 " + d + " " + c), word_Dij(p, i, j, a)));
    }
}

}  // namespace detail

inline Presentation presentation_G(const RipsParams& p) {
  p.validate();
  auto a = alphabets::G();
  std::vector<Word> rels;
  rels.push_back(relator(detail::lw(a, "a^-1 b^-1 a b"), word_C(p, a)));
  detail::add_bc(rels, p, a);
  detail::add_abd(rels, p, a);
  detail::add_cd(rels, p, a, 2);
  return Presentation(a, std::move(rels), "G");
}

inline Presentation presentation_Gbcd(const RipsParams& p) {
  p.validate();
  auto a = alphabets::Gbcd();
  std::vector<Word> rels;
  detail::add_bc(rels, p, a);
  detail::add_cd(rels, p, a, 2);
  return Presentation(a, std::move(rels), "Gbcd");
}

inline Presentation presentation_Gcd(const RipsParams& p) {
  p.validate();
  auto a = alphabets::Gcd();
  std::vector<Word> rels;
  detail::add_cd(rels, p, a, 2);
  return Presentation(a, std::move(rels), "Gcd");
}

inline Presentation presentation_Gc1d(const RipsParams& p) {
  p.validate();
  auto a = alphabets::Gc1d();
  std::vector<Word> rels;
  detail::add_cd(rels, p, a, 1);
  return Presentation(a, std::move(rels), "Gc1d");
}

inline Presentation presentation_by_name(const std::string& group, const RipsParams& p) {
  if (group == "G") return presentation_G(p);
  if (group == "Gbcd") return presentation_Gbcd(p);
  if (group == "Gcd") return presentation_Gcd(p);
  if (group == "Gc1d") return presentation_Gc1d(p);
  throw InvalidParameter("unknown group '" + group + "' (expected G, Gbcd, Gcd, Gc1d)");
}

inline void write_presentation(std::ostream& out, const Presentation& p) {
  out << "gens:";
  for (const auto& n : p.alphabet()->names()) out << ' ' << n;
  out << '\n';
  for (const auto& w : p.relators()) out << "rel: " << to_string(w) << '\n';
}

inline std::string presentation_text(const Presentation& p) {
  std::ostringstream os;
  write_presentation(os, p);
  return os.str();
}

// Blank lines and lines starting with '#' are ignored.
inline Presentation read_presentation(std::istream& in) {
  std::string line;
  AlphabetPtr alpha;
  std::vector<Word> rels;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::string_view body(line);
    body.remove_prefix(start);
    while (!body.empty() && (body.back() == '\r' || body.back() == ' ')) body.remove_suffix(1);
    if (body.rfind("gens:", 0) == 0) {
      if (alpha) throw ParseError("line " + std::to_string(lineno) + ": duplicate gens line");
      std::istringstream is{std::string(body.substr(5))};
      std::vector<std::string> names;
      for (std::string n; is >> n;) names.push_back(n);
      alpha = make_alphabet(names);
    } else if (body.rfind("rel:", 0) == 0) {
      if (!alpha) throw ParseError("line " + std::to_string(lineno) + ": rel before gens");
      rels.push_back(parse_word(alpha, body.substr(4)));
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": expected 'gens:' or 'rel:'");
    }
  }
  if (!alpha) throw ParseError("missing gens line");
  return Presentation(alpha, std::move(rels));
}

inline Presentation parse_presentation(const std::string& text) {
  std::istringstream is(text);
  return read_presentation(is);
}

}  // namespace ctw
