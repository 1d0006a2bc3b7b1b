// Command-line front end. Every subcommand forwards to the library.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ctw/ctw.hpp"
#include "ctw/report.hpp"
#include "ctw/verify.hpp"

namespace {

using namespace ctw;
using report::Json;

enum class Verbosity { Quiet, Normal, Verbose };

struct Globals {
  Verbosity verbosity = Verbosity::Normal;
  std::string format = "text";
  std::string out;
};

Globals g;

std::string resolve_out(const std::string& path) {
  if (path.empty() || path == "-") return {};
  std::filesystem::path p(path);
  if (p.is_relative())
    if (const char* dir = std::getenv("CTW_OUT_DIR"); dir && *dir) p = std::filesystem::path(dir) / p;
  return p.string();
}

void emit(const std::string& text, const std::string& path = g.out) {
  auto target = resolve_out(path);
  if (target.empty()) {
    std::cout << text;
    return;
  }
  if (auto parent = std::filesystem::path(target).parent_path(); !parent.empty())
    std::filesystem::create_directories(parent);
  std::ofstream f(target);
  if (!f) throw Error("cannot write " + target);
  f << text;
  if (g.verbosity != Verbosity::Quiet) std::cerr << "wrote " << target << "\n";
}

void info(const std::string& s) {
  if (g.verbosity == Verbosity::Verbose) std::cerr << s << "\n";
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

AlphabetPtr group_alphabet(const std::string& group) { return presentation_by_name(group, RipsParams(1)).alphabet(); }

std::vector<std::string> group_names() { return {"G", "Gbcd", "Gcd", "Gc1d"}; }

std::string piece_text(const PieceReport& r) {
  std::ostringstream s;
  s << "C'(" << r.lambda.str() << "): " << (r.holds ? "holds" : "fails") << "\n"
    << "max piece ratio: " << r.ratio_num << "/" << r.ratio_den << " (" << r.max_ratio() << ")\n";
  if (r.prefix) s << "witness piece: " << to_string(*r.prefix) << "\n";
  if (r.element1) s << "  in: " << to_string(*r.element1) << "\n";
  if (r.element2) s << "  and: " << to_string(*r.element2) << "\n";
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small cancellation, Britton and distortion computations for the Rips-type group G"};
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false, verbose = false;
  app.add_flag("-q,--quiet", quiet, "Only print results");
  app.add_flag("-v,--verbose", verbose, "Print progress to stderr");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("-o,--out", g.out, "Output file (relative paths go under $CTW_OUT_DIR when set)");

  int r = kDefaultR, l = 2;
  std::uint64_t seed = kDefaultSeed;
  std::string group = "G", lambda = "1/6", word;
  auto add_params = [&](CLI::App* sc) {
    sc->add_option("--r", r, "Staircase parameter r")->check(CLI::Range(1, 100000));
    sc->add_option("--l", l, "Index parameter l")->check(CLI::Range(2, 1000));
  };
  auto add_group = [&](CLI::App* sc, std::vector<std::string> allowed) {
    sc->add_option("--group", group, "Presentation")->check(CLI::IsMember(std::move(allowed)));
  };

  auto* emit_pres = app.add_subcommand("emit-presentation", "Write a presentation file");
  add_params(emit_pres);
  add_group(emit_pres, group_names());

  auto* cprime = app.add_subcommand("check-cprime", "Check the C'(lambda) condition");
  add_params(cprime);
  add_group(cprime, group_names());
  cprime->add_option("--lambda", lambda, "Fraction such as 1/6");
  std::string pres_file;
  cprime->add_option("--presentation,--file", pres_file, "Presentation file instead of a built-in group")
      ->check(CLI::ExistingFile);
  std::string report_file;
  cprime->add_option("--report", report_file, "Also write the JSON report here");

  auto* minr = app.add_subcommand("min-r", "Smallest r whose presentation is C'(lambda)");
  int lo = 2, hi = 60;
  minr->add_option("--lambda", lambda, "Fraction such as 1/6");
  minr->add_option("--lo", lo, "Lower end of the search")->check(CLI::PositiveNumber);
  minr->add_option("--hi", hi, "Upper end of the search")->check(CLI::PositiveNumber);
  std::string range;
  minr->add_option("--range", range, "Search range LO:HI");
  minr->add_option("--l", l, "Index parameter l")->check(CLI::Range(2, 1000));
  add_group(minr, group_names());

  auto* wp = app.add_subcommand("wordproblem", "Decide triviality (exit 0 trivial, 1 nontrivial, 2 gate failure)");
  add_params(wp);
  add_group(wp, group_names());
  std::string oracle = "dehn";
  wp->add_option("--word", word, "Word such as \"c2^-1 d2 c2\"")->required();
  std::string wp_file;
  wp->add_option("--presentation", wp_file, "Presentation file instead of a built-in group")->check(CLI::ExistingFile);
  wp->add_option("--oracle", oracle, "dehn, or britton for Gc1d and Gcd")->check(CLI::IsMember({"dehn", "britton"}));
  bool trace = false;
  wp->add_flag("--trace", trace, "Print the Dehn rewriting trace");

  auto* britton = app.add_subcommand("britton", "Britton-reduce a word");
  add_params(britton);
  add_group(britton, {"Gc1d", "Gcd"});
  britton->add_option("--word", word, "Word")->required();

  auto* cross = app.add_subcommand("cross-oracle", "Dehn against Britton on random words (JSON)");
  add_params(cross);
  std::size_t trials = 10000, maxlen = 40;
  cross->add_option("--trials", trials, "Number of words")->check(CLI::PositiveNumber);
  cross->add_option("--maxlen", maxlen, "Maximum word length")->check(CLI::PositiveNumber);
  cross->add_option("--seed", seed, "Seed");

  auto* niel = app.add_subcommand("nielsen-check", "Nielsen conditions for the C or D word set");
  add_params(niel);
  std::string set = "C";
  niel->add_option("--set", set, "C for {C, C1, C2}; D for the D words")->check(CLI::IsMember({"C", "D"}));

  auto* memb = app.add_subcommand("membership", "Subgroup membership via folded graphs");
  std::string basis_file;
  memb->add_option("--basis", basis_file, "File: a 'gens:' line, then one basis word per line")
      ->required()
      ->check(CLI::ExistingFile);
  memb->add_option("--word", word, "Word")->required();

  auto* dist = app.add_subcommand("distortion", "Distortion table (CSV)");
  add_params(dist);
  int n_max = 8;
  std::size_t exact_bits = kDefaultExactBits;
  dist->add_option("--n-max", n_max, "Largest n")->check(CLI::Range(1, 200));
  dist->add_option("--exact-bits", exact_bits, "Bit threshold for exact entries")->check(CLI::PositiveNumber);

  auto* ct = app.add_subcommand("ct-experiment", "Mitra table and verdict (JSON)");
  add_params(ct);
  int ct_n = 10;
  std::string csv_out;
  ct->add_option("--n-max", ct_n, "Largest n")->check(CLI::Range(1, 1000));
  ct->add_option("--seed", seed, "Seed");
  ct->add_option("--csv", csv_out, "Also write the Mitra table as CSV");

  auto* va = app.add_subcommand("verify-all", "Run every stage and write a consolidated report");
  std::optional<int> va_r;
  VerifyConfig vc;
  va->add_option("--r", va_r, "Use this r instead of the min-r result")->check(CLI::Range(1, 100000));
  va->add_option("--seed", vc.seed, "Seed");
  va->add_option("--trials", vc.cross_trials, "Cross-oracle trials")->check(CLI::PositiveNumber);
  va->add_option("--freeness-trials", vc.freeness_trials, "H-freeness trials")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);
  g.verbosity = quiet ? Verbosity::Quiet : verbose ? Verbosity::Verbose : Verbosity::Normal;

  try {
    RipsParams p(r, l);

    if (*emit_pres) {
      emit(presentation_text(presentation_by_name(group, p)));
      return 0;
    }

    if (*cprime) {
      auto pres = pres_file.empty() ? presentation_by_name(group, p) : [&] {
        std::ifstream f(pres_file);
        return read_presentation(f);
      }();
      auto rep = check_cprime(pres, Fraction::parse(lambda));
      Json j = report::to_json(rep);
      j["schema_version"] = report::kSchemaVersion;
      j["presentation"] = pres.name();
      if (pres_file.empty()) j["r"] = r;
      if (!report_file.empty()) emit(dump(j), report_file);
      if (g.format == "json") {
        emit(dump(j));
      } else {
        emit(piece_text(rep));
      }
      return rep.holds ? 0 : 1;
    }

    if (*minr) {
      if (!range.empty()) {
        auto colon = range.find(':');
        if (colon == std::string::npos) throw ParseError("range must look like LO:HI");
        try {
          lo = std::stoi(range.substr(0, colon));
          hi = std::stoi(range.substr(colon + 1));
        } catch (const std::exception&) {
          throw ParseError("range must look like LO:HI");
        }
      }
      auto res = find_min_r(Fraction::parse(lambda), lo, hi, group, l);
      if (g.format == "json") {
        Json j;
        j["schema_version"] = report::kSchemaVersion;
        j["group"] = group;
        j["range"] = {lo, hi};
        j["r_star"] = res.r ? Json(*res.r) : Json(nullptr);
        Json checked = Json::array();
        for (const auto& [rr, rep] : res.checked)
          checked.push_back({{"r", rr}, {"holds", rep.holds},
                             {"max_piece_ratio", std::to_string(rep.ratio_num) + "/" + std::to_string(rep.ratio_den)}});
        j["checked"] = checked;
        if (!res.checked.empty()) j["certificate"] = report::to_json(res.checked.back().second);
        emit(dump(j));
      } else if (res.r) {
        emit("r* = " + std::to_string(*res.r) + "\n" + piece_text(res.checked.back().second));
      } else {
        emit("no r in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]\n");
      }
      return res.r ? 0 : 1;
    }

    if (*wp) {
      std::optional<Presentation> file_pres;
      if (!wp_file.empty()) {
        if (oracle == "britton") throw InvalidParameter("Britton oracle needs a built-in group");
        std::ifstream f(wp_file);
        file_pres = read_presentation(f);
      }
      auto alpha = file_pres ? file_pres->alphabet() : group_alphabet(group);
      Word w = parse_word(alpha, word);
      bool trivial;
      if (oracle == "britton") {
        if (group != "Gc1d" && group != "Gcd") throw InvalidParameter("Britton oracle is available for Gc1d and Gcd");
        trivial = group == "Gcd" ? is_trivial_Gcd(w, p) : is_trivial_Gc1d(w, p);
      } else {
        try {
          DehnOracle dehn(file_pres ? *file_pres : presentation_by_name(group, p));
          auto tr = dehn.reduce(w, trace);
          trivial = tr.final_word.empty();
          if (trace && g.verbosity != Verbosity::Quiet)
            for (const auto& st : tr.steps)
              std::cout << "at " << st.position << ": " << to_string(st.alpha) << " -> " << to_string(st.replacement)
                        << "\n";
          if (!trivial && g.verbosity != Verbosity::Quiet)
            std::cout << "reduced: " << to_string(tr.final_word) << "\n";
        } catch (const NotSmallCancellation& e) {
          std::cerr << e.what() << "\n";
          return 2;
        }
      }
      if (g.verbosity != Verbosity::Quiet) std::cout << (trivial ? "trivial" : "nontrivial") << "\n";
      return trivial ? 0 : 1;
    }

    if (*britton) {
      auto tower = group == "Gcd" ? tower_Gcd(p) : tower_Gc1d(p);
      Word w = parse_word(tower.alphabet(), word);
      auto res = tower.reduce(w);
      std::size_t before = split_tower(w, tower.stable_generators()).stable_count();
      if (g.format == "json") {
        Json j;
        j["input_stable_letters"] = before;
        j["stable_letters"] = res.stable_count();
        j["pinches"] = res.pinches;
        j["reduced"] = res.form ? Json(to_string(*res.form)) : Json(nullptr);
        Json lens = Json::array();
        for (auto len : res.segment_lengths) lens.push_back(slp::length_string(len));
        j["segment_lengths"] = lens;
        emit(dump(j));
      } else {
        std::ostringstream s;
        s << "reduced: " << (res.form ? to_string(*res.form) : std::string("(exceeds length cap)")) << "\n"
          << "stable letters: " << before << " -> " << res.stable_count() << "\n";
        emit(s.str());
      }
      return 0;
    }

    if (*cross) {
      info("cross-oracle: r=" + std::to_string(r) + " trials=" + std::to_string(trials));
      auto rep = cross_oracle(p, trials, maxlen, seed);
      emit(dump(report::to_json(rep, g.verbosity == Verbosity::Verbose)));
      return rep.passed() ? 0 : 1;
    }

    if (*niel) {
      std::vector<Word> U;
      if (set == "C") {
        auto C = alphabets::C();
        U = {word_C(p, C), word_Ci(p, 1, C), word_Ci(p, 2, C)};
      } else {
        auto D = alphabets::D();
        U = {word_Dj(p, 1, D), word_Dj(p, 2, D)};
        for (int i = 1; i <= 2; ++i)
          for (int j = 1; j <= 2; ++j) U.push_back(word_Dij(p, i, j, D));
      }
      auto rep = nielsen_check(U);
      bool half = cprime_half_sufficient(U);
      if (g.format == "json") {
        Json j = report::to_json(rep);
        j["cprime_half"] = half;
        j["set"] = set;
        j["r"] = r;
        emit(dump(j));
      } else {
        emit(std::string("N0 ") + (rep.n0 ? "ok" : "fails") + ", N1 " + (rep.n1 ? "ok" : "fails") + ", N2 " +
             (rep.n2 ? "ok" : "fails") + "; C'(1/2) " + (half ? "holds" : "fails") + "\n");
      }
      return rep.passes() && half ? 0 : 1;
    }

    if (*memb) {
      std::ifstream f(basis_file);
      std::string line;
      AlphabetPtr alpha;
      std::vector<Word> basis;
      while (std::getline(f, line)) {
        auto s = line.find_first_not_of(" \t");
        if (s == std::string::npos || line[s] == '#') continue;
        if (line.compare(s, 5, "gens:") == 0) {
          std::istringstream names(line.substr(s + 5));
          std::vector<std::string> v;
          for (std::string n; names >> n;) v.push_back(n);
          alpha = make_alphabet(v);
          continue;
        }
        if (!alpha) throw ParseError("basis file must start with a 'gens:' line");
        basis.push_back(parse_word(alpha, line));
      }
      if (!alpha || basis.empty()) throw ParseError("basis file has no words");
      auto graph = build_subgroup_graph(alpha, basis);
      Word w = parse_word(alpha, word);
      bool in = graph.contains(w);
      if (g.format == "json") {
        Json j{{"member", in}, {"rank", graph.rank()}, {"vertices", graph.vertex_count()}};
        if (in) j["expression"] = to_string(graph.express_in_basis(w));
        emit(dump(j));
      } else {
        emit(in ? "member: " + to_string(graph.express_in_basis(w)) + "\n" : std::string("not a member\n"));
      }
      return in ? 0 : 1;
    }

    if (*dist) {
      auto rows = distortion_table(p, n_max, exact_bits);
      emit(g.format == "json" ? dump(report::to_json(rows)) : distortion_csv(rows));
      return 0;
    }

    if (*ct) {
      auto rep = run_ct_experiment(p, ct_n, seed);
      emit(dump(report::to_json(rep)));
      if (!csv_out.empty()) emit(mitra_csv(rep), csv_out);
      return rep.verdict ? 0 : 1;
    }

    if (*va) {
      vc.r = va_r;
      auto out = verify_all(vc, [](const std::string& s) { info("stage " + s); });
      emit(dump(out.report));
      if (g.verbosity != Verbosity::Quiet && out.exit_code != 0)
        std::cerr << "failed at stage " << out.exit_code << " (" << out.failed_stage << ")\n";
      return out.exit_code;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
