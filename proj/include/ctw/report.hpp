#pragma once

#include <json.hpp>

#include <string>

#include "ctw/experiment.hpp"
#include "ctw/growth.hpp"
#include "ctw/hnn.hpp"
#include "ctw/smallcancel.hpp"
#include "ctw/stallings.hpp"

namespace ctw::report {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json word_or_null(const std::optional<Word>& w) { return w ? Json(to_string(*w)) : Json(nullptr); }

inline Json to_json(const PieceReport& r) {
  Json j;
  j["lambda"] = r.lambda.str();
  j["holds"] = r.holds;
  j["max_piece_ratio"] = std::to_string(r.ratio_num) + "/" + std::to_string(r.ratio_den);
  j["max_piece_ratio_value"] = r.max_ratio();
  j["max_piece"] = r.max_piece;
  j["witness"] = {{"piece", word_or_null(r.prefix)},
                  {"element1", word_or_null(r.element1)},
                  {"element2", word_or_null(r.element2)}};
  j["relators"] = r.relator_count;
  j["symmetrized_elements"] = r.element_count;
  j["violating_pairs"] = r.violating_pairs;
  return j;
}

inline Json to_json(const NielsenReport& r) {
  Json j;
  j["passes"] = r.passes();
  j["N0"] = r.n0;
  j["N1"] = r.n1;
  j["N2"] = r.n2;
  j["set_size"] = r.set_size;
  if (!r.first_violation.empty()) {
    j["first_violation"] = r.first_violation;
    Json ws = Json::array();
    for (const auto& w : r.violating) ws.push_back(to_string(w));
    j["violating_words"] = ws;
  }
  return j;
}

inline Json to_json(const CrossOracleReport& r, bool timing = false) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["params"] = {{"r", r.r}, {"trials", r.trials}, {"maxlen", r.maxlen}, {"seed", r.seed}};
  j["agreements"] = r.agreements;
  j["trivial_words"] = r.trivial;
  j["passed"] = r.passed();
  j["first_disagreement"] = word_or_null(r.first_disagreement);
  j["max_store_nodes"] = r.max_store_nodes;
  j["total_pinches"] = r.total_pinches;
  if (timing) j["seconds"] = r.seconds;
  return j;
}

inline Json to_json(const WLength& w) {
  Json j;
  j["exact"] = w.exact ? Json(w.exact->get_str()) : Json(nullptr);
  j["log10"] = w.log10;
  return j;
}

inline Json to_json(const MitraRow& r) {
  Json j;
  j["n"] = r.n;
  j["gamma"] = to_string(r.gamma);
  j["gamma_len"] = r.gamma_len;
  j["strongly_dehn_reduced"] = r.strongly_reduced;
  j["geodesic_certified"] = r.geodesic;
  j["longest_match"] = to_string(r.longest_match);
  j["longest_match_len"] = r.longest_match.length();
  j["max_match_ratio"] = std::to_string(r.ratio_num) + "/" + std::to_string(r.ratio_den);
  j["p0"] = "b^" + std::to_string(r.n);
  j["p1"] = "b^" + std::to_string(r.n) + " w_" + std::to_string(r.n);
  j["w_len"] = to_json(r.w_len);
  j["h_distance"] = r.h_distance.value.get_str();
  j["h_distance_symbolic"] = r.h_distance.symbolic;
  j["w_positive_certified"] = r.h_distance.positivity_certified;
  j["g_distance"] = r.g_distance.get_str();
  return j;
}

inline Json to_json(const CTReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["params"] = {{"r", r.params.r}, {"l", r.params.l}, {"n_min", 1}, {"n_max", r.n_max}, {"seed", r.seed}};
  Json cert = to_json(r.certificate);
  cert["presentation"] = "G";
  j["certificate"] = cert;
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back(to_json(row));
  j["rows"] = rows;
  j["longest_match_is_a^-1_d1_a"] = r.longest_match_is_a_d1_a;
  j["longest_match_exceptions"] = r.longest_match_exceptions;
  j["verdict"] = {{"mitra_criterion_fails", r.verdict},
                  {"statement", r.verdict ? "M(N) <= 0 for all tested N, so M(N) does not tend to infinity"
                                          : "certification failed"}};
  return j;
}

inline Json to_json(const UReport& r) {
  Json j;
  j["n"] = r.n;
  j["mode"] = to_string(r.mode);
  j["passed"] = r.passed;
  j["u_len"] = r.u_len.get_str();
  j["steps"] = r.steps;
  j["expansion_compared"] = r.expansion_compared;
  j["abelianized"] = to_string(r.abelian);
  j["detail"] = r.detail;
  return j;
}

inline Json to_json(const W1Report& r) {
  return Json{{"trivial", r.trivial},
              {"trace_steps", r.trace_steps},
              {"abelianized", to_string(r.abelian)},
              {"w1_len", r.w1_len.get_str()},
              {"expected_len", r.expected_len.get_str()},
              {"passed", r.passed()}};
}

inline Json to_json(const FreenessReport& r) {
  return Json{{"trials", r.trials},
              {"maxlen", r.maxlen},
              {"seed", r.seed},
              {"failures", r.failures},
              {"first_failure", word_or_null(r.first_failure)}};
}

inline Json to_json(const std::vector<DistortionRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows)
    a.push_back(Json{{"n", r.n}, {"gamma_len", r.gamma_len.get_str()}, {"w_len", to_json(r.w_len)}});
  return a;
}

}  // namespace ctw::report
