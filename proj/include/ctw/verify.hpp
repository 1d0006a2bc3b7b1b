#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ctw/report.hpp"

namespace ctw {

struct VerifyConfig {
  std::optional<int> r;  // default: the r found by the min-r stage
  int l = 2;
  Fraction lambda{1, 6};
  int r_lo = 2, r_hi = 60;
  std::uint64_t seed = kDefaultSeed;
  std::size_t cross_trials = 10000, cross_maxlen = 40;
  std::size_t freeness_trials = 10000, freeness_maxlen = 30;
  int ct_n_max = 10;
  int distortion_n_max = 8;
  int u_rewrite_n_max = 4;
  std::size_t exact_bits = kDefaultExactBits;
};

struct VerifyOutcome {
  int exit_code = 0;  // 0, or the 1-based index of the failing stage
  std::string failed_stage;
  report::Json report;
};

inline const std::vector<std::string>& verify_stage_names() {
  static const std::vector<std::string> names{"min-r",           "cprime",    "nielsen", "cross-oracle",
                                              "w1-u-rewriting",  "h-freeness", "ct-experiment", "distortion"};
  return names;
}

// Runs the stages in order and stops at the first failure.
inline VerifyOutcome verify_all(const VerifyConfig& cfg,
                                const std::function<void(const std::string&)>& progress = nullptr) {
  using report::Json;
  VerifyOutcome out;
  Json& rep = out.report;
  rep["schema_version"] = report::kSchemaVersion;
  rep["config"] = {{"r", cfg.r ? Json(*cfg.r) : Json(nullptr)},
                   {"l", cfg.l},
                   {"lambda", cfg.lambda.str()},
                   {"seed", cfg.seed},
                   {"cross_trials", cfg.cross_trials},
                   {"cross_maxlen", cfg.cross_maxlen},
                   {"freeness_trials", cfg.freeness_trials},
                   {"freeness_maxlen", cfg.freeness_maxlen},
                   {"ct_n_max", cfg.ct_n_max},
                   {"distortion_n_max", cfg.distortion_n_max}};
  Json stages = Json::array();
  int index = 0;
  int r = cfg.r.value_or(0);
  auto finish = [&](const std::string& name, bool ok, Json body) {
    body["stage"] = name;
    body["passed"] = ok;
    stages.push_back(std::move(body));
    if (!ok && out.exit_code == 0) {
      out.exit_code = index;
      out.failed_stage = name;
    }
    return ok;
  };
  auto begin = [&](const std::string& name) {
    ++index;
    if (progress) progress(name);
  };

  auto run = [&]() {
    begin("min-r");
    {
      auto res = find_min_r(cfg.lambda, cfg.r_lo, cfg.r_hi, "G", cfg.l);
      Json b;
      b["range"] = {cfg.r_lo, cfg.r_hi};
      b["r_star"] = res.r ? Json(*res.r) : Json(nullptr);
      if (!res.checked.empty()) b["last_checked"] = report::to_json(res.checked.back().second);
      if (!cfg.r && res.r) r = *res.r;
      if (!finish("min-r", res.r.has_value(), b)) return;
    }
    rep["r"] = r;
    RipsParams p(r, cfg.l);

    begin("cprime");
    {
      Json b;
      bool ok = true;
      for (const char* g : {"G", "Gbcd", "Gcd", "Gc1d"}) {
        auto pr = check_cprime(presentation_by_name(g, p), cfg.lambda);
        b[g] = report::to_json(pr);
        ok = ok && pr.holds;
      }
      if (!finish("cprime", ok, b)) return;
    }

    begin("nielsen");
    {
      auto C = alphabets::C(), D = alphabets::D();
      std::vector<Word> cs{word_C(p, C), word_Ci(p, 1, C), word_Ci(p, 2, C)};
      std::vector<Word> ds{word_Dj(p, 1, D), word_Dj(p, 2, D)};
      for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) ds.push_back(word_Dij(p, i, j, D));
      auto nc = nielsen_check(cs), nd = nielsen_check(ds);
      bool hc = cprime_half_sufficient(cs), hd = cprime_half_sufficient(ds);
      Json b;
      b["C"] = report::to_json(nc);
      b["C"]["cprime_half"] = hc;
      b["D"] = report::to_json(nd);
      b["D"]["cprime_half"] = hd;
      if (!finish("nielsen", nc.passes() && nd.passes() && hc && hd, b)) return;
    }

    begin("cross-oracle");
    {
      auto co = cross_oracle(p, cfg.cross_trials, cfg.cross_maxlen, cfg.seed);
      if (!finish("cross-oracle", co.passed(), report::to_json(co))) return;
    }

    begin("w1-u-rewriting");
    {
      Json b;
      auto w1 = verify_w1(p);
      b["w1"] = report::to_json(w1);
      bool ok = w1.passed();
      Json us = Json::array();
      for (int n = 1; n <= cfg.u_rewrite_n_max; ++n) {
        auto u = verify_u(n, p, UMode::RewriteProof);
        ok = ok && u.passed && u.abelian == AbelianVerdict::Inconclusive;
        us.push_back(report::to_json(u));
      }
      auto ud = verify_u(2, p, UMode::Dehn);
      ok = ok && ud.passed && ud.abelian == AbelianVerdict::Inconclusive;
      us.push_back(report::to_json(ud));
      b["u"] = us;
      if (!finish("w1-u-rewriting", ok, b)) return;
    }

    begin("h-freeness");
    {
      auto fr = sample_H_freeness(p, cfg.freeness_trials, cfg.freeness_maxlen, cfg.seed);
      if (!finish("h-freeness", fr.failures == 0, report::to_json(fr))) return;
    }

    begin("ct-experiment");
    {
      auto ct = run_ct_experiment(p, cfg.ct_n_max, cfg.seed);
      if (!finish("ct-experiment", ct.verdict, report::to_json(ct))) return;
    }

    begin("distortion");
    {
      auto rows = distortion_table(p, cfg.distortion_n_max, cfg.exact_bits);
      bool ok = true;
      Json ratios = Json::array();
      for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        double q = rows[i + 1].w_len.log10 / rows[i].w_len.log10;
        ratios.push_back(q);
        ok = ok && q > 1.5;
      }
      for (const auto& row : rows)
        if (row.w_len.exact) ok = ok && std::abs(log10_big(*row.w_len.exact) - row.w_len.log10) < 1e-6;
      Json b;
      b["rows"] = report::to_json(rows);
      b["log_ratios"] = ratios;
      finish("distortion", ok, b);
    }
  };

  try {
    run();
  } catch (const Error& e) {
    Json b;
    b["error"] = e.what();
    finish(index > 0 ? verify_stage_names()[std::size_t(index - 1)] : "setup", false, b);
  }
  rep["stages"] = stages;
  rep["passed"] = out.exit_code == 0;
  if (out.exit_code != 0) rep["failed_stage"] = out.failed_stage;
  return out;
}

}  // namespace ctw
