#pragma once

#include <json.hpp>

#include "snlevy/barrier_optimizer.hpp"
#include "snlevy/policy_values.hpp"
#include "snlevy/scale_functions.hpp"
#include "snlevy/simulator.hpp"
#include "snlevy/verification.hpp"

// Canonical JSON forms. ordered_json keeps field order stable so that equal
// inputs serialize to byte-identical reports.
namespace snlevy {

using json = nlohmann::ordered_json;

inline json to_json(const LevyModel& model) {
  json j;
  j["family"] = family_name(model);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BrownianDrift>) {
          j["mu"] = m.mu;
          j["sigma"] = m.sigma;
        } else if constexpr (std::is_same_v<T, CramerLundbergExp>) {
          j["p"] = m.p;
          j["lambda"] = m.lambda;
          j["mu_rate"] = m.mu_rate;
        } else if constexpr (std::is_same_v<T, StableSpectralNeg>) {
          j["alpha"] = m.alpha;
          j["sigma_scale"] = m.sigma_scale;
        } else {
          j["mu"] = m.mu;
          j["sigma"] = m.sigma;
          j["lambda"] = m.lambda;
          j["weights"] = m.weights;
          j["rates"] = m.rates;
        }
      },
      model);
  return j;
}

inline LevyModel model_from_json(const json& j) {
  std::string fam = j.at("family");
  if (fam == "brownian")
    return BrownianDrift{j.at("mu"), j.at("sigma")};
  if (fam == "cl-exp")
    return CramerLundbergExp{j.at("p"), j.at("lambda"), j.at("mu_rate")};
  if (fam == "stable")
    return StableSpectralNeg{j.at("alpha"), j.at("sigma_scale")};
  if (fam == "hyperexp")
    return HyperExpJumpDiffusion{j.at("mu"), j.at("sigma"), j.at("lambda"),
                                 j.at("weights").get<std::vector<double>>(),
                                 j.at("rates").get<std::vector<double>>()};
  throw ConfigError("unknown model family: " + fam);
}

inline json to_json(const ScaleEval& e) {
  return json{{"x", e.x},
              {"q", e.q},
              {"w", e.w},
              {"w_prime", e.w_prime},
              {"z", e.z},
              {"wbar", e.wbar},
              {"zbar", e.zbar},
              {"source", e.source == ScaleSource::ClosedForm
                             ? "ClosedForm"
                             : "NumericInversion"}};
}

inline const char* method_name(BarrierSolution::Method m) {
  switch (m) {
    case BarrierSolution::ClosedForm: return "ClosedForm";
    case BarrierSolution::GenericMinimize: return "GenericMinimize";
    case BarrierSolution::GenericRootFind: return "GenericRootFind";
    case BarrierSolution::ZeroByCondition: return "ZeroByCondition";
  }
  return "?";
}

inline json to_json(const BarrierSolution& s) {
  json j{{"level", s.level},
         {"criterion_residual", s.criterion_residual},
         {"method", method_name(s.method)}};
  if (s.reason) j["reason"] = *s.reason;
  return j;
}

inline json to_json(const PolicyValueReport& r) {
  json j{{"x", r.x}, {"a", r.a}, {"value", r.value}};
  if (r.dividends) j["dividends"] = *r.dividends;
  if (r.injections_cost) j["injections_cost"] = *r.injections_cost;
  if (r.note) j["note"] = *r.note;
  return j;
}

inline json to_json(const MCEstimate& e) {
  return json{{"mean", e.mean},
              {"stderr", e.stderr_},
              {"n", e.n},
              {"truncation_bound", e.truncation_bound}};
}

inline json to_json(const HjbReport& r) {
  return json{{"barrier", r.barrier},
              {"max_violation", r.max_violation},
              {"interior_max_abs", r.interior_max_abs},
              {"scale", r.scale},
              {"condition_holds", r.condition_holds},
              {"grid", r.grid},
              {"residuals", r.residuals}};
}

inline const char* tolerance_name(CheckResult::ToleranceKind k) {
  switch (k) {
    case CheckResult::StdErr: return "stderr";
    case CheckResult::Relative: return "relative";
    case CheckResult::Absolute: return "absolute";
  }
  return "?";
}

inline json to_json(const CheckResult& c) {
  return json{{"check_id", c.check_id},
              {"target", c.target},
              {"estimate", c.estimate},
              {"tolerance_kind", tolerance_name(c.tolerance_kind)},
              {"tolerance_param", c.tolerance_param},
              {"passed", c.passed},
              {"detail", c.detail}};
}

inline json to_json(const std::vector<CheckResult>& v) {
  json arr = json::array();
  for (const auto& c : v) arr.push_back(to_json(c));
  return arr;
}

inline json to_json(const SimPath& p) {
  json ev = json::array();
  for (const auto& e : p.events)
    ev.push_back(json{{"time", e.time},
                      {"pre_level", e.pre_level},
                      {"post_level", e.post_level},
                      {"dL", e.dL},
                      {"dR", e.dR}});
  json j{{"events", std::move(ev)},
         {"disc_L", p.disc_L},
         {"disc_R", p.disc_R}};
  if (p.ruin_time) j["ruin_time"] = *p.ruin_time;
  return j;
}

}  // namespace snlevy
