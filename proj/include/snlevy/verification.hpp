#pragma once

#include <string>
#include <vector>

#include "snlevy/levy_model.hpp"
#include "snlevy/simulator.hpp"

namespace snlevy {

struct CheckResult {
  enum ToleranceKind { StdErr, Relative, Absolute };
  std::string check_id;
  double target = 0.0;
  double estimate = 0.0;
  ToleranceKind tolerance_kind = Absolute;
  double tolerance_param = 0.0;  // k for StdErr, eps otherwise
  bool passed = false;
  std::string detail;
};

/// Runs one of {scale, exit, policy, barrier, simulator, all}. Results are
/// sorted by check_id; deterministic for a fixed cfg.seed. Failed MC checks
/// are retried once with a derived seed and doubled path count.
std::vector<CheckResult> run_suite(const std::string& suite_id,
                                   const std::vector<LevyModel>& models,
                                   const std::vector<double>& q_list,
                                   const SimConfig& cfg);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace snlevy
