#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "ofdma/core.hpp"
#include "ofdma/exact.hpp"

namespace ofdma {

enum class SolveStatus { Optimal, Infeasible, BudgetExceeded };

/// Result record of a solve run. For Optimal reports the allocation has been
/// re-verified independently of the solver (OFDMA property, per-subcarrier
/// caps, user budgets, rate targets) and the residuals map records the slack.
struct SolveReport {
  std::string method;
  SolveStatus status = SolveStatus::Optimal;
  double value = 0.0;
  std::optional<PowerAllocation> alloc;
  std::map<std::string, double> residuals;
  double wall_time_sec = 0.0;
};

struct SolveOptions {
  std::string method = "auto";  // auto|waterfill|assignment|transport|exact
  UtilityKind kind = UtilityKind::SumRate;
  std::optional<std::vector<double>> weights;  // transport only
  double eps = 1e-10;
  std::uint64_t enum_budget = kDefaultEnumBudget;
  int c_bound = 4;
};

/// Dispatch rule for method "auto": K=1 -> waterfill; rate targets with
/// N-K within the partition bound -> assignment; neither rate targets nor
/// user budgets -> transport; otherwise exact.
std::string select_method(const OfdmaInstance& inst, const SolveOptions& opts);

/// Runs the selected solver and independently re-verifies the solution.
/// Throws std::invalid_argument when the method does not apply to the
/// instance and EnumerationBudgetExceeded when the exact solver is oversize.
SolveReport solve_instance(const OfdmaInstance& inst, const SolveOptions& opts);

const char* status_name(SolveStatus s);
nlohmann::json report_to_json(const SolveReport& report);

}  // namespace ofdma
