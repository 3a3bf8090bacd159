#include "ofdma/solve.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ofdma/assignment.hpp"
#include "ofdma/transport.hpp"
#include "ofdma/waterfill.hpp"

namespace ofdma {

namespace {

// Re-derives the solution's feasibility slacks from the instance alone; the
// solver's own bookkeeping never enters here.
void verify_allocation(const OfdmaInstance& inst, const PowerAllocation& alloc,
                       SolveReport& report) {
  report.residuals["ofdma"] = is_ofdma(alloc) ? 0.0 : 1.0;
  report.residuals["cap_violation"] = max_budget_violation(inst, alloc);
  const RateVector r = rates(inst, alloc);
  if (inst.rate_target) {
    double slack = std::numeric_limits<double>::infinity();
    for (int k = 0; k < inst.num_users; ++k)
      slack = std::min(slack, r[k] - (*inst.rate_target)[k]);
    report.residuals["rate_slack"] = slack;
  }
  if (inst.user_budget) {
    double slack = std::numeric_limits<double>::infinity();
    for (int k = 0; k < inst.num_users; ++k) {
      double used = 0.0;
      for (int n = 0; n < inst.num_subcarriers; ++n) used += alloc.power[k][n];
      slack = std::min(slack, (*inst.user_budget)[k] - used);
    }
    report.residuals["budget_slack"] = slack;
  }
}

SolveReport solve_waterfill(const OfdmaInstance& inst, const SolveOptions& opts) {
  if (inst.num_users != 1)
    throw std::invalid_argument("method waterfill requires a single-user instance");
  SolveReport report;
  report.method = "waterfill";
  const SingleUserChannel ch = user_channel(inst, 0);
  if (inst.rate_target) {
    const auto res = min_power_single_user(ch, (*inst.rate_target)[0], opts.eps);
    if (!res) {
      report.status = SolveStatus::Infeasible;
      return report;
    }
    report.value = res->total_power;
    report.alloc = PowerAllocation{{res->powers}};
    report.residuals["kkt"] = kkt_residual(ch, res->total_power, res->powers, res->level);
  } else {
    double budget = 0.0;
    if (inst.user_budget) {
      budget = (*inst.user_budget)[0];
    } else {
      for (double c : ch.cap) budget += c;  // no budget given: full power
    }
    const auto res = max_rate_single_user(ch, budget);
    report.value = res.rate;
    report.alloc = PowerAllocation{{res.powers}};
    report.residuals["kkt"] = kkt_residual(ch, budget, res.powers, res.level);
  }
  return report;
}

SolveReport solve_assignment(const OfdmaInstance& inst, const SolveOptions& opts) {
  const int offset = inst.num_subcarriers - inst.num_users;
  if (!inst.rate_target)
    throw std::invalid_argument("method assignment requires rate targets");
  if (offset > opts.c_bound)
    throw std::invalid_argument(
        "N - K = " + std::to_string(offset) + " exceeds the partition bound " +
        std::to_string(opts.c_bound) + " (raise --c-bound to override)");
  SolveReport report;
  report.method = "assignment";
  const auto sol = offset == 0 ? min_power_square(inst) : min_power_offset(inst, offset, opts.eps);
  if (!sol) {
    report.status = SolveStatus::Infeasible;
    return report;
  }
  report.value = sol->total;
  report.alloc = sol->alloc;
  return report;
}

SolveReport solve_transport(const OfdmaInstance& inst, const SolveOptions& opts) {
  if (inst.user_budget)
    throw std::invalid_argument(
        "method transport solves the sum-rate problem without per-user total budgets; "
        "this instance has user_budget (use exact)");
  if (inst.rate_target)
    throw std::invalid_argument("method transport does not apply to min-power instances");
  SolveReport report;
  report.method = "transport";
  const auto sol = max_sum_rate_no_total_budget(inst, opts.weights);
  report.value = sol.value;
  report.alloc = sol.alloc;
  return report;
}

SolveReport solve_exact(const OfdmaInstance& inst, const SolveOptions& opts) {
  SolveReport report;
  report.method = "exact";
  ExactOptions eopts;
  eopts.enum_budget = opts.enum_budget;
  eopts.eps = opts.eps;
  if (inst.rate_target) {
    const auto sol = exact_min_power(inst, eopts);
    if (!sol) {
      report.status = SolveStatus::Infeasible;
      return report;
    }
    report.value = sol->total;
    report.alloc = sol->alloc;
  } else if (inst.user_budget) {
    const auto sol = exact_max_utility(inst, opts.kind, eopts);
    report.value = sol.value;
    report.alloc = sol.alloc;
  } else {
    // No constraints bind the per-user totals: give each user its row budget
    // sum, which can never bind, and maximize the sum rate.
    OfdmaInstance padded = inst;
    std::vector<double> budgets(inst.num_users, 0.0);
    for (int k = 0; k < inst.num_users; ++k) {
      for (int n = 0; n < inst.num_subcarriers; ++n)
        budgets[k] += inst.subcarrier_budget[k][n];
      budgets[k] = std::max(budgets[k], 1.0);
    }
    padded.user_budget = budgets;
    const auto sol = exact_max_utility(padded, UtilityKind::SumRate, eopts);
    report.value = sol.value * inst.num_users;  // sum rate, not the mean
    report.alloc = sol.alloc;
  }
  return report;
}

}  // namespace

std::string select_method(const OfdmaInstance& inst, const SolveOptions& opts) {
  if (opts.method != "auto") return opts.method;
  if (inst.num_users == 1) return "waterfill";
  if (inst.rate_target && inst.num_subcarriers - inst.num_users <= opts.c_bound)
    return "assignment";
  if (!inst.rate_target && !inst.user_budget) return "transport";
  return "exact";
}

SolveReport solve_instance(const OfdmaInstance& inst, const SolveOptions& opts) {
  const auto violations = validate_instance(inst);
  if (!violations.empty())
    throw std::invalid_argument("invalid instance: " + violations.front());

  const std::string method = select_method(inst, opts);
  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  if (method == "waterfill") {
    report = solve_waterfill(inst, opts);
  } else if (method == "assignment") {
    report = solve_assignment(inst, opts);
  } else if (method == "transport") {
    report = solve_transport(inst, opts);
  } else if (method == "exact") {
    report = solve_exact(inst, opts);
  } else {
    throw std::invalid_argument("unknown method: " + method);
  }
  if (report.alloc) verify_allocation(inst, *report.alloc, report);
  report.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::BudgetExceeded: return "budget_exceeded";
  }
  return "unknown";
}

nlohmann::json report_to_json(const SolveReport& report) {
  nlohmann::json j;
  j["method"] = report.method;
  j["status"] = status_name(report.status);
  j["value"] = report.value;
  j["alloc"] = report.alloc ? nlohmann::json(report.alloc->power) : nlohmann::json(nullptr);
  j["residuals"] = report.residuals;
  j["wall_time_sec"] = report.wall_time_sec;
  return j;
}

}  // namespace ofdma
