#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ofdma/assignment.hpp"
#include "ofdma/core.hpp"

namespace ofdma {

inline constexpr std::uint64_t kDefaultEnumBudget = 100'000'000;

struct EnumerationBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Odometer over all (K+1)^N maps subcarrier -> {kUnassigned, 0..K-1}.
class AssignmentEnumeration {
 public:
  AssignmentEnumeration(int num_users, int num_subcarriers);

  /// (K+1)^N, saturating at 2^64-1.
  static std::uint64_t count(int num_users, int num_subcarriers);

  const std::vector<int>& owner() const { return owner_; }
  /// Steps to the next map; false once all maps have been yielded.
  bool advance();

 private:
  int num_users_;
  std::vector<int> owner_;
};

struct ExactOptions {
  std::uint64_t enum_budget = kDefaultEnumBudget;
  double eps = 1e-10;
  /// Slack granted when comparing a block's full-power rate against the
  /// target; reduction gadget targets match the achievable rates only up to
  /// rounding, and all gadget rate gaps are orders of magnitude wider.
  double rate_tol = 1e-9;
};

/// Global optimum of the min-power problem by enumerating every subcarrier
/// assignment and solving each user's convex block subproblem; nullopt when
/// no assignment serves every user. Throws EnumerationBudgetExceeded when
/// (K+1)^N exceeds the budget.
std::optional<MinPowerSolution> exact_min_power(const OfdmaInstance& inst,
                                                const ExactOptions& opts = {});

/// True iff some assignment lets every user meet its rate target at full
/// block power.
bool exact_feasibility(const OfdmaInstance& inst, const ExactOptions& opts = {});

struct UtilitySolution {
  PowerAllocation alloc;
  double value = 0.0;
  RateVector rate;
};

/// Global optimum of the utility maximization problem. Within an assignment
/// the users decouple, and every supported utility is coordinatewise
/// nondecreasing, so each user independently maximizes its own rate on its
/// block under its total power budget.
UtilitySolution exact_max_utility(const OfdmaInstance& inst, UtilityKind kind,
                                  const ExactOptions& opts = {});

}  // namespace ofdma
