#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ofdma {

/// Dense row-major matrix indexed [user][subcarrier].
using Matrix = std::vector<std::vector<double>>;

/// Channel data for K users sharing N subcarriers.
///
/// Cross gains never enter any rate under the orthogonality constraint, so
/// only direct-link gains are stored. rate_target drives the min-power
/// problems, user_budget drives the utility problems; an instance carrying
/// neither is the unconstrained (weighted) sum-rate problem.
struct OfdmaInstance {
  int num_users = 0;        // K
  int num_subcarriers = 0;  // N >= K
  Matrix direct_gain;       // K x N, alpha >= 0 (dimensionless)
  Matrix noise;             // K x N, eta > 0 (power)
  Matrix subcarrier_budget; // K x N, per-subcarrier power cap >= 0
  std::optional<std::vector<double>> user_budget; // length K, P_k > 0
  std::optional<std::vector<double>> rate_target; // length K, gamma_k > 0
};

/// Transmit powers p[user][subcarrier]. Valid allocations have at most one
/// strictly positive entry per subcarrier column (the OFDMA property).
struct PowerAllocation {
  Matrix power;
};

inline constexpr int kUnassigned = -1;

/// Subcarrier ownership map; owner[n] is a user index or kUnassigned.
struct SubcarrierAssignment {
  std::vector<int> owner;
};

/// Per-user achievable rates in bits per channel use.
using RateVector = std::vector<double>;

enum class UtilityKind { SumRate, ProportionalFairness, HarmonicMean, MinRate };

/// Checks every structural invariant and returns one message per violation,
/// each naming the offending field; empty means well-formed.
std::vector<std::string> validate_instance(const OfdmaInstance& inst);

/// True iff each subcarrier column has at most one strictly positive power.
bool is_ofdma(const PowerAllocation& alloc);

/// Rate of a single user-subcarrier pair: log2(1 + gain*power/noise).
double subcarrier_rate(double gain, double noise, double power);

/// Per-user rates R_k = sum_n log2(1 + alpha_k^n p_k^n / eta_k^n).
/// Throws std::invalid_argument on shape mismatch, negative powers, or an
/// allocation violating the OFDMA property (the simplification that removes
/// cross gains from the SINR only holds under orthogonality).
RateVector rates(const OfdmaInstance& inst, const PowerAllocation& alloc);

/// System utility of a nonnegative rate vector. Any zero rate sends the
/// proportional-fairness, harmonic-mean, and min-rate utilities to 0 (the
/// continuous limit convention).
double utility(UtilityKind kind, const RateVector& r);

/// Ownership map of an OFDMA allocation; throws if a column has two owners.
SubcarrierAssignment assignment_of(const PowerAllocation& alloc);

double total_power(const PowerAllocation& alloc);

/// Largest amount by which any entry exceeds its per-subcarrier cap
/// (0 when the allocation is within budget everywhere).
double max_budget_violation(const OfdmaInstance& inst, const PowerAllocation& alloc);

PowerAllocation zero_allocation(int num_users, int num_subcarriers);

const char* utility_name(UtilityKind kind);
std::optional<UtilityKind> parse_utility(const std::string& name);

}  // namespace ofdma
