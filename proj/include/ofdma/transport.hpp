#pragma once

#include <optional>
#include <vector>

#include "ofdma/core.hpp"

namespace ofdma {

/// Balanced transportation instance: K supplies, N+1 demands (the last
/// terminal is the zero-cost dummy absorbing each user's unassigned slack),
/// and nonnegative unit costs.
struct HitchcockInstance {
  std::vector<double> supplies;
  std::vector<double> demands;
  Matrix cost;  // K x (N+1)
};

/// Transportation encoding of the (weighted) sum-rate problem without
/// per-user total power constraints: supplies a_k = N, real demands 1, dummy
/// demand (K-1)N, and cost c_k^n = cbar - w_k*log2(1 + alpha*P/eta) with cbar
/// the largest weighted full-power rate (so all costs are >= 0).
HitchcockInstance build_hitchcock(const OfdmaInstance& inst,
                                  const std::optional<std::vector<double>>& weights = {});

/// Minimum-cost flow via successive shortest paths with potentials. Integral
/// supplies and demands yield an exactly integral optimal flow (the
/// constraint matrix is totally unimodular). Throws on unbalanced instances
/// or negative costs.
Matrix solve_transportation(const HitchcockInstance& h);

struct SumRateSolution {
  PowerAllocation alloc;
  double value = 0.0;
};

/// Optimal value and allocation of the (weighted) sum-rate problem without
/// total power constraints; active entries transmit at full per-subcarrier
/// budget. Always feasible (the zero allocation is a certificate).
SumRateSolution max_sum_rate_no_total_budget(
    const OfdmaInstance& inst, const std::optional<std::vector<double>>& weights = {});

}  // namespace ofdma
