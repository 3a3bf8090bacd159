#pragma once

#include <cstdint>

#include "ofdma/core.hpp"

namespace ofdma {

enum class InstanceKind { MinPower, Utility, SumRateNoBudget };

/// Seeded random instance recipe. Gains, noise, and per-subcarrier budgets
/// are log-uniform over [lo, hi]; rate targets scale each user's best
/// single-subcarrier full-power rate, user budgets scale the row budget sum.
/// Identical specs produce identical instances.
struct GenSpec {
  int num_users = 2;
  int num_subcarriers = 4;
  InstanceKind kind = InstanceKind::MinPower;
  std::uint64_t seed = 0;
  double gain_lo = 0.25, gain_hi = 4.0;
  double noise_lo = 0.25, noise_hi = 4.0;
  double budget_lo = 0.5, budget_hi = 4.0;
  double target_scale = 0.8;
};

OfdmaInstance generate_instance(const GenSpec& spec);

}  // namespace ofdma
