#include "ofdma/generator.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ofdma {

namespace {

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

}  // namespace

OfdmaInstance generate_instance(const GenSpec& spec) {
  if (spec.num_users < 1 || spec.num_subcarriers < spec.num_users)
    throw std::invalid_argument("generator requires N >= K >= 1");
  if (!(spec.gain_lo > 0.0 && spec.noise_lo > 0.0 && spec.budget_lo > 0.0))
    throw std::invalid_argument("generator ranges must be positive");

  std::mt19937_64 rng(spec.seed);
  const int k = spec.num_users;
  const int n = spec.num_subcarriers;

  OfdmaInstance inst;
  inst.num_users = k;
  inst.num_subcarriers = n;
  inst.direct_gain.assign(k, std::vector<double>(n));
  inst.noise.assign(k, std::vector<double>(n));
  inst.subcarrier_budget.assign(k, std::vector<double>(n));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j)
      inst.direct_gain[i][j] = log_uniform(rng, spec.gain_lo, spec.gain_hi);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) inst.noise[i][j] = log_uniform(rng, spec.noise_lo, spec.noise_hi);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j)
      inst.subcarrier_budget[i][j] = log_uniform(rng, spec.budget_lo, spec.budget_hi);

  if (spec.kind == InstanceKind::MinPower) {
    std::vector<double> targets(k);
    for (int i = 0; i < k; ++i) {
      double best = 0.0;
      for (int j = 0; j < n; ++j)
        best = std::max(best, subcarrier_rate(inst.direct_gain[i][j], inst.noise[i][j],
                                              inst.subcarrier_budget[i][j]));
      targets[i] = std::max(1e-6, spec.target_scale * best);
    }
    inst.rate_target = targets;
  } else if (spec.kind == InstanceKind::Utility) {
    std::vector<double> budgets(k);
    std::uniform_real_distribution<double> frac(0.3, 1.0);
    for (int i = 0; i < k; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j) row += inst.subcarrier_budget[i][j];
      budgets[i] = std::max(1e-6, frac(rng) * row);
    }
    inst.user_budget = budgets;
  }
  return inst;
}

}  // namespace ofdma
