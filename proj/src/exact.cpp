#include "ofdma/exact.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "ofdma/waterfill.hpp"

namespace ofdma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_enum_budget(const OfdmaInstance& inst, std::uint64_t budget) {
  const std::uint64_t count =
      AssignmentEnumeration::count(inst.num_users, inst.num_subcarriers);
  if (count > budget)
    throw EnumerationBudgetExceeded(
        "assignment enumeration needs (K+1)^N = " + std::to_string(count) +
        " maps, above the budget of " + std::to_string(budget));
  if (inst.num_subcarriers > 63)
    throw EnumerationBudgetExceeded("exact solvers support at most 63 subcarriers");
}

void require_rate_targets(const OfdmaInstance& inst) {
  if (!inst.rate_target || static_cast<int>(inst.rate_target->size()) != inst.num_users)
    throw std::invalid_argument("exact min-power/feasibility require rate_target");
}

std::vector<int> mask_to_block(std::uint64_t mask) {
  std::vector<int> block;
  for (int n = 0; mask != 0; ++n, mask >>= 1)
    if (mask & 1) block.push_back(n);
  return block;
}

// Per-user memo over block bitmasks; block subproblems recur heavily across
// the (K+1)^N assignments.
class BlockCache {
 public:
  explicit BlockCache(int num_users) : maps_(num_users) {}

  template <typename Compute>
  double get(int user, std::uint64_t mask, Compute&& compute) {
    auto& m = maps_[user];
    auto it = m.find(mask);
    if (it != m.end()) return it->second;
    const double val = compute(mask);
    m.emplace(mask, val);
    return val;
  }

 private:
  std::vector<std::unordered_map<std::uint64_t, double>> maps_;
};

}  // namespace

AssignmentEnumeration::AssignmentEnumeration(int num_users, int num_subcarriers)
    : num_users_(num_users), owner_(num_subcarriers, kUnassigned) {
  if (num_users < 1 || num_subcarriers < 0)
    throw std::invalid_argument("enumeration requires K >= 1 and N >= 0");
}

std::uint64_t AssignmentEnumeration::count(int num_users, int num_subcarriers) {
  const std::uint64_t base = static_cast<std::uint64_t>(num_users) + 1;
  std::uint64_t c = 1;
  for (int i = 0; i < num_subcarriers; ++i) {
    if (c > std::numeric_limits<std::uint64_t>::max() / base)
      return std::numeric_limits<std::uint64_t>::max();
    c *= base;
  }
  return c;
}

bool AssignmentEnumeration::advance() {
  for (std::size_t n = 0; n < owner_.size(); ++n) {
    if (owner_[n] < num_users_ - 1) {
      ++owner_[n];
      return true;
    }
    owner_[n] = kUnassigned;
  }
  return false;
}

std::optional<MinPowerSolution> exact_min_power(const OfdmaInstance& inst,
                                                const ExactOptions& opts) {
  require_rate_targets(inst);
  check_enum_budget(inst, opts.enum_budget);
  const int k = inst.num_users;
  const int n = inst.num_subcarriers;

  BlockCache cache(k);
  auto block_power = [&](int user, std::uint64_t mask) {
    return cache.get(user, mask, [&](std::uint64_t m) {
      const auto res = min_power_single_user(user_channel(inst, user, mask_to_block(m)),
                                             (*inst.rate_target)[user], opts.eps);
      return res ? res->total_power : kInf;
    });
  };

  double best = kInf;
  std::vector<int> best_owner;
  std::vector<std::uint64_t> masks(k);
  AssignmentEnumeration en(k, n);
  do {
    std::fill(masks.begin(), masks.end(), 0);
    const auto& owner = en.owner();
    for (int s = 0; s < n; ++s)
      if (owner[s] != kUnassigned) masks[owner[s]] |= std::uint64_t{1} << s;
    double total = 0.0;
    for (int u = 0; u < k && total < best; ++u) total += block_power(u, masks[u]);
    if (total < best) {
      best = total;
      best_owner = owner;
    }
  } while (en.advance());

  if (!std::isfinite(best)) return std::nullopt;

  MinPowerSolution sol;
  sol.alloc = zero_allocation(k, n);
  for (int u = 0; u < k; ++u) {
    std::vector<int> block;
    for (int s = 0; s < n; ++s)
      if (best_owner[s] == u) block.push_back(s);
    const auto res =
        min_power_single_user(user_channel(inst, u, block), (*inst.rate_target)[u], opts.eps);
    assert(res);
    for (std::size_t j = 0; j < block.size(); ++j) sol.alloc.power[u][block[j]] = res->powers[j];
  }
  sol.total = total_power(sol.alloc);
  return sol;
}

bool exact_feasibility(const OfdmaInstance& inst, const ExactOptions& opts) {
  require_rate_targets(inst);
  check_enum_budget(inst, opts.enum_budget);
  const int k = inst.num_users;
  const int n = inst.num_subcarriers;

  BlockCache cache(k);
  auto block_rate = [&](int user, std::uint64_t mask) {
    return cache.get(user, mask, [&](std::uint64_t m) {
      return full_power_rate(user_channel(inst, user, mask_to_block(m)));
    });
  };

  std::vector<std::uint64_t> masks(k);
  AssignmentEnumeration en(k, n);
  do {
    std::fill(masks.begin(), masks.end(), 0);
    const auto& owner = en.owner();
    for (int s = 0; s < n; ++s)
      if (owner[s] != kUnassigned) masks[owner[s]] |= std::uint64_t{1} << s;
    bool ok = true;
    for (int u = 0; u < k && ok; ++u)
      ok = block_rate(u, masks[u]) >= (*inst.rate_target)[u] - opts.rate_tol;
    if (ok) return true;
  } while (en.advance());
  return false;
}

UtilitySolution exact_max_utility(const OfdmaInstance& inst, UtilityKind kind,
                                  const ExactOptions& opts) {
  if (!inst.user_budget || static_cast<int>(inst.user_budget->size()) != inst.num_users)
    throw std::invalid_argument("exact_max_utility requires user_budget");
  check_enum_budget(inst, opts.enum_budget);
  const int k = inst.num_users;
  const int n = inst.num_subcarriers;

  BlockCache cache(k);
  auto block_rate = [&](int user, std::uint64_t mask) {
    return cache.get(user, mask, [&](std::uint64_t m) {
      if (m == 0) return 0.0;
      return max_rate_single_user(user_channel(inst, user, mask_to_block(m)),
                                  (*inst.user_budget)[user])
          .rate;
    });
  };

  double best = -kInf;
  std::vector<int> best_owner;
  std::vector<std::uint64_t> masks(k);
  RateVector r(k);
  AssignmentEnumeration en(k, n);
  do {
    std::fill(masks.begin(), masks.end(), 0);
    const auto& owner = en.owner();
    for (int s = 0; s < n; ++s)
      if (owner[s] != kUnassigned) masks[owner[s]] |= std::uint64_t{1} << s;
    for (int u = 0; u < k; ++u) r[u] = block_rate(u, masks[u]);
    const double val = utility(kind, r);
    if (val > best) {
      best = val;
      best_owner = owner;
    }
  } while (en.advance());

  UtilitySolution sol;
  sol.alloc = zero_allocation(k, n);
  for (int u = 0; u < k; ++u) {
    std::vector<int> block;
    for (int s = 0; s < n; ++s)
      if (best_owner[s] == u) block.push_back(s);
    if (block.empty()) continue;
    const auto res =
        max_rate_single_user(user_channel(inst, u, block), (*inst.user_budget)[u]);
    for (std::size_t j = 0; j < block.size(); ++j) sol.alloc.power[u][block[j]] = res.powers[j];
  }
  sol.rate = rates(inst, sol.alloc);
  sol.value = utility(kind, sol.rate);
  return sol;
}

}  // namespace ofdma
