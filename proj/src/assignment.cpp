#include "ofdma/assignment.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "ofdma/waterfill.hpp"

namespace ofdma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double budget_sum(const OfdmaInstance& inst) {
  double s = 0.0;
  for (const auto& row : inst.subcarrier_budget)
    for (double v : row) s += v;
  return s;
}

void require_rate_targets(const OfdmaInstance& inst) {
  if (!inst.rate_target || static_cast<int>(inst.rate_target->size()) != inst.num_users)
    throw std::invalid_argument("min-power solvers require rate_target of length num_users");
}

// Runs the Hungarian step with sentinel entries inflated so the optimal
// matching avoids them whenever a fully feasible matching exists. A genuine
// weight can equal big_m (every budget consumed), which is why the verdict
// comes from the mask, not from comparing the value against big_m.
struct MaskedAssignment {
  std::vector<int> perm;
  double value = 0.0;  // sum of the real weights, meaningful only if feasible
  bool feasible = false;
};

MaskedAssignment solve_masked(const Matrix& w, const std::vector<std::vector<bool>>& feasible,
                              double big_m) {
  const int n = static_cast<int>(w.size());
  const double sentinel = static_cast<double>(n) * big_m + 1.0;
  Matrix inflated = w;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!feasible[i][j]) inflated[i][j] = sentinel;
  const HungarianResult h = hungarian(inflated);
  MaskedAssignment out;
  out.perm = h.perm;
  out.feasible = true;
  for (int i = 0; i < n; ++i) {
    if (!feasible[i][h.perm[i]]) {
      out.feasible = false;
      break;
    }
    out.value += w[i][h.perm[i]];
  }
  return out;
}

}  // namespace

WeightMatrix edge_weights_square(const OfdmaInstance& inst) {
  if (inst.num_subcarriers != inst.num_users)
    throw std::invalid_argument("edge_weights_square requires N == K");
  require_rate_targets(inst);
  const int k = inst.num_users;
  WeightMatrix wm;
  wm.big_m = budget_sum(inst);
  wm.w.assign(k, std::vector<double>(k, wm.big_m));
  wm.feasible.assign(k, std::vector<bool>(k, false));
  for (int i = 0; i < k; ++i) {
    const double gamma = (*inst.rate_target)[i];
    for (int n = 0; n < k; ++n) {
      const double gain = inst.direct_gain[i][n];
      const double noise = inst.noise[i][n];
      const double cap = inst.subcarrier_budget[i][n];
      if (subcarrier_rate(gain, noise, cap) >= gamma) {
        wm.w[i][n] = (std::exp2(gamma) - 1.0) * noise / gain;
        wm.feasible[i][n] = true;
      }
    }
  }
  return wm;
}

HungarianResult hungarian(const Matrix& cost) {
  const int n = static_cast<int>(cost.size());
  for (const auto& row : cost)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("hungarian requires a square matrix");
  HungarianResult res;
  if (n == 0) return res;

  // Shortest augmenting paths with row/column potentials, 1-based arrays.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  res.perm.assign(n, -1);
  for (int j = 1; j <= n; ++j)
    if (match[j] != 0) res.perm[match[j] - 1] = j - 1;
  for (int i = 0; i < n; ++i) res.value += cost[i][res.perm[i]];
  return res;
}

std::optional<MinPowerSolution> min_power_square(const OfdmaInstance& inst) {
  const WeightMatrix wm = edge_weights_square(inst);
  const MaskedAssignment m = solve_masked(wm.w, wm.feasible, wm.big_m);
  if (!m.feasible) return std::nullopt;
  MinPowerSolution sol;
  sol.alloc = zero_allocation(inst.num_users, inst.num_subcarriers);
  for (int k = 0; k < inst.num_users; ++k) {
    sol.alloc.power[k][m.perm[k]] = wm.w[k][m.perm[k]];
    sol.total += wm.w[k][m.perm[k]];
  }
  return sol;
}

void for_each_partition(int n, int k, const std::function<void(const Partition&)>& fn) {
  if (k < 1 || n < k) throw std::invalid_argument("for_each_partition requires n >= k >= 1");
  // Restricted growth strings: label[i] <= 1 + max(label[0..i-1]), with
  // exactly k labels used in total. Each set partition appears once.
  std::vector<int> label(n, 0);
  Partition part;
  part.blocks.assign(k, {});
  auto emit = [&]() {
    for (auto& b : part.blocks) b.clear();
    for (int i = 0; i < n; ++i) part.blocks[label[i]].push_back(i);
    fn(part);
  };
  std::function<void(int, int)> rec = [&](int pos, int max_label) {
    if (pos == n) {
      if (max_label == k - 1) emit();
      return;
    }
    if (max_label + (n - pos) < k - 1) return;  // cannot reach k blocks anymore
    const int top = std::min(max_label + 1, k - 1);
    for (int c = 0; c <= top; ++c) {
      label[pos] = c;
      rec(pos + 1, std::max(max_label, c));
    }
  };
  rec(1, 0);  // label[0] is pinned to 0, the canonical first block
}

std::vector<Partition> partitions(int n, int k) {
  std::vector<Partition> out;
  for_each_partition(n, k, [&](const Partition& p) { out.push_back(p); });
  return out;
}

std::uint64_t stirling(int n, int k) {
  if (k < 0 || n < k) throw std::invalid_argument("stirling requires n >= k >= 0");
  if (n == 0) return 1;  // S(0,0)
  if (k == 0) return 0;
  std::vector<std::uint64_t> row(k + 1, 0);
  row[0] = 1;  // S(0,0)
  for (int i = 1; i <= n; ++i) {
    for (int j = std::min(i, k); j >= 1; --j)
      row[j] = row[j - 1] + static_cast<std::uint64_t>(j) * row[j];
    row[0] = 0;  // S(i,0) = 0 for i >= 1
  }
  return row[k];
}

std::optional<MinPowerSolution> min_power_offset(const OfdmaInstance& inst, int offset,
                                                 double eps) {
  require_rate_targets(inst);
  if (offset < 0 || inst.num_subcarriers != inst.num_users + offset)
    throw std::invalid_argument("min_power_offset requires N == K + offset");
  const int k = inst.num_users;
  const int n = inst.num_subcarriers;
  const double big_m = budget_sum(inst);

  // Blocks recur across partitions; cache each user's block subproblem by
  // subcarrier bitmask (+inf marks an infeasible block).
  std::vector<std::unordered_map<std::uint64_t, double>> cache(k);
  auto block_power = [&](int user, const std::vector<int>& block) {
    std::uint64_t mask = 0;
    for (int s : block) mask |= std::uint64_t{1} << s;
    auto it = cache[user].find(mask);
    if (it != cache[user].end()) return it->second;
    const auto res = min_power_single_user(user_channel(inst, user, block),
                                           (*inst.rate_target)[user], eps);
    const double val = res ? res->total_power : kInf;
    cache[user].emplace(mask, val);
    return val;
  };

  double best = kInf;
  bool found = false;
  Partition best_part;
  std::vector<int> best_perm;
  Matrix w(k, std::vector<double>(k, 0.0));
  std::vector<std::vector<bool>> feasible(k, std::vector<bool>(k, false));
  for_each_partition(n, k, [&](const Partition& part) {
    for (int i = 0; i < k; ++i) {
      for (int b = 0; b < k; ++b) {
        const double val = block_power(i, part.blocks[b]);
        feasible[i][b] = std::isfinite(val);
        w[i][b] = feasible[i][b] ? val : big_m;
      }
    }
    const MaskedAssignment m = solve_masked(w, feasible, big_m);
    if (m.feasible && (!found || m.value < best)) {
      found = true;
      best = m.value;
      best_part = part;
      best_perm = m.perm;
    }
  });
  if (!found) return std::nullopt;

  MinPowerSolution sol;
  sol.alloc = zero_allocation(k, n);
  for (int i = 0; i < k; ++i) {
    const auto& block = best_part.blocks[best_perm[i]];
    const auto res =
        min_power_single_user(user_channel(inst, i, block), (*inst.rate_target)[i], eps);
    assert(res);
    for (std::size_t j = 0; j < block.size(); ++j) sol.alloc.power[i][block[j]] = res->powers[j];
  }
  sol.total = total_power(sol.alloc);
  return sol;
}

}  // namespace ofdma
