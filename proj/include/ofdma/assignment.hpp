#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ofdma/core.hpp"

namespace ofdma {

/// Bipartite edge weights for the min-power assignment formulation.
/// w[k][m] is the exact power for user k to hit its rate target on column m,
/// or big_m = sum of all per-subcarrier budgets when the target is out of
/// reach there. feasible[k][m] distinguishes a genuine weight that happens to
/// equal big_m from the sentinel.
struct WeightMatrix {
  Matrix w;
  double big_m = 0.0;
  std::vector<std::vector<bool>> feasible;
};

struct HungarianResult {
  std::vector<int> perm;  // row -> column bijection
  double value = 0.0;
};

struct MinPowerSolution {
  PowerAllocation alloc;
  double total = 0.0;
};

/// A partition of {0..n-1} into nonempty unlabeled blocks, listed in order of
/// each block's smallest element.
struct Partition {
  std::vector<std::vector<int>> blocks;
};

/// Square-case (N = K) edge weights: (2^gamma_k - 1) * eta_k^n / alpha_k^n
/// when a single subcarrier at full budget can reach gamma_k, else the
/// sentinel. Throws when N != K or rate targets are missing.
WeightMatrix edge_weights_square(const OfdmaInstance& inst);

/// Minimum-weight perfect matching of a square cost matrix via shortest
/// augmenting paths, O(n^3). Ties break toward the lowest column index.
HungarianResult hungarian(const Matrix& cost);

/// Global optimum of the min-power problem for N = K, or nullopt when no
/// bijection serves every user within the per-subcarrier budgets.
std::optional<MinPowerSolution> min_power_square(const OfdmaInstance& inst);

/// All partitions of {0..n-1} into exactly k nonempty blocks; the count is
/// stirling(n, k).
std::vector<Partition> partitions(int n, int k);
void for_each_partition(int n, int k, const std::function<void(const Partition&)>& fn);

/// Stirling number of the second kind via S(N+1,K) = S(N,K-1) + K*S(N,K).
/// Exact for results below 2^64.
std::uint64_t stirling(int n, int k);

/// Min-power for N = K + offset: enumerates all stirling(N, K) subcarrier
/// partitions, prices each block by the single-user water-filling subproblem,
/// and assigns blocks to users with the Hungarian step. O(K^{2C+3}).
std::optional<MinPowerSolution> min_power_offset(const OfdmaInstance& inst, int offset,
                                                 double eps = 1e-10);

}  // namespace ofdma
