#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "ofdma/assignment.hpp"
#include "ofdma/exact.hpp"
#include "ofdma/generator.hpp"
#include "ofdma/reductions.hpp"
#include "oracles.hpp"

using namespace ofdma;

namespace {

OfdmaInstance square_instance(int k, std::uint64_t seed, double target_scale = 0.7) {
  GenSpec spec;
  spec.num_users = k;
  spec.num_subcarriers = k;
  spec.kind = InstanceKind::MinPower;
  spec.seed = seed;
  spec.target_scale = target_scale;
  return generate_instance(spec);
}

}  // namespace

TEST_CASE("edge weight equals the exact single-subcarrier power") {
  OfdmaInstance inst;
  inst.num_users = 1;
  inst.num_subcarriers = 1;
  inst.direct_gain = {{1.0}};
  inst.noise = {{1.0}};
  inst.subcarrier_budget = {{7.0}};
  inst.rate_target = std::vector<double>{3.0};
  const WeightMatrix wm = edge_weights_square(inst);
  CHECK(wm.w[0][0] == doctest::Approx(7.0).epsilon(1e-15));
  CHECK(wm.feasible[0][0]);
  CHECK(wm.big_m == 7.0);
}

TEST_CASE("edge weight falls back to the sentinel when the budget is short") {
  OfdmaInstance inst;
  inst.num_users = 1;
  inst.num_subcarriers = 1;
  inst.direct_gain = {{1.0}};
  inst.noise = {{1.0}};
  inst.subcarrier_budget = {{3.0}};  // single-subcarrier rate cap is 2 < 3
  inst.rate_target = std::vector<double>{3.0};
  const WeightMatrix wm = edge_weights_square(inst);
  CHECK(wm.w[0][0] == wm.big_m);
  CHECK_FALSE(wm.feasible[0][0]);
}

TEST_CASE("vanishing targets cost vanishing weight") {
  OfdmaInstance inst;
  inst.num_users = 1;
  inst.num_subcarriers = 1;
  inst.direct_gain = {{1.0}};
  inst.noise = {{1.0}};
  inst.subcarrier_budget = {{3.0}};
  inst.rate_target = std::vector<double>{1e-9};
  CHECK(edge_weights_square(inst).w[0][0] < 1e-6);
}

TEST_CASE("edge_weights_square rejects rectangular instances") {
  OfdmaInstance inst;
  inst.num_users = 1;
  inst.num_subcarriers = 2;
  inst.direct_gain = {{1.0, 1.0}};
  inst.noise = {{1.0, 1.0}};
  inst.subcarrier_budget = {{3.0, 3.0}};
  inst.rate_target = std::vector<double>{1.0};
  CHECK_THROWS_AS(edge_weights_square(inst), std::invalid_argument);
}

TEST_CASE("hungarian picks the dominant diagonal") {
  const HungarianResult h = hungarian({{1.0, 9.0}, {9.0, 1.0}});
  CHECK(h.perm[0] == 0);
  CHECK(h.perm[1] == 1);
  CHECK(h.value == doctest::Approx(2.0));
}

TEST_CASE("hungarian value is unique under ties") {
  const HungarianResult h = hungarian({{1.0, 2.0}, {1.0, 2.0}});
  CHECK(h.value == doctest::Approx(3.0));
}

TEST_CASE("hungarian equals the brute-force permutation minimum") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 6);
    Matrix w(k, std::vector<double>(k));
    for (auto& row : w)
      for (double& v : row) v = u(rng);
    const HungarianResult h = hungarian(w);
    CHECK(h.value == doctest::Approx(oracles::perm_min_assignment(w)).epsilon(1e-12));
    std::set<int> cols(h.perm.begin(), h.perm.end());
    CHECK(static_cast<int>(cols.size()) == k);  // a bijection
  }
}

TEST_CASE("min_power_square keeps the boundary case feasible") {
  // The single real weight consumes the entire budget sum; the sentinel rule
  // must not mistake it for infeasibility.
  OfdmaInstance inst;
  inst.num_users = 1;
  inst.num_subcarriers = 1;
  inst.direct_gain = {{1.0}};
  inst.noise = {{1.0}};
  inst.subcarrier_budget = {{7.0}};
  inst.rate_target = std::vector<double>{3.0};
  const auto sol = min_power_square(inst);
  REQUIRE(sol);
  CHECK(sol->total == doctest::Approx(7.0).epsilon(1e-15));
  CHECK(sol->alloc.power[0][0] == doctest::Approx(7.0).epsilon(1e-15));
}

TEST_CASE("min_power_square follows the forced matching") {
  // Each user clears only one distinct subcarrier's budget.
  OfdmaInstance inst;
  inst.num_users = 2;
  inst.num_subcarriers = 2;
  inst.direct_gain = {{1.0, 1.0}, {1.0, 1.0}};
  inst.noise = {{1.0, 1.0}, {1.0, 1.0}};
  inst.subcarrier_budget = {{7.0, 0.5}, {0.5, 7.0}};
  inst.rate_target = std::vector<double>{2.0, 2.0};
  const auto sol = min_power_square(inst);
  REQUIRE(sol);
  CHECK(sol->alloc.power[0][0] == doctest::Approx(3.0));
  CHECK(sol->alloc.power[1][1] == doctest::Approx(3.0));
}

TEST_CASE("min_power_square reports infeasibility when a user has no edge") {
  OfdmaInstance inst;
  inst.num_users = 2;
  inst.num_subcarriers = 2;
  inst.direct_gain = {{1.0, 1.0}, {1.0, 1.0}};
  inst.noise = {{1.0, 1.0}, {1.0, 1.0}};
  inst.subcarrier_budget = {{7.0, 7.0}, {0.5, 0.5}};
  inst.rate_target = std::vector<double>{2.0, 2.0};
  CHECK_FALSE(min_power_square(inst));
}

TEST_CASE("partition counts match the Stirling numbers") {
  CHECK(partitions(3, 3).size() == 1);
  CHECK(partitions(5, 4).size() == 10);
  CHECK(partitions(4, 2).size() == 7);
  for (int n = 1; n <= 8; ++n)
    for (int k = 1; k <= n; ++k)
      CHECK(partitions(n, k).size() == stirling(n, k));
}

TEST_CASE("partitions are distinct, exhaustive, and nonempty") {
  std::set<std::vector<std::vector<int>>> seen;
  for_each_partition(6, 3, [&](const Partition& p) {
    int count = 0;
    for (const auto& b : p.blocks) {
      CHECK(!b.empty());
      count += static_cast<int>(b.size());
    }
    CHECK(count == 6);
    CHECK(seen.insert(p.blocks).second);
  });
  CHECK(seen.size() == stirling(6, 3));
}

TEST_CASE("stirling values") {
  CHECK(stirling(5, 4) == 10);
  for (int k = 0; k <= 8; ++k) CHECK(stirling(k, k) == 1);
  CHECK(stirling(7, 3) == 301);
  CHECK(stirling(4, 0) == 0);
}

TEST_CASE("stirling respects the padding bound") {
  for (int k = 1; k <= 8; ++k)
    for (int c = 0; c <= 3; ++c)
      CHECK(static_cast<double>(stirling(k + c, k)) <= std::pow(k + c, 2 * c) + 1e-9);
}

TEST_CASE("offset solver with no extra subcarriers equals the square solver") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const OfdmaInstance inst = square_instance(1 + rng() % 4, rng());
    const auto square = min_power_square(inst);
    const auto offset = min_power_offset(inst, 0);
    REQUIRE(square.has_value() == offset.has_value());
    if (square)
      CHECK(square->total == doctest::Approx(offset->total).epsilon(1e-10));
  }
}

TEST_CASE("offset solver agrees with the exact solver and verifies cleanly") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    GenSpec spec;
    spec.num_users = 1 + static_cast<int>(rng() % 3);
    spec.num_subcarriers = spec.num_users + static_cast<int>(rng() % 3);
    spec.kind = InstanceKind::MinPower;
    spec.seed = rng();
    spec.target_scale = 0.9;
    const OfdmaInstance inst = generate_instance(spec);
    const auto offset = min_power_offset(inst, spec.num_subcarriers - spec.num_users);
    const auto exact = exact_min_power(inst);
    REQUIRE(offset.has_value() == exact.has_value());
    if (!offset) continue;
    CHECK(offset->total == doctest::Approx(exact->total).epsilon(1e-8));
    CHECK(is_ofdma(offset->alloc));
    CHECK(max_budget_violation(inst, offset->alloc) <= 1e-12);
    const RateVector r = rates(inst, offset->alloc);
    for (int k = 0; k < inst.num_users; ++k) CHECK(r[k] >= (*inst.rate_target)[k] - 1e-9);
  }
}

TEST_CASE("weights are permutation covariant and the optimum is invariant") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 3);
    const OfdmaInstance inst = square_instance(k, rng());
    const WeightMatrix wm = edge_weights_square(inst);

    std::vector<int> user_perm(k), sub_perm(k);
    for (int i = 0; i < k; ++i) user_perm[i] = sub_perm[i] = i;
    std::shuffle(user_perm.begin(), user_perm.end(), rng);
    std::shuffle(sub_perm.begin(), sub_perm.end(), rng);

    OfdmaInstance relabeled = inst;
    std::vector<double> targets(k);
    for (int i = 0; i < k; ++i) {
      targets[i] = (*inst.rate_target)[user_perm[i]];
      for (int j = 0; j < k; ++j) {
        relabeled.direct_gain[i][j] = inst.direct_gain[user_perm[i]][sub_perm[j]];
        relabeled.noise[i][j] = inst.noise[user_perm[i]][sub_perm[j]];
        relabeled.subcarrier_budget[i][j] = inst.subcarrier_budget[user_perm[i]][sub_perm[j]];
      }
    }
    relabeled.rate_target = targets;
    const WeightMatrix wm2 = edge_weights_square(relabeled);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        CHECK(wm2.w[i][j] == doctest::Approx(wm.w[user_perm[i]][sub_perm[j]]).epsilon(1e-13));

    const auto a = min_power_square(inst);
    const auto b = min_power_square(relabeled);
    REQUIRE(a.has_value() == b.has_value());
    if (a) CHECK(a->total == doctest::Approx(b->total).epsilon(1e-10));
  }
}

TEST_CASE("min_power_offset rejects mismatched offsets") {
  const OfdmaInstance inst = square_instance(2, 5);
  CHECK_THROWS_AS(min_power_offset(inst, 1), std::invalid_argument);
}

TEST_CASE("the 4-user gadget costs 20 through the partition path") {
  // 4 users, 8 subcarriers: every feasible partition pairs each user with
  // one noise-1 and one noise-2 unit-gain subcarrier at full power (3 + 2).
  const ThreeDMInstance tdm{4,
                            {{0, 1, 1},
                             {0, 1, 3},
                             {1, 0, 1},
                             {1, 0, 2},
                             {2, 1, 1},
                             {2, 3, 2},
                             {3, 2, 0}}};
  const OfdmaInstance inst = reduce_feasibility(tdm);
  const auto sol = min_power_offset(inst, 4);
  REQUIRE(sol);
  CHECK(sol->total == doctest::Approx(20.0).epsilon(1e-9));
  CHECK(is_ofdma(sol->alloc));
  for (double r : rates(inst, sol->alloc)) CHECK(r >= 3.0 - 1e-12);
}

TEST_CASE("a user with unreachable targets on every block is infeasible") {
  OfdmaInstance inst;
  inst.num_users = 2;
  inst.num_subcarriers = 3;
  inst.direct_gain = {{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
  inst.noise = {{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
  inst.subcarrier_budget = {{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
  inst.rate_target = std::vector<double>{0.5, 4.0};  // log2(2^3) = 3 < 4 even on all subs
  CHECK_FALSE(min_power_offset(inst, 1));
}
