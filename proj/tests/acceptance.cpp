// Acceptance suite: one self-contained check per criterion, one PASS/FAIL
// line each. Run with no arguments for the full suite or with
// `--criterion N` for a single one; the exit code is the failure count.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ofdma/assignment.hpp"
#include "ofdma/exact.hpp"
#include "ofdma/generator.hpp"
#include "ofdma/reductions.hpp"
#include "ofdma/transport.hpp"
#include "ofdma/waterfill.hpp"
#include "oracles.hpp"

using namespace ofdma;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (detail.tellp() < 400) {  // keep repeated failures readable
        if (detail.tellp() > 0) detail << "; ";
        detail << what;
      }
    }
  }
};

double frac_to_unit(std::uint64_t v) { return static_cast<double>(v >> 11) * 0x1.0p-53; }

ThreeDMInstance worked_example() {
  return ThreeDMInstance{4,
                         {{0, 1, 1},
                          {0, 1, 3},
                          {1, 0, 1},
                          {1, 0, 2},
                          {2, 1, 1},
                          {2, 3, 2},
                          {3, 2, 0}}};
}

// 1. Golden test: the 4-user/8-subcarrier worked example reproduces every
//    listed parameter, its four power vectors verify at rate 3, and the
//    instance is feasible.
Outcome criterion1() {
  Outcome out;
  const ThreeDMInstance tdm = worked_example();
  const OfdmaInstance inst = reduce_feasibility(tdm);
  out.require(inst.num_users == 4 && inst.num_subcarriers == 8, "wrong dimensions");

  const std::set<std::pair<int, int>> s1{{0, 1}, {1, 0}, {2, 1}, {2, 3}, {3, 2}};
  const std::set<std::pair<int, int>> s2{{0, 5}, {0, 7}, {1, 5}, {1, 6}, {2, 5}, {2, 6}, {3, 4}};
  bool params_ok = true;
  for (int k = 0; k < 4; ++k)
    for (int n = 0; n < 8; ++n) {
      params_ok &= inst.subcarrier_budget[k][n] == (n < 4 ? 3.0 : 2.0);
      const double noise = s1.count({k, n}) ? 1.0 : (s2.count({k, n}) ? 2.0 : 3.0);
      params_ok &= inst.noise[k][n] == noise;
      const double gain = (s1.count({k, n}) || s2.count({k, n})) ? 1.0 : 0.25;
      params_ok &= inst.direct_gain[k][n] == gain;
      }
  for (int k = 0; k < 4; ++k) params_ok &= (*inst.rate_target)[k] == 3.0;
  out.require(params_ok, "a constructed parameter differs from the listing");

  const Match match{{{0, 1, 3}, {1, 0, 1}, {2, 3, 2}, {3, 2, 0}}};
  out.require(is_match(tdm, match), "the listed match fails the match predicate");
  const PowerAllocation alloc = match_to_allocation(tdm, match);
  const Matrix expected = {
      {0, 3, 0, 0, 0, 0, 0, 2},
      {3, 0, 0, 0, 0, 2, 0, 0},
      {0, 0, 0, 3, 0, 0, 2, 0},
      {0, 0, 3, 0, 2, 0, 0, 0},
  };
  out.require(alloc.power == expected, "power vectors differ from the listing");
  out.require(is_ofdma(alloc), "allocation is not orthogonal");
  out.require(max_budget_violation(inst, alloc) == 0.0, "allocation exceeds a budget");
  for (double r : rates(inst, alloc))
    out.require(std::abs(r - 3.0) <= 1e-12, "an achieved rate misses 3 beyond 1e-12");
  out.require(exact_feasibility(inst), "exact feasibility is false");
  return out;
}

// 2. Round-trip as stated: 3DM answer == reduced-instance feasibility on
//    >= 200 seeded random instances with K in {2,3,4}, |R| uniform in
//    [K, K^2]. The gadget's parameters depend on the relation only through
//    its (x,y) and (x,z) projections, so on unrestricted random relations
//    the equivalence provably fails whenever mixing projections creates a
//    match the relation itself lacks; the companion checks pin the exact
//    statements that do hold (feasibility == closure match everywhere, and
//    full agreement on pair-closed relations).
Outcome criterion2() {
  Outcome out;
  std::mt19937_64 rng(20240001);
  const int total = 200;
  int agreements = 0, explained = 0, closure_iff = 0;
  for (int i = 0; i < total; ++i) {
    const int k = 2 + static_cast<int>(rng() % 3);
    const int triples = k + static_cast<int>(rng() % (k * k - k + 1));
    const ThreeDMInstance tdm = random_3dm(k, triples, rng());
    RoundTripOptions opts;
    const RoundTripResult rt = verify_reduction_roundtrip(tdm, opts);
    const bool closure_match = solve_3dm_exact(pair_closure(tdm)).has_value();
    if (rt.ofdma_answer == closure_match) ++closure_iff;
    if (rt.agree) {
      ++agreements;
    } else if (!rt.tdm_answer && rt.ofdma_answer && closure_match) {
      ++explained;  // feasibility via mixed projections, the known gap
    } else {
      out.require(false, "a disagreement is NOT explained by the pair closure");
    }
  }
  int closed_agree = 0;
  const int closed_total = 200;
  for (int i = 0; i < closed_total; ++i) {
    const ThreeDMInstance tdm = random_closed_3dm(2 + static_cast<int>(rng() % 3), rng());
    RoundTripOptions opts;
    if (verify_reduction_roundtrip(tdm, opts).agree) ++closed_agree;
  }
  out.detail << agreements << "/" << total << " stated round trips agree; " << explained
             << " disagreements, all no-match relations whose pair closure has a match; "
             << "feasibility == closure match on " << closure_iff << "/" << total
             << "; pair-closed ensemble " << closed_agree << "/" << closed_total;
  out.require(agreements == total, "stated 100% agreement fails (see decisions ledger)");
  out.require(closure_iff == total, "closure equivalence violated");
  out.require(closed_agree == closed_total, "closed-ensemble round trip violated");
  return out;
}

// 3. Padded round-trip as stated: ratios 3/2 and 3 with compatible sizes,
//    >= 50 instances each. Same known gap and same companion checks as
//    criterion 2.
Outcome criterion3() {
  Outcome out;
  std::mt19937_64 rng(20240002);
  for (const auto& [num, den] : std::vector<std::pair<long, long>>{{3, 2}, {3, 1}}) {
    int agreements = 0, explained = 0, closed_agree = 0;
    const int total = 50;
    RoundTripOptions opts;
    opts.variant = ReductionVariant::FeasibilityC;
    opts.c_num = num;
    opts.c_den = den;
    for (int i = 0; i < total; ++i) {
      const int k = 1 + static_cast<int>(rng() % 2);  // sizes 1 and 2 are compatible
      const int triples = std::max<int>(1, static_cast<int>(rng() % (k * k + 1)));
      const ThreeDMInstance tdm = random_3dm(k, triples, rng());
      const RoundTripResult rt = verify_reduction_roundtrip(tdm, opts);
      const bool closure_match = solve_3dm_exact(pair_closure(tdm)).has_value();
      if (rt.agree)
        ++agreements;
      else if (!rt.tdm_answer && rt.ofdma_answer && closure_match)
        ++explained;
      else
        out.require(false, "a disagreement is NOT explained by the pair closure");
      const ThreeDMInstance closed = random_closed_3dm(1 + static_cast<int>(rng() % 2), rng());
      if (verify_reduction_roundtrip(closed, opts).agree) ++closed_agree;
    }
    out.detail << " | c=" << num << "/" << den << ": " << agreements << "/" << total
               << " stated (+" << explained << " closure-explained), closed ensemble "
               << closed_agree << "/" << total;
    out.require(agreements == total,
                "stated 100% agreement fails for c=" + std::to_string(num) + "/" +
                    std::to_string(den) + " (see decisions ledger)");
    out.require(closed_agree == total, "closed-ensemble round trip violated");
  }
  return out;
}

// 4. Utility thresholds at ratio 2 for all four utilities, as stated: the
//    optimum reaches 3 - 1e-9 iff the matching instance has a match, and
//    equals 3 within 1e-9 on yes-instances. Inherits the same projection
//    gap; the companions check the closure equivalence and the pair-closed
//    ensemble.
Outcome criterion4() {
  Outcome out;
  std::mt19937_64 rng(20240003);
  const UtilityKind kinds[] = {UtilityKind::SumRate, UtilityKind::ProportionalFairness,
                               UtilityKind::HarmonicMean, UtilityKind::MinRate};
  int checked = 0, stated_ok = 0, yes_count = 0, closure_ok = 0;
  for (int i = 0; i < 100; ++i) {
    const int k = 2 + static_cast<int>(rng() % 2);
    const int triples = k + static_cast<int>(rng() % (k * k - k + 1));
    const ThreeDMInstance tdm = random_3dm(k, triples, rng());
    const bool has_match = solve_3dm_exact(tdm).has_value();
    const bool closure_match = solve_3dm_exact(pair_closure(tdm)).has_value();
    yes_count += has_match;
    for (UtilityKind kind : kinds) {
      const ReducedInstanceBundle b = reduce_utility(tdm, kind);
      const double value = exact_max_utility(b.instance, kind).value;
      ++checked;
      const bool reaches = value >= 3.0 - 1e-9;
      if (reaches == has_match && (!has_match || std::abs(value - 3.0) <= 1e-9)) ++stated_ok;
      if (reaches == closure_match && (!closure_match || std::abs(value - 3.0) <= 1e-9))
        ++closure_ok;
    }
  }
  int closed_ok = 0, closed_total = 0;
  for (int i = 0; i < 25; ++i) {
    const ThreeDMInstance tdm = random_closed_3dm(2 + static_cast<int>(rng() % 2), rng());
    const bool has_match = solve_3dm_exact(tdm).has_value();
    for (UtilityKind kind : kinds) {
      const ReducedInstanceBundle b = reduce_utility(tdm, kind);
      const double value = exact_max_utility(b.instance, kind).value;
      ++closed_total;
      if ((value >= 3.0 - 1e-9) == has_match && (!has_match || std::abs(value - 3.0) <= 1e-9))
        ++closed_ok;
    }
  }
  out.detail << stated_ok << "/" << checked << " stated threshold checks hold over 100 instances ("
             << yes_count << " yes); closure-based thresholds " << closure_ok << "/" << checked
             << "; pair-closed ensemble " << closed_ok << "/" << closed_total;
  out.require(stated_ok == checked, "stated iff fails (see decisions ledger)");
  out.require(closure_ok == checked, "closure equivalence violated");
  out.require(closed_ok == closed_total, "closed-ensemble thresholds violated");
  return out;
}

// 5. Water-filling optimality: KKT residuals, fine-grid oracle agreement,
//    and the min-power/max-rate inverse property over 1000 random channels.
Outcome criterion5() {
  Outcome out;
  std::mt19937_64 rng(20240004);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  int oracle_checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + static_cast<int>(rng() % 16);
    const SingleUserChannel ch = oracles::random_channel(rng, n, i % 7 == 0);
    const double full = full_power_rate(ch);
    if (full <= 0.0) continue;
    const double gamma = frac(rng) * full;

    const auto mp = min_power_single_user(ch, gamma);
    if (!mp) {
      out.require(false, "feasible target reported infeasible");
      continue;
    }
    out.require(kkt_residual(ch, mp->total_power, mp->powers, mp->level) <= 1e-8,
                "min-power KKT residual above 1e-8");

    const auto grid = oracles::fine_grid_min_power(ch, gamma);
    out.require(grid.has_value(), "oracle misses a feasible target");
    if (grid) {
      out.require(std::abs(mp->total_power - *grid) <= 1e-6 * std::max(1.0, *grid),
                  "min-power total differs from the fine-grid oracle");
      ++oracle_checked;
    }

    double usable = 0.0;
    for (std::size_t j = 0; j < ch.cap.size(); ++j)
      if (ch.gain[j] > 0.0) usable += ch.cap[j];
    const double budget = frac(rng) * 1.2 * usable;
    const auto mr = max_rate_single_user(ch, budget);
    out.require(kkt_residual(ch, budget, mr.powers, mr.level) <= 1e-8,
                "max-rate KKT residual above 1e-8");

    // Duality both ways.
    out.require(std::abs(max_rate_single_user(ch, mp->total_power).rate - gamma) <= 1e-6,
                "max-rate at the min-power total misses the target");
    if (mr.rate > 1e-9 && budget < usable) {
      const auto back = min_power_single_user(ch, mr.rate);
      out.require(back.has_value() &&
                      std::abs(back->total_power - budget) <= 1e-6 * std::max(1.0, budget),
                  "min-power at the max-rate value misses the budget");
    }
  }
  out.detail << oracle_checked << " oracle comparisons";
  return out;
}

// 6. Hungarian correctness against brute force, and the square min-power
//    solver against the exhaustive solver.
Outcome criterion6() {
  Outcome out;
  std::mt19937_64 rng(20240005);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 500; ++i) {
    const int k = 1 + static_cast<int>(rng() % 8);
    Matrix w(k, std::vector<double>(k));
    for (auto& row : w)
      for (double& v : row) v = u(rng);
    const double value = hungarian(w).value;
    const double brute = oracles::perm_min_assignment(w);
    out.require(std::abs(value - brute) <= 1e-9 * std::max(1.0, brute),
                "hungarian misses the permutation minimum");
  }
  int feasible = 0;
  for (int i = 0; i < 200; ++i) {
    GenSpec spec;
    spec.num_users = 1 + static_cast<int>(rng() % 4);
    spec.num_subcarriers = spec.num_users;
    spec.kind = InstanceKind::MinPower;
    spec.seed = rng();
    spec.target_scale = 0.5 + 0.5 * frac_to_unit(rng());
    const OfdmaInstance inst = generate_instance(spec);
    const auto square = min_power_square(inst);
    const auto exact = exact_min_power(inst);
    out.require(square.has_value() == exact.has_value(),
                "square and exact disagree on feasibility");
    if (square && exact) {
      ++feasible;
      out.require(std::abs(square->total - exact->total) <= 1e-8 * std::max(1.0, exact->total),
                  "square total differs from the exact optimum");
    }
  }
  out.detail << "500 matrices, 200 instances (" << feasible << " feasible)";
  return out;
}

// 7. The partition path: counts equal the Stirling numbers, the padding
//    bound holds, and the offset solver matches the exhaustive solver.
Outcome criterion7() {
  Outcome out;
  for (int n = 1; n <= 10; ++n)
    for (int k = 1; k <= n; ++k) {
      std::uint64_t count = 0;
      for_each_partition(n, k, [&](const Partition&) { ++count; });
      out.require(count == stirling(n, k), "partition count mismatch at n=" + std::to_string(n));
    }
  out.require(stirling(5, 4) == 10, "S(5,4) != 10");
  for (int k = 1; k <= 8; ++k)
    for (int c = 0; c <= 3; ++c)
      out.require(static_cast<double>(stirling(k + c, k)) <= std::pow(k + c, 2 * c) + 1e-9,
                  "Stirling bound violated");

  std::mt19937_64 rng(20240006);
  int feasible = 0;
  for (int i = 0; i < 100; ++i) {
    GenSpec spec;
    spec.num_users = 1 + static_cast<int>(rng() % 3);
    spec.num_subcarriers = spec.num_users + static_cast<int>(rng() % 3);
    spec.kind = InstanceKind::MinPower;
    spec.seed = rng();
    spec.target_scale = 0.5 + 0.5 * frac_to_unit(rng());
    const OfdmaInstance inst = generate_instance(spec);
    const auto offset = min_power_offset(inst, spec.num_subcarriers - spec.num_users);
    const auto exact = exact_min_power(inst);
    out.require(offset.has_value() == exact.has_value(),
                "offset and exact disagree on feasibility");
    if (offset && exact) {
      ++feasible;
      out.require(std::abs(offset->total - exact->total) <= 1e-8 * std::max(1.0, exact->total),
                  "offset total differs from the exact optimum");
    }
  }
  out.detail << "partition counts for n <= 10, 100 offset instances (" << feasible
             << " feasible)";
  return out;
}

// 8. Transportation: integral flows, argmax-oracle agreement, and the
//    weighted variant.
Outcome criterion8() {
  Outcome out;
  std::mt19937_64 rng(20240007);
  std::uniform_real_distribution<double> wdist(0.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    GenSpec spec;
    spec.num_users = 1 + static_cast<int>(rng() % 4);
    spec.num_subcarriers =
        std::max(spec.num_users, 1 + static_cast<int>(rng() % 8));
    spec.kind = InstanceKind::SumRateNoBudget;
    spec.seed = rng();
    const OfdmaInstance inst = generate_instance(spec);

    const Matrix flow = solve_transportation(build_hitchcock(inst));
    for (const auto& row : flow)
      for (double f : row)
        out.require(f == std::floor(f), "a flow entry is not an exact integer");

    const SumRateSolution plain = max_sum_rate_no_total_budget(inst);
    const std::vector<double> ones(inst.num_users, 1.0);
    out.require(std::abs(plain.value - oracles::argmax_sum_rate(inst, ones)) <=
                    1e-9 * std::max(1.0, plain.value),
                "sum-rate value differs from the argmax oracle");

    std::vector<double> weights(inst.num_users);
    for (double& v : weights) v = wdist(rng);
    const SumRateSolution weighted = max_sum_rate_no_total_budget(inst, weights);
    out.require(std::abs(weighted.value - oracles::argmax_sum_rate(inst, weights)) <=
                    1e-9 * std::max(1.0, weighted.value),
                "weighted value differs from the weighted argmax oracle");
  }
  out.detail << "500 instances, unweighted and weighted";
  return out;
}

// 9. Utility ordering H1 >= H2 >= H3 >= H4 with equality exactly on constant
//    rate vectors.
Outcome criterion9() {
  Outcome out;
  std::mt19937_64 rng(20240008);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const int k = 1 + static_cast<int>(rng() % 6);
    RateVector r(k);
    const int flavor = static_cast<int>(rng() % 10);
    if (flavor == 0) {
      std::fill(r.begin(), r.end(), u(rng));  // exactly constant
    } else if (flavor == 1) {
      for (double& v : r) v = (rng() % 3 == 0) ? 0.0 : u(rng);
    } else {
      for (double& v : r) v = u(rng);
      if (k > 1) r[0] += 1e-5;  // keep the spread out of the gray zone
    }
    const double h1 = utility(UtilityKind::SumRate, r);
    const double h2 = utility(UtilityKind::ProportionalFairness, r);
    const double h3 = utility(UtilityKind::HarmonicMean, r);
    const double h4 = utility(UtilityKind::MinRate, r);
    const double tol = 1e-12 * std::max(1.0, h1);
    out.require(h1 >= h2 - tol && h2 >= h3 - tol && h3 >= h4 - tol, "ordering violated");

    const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
    const bool constant = (*hi - *lo) <= 1e-12;
    const bool all_equal = (h1 - h4) <= tol;
    out.require(all_equal == constant, "equality does not coincide with a constant vector");
  }
  out.detail << "10000 rate vectors";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) selected = std::atoi(argv[i + 1]);

  struct Entry {
    int id;
    const char* name;
    double time_limit_sec;  // 0 = none stated
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {1, "worked-example golden test", 5.0, criterion1},
      {2, "feasibility reduction round-trip", 300.0, criterion2},
      {3, "padded-ratio reduction round-trip", 0.0, criterion3},
      {4, "utility thresholds", 0.0, criterion4},
      {5, "water-filling optimality", 120.0, criterion5},
      {6, "Hungarian correctness", 0.0, criterion6},
      {7, "partition path", 0.0, criterion7},
      {8, "transportation correctness", 0.0, criterion8},
      {9, "utility ordering", 0.0, criterion9},
  };

  int failures = 0;
  for (const auto& e : entries) {
    if (selected != 0 && e.id != selected) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out = e.run();
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (e.time_limit_sec > 0.0 && elapsed > e.time_limit_sec) {
      out.pass = false;
      out.detail << " [exceeded " << e.time_limit_sec << "s limit]";
    }
    std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << e.id << " (" << e.name << "): "
              << out.detail.str() << " [" << elapsed << "s]" << std::endl;
    if (!out.pass) ++failures;
  }
  return failures;
}
