#include "ofdma/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>

namespace ofdma {

namespace {

const double kLog2_11 = std::log2(11.0);

void require_valid(const ThreeDMInstance& tdm) {
  const auto violations = validate_3dm(tdm);
  if (!violations.empty()) throw std::invalid_argument("invalid 3DM instance: " + violations[0]);
}

struct PaddedLayout {
  long users_type1 = 0;        // K1 = 3DM size
  long users_type2 = 0;        // K2
  long subcarriers_type1 = 0;  // 2*K1
  long subcarriers_type2 = 0;  // N2
  bool single_type2_user = false;  // case c > 2
};

// Role counts for ratio c = num/den (normalized, 1 < c, c != 2). The 3DM
// size pins the Type-I user count; everything else follows from N/K = c and
// the requirement that the Type-I subcarrier count is twice the Type-I user
// count.
PaddedLayout padded_layout(long k1, long num, long den) {
  PaddedLayout lay;
  lay.users_type1 = k1;
  lay.subcarriers_type1 = 2 * k1;
  if (num < 2 * den) {  // 1 < c < 2: (c-1)K Type-I users, (2-c)K Type-II users
    const long step = num - den;
    if (k1 % step != 0)
      throw std::invalid_argument("ratio " + std::to_string(num) + "/" + std::to_string(den) +
                                  " requires the 3DM size to be divisible by c_num - c_den = " +
                                  std::to_string(step));
    const long total_users = k1 * den / step;
    lay.users_type2 = total_users - k1;
    lay.subcarriers_type2 = num * k1 / step - lay.subcarriers_type1;
  } else {  // c > 2: K-1 Type-I users, one Type-II user
    const long total_users = k1 + 1;
    if (total_users % den != 0)
      throw std::invalid_argument("ratio " + std::to_string(num) + "/" + std::to_string(den) +
                                  " requires the 3DM size plus one to be divisible by c_den = " +
                                  std::to_string(den));
    lay.users_type2 = 1;
    lay.single_type2_user = true;
    lay.subcarriers_type2 = num * total_users / den - lay.subcarriers_type1;
  }
  return lay;
}

// Embeds the basic gadget into the Type-I block and surrounds it with the
// dummy parameters: Type-II/Type-II (noise 0.3, gain 1, cap 3), cross blocks
// (noise 3, gain 0.25, cap 1).
ReducedInstanceBundle padded_instance(const ThreeDMInstance& tdm, const PaddedLayout& lay) {
  const OfdmaInstance base = reduce_feasibility(tdm);
  const int k = static_cast<int>(lay.users_type1 + lay.users_type2);
  const int n = static_cast<int>(lay.subcarriers_type1 + lay.subcarriers_type2);
  const int k1 = static_cast<int>(lay.users_type1);
  const int n1 = static_cast<int>(lay.subcarriers_type1);

  ReducedInstanceBundle b;
  b.instance.num_users = k;
  b.instance.num_subcarriers = n;
  b.instance.direct_gain.assign(k, std::vector<double>(n, 0.25));
  b.instance.noise.assign(k, std::vector<double>(n, 3.0));
  b.instance.subcarrier_budget.assign(k, std::vector<double>(n, 1.0));
  for (int i = 0; i < k1; ++i)
    for (int j = 0; j < n1; ++j) {
      b.instance.direct_gain[i][j] = base.direct_gain[i][j];
      b.instance.noise[i][j] = base.noise[i][j];
      b.instance.subcarrier_budget[i][j] = base.subcarrier_budget[i][j];
    }
  for (int i = k1; i < k; ++i)
    for (int j = n1; j < n; ++j) {
      b.instance.direct_gain[i][j] = 1.0;
      b.instance.noise[i][j] = 0.3;
      b.instance.subcarrier_budget[i][j] = 3.0;
    }

  std::vector<double> targets(k, 3.0);
  const double type2_target =
      lay.single_type2_user ? static_cast<double>(lay.subcarriers_type2) * kLog2_11 : kLog2_11;
  for (int i = k1; i < k; ++i) targets[i] = type2_target;
  b.instance.rate_target = targets;

  b.user_roles.assign(k, NodeRole::TypeII);
  std::fill(b.user_roles.begin(), b.user_roles.begin() + k1, NodeRole::TypeI);
  b.subcarrier_roles.assign(n, NodeRole::TypeII);
  std::fill(b.subcarrier_roles.begin(), b.subcarrier_roles.begin() + n1, NodeRole::TypeI);
  return b;
}

void normalize_ratio(long& num, long& den) {
  if (num <= 0 || den <= 0) throw std::invalid_argument("ratio parts must be positive");
  const long g = std::gcd(num, den);
  num /= g;
  den /= g;
  if (num <= den) throw std::invalid_argument("ratio c must satisfy c > 1");
}

}  // namespace

std::vector<std::string> validate_3dm(const ThreeDMInstance& tdm) {
  std::vector<std::string> out;
  if (tdm.size < 1) out.push_back("size must be >= 1");
  std::set<std::tuple<int, int, int>> seen;
  for (const auto& t : tdm.triples) {
    if (t.x < 0 || t.x >= tdm.size || t.y < 0 || t.y >= tdm.size || t.z < 0 || t.z >= tdm.size)
      out.push_back("triple (" + std::to_string(t.x + 1) + "," + std::to_string(t.y + 1) + "," +
                    std::to_string(t.z + 1) + ") has a component outside 1..size");
    if (!seen.insert({t.x, t.y, t.z}).second)
      out.push_back("triple (" + std::to_string(t.x + 1) + "," + std::to_string(t.y + 1) + "," +
                    std::to_string(t.z + 1) + ") appears more than once");
  }
  return out;
}

bool is_match(const ThreeDMInstance& tdm, const Match& m) {
  std::set<std::tuple<int, int, int>> relation;
  for (const auto& t : tdm.triples) relation.insert({t.x, t.y, t.z});
  std::vector<bool> used_x(tdm.size, false), used_y(tdm.size, false), used_z(tdm.size, false);
  for (const auto& t : m.chosen) {
    if (t.x < 0 || t.x >= tdm.size || t.y < 0 || t.y >= tdm.size || t.z < 0 || t.z >= tdm.size)
      return false;
    if (!relation.count({t.x, t.y, t.z})) return false;
    if (used_x[t.x] || used_y[t.y] || used_z[t.z]) return false;
    used_x[t.x] = used_y[t.y] = used_z[t.z] = true;
  }
  for (int i = 0; i < tdm.size; ++i)
    if (!used_x[i] || !used_y[i] || !used_z[i]) return false;
  return true;
}

std::optional<Match> solve_3dm_exact(const ThreeDMInstance& tdm, int size_bound) {
  require_valid(tdm);
  if (tdm.size > size_bound)
    throw SizeBoundExceeded("3DM size " + std::to_string(tdm.size) +
                            " exceeds the solver bound " + std::to_string(size_bound));

  std::vector<std::vector<Triple>> by_x(tdm.size);
  for (const auto& t : tdm.triples) by_x[t.x].push_back(t);
  for (const auto& lst : by_x)
    if (lst.empty()) return std::nullopt;

  std::vector<bool> used_y(tdm.size, false), used_z(tdm.size, false);
  std::vector<Triple> chosen;
  chosen.reserve(tdm.size);
  std::function<bool(int)> rec = [&](int x) {
    if (x == tdm.size) return true;
    for (const auto& t : by_x[x]) {
      if (used_y[t.y] || used_z[t.z]) continue;
      used_y[t.y] = used_z[t.z] = true;
      chosen.push_back(t);
      if (rec(x + 1)) return true;
      chosen.pop_back();
      used_y[t.y] = used_z[t.z] = false;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return Match{chosen};
}

ThreeDMInstance random_3dm(int size, int num_triples, std::uint64_t seed) {
  if (size < 1) throw std::invalid_argument("3DM size must be >= 1");
  const long long all = static_cast<long long>(size) * size * size;
  num_triples = static_cast<int>(std::min<long long>(num_triples, all));
  std::vector<Triple> pool;
  pool.reserve(all);
  for (int x = 0; x < size; ++x)
    for (int y = 0; y < size; ++y)
      for (int z = 0; z < size; ++z) pool.push_back({x, y, z});
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::max(num_triples, 0));
  return ThreeDMInstance{size, pool};
}

ThreeDMInstance pair_closure(const ThreeDMInstance& tdm) {
  require_valid(tdm);
  std::vector<std::set<int>> ys(tdm.size), zs(tdm.size);
  for (const auto& t : tdm.triples) {
    ys[t.x].insert(t.y);
    zs[t.x].insert(t.z);
  }
  ThreeDMInstance out{tdm.size, {}};
  for (int x = 0; x < tdm.size; ++x)
    for (int y : ys[x])
      for (int z : zs[x]) out.triples.push_back({x, y, z});
  return out;
}

bool is_pair_closed(const ThreeDMInstance& tdm) {
  return pair_closure(tdm).triples.size() == tdm.triples.size();
}

ThreeDMInstance random_closed_3dm(int size, std::uint64_t seed) {
  if (size < 1) throw std::invalid_argument("3DM size must be >= 1");
  std::mt19937_64 rng(seed);
  auto pick_subset = [&](int count) {
    std::vector<int> items(size);
    for (int i = 0; i < size; ++i) items[i] = i;
    std::shuffle(items.begin(), items.end(), rng);
    items.resize(count);
    return items;
  };
  ThreeDMInstance out{size, {}};
  for (int x = 0; x < size; ++x) {
    int ny = 1, nz = 1;
    do {
      ny = 1 + static_cast<int>(rng() % std::min(size, 2));
      nz = 1 + static_cast<int>(rng() % std::min(size, 2));
    } while (ny * nz > size);
    const std::vector<int> ys = pick_subset(ny);
    const std::vector<int> zs = pick_subset(nz);
    for (int y : ys)
      for (int z : zs) out.triples.push_back({x, y, z});
  }
  return out;
}

OfdmaInstance reduce_feasibility(const ThreeDMInstance& tdm) {
  require_valid(tdm);
  const int k = tdm.size;
  const int n = 2 * k;

  OfdmaInstance inst;
  inst.num_users = k;
  inst.num_subcarriers = n;
  inst.direct_gain.assign(k, std::vector<double>(n, 0.25));
  inst.noise.assign(k, std::vector<double>(n, 3.0));
  inst.subcarrier_budget.assign(k, std::vector<double>(n, 2.0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) inst.subcarrier_budget[i][j] = 3.0;  // Y block

  // S1 = {(x, y)} gets noise 1, S2 = {(x, z)} gets noise 2, and both carry
  // gain 1 (a subcarrier is "good" for user x iff it appears in some triple
  // of R with x).
  for (const auto& t : tdm.triples) {
    inst.noise[t.x][t.y] = 1.0;
    inst.direct_gain[t.x][t.y] = 1.0;
    inst.noise[t.x][k + t.z] = 2.0;
    inst.direct_gain[t.x][k + t.z] = 1.0;
  }
  inst.rate_target = std::vector<double>(k, 3.0);
  return inst;
}

PowerAllocation match_to_allocation(const ThreeDMInstance& tdm, const Match& m) {
  if (!is_match(tdm, m))
    throw std::invalid_argument("match_to_allocation requires a valid match");
  PowerAllocation alloc = zero_allocation(tdm.size, 2 * tdm.size);
  for (const auto& t : m.chosen) {
    alloc.power[t.x][t.y] = 3.0;
    alloc.power[t.x][tdm.size + t.z] = 2.0;
  }
  return alloc;
}

ReducedInstanceBundle reduce_feasibility_c(const ThreeDMInstance& tdm, long c_num, long c_den) {
  require_valid(tdm);
  normalize_ratio(c_num, c_den);
  if (c_num == 2 && c_den == 1) {
    ReducedInstanceBundle b;
    b.instance = reduce_feasibility(tdm);
    b.user_roles.assign(tdm.size, NodeRole::TypeI);
    b.subcarrier_roles.assign(2 * tdm.size, NodeRole::TypeI);
    return b;
  }
  return padded_instance(tdm, padded_layout(tdm.size, c_num, c_den));
}

ReducedInstanceBundle reduce_utility(const ThreeDMInstance& tdm, UtilityKind kind,
                                     long c_num, long c_den) {
  ReducedInstanceBundle b = reduce_feasibility_c(tdm, c_num, c_den);
  const std::vector<double> feas_target = *b.instance.rate_target;
  b.instance.rate_target.reset();

  const int k = b.instance.num_users;
  std::vector<double> budget(k, 5.0);
  RateVector ideal(k, 3.0);
  for (int i = 0; i < k; ++i) {
    if (b.user_roles[i] != NodeRole::TypeII) continue;
    // A Type-II user's share of the ideal profile is its feasibility target
    // (log2 11 per dummy subcarrier it must saturate), at 3 power units each.
    ideal[i] = feas_target[i];
    budget[i] = 3.0 * std::round(feas_target[i] / kLog2_11);
  }
  b.instance.user_budget = budget;
  b.threshold = utility(kind, ideal);
  return b;
}

RoundTripResult verify_reduction_roundtrip(const ThreeDMInstance& tdm,
                                           const RoundTripOptions& opts) {
  RoundTripResult out;
  out.tdm_answer = solve_3dm_exact(tdm, opts.solver_bound).has_value();
  switch (opts.variant) {
    case ReductionVariant::Feasibility:
      out.ofdma_answer = exact_feasibility(reduce_feasibility(tdm), opts.exact);
      break;
    case ReductionVariant::FeasibilityC:
      out.ofdma_answer =
          exact_feasibility(reduce_feasibility_c(tdm, opts.c_num, opts.c_den).instance,
                            opts.exact);
      break;
    case ReductionVariant::Utility: {
      const ReducedInstanceBundle b = reduce_utility(tdm, opts.kind, opts.c_num, opts.c_den);
      const UtilitySolution sol = exact_max_utility(b.instance, opts.kind, opts.exact);
      out.ofdma_answer = sol.value >= *b.threshold - 1e-9;
      break;
    }
  }
  out.agree = out.tdm_answer == out.ofdma_answer;
  return out;
}

}  // namespace ofdma
