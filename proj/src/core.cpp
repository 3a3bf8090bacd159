#include "ofdma/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ofdma {

namespace {

bool matrix_shape_ok(const Matrix& m, int rows, int cols) {
  if (static_cast<int>(m.size()) != rows) return false;
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != cols) return false;
  return true;
}

std::string at(const char* field, int i, int j) {
  return std::string(field) + "[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]";
}

}  // namespace

std::vector<std::string> validate_instance(const OfdmaInstance& inst) {
  std::vector<std::string> out;
  const int k = inst.num_users;
  const int n = inst.num_subcarriers;
  if (k < 1) out.push_back("num_users must be a positive integer");
  if (n < 1) out.push_back("num_subcarriers must be a positive integer");
  if (k >= 1 && n >= 1 && n < k) out.push_back("num_subcarriers < num_users");
  if (k < 1 || n < 1) return out;

  struct Entry {
    const Matrix* m;
    const char* name;
    bool strictly_positive;
  };
  const Entry matrices[] = {
      {&inst.direct_gain, "direct_gain", false},
      {&inst.noise, "noise", true},
      {&inst.subcarrier_budget, "subcarrier_budget", false},
  };
  for (const auto& e : matrices) {
    if (!matrix_shape_ok(*e.m, k, n)) {
      out.push_back(std::string(e.name) + " must be a " + std::to_string(k) + "x" +
                    std::to_string(n) + " matrix");
      continue;
    }
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < n; ++j) {
        const double v = (*e.m)[i][j];
        if (!std::isfinite(v)) {
          out.push_back(at(e.name, i, j) + " must be finite");
        } else if (e.strictly_positive && v <= 0.0) {
          out.push_back(std::string(e.name) + " must be > 0 (" + at(e.name, i, j) + " = " +
                        std::to_string(v) + ")");
        } else if (!e.strictly_positive && v < 0.0) {
          out.push_back(std::string(e.name) + " must be >= 0 (" + at(e.name, i, j) + " = " +
                        std::to_string(v) + ")");
        }
      }
    }
  }

  struct OptEntry {
    const std::optional<std::vector<double>>* v;
    const char* name;
  };
  const OptEntry vectors[] = {
      {&inst.user_budget, "user_budget"},
      {&inst.rate_target, "rate_target"},
  };
  for (const auto& e : vectors) {
    if (!e.v->has_value()) continue;
    if (static_cast<int>((*e.v)->size()) != k) {
      out.push_back(std::string(e.name) + " must have length num_users");
      continue;
    }
    for (int i = 0; i < k; ++i) {
      const double v = (**e.v)[i];
      if (!std::isfinite(v) || v <= 0.0)
        out.push_back(std::string(e.name) + " must be > 0 (" + e.name + "[" +
                      std::to_string(i + 1) + "] = " + std::to_string(v) + ")");
    }
  }
  return out;
}

bool is_ofdma(const PowerAllocation& alloc) {
  const auto& p = alloc.power;
  if (p.empty()) return true;
  const std::size_t cols = p[0].size();
  for (const auto& row : p)
    if (row.size() != cols) return false;
  for (std::size_t n = 0; n < cols; ++n) {
    int positive = 0;
    for (const auto& row : p)
      if (row[n] > 0.0 && ++positive > 1) return false;
  }
  return true;
}

double subcarrier_rate(double gain, double noise, double power) {
  if (gain <= 0.0 || power <= 0.0) return 0.0;
  return std::log2(1.0 + gain * power / noise);
}

RateVector rates(const OfdmaInstance& inst, const PowerAllocation& alloc) {
  if (!matrix_shape_ok(alloc.power, inst.num_users, inst.num_subcarriers))
    throw std::invalid_argument("power allocation shape does not match the instance");
  for (const auto& row : alloc.power)
    for (double v : row)
      if (!(v >= 0.0)) throw std::invalid_argument("power allocation has a negative entry");
  if (!is_ofdma(alloc))
    throw std::invalid_argument("power allocation violates the OFDMA property");
  RateVector r(inst.num_users, 0.0);
  for (int k = 0; k < inst.num_users; ++k)
    for (int n = 0; n < inst.num_subcarriers; ++n)
      r[k] += subcarrier_rate(inst.direct_gain[k][n], inst.noise[k][n], alloc.power[k][n]);
  return r;
}

double utility(UtilityKind kind, const RateVector& r) {
  if (r.empty()) return 0.0;
  const double k = static_cast<double>(r.size());
  switch (kind) {
    case UtilityKind::SumRate: {
      double s = 0.0;
      for (double v : r) s += v;
      return s / k;
    }
    case UtilityKind::ProportionalFairness: {
      double log_sum = 0.0;
      for (double v : r) {
        if (v <= 0.0) return 0.0;
        log_sum += std::log2(v);
      }
      return std::exp2(log_sum / k);
    }
    case UtilityKind::HarmonicMean: {
      double inv_sum = 0.0;
      for (double v : r) {
        if (v <= 0.0) return 0.0;
        inv_sum += 1.0 / v;
      }
      return k / inv_sum;
    }
    case UtilityKind::MinRate:
      return *std::min_element(r.begin(), r.end());
  }
  return 0.0;
}

SubcarrierAssignment assignment_of(const PowerAllocation& alloc) {
  if (!is_ofdma(alloc))
    throw std::invalid_argument("allocation violates the OFDMA property");
  SubcarrierAssignment a;
  if (alloc.power.empty()) return a;
  const std::size_t cols = alloc.power[0].size();
  a.owner.assign(cols, kUnassigned);
  for (std::size_t n = 0; n < cols; ++n)
    for (std::size_t k = 0; k < alloc.power.size(); ++k)
      if (alloc.power[k][n] > 0.0) a.owner[n] = static_cast<int>(k);
  return a;
}

double total_power(const PowerAllocation& alloc) {
  double s = 0.0;
  for (const auto& row : alloc.power)
    for (double v : row) s += v;
  return s;
}

double max_budget_violation(const OfdmaInstance& inst, const PowerAllocation& alloc) {
  double worst = 0.0;
  for (int k = 0; k < inst.num_users; ++k)
    for (int n = 0; n < inst.num_subcarriers; ++n)
      worst = std::max(worst, alloc.power[k][n] - inst.subcarrier_budget[k][n]);
  return worst;
}

PowerAllocation zero_allocation(int num_users, int num_subcarriers) {
  PowerAllocation a;
  a.power.assign(num_users, std::vector<double>(num_subcarriers, 0.0));
  return a;
}

const char* utility_name(UtilityKind kind) {
  switch (kind) {
    case UtilityKind::SumRate: return "sum_rate";
    case UtilityKind::ProportionalFairness: return "proportional_fairness";
    case UtilityKind::HarmonicMean: return "harmonic_mean";
    case UtilityKind::MinRate: return "min_rate";
  }
  return "unknown";
}

std::optional<UtilityKind> parse_utility(const std::string& name) {
  if (name == "sum_rate" || name == "sum") return UtilityKind::SumRate;
  if (name == "proportional_fairness" || name == "prop") return UtilityKind::ProportionalFairness;
  if (name == "harmonic_mean" || name == "harmonic") return UtilityKind::HarmonicMean;
  if (name == "min_rate" || name == "min") return UtilityKind::MinRate;
  return std::nullopt;
}

}  // namespace ofdma
