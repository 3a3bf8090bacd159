#include "ofdma/waterfill.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ofdma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_structure(const SingleUserChannel& ch) {
  const std::size_t n = ch.gain.size();
  if (ch.noise.size() != n || ch.cap.size() != n)
    throw std::invalid_argument("channel vectors must have equal length");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(ch.noise[i] > 0.0)) throw std::invalid_argument("channel noise must be > 0");
    if (!(ch.gain[i] >= 0.0)) throw std::invalid_argument("channel gain must be >= 0");
    if (!(ch.cap[i] >= 0.0)) throw std::invalid_argument("channel cap must be >= 0");
  }
}

double rate_at_level(const SingleUserChannel& ch, double tau) {
  double r = 0.0;
  for (std::size_t n = 0; n < ch.gain.size(); ++n) {
    if (ch.gain[n] <= 0.0) continue;
    const double p = std::min(ch.cap[n], std::max(0.0, tau - ch.noise[n] / ch.gain[n]));
    r += subcarrier_rate(ch.gain[n], ch.noise[n], p);
  }
  return r;
}

double power_at_level(const SingleUserChannel& ch, double tau) {
  double s = 0.0;
  for (std::size_t n = 0; n < ch.gain.size(); ++n) {
    if (ch.gain[n] <= 0.0) continue;
    s += std::min(ch.cap[n], std::max(0.0, tau - ch.noise[n] / ch.gain[n]));
  }
  return s;
}

WaterfillResult result_at_level(const SingleUserChannel& ch, double tau, double lambda) {
  WaterfillResult res;
  res.powers = allocation_at(ch, tau);
  res.total_power = 0.0;
  for (double p : res.powers) res.total_power += p;
  res.rate = channel_rate(ch, res.powers);
  res.level = {tau, lambda};
  return res;
}

// Splits the positive-gain subcarriers into the saturated / active / zero
// regimes that hold for every tau in (lo, hi), an interval containing no
// breakpoint in its interior.
struct IntervalRegimes {
  double saturated_rate = 0.0;   // sum of log2(1 + alpha*cap/eta) over saturated
  double saturated_power = 0.0;  // sum of caps over saturated
  double active_log_gain = 0.0;  // sum of log2(alpha/eta) over active
  double active_base = 0.0;      // sum of eta/alpha over active
  int active_count = 0;
};

IntervalRegimes classify(const SingleUserChannel& ch, double lo, double hi) {
  IntervalRegimes reg;
  for (std::size_t n = 0; n < ch.gain.size(); ++n) {
    if (ch.gain[n] <= 0.0) continue;
    const double base = ch.noise[n] / ch.gain[n];
    if (base + ch.cap[n] <= lo) {
      reg.saturated_rate += subcarrier_rate(ch.gain[n], ch.noise[n], ch.cap[n]);
      reg.saturated_power += ch.cap[n];
    } else if (base >= hi) {
      // zero power throughout the interval
    } else {
      ++reg.active_count;
      reg.active_log_gain += std::log2(ch.gain[n] / ch.noise[n]);
      reg.active_base += base;
    }
  }
  return reg;
}

}  // namespace

std::vector<std::string> validate_channel(const SingleUserChannel& ch) {
  std::vector<std::string> out;
  const std::size_t n = ch.gain.size();
  if (ch.noise.size() != n || ch.cap.size() != n) {
    out.push_back("gain, noise, and cap must have equal length");
    return out;
  }
  if (n == 0) out.push_back("channel must have at least one subcarrier");
  bool usable = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(ch.noise[i]) || ch.noise[i] <= 0.0)
      out.push_back("noise must be > 0 (entry " + std::to_string(i + 1) + ")");
    if (!std::isfinite(ch.gain[i]) || ch.gain[i] < 0.0)
      out.push_back("gain must be >= 0 (entry " + std::to_string(i + 1) + ")");
    if (!std::isfinite(ch.cap[i]) || ch.cap[i] < 0.0)
      out.push_back("cap must be >= 0 (entry " + std::to_string(i + 1) + ")");
    if (ch.gain[i] > 0.0 && ch.cap[i] > 0.0) usable = true;
  }
  if (n > 0 && !usable)
    out.push_back("no subcarrier with gain > 0 and cap > 0; no positive rate is achievable");
  return out;
}

std::vector<double> breakpoints(const SingleUserChannel& ch) {
  check_structure(ch);
  std::vector<double> b;
  b.reserve(2 * ch.gain.size());
  for (std::size_t n = 0; n < ch.gain.size(); ++n) {
    if (ch.gain[n] <= 0.0) continue;
    const double base = ch.noise[n] / ch.gain[n];
    b.push_back(base);
    b.push_back(base + ch.cap[n]);
  }
  std::stable_sort(b.begin(), b.end());
  return b;
}

std::vector<double> allocation_at(const SingleUserChannel& ch, double tau) {
  check_structure(ch);
  std::vector<double> p(ch.gain.size(), 0.0);
  for (std::size_t n = 0; n < ch.gain.size(); ++n) {
    if (ch.gain[n] <= 0.0) continue;
    p[n] = std::min(ch.cap[n], std::max(0.0, tau - ch.noise[n] / ch.gain[n]));
  }
  return p;
}

double channel_rate(const SingleUserChannel& ch, const std::vector<double>& powers) {
  check_structure(ch);
  if (powers.size() != ch.gain.size())
    throw std::invalid_argument("powers length does not match the channel");
  double r = 0.0;
  for (std::size_t n = 0; n < ch.gain.size(); ++n)
    r += subcarrier_rate(ch.gain[n], ch.noise[n], powers[n]);
  return r;
}

double full_power_rate(const SingleUserChannel& ch) {
  check_structure(ch);
  double r = 0.0;
  for (std::size_t n = 0; n < ch.gain.size(); ++n)
    r += subcarrier_rate(ch.gain[n], ch.noise[n], ch.cap[n]);
  return r;
}

std::optional<WaterfillResult> min_power_single_user(const SingleUserChannel& ch,
                                                     double gamma, double eps) {
  check_structure(ch);
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");

  const auto b = breakpoints(ch);
  if (gamma <= 0.0) {
    const double tau = b.empty() ? 1.0 : b.front();
    return result_at_level(ch, tau, 1.0 / tau);
  }
  if (full_power_rate(ch) < gamma) return std::nullopt;

  // First breakpoint whose rate reaches gamma. The rates at the sorted
  // breakpoints are nondecreasing and the last one equals the full-power
  // rate, so the search cannot fail.
  const auto it = std::partition_point(
      b.begin(), b.end(), [&](double t) { return rate_at_level(ch, t) < gamma; });
  assert(it != b.end());
  const std::size_t i = static_cast<std::size_t>(it - b.begin());

  double tau;
  if (rate_at_level(ch, b[i]) == gamma) {
    tau = b[i];
  } else {
    assert(i > 0);  // rate at the smallest breakpoint is 0 < gamma
    const double lo = b[i - 1];
    const double hi = b[i];
    const IntervalRegimes reg = classify(ch, lo, hi);
    assert(reg.active_count > 0);
    // Inside the interval: rate(tau) = saturated_rate
    //                                + active_count*log2(tau) + active_log_gain.
    tau = std::exp2((gamma - reg.saturated_rate - reg.active_log_gain) / reg.active_count);
    tau = std::clamp(tau, lo, hi);
    // The closed form is exact up to rounding; nudge upward so the achieved
    // rate does not land below gamma by an ulp.
    for (int n = 0; n < 64 && rate_at_level(ch, tau) < gamma; ++n)
      tau = std::nextafter(tau, kInf);
    if (rate_at_level(ch, tau) < gamma) {
      double left = tau, right = hi;  // rate(right) > gamma by bracket choice
      while (right - left > eps * std::max(1.0, right)) {
        const double mid = 0.5 * (left + right);
        (rate_at_level(ch, mid) >= gamma ? right : left) = mid;
      }
      tau = right;
    }
  }
  return result_at_level(ch, tau, 1.0 / tau);
}

WaterfillResult max_rate_single_user(const SingleUserChannel& ch, double budget) {
  check_structure(ch);

  const auto b = breakpoints(ch);
  if (budget <= 0.0) {
    const double tau = b.empty() ? 1.0 : b.front();
    return result_at_level(ch, tau, 1.0 / tau);
  }

  double usable = 0.0;  // total cap across positive-gain subcarriers
  for (std::size_t n = 0; n < ch.gain.size(); ++n)
    if (ch.gain[n] > 0.0) usable += ch.cap[n];

  if (budget >= usable) {
    WaterfillResult res;
    res.powers.assign(ch.gain.size(), 0.0);
    for (std::size_t n = 0; n < ch.gain.size(); ++n)
      if (ch.gain[n] > 0.0) res.powers[n] = ch.cap[n];
    res.total_power = usable;
    res.rate = full_power_rate(ch);
    if (budget > usable || b.empty())
      res.level = {kInf, 0.0};  // slack budget: lambda -> 0 limit
    else
      res.level = {b.back(), 1.0 / b.back()};
    return res;
  }

  const auto it = std::partition_point(
      b.begin(), b.end(), [&](double t) { return power_at_level(ch, t) < budget; });
  assert(it != b.end());  // power at the last breakpoint equals usable > budget
  const std::size_t i = static_cast<std::size_t>(it - b.begin());

  double tau;
  if (power_at_level(ch, b[i]) == budget) {
    tau = b[i];
  } else {
    assert(i > 0);  // power at the smallest breakpoint is 0 < budget
    const double lo = b[i - 1];
    const double hi = b[i];
    const IntervalRegimes reg = classify(ch, lo, hi);
    assert(reg.active_count > 0);
    // total(tau) = saturated_power + active_count*tau - active_base.
    tau = (budget - reg.saturated_power + reg.active_base) / reg.active_count;
    tau = std::clamp(tau, lo, hi);
  }
  return result_at_level(ch, tau, 1.0 / tau);
}

double kkt_residual(const SingleUserChannel& ch, double budget,
                    const std::vector<double>& powers, const WaterLevel& level) {
  check_structure(ch);
  if (powers.size() != ch.gain.size())
    throw std::invalid_argument("powers length does not match the channel");

  const double lambda = level.lambda;
  double r = std::max(0.0, -lambda);

  double total = 0.0;
  for (double p : powers) total += p;
  r = std::max(r, total - budget);                  // primal budget feasibility
  r = std::max(r, std::abs(lambda * (total - budget)));  // complementary slackness

  for (std::size_t n = 0; n < ch.gain.size(); ++n) {
    const double p = powers[n];
    const double cap = ch.cap[n];
    const double gain = ch.gain[n];
    const double noise = ch.noise[n];
    r = std::max(r, -p);
    r = std::max(r, p - cap);
    if (cap <= 0.0 && p <= 0.0) continue;  // degenerate box, multipliers free
    const double inv_p = gain / (noise + gain * p);      // 1/(eta/alpha + p)
    if (p <= 0.0) {
      // xi = 0, nu = lambda - alpha/eta.
      r = std::max(r, gain / noise - lambda);            // nu >= 0
      r = std::max(r, std::abs(gain / noise - inv_p));   // stationarity
    } else if (p >= cap) {
      // nu = 0, xi = 1/(eta/alpha + cap) - lambda.
      const double inv_cap = gain / (noise + gain * cap);
      r = std::max(r, lambda - inv_cap);                 // xi >= 0
      r = std::max(r, std::abs(inv_cap - inv_p));        // stationarity
    } else {
      // Interior: xi = nu = 0, so -1/(eta/alpha + p) + lambda must vanish.
      r = std::max(r, std::abs(lambda - inv_p));
    }
  }
  return r;
}

SingleUserChannel user_channel(const OfdmaInstance& inst, int user) {
  SingleUserChannel ch;
  ch.gain = inst.direct_gain.at(user);
  ch.noise = inst.noise.at(user);
  ch.cap = inst.subcarrier_budget.at(user);
  return ch;
}

SingleUserChannel user_channel(const OfdmaInstance& inst, int user,
                               const std::vector<int>& subcarriers) {
  SingleUserChannel ch;
  ch.gain.reserve(subcarriers.size());
  ch.noise.reserve(subcarriers.size());
  ch.cap.reserve(subcarriers.size());
  for (int n : subcarriers) {
    ch.gain.push_back(inst.direct_gain.at(user).at(n));
    ch.noise.push_back(inst.noise.at(user).at(n));
    ch.cap.push_back(inst.subcarrier_budget.at(user).at(n));
  }
  return ch;
}

}  // namespace ofdma
