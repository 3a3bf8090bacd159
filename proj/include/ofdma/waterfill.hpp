#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ofdma/core.hpp"

namespace ofdma {

/// One user's view of its subcarriers: gains alpha^n >= 0, noise eta^n > 0,
/// and per-subcarrier power caps P^n >= 0.
struct SingleUserChannel {
  std::vector<double> gain;
  std::vector<double> noise;
  std::vector<double> cap;
};

/// Water level tau = 1/lambda. Finite levels satisfy tau*lambda == 1; the
/// all-saturated case (total budget exceeds the sum of caps) is the lambda->0
/// limit, represented as {tau = +inf, lambda = 0}.
struct WaterLevel {
  double tau = 0.0;
  double lambda = 0.0;
};

struct WaterfillResult {
  std::vector<double> powers;
  double total_power = 0.0;
  double rate = 0.0;
  WaterLevel level;
};

std::vector<std::string> validate_channel(const SingleUserChannel& ch);

/// The 2N' thresholds {eta/alpha, eta/alpha + cap} where the capped
/// water-filling allocation changes regime, sorted ascending. Zero-gain
/// subcarriers contribute infinite breakpoints and are excluded.
std::vector<double> breakpoints(const SingleUserChannel& ch);

/// Capped water-filling at level tau: p^n = min{cap^n, (tau - eta^n/alpha^n)_+},
/// with zero power on zero-gain subcarriers.
std::vector<double> allocation_at(const SingleUserChannel& ch, double tau);

double channel_rate(const SingleUserChannel& ch, const std::vector<double>& powers);
double full_power_rate(const SingleUserChannel& ch);

/// Minimum total power reaching sum rate gamma, or nullopt when even full
/// power on every subcarrier misses the target.
///
/// The water level is located by bracketing gamma between the rates at two
/// consecutive breakpoints and solving the within-interval equation (the
/// product of the active affine terms equals 2^gamma) in closed form; eps
/// bounds the bisection window of the numerical fallback. The achieved rate
/// is always >= gamma.
std::optional<WaterfillResult> min_power_single_user(const SingleUserChannel& ch,
                                                     double gamma, double eps = 1e-10);

/// Maximum sum rate under total power `budget`. When the budget covers every
/// cap the solution saturates all (positive-gain) subcarriers; otherwise the
/// water level solves a univariate linear equation on the bracketing
/// breakpoint interval, so no tolerance parameter is needed.
WaterfillResult max_rate_single_user(const SingleUserChannel& ch, double budget);

/// Maximum violation of the KKT system of the budgeted rate maximization
/// problem at (powers, level), with the box multipliers constructed by the
/// three-case rule: p=0 -> nu = lambda - alpha/eta; interior -> both zero;
/// p=cap -> xi = 1/(eta/alpha + cap) - lambda. A residual <= 1e-8 certifies
/// global optimality by convexity.
double kkt_residual(const SingleUserChannel& ch, double budget,
                    const std::vector<double>& powers, const WaterLevel& level);

SingleUserChannel user_channel(const OfdmaInstance& inst, int user);
SingleUserChannel user_channel(const OfdmaInstance& inst, int user,
                               const std::vector<int>& subcarriers);

}  // namespace ofdma
