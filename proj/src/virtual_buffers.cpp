#include "playoutlab/virtual_buffers.hpp"

#include <algorithm>
#include <stdexcept>

namespace playoutlab {

void IntervalBounds::validate() const {
  auto ok = [](double lo, double hi) { return lo > 0.0 && lo <= hi; };
  if (!ok(r_min, r_max) || !ok(p_min, p_max) || !ok(f_min, f_max))
    throw std::invalid_argument("IntervalBounds: each pair needs 0 < min <= max");
}

double underflow_slack(std::int64_t buffered_frames, std::int64_t t,
                       std::int64_t total_slots, const IntervalBounds& bounds,
                       BetaVariant variant) {
  if (buffered_frames < 0)
    throw std::invalid_argument("underflow_slack: buffered_frames < 0");
  if (t < 0 || t >= total_slots)
    throw std::invalid_argument("underflow_slack: t must lie in [0, total_slots)");
  const double product = variant == BetaVariant::Conservative
                             ? bounds.r_min * bounds.p_min
                             : bounds.r_max * bounds.p_max;
  return static_cast<double>(buffered_frames) * product /
         static_cast<double>(total_slots - t);
}

DiscontinuityPenalty update_u(DiscontinuityPenalty s, double p, double beta,
                              double F) {
  if (p < 0.0 || beta < 0.0 || F < 0.0)
    throw std::invalid_argument("update_u: p, beta and F must be >= 0");
  return {std::max(s.u - p - beta, 0.0) + F};
}

DelayAccumulator update_x(DelayAccumulator s, double p, double p_n, double t_d) {
  if (p < 0.0 || p_n < 0.0 || t_d < 0.0)
    throw std::invalid_argument("update_x: p, p_n and t_d must be >= 0");
  return {std::max(s.x - p_n - t_d, 0.0) + p};
}

double slot_delay_budget(double theta, std::int64_t t, std::int64_t total_slots) {
  if (theta < 0.0) throw std::invalid_argument("slot_delay_budget: theta < 0");
  if (t < 0 || t >= total_slots)
    throw std::invalid_argument("slot_delay_budget: t must lie in [0, total_slots)");
  return theta / static_cast<double>(total_slots - t);
}

DiscontinuityPenalty update_u_delayed(DiscontinuityPenalty s,
                                      std::span<const double> gammas,
                                      std::span<const double> arrivals,
                                      int d_f) {
  if (d_f < 0) throw std::invalid_argument("update_u_delayed: d_f < 0");
  const std::size_t want = static_cast<std::size_t>(d_f) + 1;
  if (gammas.size() != want || arrivals.size() != want)
    throw std::invalid_argument("update_u_delayed: spans must have d_f + 1 entries");
  double gamma_sum = 0.0, arrival_sum = 0.0;
  for (double g : gammas) {
    if (g < 0.0) throw std::invalid_argument("update_u_delayed: negative gamma");
    gamma_sum += g;
  }
  for (double a : arrivals) {
    if (a < 0.0) throw std::invalid_argument("update_u_delayed: negative arrival");
    arrival_sum += a;
  }
  return {std::max(s.u - gamma_sum, 0.0) + arrival_sum};
}

double queue_step(double level, double inflow, double outflow) {
  if (level < 0.0 || inflow < 0.0 || outflow < 0.0)
    throw std::invalid_argument("queue_step: negative input");
  return std::max(level + inflow - outflow, 0.0);
}

}  // namespace playoutlab
