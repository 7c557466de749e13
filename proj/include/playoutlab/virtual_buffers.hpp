#pragma once

#include <cstdint>
#include <span>

namespace playoutlab {

/// Box constraints on the receiving, playout and generation intervals.
struct IntervalBounds {
  double r_min = 1.0 / 480.0;  // s, tightest receiving interval
  double r_max = 2.0 / 15.0;   // s, loosest receiving interval
  double p_min = 1.0 / 60.0;   // s
  double p_max = 1.0 / 15.0;   // s
  double f_min = 1.0 / 120.0;  // s
  double f_max = 1.0 / 30.0;   // s

  void validate() const;
};

/// Which interval product sizes the per-slot underflow slack.
enum class BetaVariant {
  Conservative,  // r_min * p_min
  Loose,         // r_max * p_max
};

/// Virtual buffer holding the accumulated discontinuity penalty U (seconds).
struct DiscontinuityPenalty {
  double u = 0.0;
};

/// Virtual buffer holding the accumulated playout slowdown X (seconds).
struct DelayAccumulator {
  double x = 0.0;
};

/// Per-slot underflow slack beta(t) = b * bound_product / (T - t).
/// Throws if t >= total_slots; callers that run past the end clamp first.
double underflow_slack(std::int64_t buffered_frames, std::int64_t t,
                       std::int64_t total_slots, const IntervalBounds& bounds,
                       BetaVariant variant);

/// One-slot discontinuity-penalty update: u' = max(u - p - beta, 0) + F.
DiscontinuityPenalty update_u(DiscontinuityPenalty s, double p, double beta,
                              double F);

/// One-slot delay-accumulator update: x' = max(x - p_n - t_d, 0) + p.
DelayAccumulator update_x(DelayAccumulator s, double p, double p_n, double t_d);

/// Per-slot slowdown budget t_d = theta / (T - t). Throws if t >= total_slots.
double slot_delay_budget(double theta, std::int64_t t, std::int64_t total_slots);

/// d_f-slot discontinuity-penalty update. `gammas` holds p+beta for slots
/// t..t+d_f (future entries predicted by the caller) and `arrivals` the
/// receiving intervals stamped over slots t-d_f..t; both spans must have
/// d_f + 1 entries. u' = max(u - sum(gammas), 0) + sum(arrivals).
DiscontinuityPenalty update_u_delayed(DiscontinuityPenalty s,
                                      std::span<const double> gammas,
                                      std::span<const double> arrivals,
                                      int d_f);

/// Netted within-slot queue step: max(level + inflow - outflow, 0). This is
/// the realization the simulator tracks, where a slot's arrivals and service
/// are applied together; see update_u/update_x for the one-sided op forms.
double queue_step(double level, double inflow, double outflow);

}  // namespace playoutlab
