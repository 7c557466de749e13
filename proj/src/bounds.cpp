#include "playoutlab/bounds.hpp"

#include <stdexcept>

#include "playoutlab/quality.hpp"
#include "playoutlab/virtual_buffers.hpp"

namespace playoutlab {

BoundSet compute_bounds(const PolicyConfig& cfg, std::int64_t t,
                        std::int64_t total_slots) {
  cfg.validate();
  if (t < 0 || t >= total_slots)
    throw std::invalid_argument("compute_bounds: t must lie in [0, total_slots)");

  const IntervalBounds& b = cfg.bounds;
  const double T = static_cast<double>(total_slots);
  const double remaining = static_cast<double>(total_slots - t);
  const double beta_cap = T * b.r_min * b.p_min / remaining;
  const double bracket =
      b.r_max * b.r_max + (b.p_max + beta_cap) * (b.p_max + beta_cap);
  const double t_d = cfg.theta / remaining;

  BoundSet out;
  out.B = 0.5 * bracket;
  out.C = 0.5 * (b.p_max * b.p_max +
                 (cfg.distortion.p_n + t_d) * (cfg.distortion.p_n + t_d));
  out.B_prime = static_cast<double>(cfg.d_f) * out.B;
  const double delay_pairs = static_cast<double>(cfg.d_b) *
                             static_cast<double>(cfg.d_f + 1);
  out.B_dprime = out.B_prime + delay_pairs * b.r_max * b.r_max;
  out.B_tprime =
      out.B_prime + delay_pairs * (b.r_max * b.r_max + b.r_max * b.p_max);
  out.C_tilde = out.C + b.p_max * (cfg.u_bar + b.p_max);
  out.G_max = frame_quality(cfg.quality, cfg.quality.f_max);
  out.H_min = playout_distortion(cfg.distortion, cfg.distortion.p_n);
  out.u_avg_bound = (out.B + cfg.V * (out.G_max - out.H_min)) / b.r_max;
  out.x_max_bound = cfg.u_bar + b.p_max;
  return out;
}

}  // namespace playoutlab
