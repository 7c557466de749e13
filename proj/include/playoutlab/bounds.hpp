#pragma once

#include <cstdint>

#include "playoutlab/policies.hpp"

namespace playoutlab {

/// Drift-bound constants and the performance bounds derived from them.
/// Units: the B/C family is squared seconds, u_avg_bound and x_max_bound are
/// seconds, G_max/H_min are utility units.
struct BoundSet {
  double B = 0.0;
  double C = 0.0;
  double B_prime = 0.0;   // d_f-step drift constant
  double B_dprime = 0.0;  // + feedback-delay cross term
  double B_tprime = 0.0;  // + feedback-delay cross terms incl. service
  double C_tilde = 0.0;   // C lifted by the delay-accumulator operating limit
  double G_max = 0.0;     // frame-quality utility at f_max
  double H_min = 0.0;     // distortion at the natural interval (zero)
  double u_avg_bound = 0.0;  // long-run average penalty bound
  double x_max_bound = 0.0;  // deterministic delay-accumulator cap
};

/// Evaluates every bound at slot t of a total_slots run.
BoundSet compute_bounds(const PolicyConfig& cfg, std::int64_t t,
                        std::int64_t total_slots);

}  // namespace playoutlab
