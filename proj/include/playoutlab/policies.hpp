#pragma once

#include <functional>
#include <string>

#include "playoutlab/quality.hpp"
#include "playoutlab/virtual_buffers.hpp"

namespace playoutlab {

enum class ControllerKind {
  Norm,    // fixed natural-rate generation and playout
  Amp,     // threshold slowdown, factor auto-tuned by the sweep harness
  Amp25,   // threshold slowdown, fixed 25% factor
  AmpLive, // threshold slowdown/speedup around a target level
  LOpt,    // drift-plus-penalty control, conservative slack
  LOptM,   // drift-plus-penalty control, loose slack
  DLOpt,   // delay-constrained drift-plus-penalty, conservative slack
  DLOptM,  // delay-constrained drift-plus-penalty, loose slack
};

const char* controller_name(ControllerKind kind);
ControllerKind controller_from_name(const std::string& name);
bool is_lyapunov(ControllerKind kind);
bool is_delay_constrained(ControllerKind kind);

/// How the receiver advances the discontinuity penalty when forward delay is
/// modelled: every slot (the stepwise receiver recursion) or in blocks of
/// d_f + 1 slots with predicted future service.
enum class PenaltyUpdate { Step, DfSlot };

/// Everything a controller needs to make per-slot decisions.
struct PolicyConfig {
  double V = 1.0;        // quality/stability tradeoff weight, > 0
  double u_bar = 100.0;  // delay-accumulator operating limit (s)
  double theta = 4.27;   // total slowdown-delay budget (s)
  int d_f = 7;           // forward network delay, slots
  int d_b = 10;          // backward (feedback) delay, slots
  QualityParams quality;
  DistortionParams distortion;
  IntervalBounds bounds;
  BetaVariant beta_variant = BetaVariant::Conservative;
  ControllerKind controller = ControllerKind::LOpt;
  PenaltyUpdate u_update = PenaltyUpdate::Step;
  double amp_sigma = 0.25;      // slowdown factor for Amp/Amp25
  double ampl_sigma = 0.40;     // scale factor for AmpLive
  long amp_target_frames = -1;  // buffer target; -1 means "use the prebuffer"

  void validate() const;
};

/// One slot's control decision plus the values that produced it.
struct SlotDecision {
  double f = 0.0;       // encoder frame generation interval (s)
  double p = 0.0;       // playout frame interval (s)
  double beta = 0.0;    // underflow slack used this slot (s)
  double F_of_f = 0.0;  // predicted receiving interval e*f (s)
  double u = 0.0;       // penalty snapshot at decision time (s)
  double x = 0.0;       // delay-accumulator snapshot (s)
  double e = 1.0;       // interval scaling estimate at decision time
};

/// Encoder policy: argmax over [f_min, f_max] of V*g(f) - u*e*f.
/// Closed form V*a / (V*a/f_max + u*e), clamped to the box.
double encoder_policy(double u_feedback, double e, const PolicyConfig& cfg);

/// Decoder policy: argmax over [p_min, p_max] of u*p - V*h(p).
/// Closed form p_n + u/(2*V*m), clamped. With m = 0 the objective is linear:
/// p_max when u > 0, p_n when u = 0.
double decoder_policy(double u, const PolicyConfig& cfg);

/// Delay-constrained decoder policy. While x <= u_bar, argmax of
/// (u - x)*p - V*h(p); beyond the limit the playout is pinned to p_n + t_d so
/// the accumulator stops growing.
double decoder_policy_delay_constrained(double u, double x, double t_d,
                                        const PolicyConfig& cfg);

/// Encoder policy under feedback delay: same map as encoder_policy, evaluated
/// on the stale penalty U(t - d_b) supplied by the caller.
double encoder_policy_delayed(double u_delayed, double e, const PolicyConfig& cfg);

/// Golden-section search for the argmax of a concave objective on [lo, hi].
/// The result is within tol of the true argmax.
double solve_concave_1d(const std::function<double(double)>& objective,
                        double lo, double hi, double tol);

}  // namespace playoutlab
