#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "playoutlab/network.hpp"
#include "playoutlab/policies.hpp"

namespace playoutlab {

struct EstimatorConfig {
  double alpha = 1.0;    // EWMA weight; 1 keeps the raw per-arrival estimate
  double e_floor = 0.25; // clamp guards against loss-induced spikes
  double e_ceil = 4.0;
};

/// One simulation run: T generation slots plus however many playout-only
/// slots it takes to drain the decoder buffer afterwards.
struct SimConfig {
  std::int64_t total_frames = 28800;
  double prebuffer_s = 0.5;  // converted to frames at the natural rate
  double rebuffer_threshold_fraction = 0.5;
  PolicyConfig policy;
  EstimatorConfig estimator;
  std::vector<FrameArrival> trace;  // when nonempty, replays per-frame delay/loss
  SyntheticNetConfig net;
  double sender_delay_s = 0.0;  // fixed extra transit delay, default none
  std::uint64_t seed = 1;

  std::int64_t prebuffer_frames() const;
  void validate() const;
};

/// Per-slot log row. The first ten fields are the serialized CSV columns; the
/// trailing counters are in-memory diagnostics only.
struct SlotRecord {
  std::int64_t slot = 0;
  double wall_time_s = 0.0;  // receiver playout clock (0 until playout starts)
  double f_s = 0.0;          // 0 on drain slots (nothing generated)
  double p_s = 0.0;          // 0 on prebuffer and rebuffering slots
  double u_s = 0.0;
  double x_s = 0.0;
  double e = 1.0;
  double beta_s = 0.0;
  std::int64_t buffer_frames = 0;
  bool rebuffering = false;

  std::int64_t generated = 0;
  std::int64_t entered = 0;
  std::int64_t played = 0;
  std::int64_t lost = 0;
  std::int64_t in_flight = 0;
};

struct RunMetrics {
  double continuity = 1.0;          // 1 - rebuffer_time / (T * p_n)
  double playout_distortion = 0.0;  // sum of h(p) over playout decisions
  double total_playout_delay = 0.0; // sum of (p - p_n) over playout decisions
  double mean_psnr = 0.0;           // dB, averaged over generated frames
  double mean_u = 0.0;              // s, averaged over all logged slots
  double max_x = 0.0;               // s
  std::int64_t underflow_count = 0;
};

struct RunResult {
  RunMetrics metrics;
  std::vector<SlotRecord> log;
};

/// Observations a controller sees when deciding slot t.
struct SlotObservation {
  double u_fb = 0.0;  // fed-back discontinuity penalty (d_b slots stale)
  double e_fb = 1.0;  // fed-back interval scaling estimate
  double u = 0.0;     // receiver-side penalty at decision time
  double x = 0.0;     // receiver-side delay accumulator
  double e = 1.0;     // receiver-side scaling estimate
  std::int64_t buffer_frames = 0;
  double beta = 0.0;
  double t_d = 0.0;
  bool initial_fill_active = false;
  bool draining = false;  // generation finished; buffer level no longer
                          // signals starvation
  std::int64_t amp_target = 0;
};

/// Generation interval the sender picks for this slot. Fixed-rate controllers
/// emit at the natural interval; the Lyapunov family runs the encoder policy
/// on the fed-back penalty.
double encoder_interval(const PolicyConfig& cfg, double u_fb, double e_fb);

SlotDecision controller_step_norm(const PolicyConfig& cfg);
SlotDecision controller_step_amp(const PolicyConfig& cfg,
                                 const SlotObservation& obs);
SlotDecision controller_step_ampl(const PolicyConfig& cfg,
                                  const SlotObservation& obs);
SlotDecision controller_step_lopt(const PolicyConfig& cfg,
                                  const SlotObservation& obs);
SlotDecision controller_step_dlopt(const PolicyConfig& cfg,
                                   const SlotObservation& obs);

/// Dispatch on cfg.controller.
SlotDecision controller_step(const PolicyConfig& cfg, const SlotObservation& obs);

/// Runs the slotted end-to-end loop and accumulates metrics.
RunResult run(const SimConfig& cfg);

/// Recomputes metrics from a per-slot log alone. Kept independent of the
/// run loop's own accounting so the two can check each other.
RunMetrics compute_metrics(const std::vector<SlotRecord>& log,
                           const SimConfig& cfg);

/// Serializes the ten-column per-slot CSV.
std::string slot_log_csv(const std::vector<SlotRecord>& log);
void write_slot_log(const std::vector<SlotRecord>& log, const std::string& path);

}  // namespace playoutlab
