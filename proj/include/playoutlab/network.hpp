#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace playoutlab {

/// One network-trace row: a frame's transit through the (simulated) network.
/// `recv_time` is empty when the frame was lost. `stamped_f` is the generation
/// interval the encoder used for this frame, carried in-band so the receiver
/// can estimate the interval scaling factor.
struct FrameArrival {
  std::int64_t frame_id = 0;
  double send_time = 0.0;            // s
  std::optional<double> recv_time;   // s, empty when lost
  double stamped_f = 0.0;            // s
  double size_bits = 0.0;

  bool lost() const { return !recv_time.has_value(); }
};

/// Piecewise-constant available bandwidth over time (bits/s).
struct BandwidthProfile {
  struct Segment {
    double start_s = 0.0;
    double bps = 5e6;
  };
  std::vector<Segment> segments{{0.0, 5e6}};

  double value_at(double t) const;
};

struct JitterModel {
  enum class Kind { None, IidUniform, IidLognormal, TwoStateMarkov };
  Kind kind = Kind::None;
  // IidUniform
  double lo = 0.0, hi = 0.0;
  // IidLognormal
  double mu = 0.0, sigma = 0.0;
  // TwoStateMarkov: extra delay per state, transition probabilities, and the
  // loss rate while in the bad state (congestion episodes drop frames).
  double good_delay = 0.0, bad_delay = 0.0;
  double p_gb = 0.0, p_bg = 0.0;
  double bad_loss_rate = 0.0;
};

/// Synthetic network description standing in for external traces.
struct SyntheticNetConfig {
  double base_delay = 0.0;  // s added to every frame
  JitterModel jitter;
  double loss_rate = 0.0;   // probability per frame
  BandwidthProfile bandwidth;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Per-frame delay/loss sampler. Draws are made in frame-id order and depend
/// only on the seed and frame count, so a run is reproducible regardless of
/// when each frame is actually sent.
class NetSampler {
 public:
  explicit NetSampler(const SyntheticNetConfig& cfg);

  struct Sample {
    double delay = 0.0;
    bool lost = false;
  };
  Sample next();

 private:
  double uniform01();
  double gaussian();

  SyntheticNetConfig cfg_;
  std::uint64_t state_;
  bool markov_bad_ = false;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Reads a trace CSV (header frame_id,send_time_s,recv_time_s,lost,stamped_f_s,
/// size_bits). Rows must be sorted by frame_id; lost rows carry an empty
/// recv_time_s field. Parse failures name the offending line.
std::vector<FrameArrival> load_trace(const std::string& path);

/// Writes a trace in the same CSV schema, times with nine fractional digits.
void save_trace(const std::vector<FrameArrival>& trace, const std::string& path);

/// Applies the synthetic network to externally supplied send times.
std::vector<FrameArrival> synthesize_trace(const SyntheticNetConfig& cfg,
                                           std::span<const double> send_times,
                                           std::span<const double> stamped_fs);

/// Raw interval-scaling estimate blended into the previous value:
/// (1-alpha)*previous + alpha*(r/f), clamped to [floor, ceil].
double estimate_e(double previous, double r_measured, double f_stamped,
                  double alpha, double floor_value, double ceil_value);

/// Stateful wrapper around estimate_e. alpha = 1 reproduces the raw
/// per-arrival estimator; smaller alpha smooths.
class EwmaScaleEstimator {
 public:
  EwmaScaleEstimator() = default;
  EwmaScaleEstimator(double alpha, double floor_value, double ceil_value)
      : alpha_(alpha), floor_(floor_value), ceil_(ceil_value) {}

  double update(double r_measured, double f_stamped) {
    value_ = estimate_e(value_, r_measured, f_stamped, alpha_, floor_, ceil_);
    return value_;
  }
  double value() const { return value_; }

 private:
  double alpha_ = 1.0;
  double floor_ = 0.25;
  double ceil_ = 4.0;
  double value_ = 1.0;
};

/// Throughput over the trailing `horizon` seconds of received frames, ending
/// at the window's latest arrival. Falls back to `fallback_bps` when nothing
/// in the window arrived.
double estimate_abr(std::span<const FrameArrival> window, double horizon,
                    double fallback_bps);

/// Slot-indexed delay line: the value read at slot t is the value recorded at
/// slot t - delay, and `initial` before anything that old exists.
class FeedbackChannel {
 public:
  FeedbackChannel() = default;
  FeedbackChannel(int delay_slots, double initial)
      : delay_(delay_slots), initial_(initial) {}

  void record(double value) { history_.push_back(value); }
  double at(std::int64_t slot) const {
    const std::int64_t idx = slot - delay_;
    if (idx < 0 || idx >= static_cast<std::int64_t>(history_.size()))
      return initial_;
    return history_[static_cast<std::size_t>(idx)];
  }

 private:
  int delay_ = 0;
  double initial_ = 0.0;
  std::vector<double> history_;
};

}  // namespace playoutlab
