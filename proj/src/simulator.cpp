#include "playoutlab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <queue>
#include <stdexcept>

#include "playoutlab/quality.hpp"
#include "playoutlab/virtual_buffers.hpp"

namespace playoutlab {

std::int64_t SimConfig::prebuffer_frames() const {
  const double p_n = policy.distortion.p_n;
  const auto frames = static_cast<std::int64_t>(std::llround(prebuffer_s / p_n));
  return std::clamp<std::int64_t>(frames, 1, total_frames);
}

void SimConfig::validate() const {
  if (total_frames < 1)
    throw std::invalid_argument("SimConfig: total_frames must be >= 1");
  if (prebuffer_s < 0.0)
    throw std::invalid_argument("SimConfig: prebuffer_s must be >= 0");
  if (!(rebuffer_threshold_fraction > 0.0) || rebuffer_threshold_fraction > 1.0)
    throw std::invalid_argument("SimConfig: threshold fraction outside (0, 1]");
  if (sender_delay_s < 0.0)
    throw std::invalid_argument("SimConfig: sender_delay_s must be >= 0");
  if (estimator.alpha < 0.0 || estimator.alpha > 1.0)
    throw std::invalid_argument("SimConfig: estimator alpha outside [0, 1]");
  if (!(estimator.e_floor > 0.0) || estimator.e_floor > estimator.e_ceil)
    throw std::invalid_argument("SimConfig: bad estimator clamp range");
  policy.validate();
  if (trace.empty()) net.validate();
}

double encoder_interval(const PolicyConfig& cfg, double u_fb, double e_fb) {
  if (is_lyapunov(cfg.controller))
    return encoder_policy_delayed(u_fb, e_fb, cfg);
  return std::clamp(cfg.distortion.p_n, cfg.quality.f_min, cfg.quality.f_max);
}

namespace {

double clamp_p(const PolicyConfig& cfg, double p) {
  return std::clamp(p, cfg.distortion.p_min, cfg.distortion.p_max);
}

SlotDecision with_snapshot(SlotDecision dec, const SlotObservation& obs) {
  dec.beta = obs.beta;
  dec.F_of_f = obs.e * dec.f;
  dec.u = obs.u;
  dec.x = obs.x;
  dec.e = obs.e;
  return dec;
}

}  // namespace

SlotDecision controller_step_norm(const PolicyConfig& cfg) {
  SlotDecision dec;
  dec.f = std::clamp(cfg.distortion.p_n, cfg.quality.f_min, cfg.quality.f_max);
  dec.p = clamp_p(cfg, cfg.distortion.p_n);
  dec.F_of_f = dec.f;
  return dec;
}

SlotDecision controller_step_amp(const PolicyConfig& cfg,
                                 const SlotObservation& obs) {
  SlotDecision dec;
  dec.f = std::clamp(cfg.distortion.p_n, cfg.quality.f_min, cfg.quality.f_max);
  const bool slow =
      !obs.draining &&
      (obs.initial_fill_active || obs.buffer_frames < obs.amp_target);
  const double p =
      slow ? cfg.distortion.p_n / (1.0 - cfg.amp_sigma) : cfg.distortion.p_n;
  dec.p = clamp_p(cfg, p);
  return with_snapshot(dec, obs);
}

SlotDecision controller_step_ampl(const PolicyConfig& cfg,
                                  const SlotObservation& obs) {
  SlotDecision dec;
  dec.f = std::clamp(cfg.distortion.p_n, cfg.quality.f_min, cfg.quality.f_max);
  double p = cfg.distortion.p_n;
  if (!obs.draining) {
    if (obs.buffer_frames < obs.amp_target)
      p = cfg.distortion.p_n / (1.0 - cfg.ampl_sigma);
    else if (obs.buffer_frames > obs.amp_target)
      p = cfg.distortion.p_n * (1.0 - cfg.ampl_sigma);
  }
  dec.p = clamp_p(cfg, p);
  return with_snapshot(dec, obs);
}

SlotDecision controller_step_lopt(const PolicyConfig& cfg,
                                  const SlotObservation& obs) {
  SlotDecision dec;
  dec.f = encoder_policy_delayed(obs.u_fb, obs.e_fb, cfg);
  dec.p = decoder_policy(obs.u, cfg);
  return with_snapshot(dec, obs);
}

SlotDecision controller_step_dlopt(const PolicyConfig& cfg,
                                   const SlotObservation& obs) {
  SlotDecision dec;
  dec.f = encoder_policy_delayed(obs.u_fb, obs.e_fb, cfg);
  dec.p = decoder_policy_delay_constrained(obs.u, obs.x, obs.t_d, cfg);
  return with_snapshot(dec, obs);
}

SlotDecision controller_step(const PolicyConfig& cfg,
                             const SlotObservation& obs) {
  switch (cfg.controller) {
    case ControllerKind::Norm:
      return with_snapshot(controller_step_norm(cfg), obs);
    case ControllerKind::Amp:
    case ControllerKind::Amp25:
      return controller_step_amp(cfg, obs);
    case ControllerKind::AmpLive:
      return controller_step_ampl(cfg, obs);
    case ControllerKind::LOpt:
    case ControllerKind::LOptM:
      return controller_step_lopt(cfg, obs);
    case ControllerKind::DLOpt:
    case ControllerKind::DLOptM:
      return controller_step_dlopt(cfg, obs);
  }
  throw std::logic_error("controller_step: unhandled controller");
}

namespace {

/// One simulation. Every loop iteration is one slot: while frames remain the
/// sender emits exactly one per slot, and once playout has started the
/// receiver attempts exactly one playout per slot. Stalls freeze the playout
/// clock; the stall's wall duration is charged when enough frames have
/// arrived to resume. Slots after generation ends drain the buffer.
///
/// Frames that have not arrived when the playhead reaches them are dropped
/// and counted lost as long as a newer frame is available to display; the
/// playout stalls only when the whole buffer is empty. Receiving intervals
/// are measured on the physical arrival stream (ascending receive time).
class Simulation {
 public:
  explicit Simulation(const SimConfig& cfg) : cfg_(cfg), pol_(cfg.policy) {
    cfg_.validate();
    total_ = cfg_.total_frames;
    p_n_ = pol_.distortion.p_n;
    prebuffer_frames_ = cfg_.prebuffer_frames();
    resume_frames_ = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(
               std::ceil(cfg_.rebuffer_threshold_fraction *
                         static_cast<double>(prebuffer_frames_))));
    amp_target_ = pol_.amp_target_frames >= 0 ? pol_.amp_target_frames
                                              : prebuffer_frames_;
    estimator_ = EwmaScaleEstimator(cfg_.estimator.alpha, cfg_.estimator.e_floor,
                                    cfg_.estimator.e_ceil);
    fb_u_ = FeedbackChannel(pol_.d_b, 0.0);
    fb_e_ = FeedbackChannel(pol_.d_b, 1.0);
    stamped_.reserve(static_cast<std::size_t>(total_));
    flagged_.reserve(static_cast<std::size_t>(total_));
    if (cfg_.trace.empty()) {
      SyntheticNetConfig net = cfg_.net;
      net.seed = cfg_.seed;
      sampler_.emplace(net);
    } else if (static_cast<std::int64_t>(cfg_.trace.size()) < total_) {
      throw std::runtime_error("trace too short: " +
                               std::to_string(cfg_.trace.size()) + " rows for " +
                               std::to_string(total_) + " slots");
    }
  }

  RunResult run() {
    const std::int64_t slot_cap = 4 * total_ + 10000;
    for (std::int64_t slot = 0; !finished_; ++slot) {
      if (slot > slot_cap) throw std::logic_error("simulation failed to finish");
      const bool generating = slot < total_;

      // Receiver snapshot into the feedback path; with d_b = 0 the sender
      // reads this slot's value directly.
      fb_u_.record(u_);
      fb_e_.record(estimator_.value());

      SlotRecord row;
      row.slot = slot;

      if (generating) sender_slot(slot, row);
      if (!playout_started_) try_start_playout(generating);
      if (playout_started_ && !finished_) receiver_slot(generating, row);

      row.generated = generated_;
      row.entered = arrivals_;
      row.played = played_;
      row.lost = lost_flagged_ + expired_;
      row.in_flight = generated_ - lost_flagged_ - arrivals_ - dropped_pending_;

      const bool meaningful = generating || row.p_s > 0.0 || row.rebuffering;
      if (meaningful) log_.push_back(row);
      if (!generating && !playout_started_) finished_ = true;
    }
    return finalize();
  }

 private:
  // The nanosecond slack keeps equal-by-construction timestamps from
  // straddling comparisons after independent clock accumulation.
  static constexpr double kTimeEps = 1e-9;
  // below this, a computed stall is accumulation noise, not a playout gap
  static constexpr double kStallEps = 1e-12;

  void sender_slot(std::int64_t slot, SlotRecord& row) {
    const double u_fb = fb_u_.at(slot);
    const double e_fb = fb_e_.at(slot);
    const double f = encoder_interval(pol_, u_fb, e_fb);
    send_clock_ += f;

    double delay = 0.0;
    bool lost = false;
    double abr = 0.0;
    if (sampler_) {
      const NetSampler::Sample s = sampler_->next();
      delay = s.delay;
      lost = s.lost;
      abr = cfg_.net.bandwidth.value_at(send_clock_);
    } else {
      const FrameArrival& src = cfg_.trace[static_cast<std::size_t>(slot)];
      lost = src.lost();
      delay = lost ? 0.0 : *src.recv_time - src.send_time;
      abr = (src.size_bits > 0.0 && src.stamped_f > 0.0)
                ? src.size_bits / src.stamped_f
                : cfg_.net.bandwidth.value_at(send_clock_);
    }

    ++generated_;
    stamped_.push_back(f);
    flagged_.push_back(lost);
    if (lost)
      ++lost_flagged_;
    else
      events_.emplace(send_clock_ + cfg_.sender_delay_s + delay, slot);

    QualityParams q = pol_.quality;
    if (abr > 0.0) q.abr = abr;
    psnr_sum_ += psnr(q, f);

    row.f_s = f;
    latest_u_fb_ = u_fb;
    latest_e_fb_ = e_fb;
  }

  // Pops one arrival event in ascending receive-time order, measures the
  // receiving interval, and moves live frames into the decoder buffer. Late
  // arrivals of already-dropped frames still count as network measurements.
  void pop_arrival() {
    const auto [recv, id] = events_.top();
    events_.pop();
    ++arrivals_;
    if (have_last_recv_) {
      const double gap = recv - last_recv_;
      estimator_.update(gap, stamped_[static_cast<std::size_t>(id)]);
      if (inflow_baseline_set_) pending_inflow_ += gap;
    }
    last_recv_ = recv;
    have_last_recv_ = true;
    last_playable_recv_ = recv;
    if (id >= next_display_)
      buffer_.push(id);
    else
      --dropped_pending_;  // dead on arrival; already counted when dropped
  }

  void collect_arrivals() {
    while (!events_.empty() && events_.top().first <= play_clock_ + kTimeEps)
      pop_arrival();
  }

  void try_start_playout(bool generating) {
    while (static_cast<std::int64_t>(buffer_.size()) < prebuffer_frames_ &&
           !events_.empty())
      pop_arrival();
    if (static_cast<std::int64_t>(buffer_.size()) >= prebuffer_frames_ ||
        (!generating && !buffer_.empty())) {
      playout_started_ = true;
      play_clock_ = last_playable_recv_;
      collect_arrivals();
      inflow_baseline_set_ = true;  // prebuffer fill is not penalty inflow
    } else if (!generating) {
      never_started_ = true;  // nothing ever arrived
      finished_ = true;
    }
  }

  std::int64_t buffered() const {
    return static_cast<std::int64_t>(buffer_.size());
  }

  std::int64_t remaining_slots() const {
    return std::max<std::int64_t>(total_ - next_display_, 1);
  }

  double current_beta() const {
    const std::int64_t remaining = remaining_slots();
    return underflow_slack(buffered(), total_ - remaining, total_, pol_.bounds,
                           pol_.beta_variant);
  }

  bool try_resolve_stall(bool generating) {
    std::int64_t need = resume_frames_;
    while (static_cast<std::int64_t>(buffer_.size()) < need &&
           !events_.empty())
      pop_arrival();
    if (static_cast<std::int64_t>(buffer_.size()) < need) {
      if (generating) return false;  // wait for more frames to be emitted
      if (buffer_.empty()) {
        finished_ = true;  // lost tail; nothing left to play
        stalled_ = false;
        return false;
      }
      // drain: resume with whatever still exists
    }
    const double resume_at = std::max(stall_start_, last_playable_recv_);
    if (resume_at - stall_start_ > kStallEps) {
      rebuffer_time_ += resume_at - stall_start_;
      ++underflows_;
      play_clock_ = resume_at;
    }
    stalled_ = false;
    collect_arrivals();
    return true;
  }

  void stall_row(SlotRecord& row) {
    row.rebuffering = true;
    row.wall_time_s = stall_start_;
    row.buffer_frames = buffered();
    row.beta_s = current_beta();
    row.u_s = u_;
    row.x_s = x_;
    row.e = estimator_.value();
  }

  // Advances the playhead to the next displayable frame, dropping frames the
  // deadline has passed. Returns false when the buffer is empty.
  bool advance_playhead() {
    if (buffer_.empty()) return false;
    const std::int64_t top = buffer_.top();
    for (std::int64_t id = next_display_; id < top; ++id) {
      if (!flagged_[static_cast<std::size_t>(id)]) {
        ++expired_;  // missed its deadline; counted lost
        ++dropped_pending_;
      }
    }
    next_display_ = top;
    return true;
  }

  void receiver_slot(bool generating, SlotRecord& row) {
    collect_arrivals();

    if (stalled_ && !try_resolve_stall(generating)) {
      if (!finished_) stall_row(row);
      return;
    }

    if (buffer_.empty()) {
      if (!generating && events_.empty()) {
        finished_ = true;
        return;
      }
      stall_start_ = play_clock_;
      stalled_ = true;
      if (!try_resolve_stall(generating)) {
        if (!finished_) stall_row(row);
        return;
      }
    }

    // Regular playout slot: observe, decide, consume, update buffers.
    SlotObservation obs;
    obs.u_fb = latest_u_fb_;
    obs.e_fb = latest_e_fb_;
    obs.u = u_;
    obs.x = x_;
    obs.e = estimator_.value();
    obs.buffer_frames = buffered();
    obs.beta = current_beta();
    obs.t_d = pol_.theta / static_cast<double>(remaining_slots());
    if (!initial_fill_done_ && obs.buffer_frames >= amp_target_)
      initial_fill_done_ = true;
    obs.initial_fill_active = !initial_fill_done_;
    obs.draining = !generating;
    obs.amp_target = amp_target_;

    const SlotDecision dec = controller_step(pol_, obs);
    const double p = dec.p;

    row.wall_time_s = play_clock_;
    row.p_s = p;
    row.buffer_frames = obs.buffer_frames;
    row.beta_s = obs.beta;
    row.u_s = obs.u;
    row.x_s = obs.x;
    row.e = obs.e;

    advance_playhead();
    buffer_.pop();
    ++next_display_;
    ++played_;

    distortion_sum_ += playout_distortion(pol_.distortion, p);
    delay_sum_ += p - p_n_;
    play_clock_ += p;

    apply_penalty_update(p, obs.beta);
    if (is_delay_constrained(pol_.controller)) {
      x_ = queue_step(x_, p, p_n_ + obs.t_d);
      max_x_ = std::max(max_x_, x_);
    }

    if (!generating && buffer_.empty() && events_.empty()) finished_ = true;
  }

  // Advances the discontinuity penalty with this slot's netted inflow and
  // service. In DfSlot mode the value is held between block boundaries and
  // advanced once per d_f + 1 decision slots.
  void apply_penalty_update(double p, double beta) {
    const double inflow = pending_inflow_;
    pending_inflow_ = 0.0;
    if (pol_.u_update == PenaltyUpdate::Step || pol_.d_f == 0) {
      u_ = queue_step(u_, inflow, p + beta);
      return;
    }
    block_inflow_ += inflow;
    block_gamma_ += p + beta;
    if (++block_len_ == pol_.d_f + 1) {
      u_ = queue_step(u_, block_inflow_, block_gamma_);
      block_inflow_ = 0.0;
      block_gamma_ = 0.0;
      block_len_ = 0;
    }
  }

  RunResult finalize() {
    RunMetrics m;
    const double sequence_s = static_cast<double>(total_) * p_n_;
    if (never_started_) {
      rebuffer_time_ = sequence_s;
      underflows_ = 1;
    }
    m.continuity = std::clamp(1.0 - rebuffer_time_ / sequence_s, 0.0, 1.0);
    m.playout_distortion = distortion_sum_;
    m.total_playout_delay = delay_sum_;
    m.mean_psnr =
        generated_ > 0 ? psnr_sum_ / static_cast<double>(generated_) : 0.0;
    double u_sum = 0.0;
    for (const SlotRecord& r : log_) u_sum += r.u_s;
    m.mean_u = log_.empty() ? 0.0 : u_sum / static_cast<double>(log_.size());
    m.max_x = max_x_;
    m.underflow_count = underflows_;
    return {m, std::move(log_)};
  }

  SimConfig cfg_;
  const PolicyConfig& pol_;
  std::int64_t total_ = 0;
  double p_n_ = 1.0 / 30.0;
  std::int64_t prebuffer_frames_ = 1;
  std::int64_t resume_frames_ = 1;
  std::int64_t amp_target_ = 1;

  std::optional<NetSampler> sampler_;
  EwmaScaleEstimator estimator_;
  FeedbackChannel fb_u_, fb_e_;

  // Per-frame send metadata, indexed by frame id.
  std::vector<double> stamped_;
  std::vector<bool> flagged_;

  // Arrival events in ascending (receive time, id) order, and the ids of
  // arrived, still-displayable frames.
  using Event = std::pair<double, std::int64_t>;
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
  std::priority_queue<std::int64_t, std::vector<std::int64_t>,
                      std::greater<std::int64_t>>
      buffer_;

  std::int64_t generated_ = 0;
  std::int64_t arrivals_ = 0;
  std::int64_t played_ = 0;
  std::int64_t lost_flagged_ = 0;
  std::int64_t expired_ = 0;
  std::int64_t dropped_pending_ = 0;
  std::int64_t next_display_ = 0;

  double send_clock_ = 0.0;
  double play_clock_ = 0.0;
  bool playout_started_ = false;
  bool never_started_ = false;
  bool stalled_ = false;
  bool finished_ = false;
  bool initial_fill_done_ = false;
  bool inflow_baseline_set_ = false;
  bool have_last_recv_ = false;
  double last_recv_ = 0.0;
  double last_playable_recv_ = 0.0;
  double stall_start_ = 0.0;

  double u_ = 0.0;
  double x_ = 0.0;
  double max_x_ = 0.0;
  double pending_inflow_ = 0.0;
  double block_inflow_ = 0.0;
  double block_gamma_ = 0.0;
  int block_len_ = 0;
  double latest_u_fb_ = 0.0;
  double latest_e_fb_ = 1.0;

  double rebuffer_time_ = 0.0;
  std::int64_t underflows_ = 0;
  double distortion_sum_ = 0.0;
  double delay_sum_ = 0.0;
  double psnr_sum_ = 0.0;

  std::vector<SlotRecord> log_;
};

}  // namespace

RunResult run(const SimConfig& cfg) { return Simulation(cfg).run(); }

RunMetrics compute_metrics(const std::vector<SlotRecord>& log,
                           const SimConfig& cfg) {
  if (log.empty()) throw std::invalid_argument("compute_metrics: empty log");
  const double p_n = cfg.policy.distortion.p_n;

  std::int64_t total_frames = 0;
  for (const SlotRecord& r : log)
    if (r.f_s > 0.0) ++total_frames;
  if (total_frames == 0) total_frames = cfg.total_frames;
  const double sequence_s = static_cast<double>(total_frames) * p_n;

  RunMetrics m;
  double send_clock = 0.0;
  double psnr_sum = 0.0;
  double u_sum = 0.0;
  bool any_started = false;
  double prev_wall = 0.0, prev_p = 0.0;
  bool have_prev = false;
  double rebuffer = 0.0;
  std::int64_t underflows = 0;
  std::int64_t gen_index = 0;

  for (const SlotRecord& r : log) {
    u_sum += r.u_s;
    m.max_x = std::max(m.max_x, r.x_s);
    if (r.f_s > 0.0) {
      send_clock += r.f_s;
      QualityParams q = cfg.policy.quality;
      if (cfg.trace.empty()) {
        q.abr = cfg.net.bandwidth.value_at(send_clock);
      } else if (gen_index < static_cast<std::int64_t>(cfg.trace.size())) {
        const FrameArrival& src = cfg.trace[static_cast<std::size_t>(gen_index)];
        if (src.size_bits > 0.0 && src.stamped_f > 0.0)
          q.abr = src.size_bits / src.stamped_f;
        else
          q.abr = cfg.net.bandwidth.value_at(send_clock);
      }
      psnr_sum += psnr(q, r.f_s);
      ++gen_index;
    }
    const bool started_row = r.p_s > 0.0 || r.rebuffering;
    if (started_row) {
      if (have_prev) {
        const double jump = r.wall_time_s - (prev_wall + prev_p);
        if (jump > 1e-12) {
          rebuffer += jump;
          ++underflows;
        }
      }
      any_started = true;
      prev_wall = r.wall_time_s;
      prev_p = r.p_s;
      have_prev = true;
    }
    if (r.p_s > 0.0) {
      m.playout_distortion += playout_distortion(cfg.policy.distortion, r.p_s);
      m.total_playout_delay += r.p_s - p_n;
    }
  }

  if (!any_started) {
    rebuffer = sequence_s;
    underflows = 1;
  }
  m.continuity = std::clamp(1.0 - rebuffer / sequence_s, 0.0, 1.0);
  m.mean_psnr =
      total_frames > 0 ? psnr_sum / static_cast<double>(total_frames) : 0.0;
  m.mean_u = u_sum / static_cast<double>(log.size());
  m.underflow_count = underflows;
  return m;
}

std::string slot_log_csv(const std::vector<SlotRecord>& log) {
  std::string out =
      "slot,wall_time_s,f_s,p_s,u_s,x_s,e,beta_s,buffer_frames,rebuffering\n";
  char buf[320];
  for (const SlotRecord& r : log) {
    std::snprintf(buf, sizeof(buf),
                  "%lld,%.9f,%.9f,%.9f,%.9f,%.9f,%.6f,%.9g,%lld,%d\n",
                  static_cast<long long>(r.slot), r.wall_time_s, r.f_s, r.p_s,
                  r.u_s, r.x_s, r.e, r.beta_s,
                  static_cast<long long>(r.buffer_frames),
                  r.rebuffering ? 1 : 0);
    out += buf;
  }
  return out;
}

void write_slot_log(const std::vector<SlotRecord>& log,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write slot log: " + path);
  out << slot_log_csv(log);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace playoutlab
