#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "playoutlab/simulator.hpp"
#include "test_util.hpp"

using namespace playoutlab;
using playoutlab::testing::delay_trace;
using playoutlab::testing::mini_config;

namespace {

SimConfig ideal_config(ControllerKind kind, std::int64_t frames = 2000) {
  SimConfig cfg = mini_config(frames);
  cfg.policy.controller = kind;
  cfg.net.base_delay = 0.235;
  return cfg;
}

SimConfig jitter_config(ControllerKind kind, std::int64_t frames = 4000) {
  SimConfig cfg = mini_config(frames);
  cfg.policy.controller = kind;
  cfg.net.base_delay = 0.0;
  cfg.net.jitter.kind = JitterModel::Kind::IidLognormal;
  cfg.net.jitter.mu = -1.4481;
  cfg.net.jitter.sigma = 0.5;
  cfg.prebuffer_s = 0.5;
  return cfg;
}

}  // namespace

TEST_CASE("ideal network plays cleanly for every controller") {
  for (const ControllerKind kind :
       {ControllerKind::Norm, ControllerKind::Amp25, ControllerKind::AmpLive,
        ControllerKind::LOpt, ControllerKind::LOptM, ControllerKind::DLOpt,
        ControllerKind::DLOptM}) {
    const SimConfig cfg = ideal_config(kind);
    const RunResult result = run(cfg);
    CAPTURE(controller_name(kind));
    CHECK(result.metrics.continuity == 1.0);
    CHECK(result.metrics.playout_distortion == 0.0);
    CHECK(result.metrics.underflow_count == 0);
    CHECK(result.metrics.mean_u == 0.0);
    for (const SlotRecord& row : result.log) CHECK(row.u_s == 0.0);
  }
}

TEST_CASE("ideal network with one-frame prebuffer") {
  SimConfig cfg = ideal_config(ControllerKind::Norm);
  cfg.prebuffer_s = 1.0 / 30.0;
  const RunResult result = run(cfg);
  CHECK(result.metrics.continuity == 1.0);
  CHECK(result.metrics.playout_distortion == 0.0);
  CHECK(result.metrics.mean_u == 0.0);
  // constant-rate pipeline: PSNR is the natural-interval value every slot
  QualityParams q = cfg.policy.quality;
  q.abr = 5e6;
  CHECK(result.metrics.mean_psnr == doctest::Approx(psnr(q, 1.0 / 30.0)));
}

TEST_CASE("frame conservation holds at every slot boundary") {
  for (const ControllerKind kind : {ControllerKind::Norm, ControllerKind::LOpt,
                                    ControllerKind::DLOpt}) {
    SimConfig cfg = jitter_config(kind, 3000);
    cfg.net.loss_rate = 0.02;
    const RunResult result = run(cfg);
    for (const SlotRecord& row : result.log) {
      const std::int64_t buffered = row.entered - row.played;
      CHECK(row.generated ==
            row.played + buffered + row.lost + row.in_flight);
    }
  }
}

TEST_CASE("single delay spike causes exactly one underflow for Norm") {
  // 60 frames, constant 50 ms transit, frame 30 delayed by 2 s extra.
  SimConfig cfg = mini_config(60);
  cfg.policy.controller = ControllerKind::Norm;
  cfg.prebuffer_s = 0.1;  // 3 frames
  cfg.trace = delay_trace(60, 0.05, {{30, 2.05}});
  const RunResult result = run(cfg);
  CHECK(result.metrics.underflow_count == 1);
  CHECK(result.metrics.continuity < 1.0);
  CHECK(result.metrics.continuity > 0.0);
}

TEST_CASE("rebuffer time equals the hand-traced stall duration") {
  // One spike; everything else is exact. Norm playout: starts when 3 frames
  // arrived (frame 2 at (3)*p_n + 0.05), then consumes one frame per p_n.
  const double p_n = 1.0 / 30.0;
  SimConfig cfg = mini_config(60);
  cfg.policy.controller = ControllerKind::Norm;
  cfg.prebuffer_s = 0.1;
  cfg.trace = delay_trace(60, 0.05, {{30, 2.05}});
  const RunResult result = run(cfg);

  // Playout starts at w0 = recv(2); frame j is consumed at w0 + j*p_n. The
  // stall begins at frame 30's deadline with the buffer empty; frames 30 and
  // 31 (the ceil(0.5 * 3) = 2 resume frames) both enter at recv(30).
  const double w0 = 3.0 * p_n + 0.05;
  const double stall_start = w0 + 30.0 * p_n;
  const double resume_at = 31.0 * p_n + 2.05;
  const double expected_stall = resume_at - stall_start;
  const double measured = (1.0 - result.metrics.continuity) * 60.0 * p_n;
  CHECK(measured == doctest::Approx(expected_stall).epsilon(1e-9));
}

TEST_CASE("LOpt rides out the spike at least as well as Norm") {
  // sawtooth delay before the spike lets the controller build slack
  std::vector<std::pair<std::int64_t, double>> overrides;
  for (std::int64_t i = 5; i < 30; ++i)
    overrides.emplace_back(i, i % 2 == 0 ? 0.09 : 0.05);
  overrides.emplace_back(30, 2.05);

  SimConfig norm = mini_config(60);
  norm.policy.controller = ControllerKind::Norm;
  norm.prebuffer_s = 0.1;
  norm.trace = delay_trace(60, 0.05, overrides);
  SimConfig lopt = norm;
  lopt.policy.controller = ControllerKind::LOpt;

  const RunMetrics m_norm = run(norm).metrics;
  const RunMetrics m_lopt = run(lopt).metrics;
  CHECK(m_lopt.continuity >= m_norm.continuity);
  CHECK(m_lopt.mean_u > 0.0);
}

TEST_CASE("decision trail equals composed policy calls") {
  // With zero feedback delay the encoder reads the state carried into the
  // slot: this slot's (pre-update) penalty and the estimate as of the
  // previous row.
  SimConfig cfg = jitter_config(ControllerKind::LOpt, 1500);
  cfg.policy.d_f = 0;
  cfg.policy.d_b = 0;
  const RunResult result = run(cfg);
  int checked = 0;
  for (std::size_t t = 0; t < result.log.size(); ++t) {
    const SlotRecord& row = result.log[t];
    if (row.p_s > 0.0)
      CHECK(row.p_s == decoder_policy(row.u_s, cfg.policy));
    if (row.f_s <= 0.0 || row.p_s <= 0.0) continue;
    const double e_carried = t > 0 ? result.log[t - 1].e : 1.0;
    CHECK(row.f_s == encoder_policy(row.u_s, e_carried, cfg.policy));
    ++checked;
  }
  CHECK(checked > 1000);
}

TEST_CASE("encoder feedback is exactly d_b slots stale") {
  SimConfig cfg = jitter_config(ControllerKind::LOpt, 1500);
  cfg.policy.d_b = 10;
  cfg.policy.d_f = 0;
  const RunResult result = run(cfg);
  int checked = 0;
  for (std::size_t t = cfg.policy.d_b + 1; t < result.log.size(); ++t) {
    const SlotRecord& row = result.log[t];
    if (row.f_s <= 0.0) continue;
    if (static_cast<std::int64_t>(t) != row.slot) break;  // drain reindexes
    const SlotRecord& stale = result.log[t - cfg.policy.d_b];
    const SlotRecord& before = result.log[t - cfg.policy.d_b - 1];
    CHECK(row.f_s == encoder_policy(stale.u_s, before.e, cfg.policy));
    ++checked;
  }
  CHECK(checked > 1000);
}

TEST_CASE("runs are deterministic byte for byte") {
  const SimConfig cfg = jitter_config(ControllerKind::DLOpt, 2000);
  const RunResult a = run(cfg);
  const RunResult b = run(cfg);
  CHECK(slot_log_csv(a.log) == slot_log_csv(b.log));
  CHECK(a.metrics.continuity == b.metrics.continuity);
  CHECK(a.metrics.mean_u == b.metrics.mean_u);
}

TEST_CASE("AMP with zero slowdown factor reproduces Norm exactly") {
  SimConfig amp = jitter_config(ControllerKind::Amp25, 2000);
  amp.policy.amp_sigma = 0.0;
  SimConfig norm = amp;
  norm.policy.controller = ControllerKind::Norm;
  CHECK(slot_log_csv(run(amp).log) == slot_log_csv(run(norm).log));
}

TEST_CASE("controller step decisions") {
  PolicyConfig cfg;
  SlotObservation obs;
  obs.amp_target = 30;

  SUBCASE("norm pins both intervals to the natural rate") {
    const SlotDecision dec = controller_step_norm(cfg);
    CHECK(dec.f == doctest::Approx(cfg.distortion.p_n));
    CHECK(dec.p == doctest::Approx(cfg.distortion.p_n));
  }

  SUBCASE("amp slows by the configured factor while under target") {
    cfg.amp_sigma = 0.25;
    obs.buffer_frames = 10;
    const SlotDecision dec = controller_step_amp(cfg, obs);
    CHECK(dec.p == doctest::Approx(0.044444).epsilon(1e-4));
    obs.buffer_frames = 31;
    obs.initial_fill_active = false;
    CHECK(controller_step_amp(cfg, obs).p == doctest::Approx(cfg.distortion.p_n));
  }

  SUBCASE("amp stays slow during the initial fill") {
    cfg.amp_sigma = 0.25;
    obs.buffer_frames = 40;
    obs.initial_fill_active = true;
    CHECK(controller_step_amp(cfg, obs).p ==
          doctest::Approx(cfg.distortion.p_n / 0.75));
  }

  SUBCASE("amp-live slows, speeds and idles around the target") {
    cfg.ampl_sigma = 0.40;
    obs.buffer_frames = 30;
    CHECK(controller_step_ampl(cfg, obs).p == doctest::Approx(cfg.distortion.p_n));
    obs.buffer_frames = 29;
    CHECK(controller_step_ampl(cfg, obs).p ==
          doctest::Approx(0.055556).epsilon(1e-4));
    obs.buffer_frames = 31;
    CHECK(controller_step_ampl(cfg, obs).p == doctest::Approx(0.02));
  }

  SUBCASE("amp decisions clamp to the playout box") {
    cfg.amp_sigma = 0.6;
    obs.buffer_frames = 0;
    CHECK(controller_step_amp(cfg, obs).p == doctest::Approx(cfg.distortion.p_max));
  }

  SUBCASE("lopt composes the closed-form policies") {
    obs.u = 0.0;
    obs.u_fb = 0.0;
    const SlotDecision dec = controller_step_lopt(cfg, obs);
    CHECK(dec.f == doctest::Approx(cfg.quality.f_max));
    CHECK(dec.p == doctest::Approx(cfg.distortion.p_n));
  }

  SUBCASE("dlopt pins playout to p_n + t_d beyond the limit") {
    obs.u = 5.0;
    obs.x = cfg.u_bar + 0.001;
    obs.t_d = 1e-4;
    const SlotDecision dec = controller_step_dlopt(cfg, obs);
    CHECK(dec.p == doctest::Approx(cfg.distortion.p_n + 1e-4));
  }
}

TEST_CASE("delay accumulator stays under the deterministic cap") {
  SimConfig cfg = jitter_config(ControllerKind::DLOpt, 4000);
  cfg.policy.theta = 4.27;
  const RunResult result = run(cfg);
  CHECK(result.metrics.max_x <= cfg.policy.u_bar + cfg.policy.distortion.p_max);
}

TEST_CASE("compute_metrics agrees with the run loop") {
  SimConfig cfg = jitter_config(ControllerKind::LOpt, 3000);
  cfg.net.loss_rate = 0.01;
  const RunResult result = run(cfg);
  const RunMetrics derived = compute_metrics(result.log, cfg);
  CHECK(derived.continuity == doctest::Approx(result.metrics.continuity).epsilon(1e-12));
  CHECK(derived.playout_distortion ==
        doctest::Approx(result.metrics.playout_distortion).epsilon(1e-12));
  CHECK(derived.total_playout_delay ==
        doctest::Approx(result.metrics.total_playout_delay).epsilon(1e-9));
  CHECK(derived.mean_psnr == doctest::Approx(result.metrics.mean_psnr).epsilon(1e-12));
  CHECK(derived.mean_u == doctest::Approx(result.metrics.mean_u).epsilon(1e-12));
  CHECK(derived.max_x == doctest::Approx(result.metrics.max_x));
  CHECK(derived.underflow_count == result.metrics.underflow_count);
}

TEST_CASE("compute_metrics continuity arithmetic") {
  // 16-minute sequence with 96 s of rebuffering: continuity 0.9.
  const double p_n = 1.0 / 30.0;
  SimConfig cfg;
  cfg.total_frames = 28800;
  std::vector<SlotRecord> log;
  for (std::int64_t i = 0; i < 28800; ++i) {
    SlotRecord row;
    row.slot = i;
    row.f_s = p_n;
    if (i == 0) {
      row.wall_time_s = 10.0;
      row.p_s = p_n;
    } else if (i == 1) {
      row.rebuffering = true;
      row.wall_time_s = 10.0 + p_n;
    } else if (i == 2) {
      row.wall_time_s = 10.0 + p_n + 96.0;
      row.p_s = p_n;
    } else {
      row.wall_time_s = 10.0 + p_n + 96.0 + (i - 2) * p_n;
      row.p_s = p_n;
    }
    log.push_back(row);
  }
  const RunMetrics m = compute_metrics(log, cfg);
  CHECK(m.continuity == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(m.playout_distortion == 0.0);
  CHECK(m.total_playout_delay == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(m.underflow_count == 1);
  CHECK_THROWS_AS(compute_metrics({}, cfg), std::invalid_argument);
}

TEST_CASE("total loss never starts playout") {
  SimConfig cfg = mini_config(100);
  cfg.policy.controller = ControllerKind::Norm;
  cfg.net.loss_rate = 1.0;
  const RunResult result = run(cfg);
  CHECK(result.metrics.continuity == 0.0);
  CHECK(result.metrics.underflow_count == 1);
}

TEST_CASE("trace shorter than the run is rejected") {
  SimConfig cfg = mini_config(100);
  cfg.trace = delay_trace(50, 0.05);
  CHECK_THROWS_AS(run(cfg), std::runtime_error);
}

TEST_CASE("Norm run metrics are exactly natural-rate") {
  SimConfig cfg = jitter_config(ControllerKind::Norm, 2000);
  const RunResult result = run(cfg);
  CHECK(result.metrics.playout_distortion == 0.0);
  CHECK(result.metrics.total_playout_delay == doctest::Approx(0.0));
  CHECK(result.metrics.max_x == 0.0);
}
