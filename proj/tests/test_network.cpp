#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "doctest.h"
#include "playoutlab/network.hpp"
#include "test_util.hpp"

using namespace playoutlab;
using playoutlab::testing::TestRng;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("trace save/load round-trip preserves every field") {
  std::vector<FrameArrival> trace;
  for (int i = 0; i < 5; ++i) {
    FrameArrival rec;
    rec.frame_id = i;
    rec.send_time = 0.1 * (i + 1);
    rec.stamped_f = 1.0 / 30.0;
    rec.size_bits = 166666.667;
    if (i != 3) rec.recv_time = rec.send_time + 0.123456789;
    trace.push_back(rec);
  }
  const std::string path = temp_path("playoutlab_trace_rt.csv");
  save_trace(trace, path);
  const auto loaded = load_trace(path);
  REQUIRE(loaded.size() == trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    CHECK(loaded[i].frame_id == trace[i].frame_id);
    CHECK(loaded[i].send_time == doctest::Approx(trace[i].send_time).epsilon(1e-8));
    CHECK(loaded[i].lost() == trace[i].lost());
    if (!trace[i].lost())
      CHECK(*loaded[i].recv_time == doctest::Approx(*trace[i].recv_time).epsilon(1e-8));
    CHECK(loaded[i].stamped_f == doctest::Approx(trace[i].stamped_f).epsilon(1e-8));
    CHECK(loaded[i].size_bits == doctest::Approx(trace[i].size_bits).epsilon(1e-9));
  }

  // a second save of the parsed trace is byte-identical (stable at the
  // nine-digit write precision)
  const std::string path2 = temp_path("playoutlab_trace_rt2.csv");
  save_trace(loaded, path2);
  std::ifstream f1(path), f2(path2);
  const std::string text1((std::istreambuf_iterator<char>(f1)),
                          std::istreambuf_iterator<char>());
  const std::string text2((std::istreambuf_iterator<char>(f2)),
                          std::istreambuf_iterator<char>());
  CHECK(text1 == text2);
}

TEST_CASE("trace parser names the offending line") {
  const std::string header =
      "frame_id,send_time_s,recv_time_s,lost,stamped_f_s,size_bits\n";
  const std::string path = temp_path("playoutlab_trace_bad.csv");

  write_text(path, header + "0,0.1,0.2,0,0.0333,1000\n1,bogus,0.3,0,0.0333,1000\n");
  CHECK_THROWS_WITH_AS(load_trace(path),
                       doctest::Contains("line 3"), std::runtime_error);

  // receive before send
  write_text(path, header + "0,0.5,0.2,0,0.0333,1000\n");
  CHECK_THROWS_AS(load_trace(path), std::runtime_error);

  // non-monotone ids
  write_text(path, header + "1,0.1,0.2,0,0.0333,1000\n0,0.2,0.3,0,0.0333,1000\n");
  CHECK_THROWS_AS(load_trace(path), std::runtime_error);

  // lost row must leave recv empty
  write_text(path, header + "0,0.1,0.2,1,0.0333,1000\n");
  CHECK_THROWS_AS(load_trace(path), std::runtime_error);

  // lost row maps to the missing-arrival state
  write_text(path, header + "0,0.1,,1,0.0333,1000\n");
  const auto loaded = load_trace(path);
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].lost());
}

TEST_CASE("synthesize_trace degenerate and deterministic behaviour") {
  SyntheticNetConfig cfg;
  cfg.base_delay = 0.235;
  cfg.seed = 99;
  std::vector<double> sends, stamps;
  for (int i = 0; i < 50; ++i) {
    sends.push_back(0.0333 * (i + 1));
    stamps.push_back(0.0333);
  }

  const auto trace = synthesize_trace(cfg, sends, stamps);
  REQUIRE(trace.size() == sends.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    CHECK_FALSE(trace[i].lost());
    CHECK(*trace[i].recv_time == doctest::Approx(sends[i] + 0.235).epsilon(1e-12));
  }

  // same seed, same trace
  cfg.jitter.kind = JitterModel::Kind::IidLognormal;
  cfg.jitter.mu = -1.4481;
  cfg.jitter.sigma = 0.5;
  cfg.loss_rate = 0.1;
  const auto a = synthesize_trace(cfg, sends, stamps);
  const auto b = synthesize_trace(cfg, sends, stamps);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].lost() == b[i].lost());
    if (!a[i].lost()) CHECK(*a[i].recv_time == *b[i].recv_time);
  }

  cfg.loss_rate = 1.0;
  for (const auto& rec : synthesize_trace(cfg, sends, stamps))
    CHECK(rec.lost());

  std::vector<double> decreasing = {0.2, 0.1};
  std::vector<double> two_stamps = {0.03, 0.03};
  CHECK_THROWS_AS(synthesize_trace(cfg, decreasing, two_stamps),
                  std::invalid_argument);
}

TEST_CASE("estimate_e raw estimator and smoothing") {
  CHECK(estimate_e(1.0, 1.0 / 30.0, 1.0 / 30.0, 1.0, 0.25, 4.0) ==
        doctest::Approx(1.0));
  CHECK(estimate_e(1.0, 0.04, 1.0 / 30.0, 1.0, 0.25, 4.0) ==
        doctest::Approx(1.2));
  // alpha = 0 freezes the previous value
  CHECK(estimate_e(1.7, 0.04, 1.0 / 30.0, 0.0, 0.25, 4.0) ==
        doctest::Approx(1.7));
  // clamp guards
  CHECK(estimate_e(1.0, 10.0, 0.01, 1.0, 0.25, 4.0) == doctest::Approx(4.0));
  CHECK(estimate_e(1.0, 0.0, 0.01, 1.0, 0.25, 4.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(estimate_e(1.0, 0.04, 0.0, 1.0, 0.25, 4.0),
                  std::invalid_argument);
}

TEST_CASE("EwmaScaleEstimator recovers a constant scaling factor") {
  TestRng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const double e0 = rng.uniform(0.3, 3.0);
    EwmaScaleEstimator est(1.0, 0.25, 4.0);
    for (int i = 0; i < 20; ++i) {
      const double f = rng.uniform(0.01, 0.04);
      CHECK(est.update(e0 * f, f) == doctest::Approx(e0).epsilon(1e-12));
    }
  }
}

TEST_CASE("estimate_abr trailing-window throughput") {
  std::vector<FrameArrival> window;
  for (int i = 0; i < 10; ++i) {
    FrameArrival rec;
    rec.frame_id = i;
    rec.send_time = 0.1 * i;
    rec.recv_time = 0.1 * i + 0.05;  // arrivals span 0.05 .. 0.95
    rec.size_bits = 20000;
    window.push_back(rec);
  }
  CHECK(estimate_abr(window, 1.0, 1e6) == doctest::Approx(200000.0));

  CHECK(estimate_abr({}, 1.0, 123.0) == doctest::Approx(123.0));

  for (auto& rec : window) rec.recv_time.reset();
  CHECK(estimate_abr(window, 1.0, 456.0) == doctest::Approx(456.0));

  CHECK_THROWS_AS(estimate_abr(window, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("feedback channel is an exact slot shift") {
  TestRng rng(61);
  const int d_b = 7;
  FeedbackChannel channel(d_b, 0.5);
  std::vector<double> input;
  for (int t = 0; t < 100; ++t) {
    const double v = rng.uniform(0.0, 10.0);
    input.push_back(v);
    channel.record(v);
  }
  for (int t = 0; t < 100; ++t) {
    if (t < d_b)
      CHECK(channel.at(t) == doctest::Approx(0.5));
    else
      CHECK(channel.at(t) == doctest::Approx(input[t - d_b]));
  }
}

TEST_CASE("bandwidth profile is piecewise constant") {
  BandwidthProfile profile;
  profile.segments = {{0.0, 5e6}, {10.0, 2e6}, {20.0, 8e6}};
  CHECK(profile.value_at(0.0) == doctest::Approx(5e6));
  CHECK(profile.value_at(9.99) == doctest::Approx(5e6));
  CHECK(profile.value_at(10.0) == doctest::Approx(2e6));
  CHECK(profile.value_at(25.0) == doctest::Approx(8e6));
}
