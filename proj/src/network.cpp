#include "playoutlab/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace playoutlab {

double BandwidthProfile::value_at(double t) const {
  if (segments.empty())
    throw std::invalid_argument("BandwidthProfile: no segments");
  double bps = segments.front().bps;
  for (const Segment& seg : segments) {
    if (seg.start_s <= t) bps = seg.bps;
  }
  return bps;
}

void SyntheticNetConfig::validate() const {
  if (base_delay < 0.0)
    throw std::invalid_argument("SyntheticNetConfig: base_delay < 0");
  if (loss_rate < 0.0 || loss_rate > 1.0)
    throw std::invalid_argument("SyntheticNetConfig: loss_rate outside [0, 1]");
  switch (jitter.kind) {
    case JitterModel::Kind::None:
      break;
    case JitterModel::Kind::IidUniform:
      if (jitter.lo < 0.0 || jitter.lo > jitter.hi)
        throw std::invalid_argument("jitter: need 0 <= lo <= hi");
      break;
    case JitterModel::Kind::IidLognormal:
      if (jitter.sigma < 0.0)
        throw std::invalid_argument("jitter: need sigma >= 0");
      break;
    case JitterModel::Kind::TwoStateMarkov:
      if (jitter.good_delay < 0.0 || jitter.bad_delay < 0.0)
        throw std::invalid_argument("jitter: state delays must be >= 0");
      if (jitter.p_gb < 0.0 || jitter.p_gb > 1.0 || jitter.p_bg < 0.0 ||
          jitter.p_bg > 1.0 || jitter.bad_loss_rate < 0.0 ||
          jitter.bad_loss_rate > 1.0)
        throw std::invalid_argument("jitter: probabilities outside [0, 1]");
      break;
  }
  for (const auto& seg : bandwidth.segments)
    if (!(seg.bps > 0.0))
      throw std::invalid_argument("bandwidth profile: bps must be > 0");
}

NetSampler::NetSampler(const SyntheticNetConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  // splitmix64, seeded directly; draws are independent of wall time.
  state_ = cfg.seed * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL;
}

double NetSampler::uniform01() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

double NetSampler::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

NetSampler::Sample NetSampler::next() {
  Sample s;
  s.delay = cfg_.base_delay;
  double loss_rate = cfg_.loss_rate;
  switch (cfg_.jitter.kind) {
    case JitterModel::Kind::None:
      break;
    case JitterModel::Kind::IidUniform:
      s.delay += cfg_.jitter.lo + (cfg_.jitter.hi - cfg_.jitter.lo) * uniform01();
      break;
    case JitterModel::Kind::IidLognormal:
      s.delay += std::exp(cfg_.jitter.mu + cfg_.jitter.sigma * gaussian());
      break;
    case JitterModel::Kind::TwoStateMarkov: {
      const double roll = uniform01();
      if (markov_bad_) {
        if (roll < cfg_.jitter.p_bg) markov_bad_ = false;
      } else {
        if (roll < cfg_.jitter.p_gb) markov_bad_ = true;
      }
      s.delay += markov_bad_ ? cfg_.jitter.bad_delay : cfg_.jitter.good_delay;
      if (markov_bad_) loss_rate = std::max(loss_rate, cfg_.jitter.bad_loss_rate);
      break;
    }
  }
  s.lost = uniform01() < loss_rate;
  return s;
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(current);
      current.clear();
    } else if (ch != '\r') {
      current.push_back(ch);
    }
  }
  fields.push_back(current);
  return fields;
}

double parse_double(const std::string& text, std::size_t line_no,
                    const char* what) {
  try {
    std::size_t consumed = 0;
    const double value = std::stod(text, &consumed);
    if (consumed != text.size()) throw std::invalid_argument("trailing junk");
    return value;
  } catch (const std::exception&) {
    throw std::runtime_error("trace line " + std::to_string(line_no) +
                             ": bad " + std::string(what) + " '" + text + "'");
  }
}

}  // namespace

const char* const kTraceHeader =
    "frame_id,send_time_s,recv_time_s,lost,stamped_f_s,size_bits";

std::vector<FrameArrival> load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line))
    throw std::runtime_error("trace file is empty: " + path);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader)
    throw std::runtime_error("trace line 1: unexpected header '" + line + "'");

  std::vector<FrameArrival> trace;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_row(line);
    if (fields.size() != 6)
      throw std::runtime_error("trace line " + std::to_string(line_no) +
                               ": expected 6 fields, got " +
                               std::to_string(fields.size()));
    FrameArrival rec;
    rec.frame_id = static_cast<std::int64_t>(
        parse_double(fields[0], line_no, "frame_id"));
    rec.send_time = parse_double(fields[1], line_no, "send_time_s");
    const long lost_flag = static_cast<long>(parse_double(fields[3], line_no, "lost"));
    if (lost_flag != 0 && lost_flag != 1)
      throw std::runtime_error("trace line " + std::to_string(line_no) +
                               ": lost must be 0 or 1");
    if (lost_flag == 1) {
      if (!fields[2].empty())
        throw std::runtime_error("trace line " + std::to_string(line_no) +
                                 ": lost row must leave recv_time_s empty");
    } else {
      if (fields[2].empty())
        throw std::runtime_error("trace line " + std::to_string(line_no) +
                                 ": missing recv_time_s");
      rec.recv_time = parse_double(fields[2], line_no, "recv_time_s");
      if (*rec.recv_time < rec.send_time)
        throw std::runtime_error("trace line " + std::to_string(line_no) +
                                 ": recv_time_s precedes send_time_s");
    }
    rec.stamped_f = parse_double(fields[4], line_no, "stamped_f_s");
    rec.size_bits = parse_double(fields[5], line_no, "size_bits");
    if (!trace.empty() && rec.frame_id <= trace.back().frame_id)
      throw std::runtime_error("trace line " + std::to_string(line_no) +
                               ": frame_id not strictly increasing");
    trace.push_back(rec);
  }
  return trace;
}

void save_trace(const std::vector<FrameArrival>& trace,
                const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  out << kTraceHeader << '\n';
  char buf[256];
  for (const FrameArrival& rec : trace) {
    if (rec.lost()) {
      std::snprintf(buf, sizeof(buf), "%lld,%.9f,,1,%.9f,%.3f",
                    static_cast<long long>(rec.frame_id), rec.send_time,
                    rec.stamped_f, rec.size_bits);
    } else {
      std::snprintf(buf, sizeof(buf), "%lld,%.9f,%.9f,0,%.9f,%.3f",
                    static_cast<long long>(rec.frame_id), rec.send_time,
                    *rec.recv_time, rec.stamped_f, rec.size_bits);
    }
    out << buf << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<FrameArrival> synthesize_trace(const SyntheticNetConfig& cfg,
                                           std::span<const double> send_times,
                                           std::span<const double> stamped_fs) {
  if (send_times.size() != stamped_fs.size())
    throw std::invalid_argument("synthesize_trace: send_times/stamped_fs size mismatch");
  for (std::size_t i = 1; i < send_times.size(); ++i)
    if (send_times[i] < send_times[i - 1])
      throw std::invalid_argument("synthesize_trace: send_times must be nondecreasing");

  NetSampler sampler(cfg);
  std::vector<FrameArrival> trace;
  trace.reserve(send_times.size());
  for (std::size_t i = 0; i < send_times.size(); ++i) {
    const NetSampler::Sample s = sampler.next();
    FrameArrival rec;
    rec.frame_id = static_cast<std::int64_t>(i);
    rec.send_time = send_times[i];
    rec.stamped_f = stamped_fs[i];
    rec.size_bits =
        cfg.bandwidth.value_at(send_times[i]) * std::max(stamped_fs[i], 0.0);
    if (!s.lost) rec.recv_time = send_times[i] + s.delay;
    trace.push_back(rec);
  }
  return trace;
}

double estimate_e(double previous, double r_measured, double f_stamped,
                  double alpha, double floor_value, double ceil_value) {
  if (!(r_measured >= 0.0))
    throw std::invalid_argument("estimate_e: r_measured must be >= 0");
  if (!(f_stamped > 0.0))
    throw std::invalid_argument("estimate_e: f_stamped must be > 0");
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("estimate_e: alpha outside [0, 1]");
  const double raw = r_measured / f_stamped;
  const double blended = (1.0 - alpha) * previous + alpha * raw;
  return std::clamp(blended, floor_value, ceil_value);
}

double estimate_abr(std::span<const FrameArrival> window, double horizon,
                    double fallback_bps) {
  if (!(horizon > 0.0))
    throw std::invalid_argument("estimate_abr: horizon must be > 0");
  if (window.empty())
    return fallback_bps;
  double end = -1.0;
  for (const FrameArrival& rec : window)
    if (!rec.lost()) end = std::max(end, *rec.recv_time);
  if (end < 0.0) return fallback_bps;  // nothing arrived
  double bits = 0.0;
  for (const FrameArrival& rec : window)
    if (!rec.lost() && *rec.recv_time > end - horizon) bits += rec.size_bits;
  return bits / horizon;
}

}  // namespace playoutlab
