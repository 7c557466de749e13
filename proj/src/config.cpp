#include "playoutlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace playoutlab {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path);
}

KeyValueFile KeyValueFile::parse_string(const std::string& text,
                                        const std::string& origin) {
  KeyValueFile kv;
  kv.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                               ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                               ": empty key");
    kv.values_[key] = value;
    kv.read_[key] = false;
  }
  return kv;
}

bool KeyValueFile::has(const std::string& key) const {
  const auto it = values_.find(key);
  if (it != values_.end()) read_[key] = true;
  return it != values_.end();
}

std::string KeyValueFile::get_string(const std::string& key,
                                     const std::string& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  read_[key] = true;
  return it->second;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  read_[key] = true;
  try {
    std::size_t consumed = 0;
    const double v = std::stod(it->second, &consumed);
    if (consumed != it->second.size()) throw std::invalid_argument("junk");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(origin_ + ": key '" + key +
                             "' has non-numeric value '" + it->second + "'");
  }
}

std::int64_t KeyValueFile::get_int(const std::string& key,
                                   std::int64_t fallback) const {
  const double v = get_double(key, static_cast<double>(fallback));
  return static_cast<std::int64_t>(v);
}

std::vector<double> KeyValueFile::get_double_list(const std::string& key) const {
  std::vector<double> out;
  const std::string raw = get_string(key, "");
  std::istringstream in(raw);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw std::runtime_error(origin_ + ": key '" + key +
                               "' has non-numeric list item '" + item + "'");
    }
  }
  return out;
}

std::vector<std::string> KeyValueFile::get_string_list(
    const std::string& key) const {
  std::vector<std::string> out;
  const std::string raw = get_string(key, "");
  std::istringstream in(raw);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> KeyValueFile::unread_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, was_read] : read_)
    if (!was_read) out.push_back(key);
  return out;
}

namespace {

JitterModel jitter_from(const KeyValueFile& kv) {
  JitterModel j;
  const std::string kind = kv.get_string("net.jitter", "none");
  if (kind == "none") {
    j.kind = JitterModel::Kind::None;
  } else if (kind == "iid_uniform") {
    j.kind = JitterModel::Kind::IidUniform;
    j.lo = kv.get_double("net.jitter_lo", 0.0);
    j.hi = kv.get_double("net.jitter_hi", 0.0);
  } else if (kind == "iid_lognormal") {
    j.kind = JitterModel::Kind::IidLognormal;
    j.mu = kv.get_double("net.jitter_mu", 0.0);
    j.sigma = kv.get_double("net.jitter_sigma", 0.0);
  } else if (kind == "two_state_markov") {
    j.kind = JitterModel::Kind::TwoStateMarkov;
    j.good_delay = kv.get_double("net.good_delay_s", 0.0);
    j.bad_delay = kv.get_double("net.bad_delay_s", 0.0);
    j.p_gb = kv.get_double("net.p_gb", 0.0);
    j.p_bg = kv.get_double("net.p_bg", 0.0);
  } else {
    throw std::runtime_error("unknown net.jitter kind: " + kind);
  }
  return j;
}

BandwidthProfile bandwidth_from(const KeyValueFile& kv) {
  BandwidthProfile profile;
  if (kv.has("net.bandwidth_profile")) {
    profile.segments.clear();
    for (const std::string& part : kv.get_string_list("net.bandwidth_profile")) {
      const auto colon = part.find(':');
      if (colon == std::string::npos)
        throw std::runtime_error("net.bandwidth_profile entries are start:bps");
      BandwidthProfile::Segment seg;
      seg.start_s = std::stod(part.substr(0, colon));
      seg.bps = std::stod(part.substr(colon + 1));
      profile.segments.push_back(seg);
    }
  } else {
    profile.segments = {{0.0, kv.get_double("net.bandwidth_bps", 5e6)}};
  }
  return profile;
}

}  // namespace

SimConfig sim_config_from(const KeyValueFile& kv) {
  SimConfig cfg;
  cfg.total_frames = kv.get_int("sim.total_frames", 28800);
  cfg.prebuffer_s = kv.get_double("sim.prebuffer_s", 0.5);
  cfg.rebuffer_threshold_fraction =
      kv.get_double("sim.rebuffer_threshold_fraction", 0.5);
  cfg.seed = static_cast<std::uint64_t>(kv.get_int("sim.seed", 1));
  cfg.sender_delay_s = kv.get_double("sim.sender_delay_s", 0.0);

  PolicyConfig& pol = cfg.policy;
  pol.controller = controller_from_name(kv.get_string("policy.controller", "LOpt"));
  pol.V = kv.get_double("policy.V", 1.0);
  pol.u_bar = kv.get_double("policy.u_bar", 100.0);
  pol.theta = kv.get_double("policy.theta", 4.27);
  pol.d_f = static_cast<int>(kv.get_int("policy.d_f", 7));
  pol.d_b = static_cast<int>(kv.get_int("policy.d_b", 10));
  const std::string update = kv.get_string("policy.u_update", "step");
  if (update == "step")
    pol.u_update = PenaltyUpdate::Step;
  else if (update == "df_slot")
    pol.u_update = PenaltyUpdate::DfSlot;
  else
    throw std::runtime_error("policy.u_update must be step or df_slot");
  pol.amp_sigma = kv.get_double("policy.amp_sigma", 0.25);
  pol.ampl_sigma = kv.get_double("policy.ampl_sigma", 0.40);
  pol.amp_target_frames = kv.get_int("policy.amp_target_frames", -1);

  pol.quality.a = kv.get_double("quality.a", 4.91);
  pol.quality.c = kv.get_double("quality.c", 0.0);
  pol.quality.f_min = kv.get_double("quality.f_min", 1.0 / 120.0);
  pol.quality.f_max = kv.get_double("quality.f_max", 1.0 / 30.0);

  pol.distortion.m = kv.get_double("distortion.m", 1.0);
  pol.distortion.p_n = kv.get_double("distortion.p_n", 1.0 / 30.0);
  pol.distortion.p_min = kv.get_double("distortion.p_min", 1.0 / 60.0);
  pol.distortion.p_max = kv.get_double("distortion.p_max", 1.0 / 15.0);

  cfg.estimator.alpha = kv.get_double("estimator.alpha", 1.0);
  cfg.estimator.e_floor = kv.get_double("estimator.e_floor", 0.25);
  cfg.estimator.e_ceil = kv.get_double("estimator.e_ceil", 4.0);

  cfg.net.base_delay = kv.get_double("net.base_delay_s", 0.0);
  cfg.net.jitter = jitter_from(kv);
  cfg.net.loss_rate = kv.get_double("net.loss_rate", 0.0);
  cfg.net.bandwidth = bandwidth_from(kv);
  cfg.net.seed = cfg.seed;

  // Derived defaults: interval box mirrors the quality/distortion boxes, the
  // receiving bounds follow the f box scaled by the estimator clamps, and the
  // encoder's bandwidth view starts at the profile's initial rate.
  IntervalBounds& bounds = pol.bounds;
  bounds.f_min = pol.quality.f_min;
  bounds.f_max = pol.quality.f_max;
  bounds.p_min = pol.distortion.p_min;
  bounds.p_max = pol.distortion.p_max;
  bounds.r_min =
      kv.get_double("bounds.r_min", pol.quality.f_min * cfg.estimator.e_floor);
  bounds.r_max =
      kv.get_double("bounds.r_max", pol.quality.f_max * cfg.estimator.e_ceil);
  pol.quality.abr = cfg.net.bandwidth.value_at(0.0);

  const std::string variant =
      kv.get_string("bounds.beta_variant",
                    pol.controller == ControllerKind::LOptM ||
                            pol.controller == ControllerKind::DLOptM
                        ? "loose"
                        : "conservative");
  if (variant == "conservative")
    pol.beta_variant = BetaVariant::Conservative;
  else if (variant == "loose")
    pol.beta_variant = BetaVariant::Loose;
  else
    throw std::runtime_error("bounds.beta_variant must be conservative or loose");
  if (pol.controller == ControllerKind::LOptM ||
      pol.controller == ControllerKind::DLOptM)
    pol.beta_variant = BetaVariant::Loose;

  cfg.validate();
  return cfg;
}

SimConfig load_sim_config(const std::string& path) {
  const KeyValueFile kv = KeyValueFile::parse_file(path);
  SimConfig cfg = sim_config_from(kv);
  auto leftover = kv.unread_keys();
  std::erase_if(leftover, [](const std::string& k) {
    return k.rfind("sweep.", 0) == 0;  // sweep keys live in the same file
  });
  if (!leftover.empty()) {
    std::string msg = path + ": unknown configuration keys:";
    for (const auto& k : leftover) msg += " " + k;
    throw std::runtime_error(msg);
  }
  return cfg;
}

}  // namespace playoutlab
