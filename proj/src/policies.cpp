#include "playoutlab/policies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace playoutlab {

const char* controller_name(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::Norm: return "Norm";
    case ControllerKind::Amp: return "AMP";
    case ControllerKind::Amp25: return "AMP25";
    case ControllerKind::AmpLive: return "AMPL";
    case ControllerKind::LOpt: return "LOpt";
    case ControllerKind::LOptM: return "LOptM";
    case ControllerKind::DLOpt: return "DLOpt";
    case ControllerKind::DLOptM: return "DLOptM";
  }
  return "?";
}

ControllerKind controller_from_name(const std::string& name) {
  if (name == "Norm") return ControllerKind::Norm;
  if (name == "AMP") return ControllerKind::Amp;
  if (name == "AMP25") return ControllerKind::Amp25;
  if (name == "AMPL") return ControllerKind::AmpLive;
  if (name == "LOpt") return ControllerKind::LOpt;
  if (name == "LOptM") return ControllerKind::LOptM;
  if (name == "DLOpt") return ControllerKind::DLOpt;
  if (name == "DLOptM") return ControllerKind::DLOptM;
  throw std::invalid_argument("unknown controller: " + name);
}

bool is_lyapunov(ControllerKind kind) {
  return kind == ControllerKind::LOpt || kind == ControllerKind::LOptM ||
         kind == ControllerKind::DLOpt || kind == ControllerKind::DLOptM;
}

bool is_delay_constrained(ControllerKind kind) {
  return kind == ControllerKind::DLOpt || kind == ControllerKind::DLOptM;
}

void PolicyConfig::validate() const {
  if (!(V > 0.0)) throw std::invalid_argument("PolicyConfig: need V > 0");
  if (u_bar < 0.0 || theta < 0.0)
    throw std::invalid_argument("PolicyConfig: u_bar and theta must be >= 0");
  if (d_f < 0 || d_b < 0)
    throw std::invalid_argument("PolicyConfig: d_f and d_b must be >= 0");
  if (amp_sigma < 0.0 || amp_sigma >= 1.0)
    throw std::invalid_argument("PolicyConfig: amp_sigma must lie in [0, 1)");
  if (ampl_sigma < 0.0 || ampl_sigma >= 1.0)
    throw std::invalid_argument("PolicyConfig: ampl_sigma must lie in [0, 1)");
  quality.validate();
  distortion.validate();
  bounds.validate();
}

double encoder_policy(double u_feedback, double e, const PolicyConfig& cfg) {
  if (u_feedback < 0.0)
    throw std::invalid_argument("encoder_policy: u_feedback < 0");
  if (!(e > 0.0)) throw std::invalid_argument("encoder_policy: e must be > 0");
  const QualityParams& q = cfg.quality;
  // Stationary point of V*(a/f - a/f_max) - u*e.
  const double f_star = cfg.V * q.a / (cfg.V * q.a / q.f_max + u_feedback * e);
  return std::clamp(f_star, q.f_min, q.f_max);
}

double decoder_policy(double u, const PolicyConfig& cfg) {
  if (u < 0.0) throw std::invalid_argument("decoder_policy: u < 0");
  const DistortionParams& d = cfg.distortion;
  if (d.m == 0.0) return u > 0.0 ? d.p_max : d.p_n;
  const double p_star = d.p_n + u / (2.0 * cfg.V * d.m);
  return std::clamp(p_star, d.p_min, d.p_max);
}

double decoder_policy_delay_constrained(double u, double x, double t_d,
                                        const PolicyConfig& cfg) {
  if (u < 0.0 || x < 0.0 || t_d < 0.0)
    throw std::invalid_argument("decoder_policy_delay_constrained: negative input");
  const DistortionParams& d = cfg.distortion;
  if (x > cfg.u_bar) return std::clamp(d.p_n + t_d, d.p_min, d.p_max);
  const double pressure = u - x;  // may be negative: speedup
  if (d.m == 0.0) {
    if (pressure > 0.0) return d.p_max;
    if (pressure < 0.0) return d.p_min;
    return d.p_n;
  }
  const double p_star = d.p_n + pressure / (2.0 * cfg.V * d.m);
  return std::clamp(p_star, d.p_min, d.p_max);
}

double encoder_policy_delayed(double u_delayed, double e,
                              const PolicyConfig& cfg) {
  return encoder_policy(u_delayed, e, cfg);
}

double solve_concave_1d(const std::function<double(double)>& objective,
                        double lo, double hi, double tol) {
  if (!(lo < hi)) throw std::invalid_argument("solve_concave_1d: need lo < hi");
  if (!(tol > 0.0)) throw std::invalid_argument("solve_concave_1d: need tol > 0");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace playoutlab
