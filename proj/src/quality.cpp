#include "playoutlab/quality.hpp"

#include <cmath>
#include <stdexcept>

namespace playoutlab {

void QualityParams::validate() const {
  if (!(f_min > 0.0) || !(f_min < f_max))
    throw std::invalid_argument("QualityParams: need 0 < f_min < f_max");
  if (!(a > 0.0)) throw std::invalid_argument("QualityParams: need a > 0");
}

void DistortionParams::validate() const {
  if (!(p_min > 0.0) || !(p_min <= p_n) || !(p_n <= p_max))
    throw std::invalid_argument("DistortionParams: need 0 < p_min <= p_n <= p_max");
  if (m < 0.0) throw std::invalid_argument("DistortionParams: need m >= 0");
}

double avg_frame_size(double abr, double f) {
  if (!(abr > 0.0)) throw std::invalid_argument("avg_frame_size: abr must be > 0");
  if (!(f > 0.0)) throw std::invalid_argument("avg_frame_size: f must be > 0");
  return abr * f;
}

double psnr(const QualityParams& q, double f) {
  if (!(f > 0.0)) throw std::invalid_argument("psnr: f must be > 0");
  return q.a * std::log(q.abr * f) + q.c;
}

double frame_quality(const QualityParams& q, double f) {
  if (f < q.f_min || f > q.f_max)
    throw std::invalid_argument("frame_quality: f outside [f_min, f_max]");
  return q.a * std::log(q.abr * f) + q.c - q.a * f / q.f_max;
}

double playout_distortion(const DistortionParams& d, double p) {
  if (p < d.p_min || p > d.p_max)
    throw std::invalid_argument("playout_distortion: p outside [p_min, p_max]");
  const double dev = d.p_n - p;
  return d.m * dev * dev;
}

std::pair<double, double> fit_psnr_coeffs(
    const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("fit_psnr_coeffs: need at least 2 samples");

  // Normal equations for y = a*x + c with x = ln(size).
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(samples.size());
  for (const auto& [size, y] : samples) {
    if (!(size > 0.0))
      throw std::invalid_argument("fit_psnr_coeffs: frame sizes must be > 0");
    const double x = std::log(size);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-12 * n * (1.0 + sxx))
    throw std::invalid_argument("fit_psnr_coeffs: need at least 2 distinct sizes");
  const double a = (n * sxy - sx * sy) / det;
  const double c = (sy - a * sx) / n;
  return {a, c};
}

}  // namespace playoutlab
