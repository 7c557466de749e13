#pragma once

#include <utility>
#include <vector>

namespace playoutlab {

/// Frame-quality model parameters. PSNR is modelled as a*ln(frame size) + c,
/// so the natural log is fixed here and any other base used during fitting is
/// absorbed into `a`. Frame sizes are in bits, bandwidth in bits per second.
struct QualityParams {
  double a = 4.91;            // dB per log-unit of frame size
  double c = 0.0;             // dB intercept; cancels in scheme-vs-scheme deltas
  double f_min = 1.0 / 120.0; // s, shortest generation interval
  double f_max = 1.0 / 30.0;  // s, longest generation interval
  double abr = 5e6;           // bits/s currently available to the encoder

  void validate() const;
};

/// Playout-distortion model parameters.
struct DistortionParams {
  double m = 1.0;             // motion intensity, >= 0
  double p_n = 1.0 / 30.0;    // s, natural playout interval
  double p_min = 1.0 / 60.0;  // s
  double p_max = 1.0 / 15.0;  // s

  void validate() const;
};

/// Average frame size (bits) the rate controller targets when generating one
/// frame every `f` seconds at bandwidth `abr`.
double avg_frame_size(double abr, double f);

/// PSNR (dB) of a frame generated at interval `f` under the fitted log model.
double psnr(const QualityParams& q, double f);

/// Frame-quality utility g: the PSNR model tilted so that its maximum over
/// [f_min, f_max] sits exactly at f_max. Strictly concave on the interval.
double frame_quality(const QualityParams& q, double f);

/// Playout-distortion h = m*(p_n - p)^2. Zero exactly at the natural interval.
double playout_distortion(const DistortionParams& d, double p);

/// Least-squares fit of psnr = a*ln(size_bits) + c over (size_bits, psnr_dB)
/// samples. Needs at least two distinct sizes. Returns (a, c).
std::pair<double, double> fit_psnr_coeffs(
    const std::vector<std::pair<double, double>>& samples);

}  // namespace playoutlab
