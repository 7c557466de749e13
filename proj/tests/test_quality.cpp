#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "playoutlab/quality.hpp"
#include "test_util.hpp"

using namespace playoutlab;
using playoutlab::testing::TestRng;

namespace {

QualityParams default_quality() {
  QualityParams q;
  q.a = 4.91;
  q.c = 0.0;
  q.f_min = 1.0 / 120.0;
  q.f_max = 1.0 / 30.0;
  q.abr = 5e6;
  return q;
}

}  // namespace

TEST_CASE("avg_frame_size evaluates ABR * f") {
  CHECK(avg_frame_size(5e6, 1.0 / 30.0) == doctest::Approx(166666.67).epsilon(1e-6));
  CHECK(avg_frame_size(1e6, 1.0 / 25.0) == doctest::Approx(40000.0));
  // vanishing interval limit
  CHECK(avg_frame_size(5e6, 1e-12) == doctest::Approx(5e-6));
  CHECK_THROWS_AS(avg_frame_size(0.0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(avg_frame_size(1e6, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(avg_frame_size(-1.0, 0.01), std::invalid_argument);
}

TEST_CASE("avg_frame_size is linear in both arguments") {
  TestRng rng(7);
  for (int i = 0; i < 200; ++i) {
    const double abr = rng.uniform(1e4, 1e8);
    const double f = rng.uniform(1e-3, 0.2);
    const double k = rng.uniform(0.1, 10.0);
    CHECK(avg_frame_size(k * abr, f) ==
          doctest::Approx(k * avg_frame_size(abr, f)));
    CHECK(avg_frame_size(abr, k * f) ==
          doctest::Approx(k * avg_frame_size(abr, f)));
  }
}

TEST_CASE("psnr follows the fitted log model") {
  QualityParams q = default_quality();
  const double expected = 4.91 * std::log(5e6 / 30.0);
  CHECK(psnr(q, 1.0 / 30.0) == doctest::Approx(expected));
  CHECK(psnr(q, 1.0 / 30.0) == doctest::Approx(59.04).epsilon(1e-4));

  // abr * f = 1 leaves only the intercept
  q.c = 7.5;
  q.abr = 100.0;
  CHECK(psnr(q, 0.01) == doctest::Approx(7.5));
  CHECK_THROWS_AS(psnr(q, 0.0), std::invalid_argument);
}

TEST_CASE("psnr differences reduce to the log identity") {
  QualityParams q = default_quality();
  TestRng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double f1 = rng.uniform(1e-3, 0.1);
    const double f2 = rng.uniform(1e-3, 0.1);
    CHECK(psnr(q, f2) - psnr(q, f1) ==
          doctest::Approx(q.a * std::log(f2 / f1)).epsilon(1e-9));
  }
}

TEST_CASE("frame_quality value and maximum at f_max") {
  const QualityParams q = default_quality();
  CHECK(frame_quality(q, q.f_max) ==
        doctest::Approx(q.a * std::log(q.abr * q.f_max) + q.c - q.a));

  // derivative vanishes at f_max (one-sided finite difference)
  const double h = 1e-7;
  const double slope = (frame_quality(q, q.f_max) - frame_quality(q, q.f_max - h)) / h;
  CHECK(std::abs(slope) < 1e-3);

  CHECK(frame_quality(q, 1.0 / 60.0) == doctest::Approx(53.18).epsilon(1e-4));
  CHECK_THROWS_AS(frame_quality(q, q.f_max * 1.01), std::invalid_argument);
  CHECK_THROWS_AS(frame_quality(q, q.f_min * 0.99), std::invalid_argument);
}

TEST_CASE("frame_quality is strictly concave and nondecreasing on the box") {
  const QualityParams q = default_quality();
  TestRng rng(13);
  for (int i = 0; i < 500; ++i) {
    const double f1 = rng.uniform(q.f_min, q.f_max);
    const double f2 = rng.uniform(q.f_min, q.f_max);
    if (std::abs(f1 - f2) < 1e-6) continue;
    const double lambda = rng.uniform(0.05, 0.95);
    const double mid = lambda * f1 + (1.0 - lambda) * f2;
    CHECK(frame_quality(q, mid) >
          lambda * frame_quality(q, f1) + (1.0 - lambda) * frame_quality(q, f2));

    const double lo = std::min(f1, f2);
    const double hi = std::max(f1, f2);
    CHECK(frame_quality(q, hi) >= frame_quality(q, lo) - 1e-12);
  }
}

TEST_CASE("playout_distortion is zero at the natural interval") {
  DistortionParams d;
  CHECK(playout_distortion(d, d.p_n) == doctest::Approx(0.0));
  CHECK(playout_distortion(d, 1.0 / 15.0) ==
        doctest::Approx(1.0 / 900.0).epsilon(1e-9));
  CHECK_THROWS_AS(playout_distortion(d, d.p_max * 1.01), std::invalid_argument);
  CHECK_THROWS_AS(playout_distortion(d, d.p_min * 0.99), std::invalid_argument);
}

TEST_CASE("playout_distortion is symmetric, convex and nonnegative") {
  DistortionParams d;
  d.m = 2.5;
  TestRng rng(17);
  for (int i = 0; i < 500; ++i) {
    const double delta = rng.uniform(0.0, d.p_n - d.p_min);
    CHECK(playout_distortion(d, d.p_n + delta) ==
          doctest::Approx(playout_distortion(d, d.p_n - delta)));

    const double p1 = rng.uniform(d.p_min, d.p_max);
    const double p2 = rng.uniform(d.p_min, d.p_max);
    const double lambda = rng.uniform(0.0, 1.0);
    const double mid = lambda * p1 + (1.0 - lambda) * p2;
    CHECK(playout_distortion(d, mid) <=
          lambda * playout_distortion(d, p1) +
              (1.0 - lambda) * playout_distortion(d, p2) + 1e-15);
    CHECK(playout_distortion(d, p1) >= 0.0);
  }
}

TEST_CASE("fit_psnr_coeffs recovers a noiseless model") {
  std::vector<std::pair<double, double>> samples;
  for (double size = 1e3; size < 1e7; size *= 3.7)
    samples.emplace_back(size, 4.91 * std::log(size) + 10.0);
  const auto [a, c] = fit_psnr_coeffs(samples);
  CHECK(a == doctest::Approx(4.91).epsilon(1e-10));
  CHECK(c == doctest::Approx(10.0).epsilon(1e-10));
}

TEST_CASE("fit_psnr_coeffs two-point solution") {
  // Sizes e^1 and e^2 give ln(size) = 1 and 2; solve the 2x2 system directly.
  const double k1 = 31.7, k2 = 36.2;
  const std::vector<std::pair<double, double>> samples = {
      {std::exp(1.0), k1}, {std::exp(2.0), k2}};
  // Cramer on [1 1; 2 1] [a c]' = [k1 k2]'
  const double det = 1.0 * 1.0 - 1.0 * 2.0;
  const double a_expected = (k1 - k2) / det;
  const double c_expected = (1.0 * k2 - 2.0 * k1) / det;
  const auto [a, c] = fit_psnr_coeffs(samples);
  CHECK(a == doctest::Approx(a_expected).epsilon(1e-12));
  CHECK(c == doctest::Approx(c_expected).epsilon(1e-12));
  CHECK(a == doctest::Approx(k2 - k1));
  CHECK(c == doctest::Approx(2.0 * k1 - k2));
}

TEST_CASE("fit_psnr_coeffs rejects degenerate input") {
  CHECK_THROWS_AS(fit_psnr_coeffs({{1e5, 30.0}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_psnr_coeffs({{1e5, 30.0}, {1e5, 31.0}, {1e5, 29.0}}),
                  std::invalid_argument);
}

TEST_CASE("fit_psnr_coeffs shifts only the intercept under constant offset") {
  TestRng rng(23);
  std::vector<std::pair<double, double>> base, shifted;
  for (int i = 0; i < 20; ++i) {
    const double size = rng.uniform(1e3, 1e7);
    const double y = rng.uniform(20.0, 50.0);
    base.emplace_back(size, y);
    shifted.emplace_back(size, y + 3.25);
  }
  const auto [a0, c0] = fit_psnr_coeffs(base);
  const auto [a1, c1] = fit_psnr_coeffs(shifted);
  CHECK(a1 == doctest::Approx(a0).epsilon(1e-9));
  CHECK(c1 == doctest::Approx(c0 + 3.25).epsilon(1e-9));
}
