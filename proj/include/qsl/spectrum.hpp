#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "qsl/types.hpp"

namespace qsl {

struct SpectralPeak {
  double omega = 0.0;      // angular frequency of the strongest bin
  double power = 0.0;      // unnormalized |DFT|^2 at that bin
  double bin_width = 0.0;  // angular frequency resolution, 2*pi / window length
};

namespace detail {

// Hann-windowed, mean-subtracted power of x[i0 .. i0+len) at angular frequency omega
inline double hann_power(const std::vector<double>& x, size_t i0, size_t len, double dt,
                         double omega) {
  double mean = 0.0;
  for (size_t j = 0; j < len; ++j) mean += x[i0 + j];
  mean /= static_cast<double>(len);
  double re = 0.0, im = 0.0;
  const double two_pi = 2.0 * std::numbers::pi;
  for (size_t j = 0; j < len; ++j) {
    const double w = 0.5 * (1.0 - std::cos(two_pi * static_cast<double>(j) /
                                           static_cast<double>(len - 1)));
    const double v = (x[i0 + j] - mean) * w;
    const double phase = omega * static_cast<double>(j) * dt;
    re += v * std::cos(phase);
    im -= v * std::sin(phase);
  }
  return re * re + im * im;
}

}  // namespace detail

// strongest natural DFT bin (omega_k = 2*pi*k / T) of the whole record inside
// [omega_lo, omega_hi]
inline SpectralPeak dominant_frequency(const std::vector<double>& x, double dt, double omega_lo,
                                       double omega_hi) {
  if (x.size() < 4 || dt <= 0.0) throw ConfigError("dominant_frequency needs a real time series");
  const size_t len = x.size();
  const double span = static_cast<double>(len - 1) * dt;
  const double dw = 2.0 * std::numbers::pi / span;
  SpectralPeak peak;
  peak.bin_width = dw;
  const long k_lo = std::max(1L, static_cast<long>(std::ceil(omega_lo / dw)));
  const long k_hi = static_cast<long>(std::floor(omega_hi / dw));
  for (long k = k_lo; k <= k_hi; ++k) {
    const double w = static_cast<double>(k) * dw;
    const double p = detail::hann_power(x, 0, len, dt, w);
    if (p > peak.power) {
      peak.power = p;
      peak.omega = w;
    }
  }
  return peak;
}

// Welch average over 50%-overlapping Hann segments of duration seg_time; the
// shorter window trades resolution for robustness against slow modulation of
// the carrier (sidebands of a slowly modulated line merge back into one peak)
inline SpectralPeak welch_dominant_frequency(const std::vector<double>& x, double dt,
                                             double seg_time, double omega_lo, double omega_hi) {
  if (dt <= 0.0 || seg_time <= 0.0) throw ConfigError("welch_dominant_frequency: bad sampling");
  const size_t len = static_cast<size_t>(std::lround(seg_time / dt)) + 1;
  if (len < 4 || len > x.size()) throw ConfigError("welch_dominant_frequency: segment too long");
  const size_t hop = len / 2;
  const double span = static_cast<double>(len - 1) * dt;
  const double dw = 2.0 * std::numbers::pi / span;
  SpectralPeak peak;
  peak.bin_width = dw;
  const long k_lo = std::max(1L, static_cast<long>(std::ceil(omega_lo / dw)));
  const long k_hi = static_cast<long>(std::floor(omega_hi / dw));
  for (long k = k_lo; k <= k_hi; ++k) {
    const double w = static_cast<double>(k) * dw;
    double p = 0.0;
    size_t n_seg = 0;
    for (size_t i0 = 0; i0 + len <= x.size(); i0 += hop) {
      p += detail::hann_power(x, i0, len, dt, w);
      ++n_seg;
    }
    p /= static_cast<double>(n_seg);
    if (p > peak.power) {
      peak.power = p;
      peak.omega = w;
    }
  }
  return peak;
}

}  // namespace qsl
