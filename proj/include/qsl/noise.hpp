#pragma once

#include <cmath>
#include <cstdint>

#include "qsl/types.hpp"

namespace qsl {

// splitmix64 finalizer; full-avalanche 64-bit mix
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Counter-style generator keyed by (seed, realization, axis). Streams with
// distinct keys are independent for all practical purposes and a given key
// always reproduces the same sequence, so ensembles can be farmed out to any
// number of workers without changing the draws.
class RngStream {
 public:
  RngStream() : RngStream(0, 0, 0) {}

  RngStream(std::uint64_t seed, std::uint64_t realization, std::uint64_t axis) {
    state_ = mix64(seed + 0x9e3779b97f4a7c15ull);
    state_ = mix64(state_ ^ (realization + 0xd1b54a32d192ed03ull));
    state_ = mix64(state_ ^ (axis + 0x8cb92ba72f3d8dd7ull));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }

  // uniform on (0, 1]; never 0, so log() is safe
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // standard normal via Box-Muller; second value of the pair is cached
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// increment of a Wiener process over dt: Normal(0, dt)
inline double wiener_increment(RngStream& stream, double dt) {
  return stream.gaussian() * std::sqrt(dt);
}

struct OUState {
  double value = 0.0;
  double theta = 1.0;  // mean-reversion rate, 1/tau_corr
  double w0 = 0.0;     // volatility
  double mu = 0.0;     // mean
};

// exact Gaussian transition of dO = theta (mu - O) dt + w0 dW
inline OUState ou_exact_step(const OUState& s, double dt, double z) {
  OUState out = s;
  const double e = std::exp(-s.theta * dt);
  const double sd = s.w0 * std::sqrt((1.0 - e * e) / (2.0 * s.theta));
  out.value = s.value * e + s.mu * (1.0 - e) + sd * z;
  return out;
}

inline double ou_mean(double t, double o0, double mu, double theta) {
  const double e = std::exp(-theta * t);
  return o0 * e + mu * (1.0 - e);
}

// covariance of O(t), O(t') for a deterministic start at 0
inline double ou_autocovariance(double t, double t_prime, double theta, double w0) {
  return w0 * w0 / (2.0 * theta) *
         (std::exp(-theta * std::abs(t - t_prime)) - std::exp(-theta * (t + t_prime)));
}

}  // namespace qsl
