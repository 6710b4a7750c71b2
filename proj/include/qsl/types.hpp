#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qsl {

template <class S> using Matrix2 = Eigen::Matrix<std::complex<S>, 2, 2>;
template <class S> using Vector2 = Eigen::Matrix<std::complex<S>, 2, 1>;

using Complex = std::complex<double>;
using Complex2x2 = Matrix2<double>;
using DensityMatrix2 = Matrix2<double>;
using Spinor = Vector2<double>;  // components (psi_b, psi_a); initial state (1, 0)

// the drive frequency sets the time unit; everything else is expressed in it
inline constexpr double omega_drive = 1.0;

struct TimeGrid {
  double t_final = 60.0;
  double dt = 1e-3;

  long n_steps() const { return std::lround(t_final / dt); }
  double time(long k) const { return static_cast<double>(k) * dt; }
  bool valid() const { return dt > 0.0 && t_final >= dt; }
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntegrationError : std::runtime_error {
  long realization;
  double t;
  IntegrationError(const std::string& msg, long realization_, double t_)
      : std::runtime_error(msg), realization(realization_), t(t_) {}
};

}  // namespace qsl
