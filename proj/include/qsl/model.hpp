#pragma once

#include <array>
#include <optional>
#include <string>

#include "qsl/core.hpp"
#include "qsl/types.hpp"

namespace qsl {

struct PhysicalParams {
  double delta = 1.0;  // level splitting, units of the drive frequency
  double rabi = 0.2;   // drive amplitude Omega

  // detuning Delta = omega - delta with omega = 1
  double detuning() const { return omega_drive - delta; }
};

enum class Frame { Lab, RwaFull, RwaNaive };

enum class NoiseKind { None, White, Ou };

struct NoiseModel {
  NoiseKind kind = NoiseKind::None;
  std::array<double, 3> w0{0.0, 0.0, 0.0};     // per-axis volatility, 0 = axis absent
  std::array<double, 3> theta{0.0, 0.0, 0.0};  // OU mean-reversion rate
  std::array<double, 3> mu{0.0, 0.0, 0.0};     // OU mean
  std::array<double, 3> o0{0.0, 0.0, 0.0};     // OU initial value

  bool axis_active(int i) const { return kind != NoiseKind::None && w0[static_cast<size_t>(i)] != 0.0; }

  int n_active() const {
    int n = 0;
    for (int i = 0; i < 3; ++i) n += axis_active(i) ? 1 : 0;
    return n;
  }

  bool any() const { return n_active() > 0; }

  bool isotropic() const {
    return axis_active(0) && w0[0] == w0[1] && w0[1] == w0[2] &&
           (kind != NoiseKind::Ou || (theta[0] == theta[1] && theta[1] == theta[2]));
  }
};

struct Scenario {
  PhysicalParams params;
  Frame frame = Frame::Lab;
  NoiseModel noise;
  TimeGrid grid;
  long n_realizations = 100;
  std::uint64_t seed = 0;

  void validate() const {
    if (!grid.valid()) throw ConfigError("time grid invalid: need dt > 0 and t_final >= dt");
    if (n_realizations < 1) throw ConfigError("n_realizations must be >= 1");
    if (params.rabi < 0) throw ConfigError("rabi must be >= 0");
    for (int i = 0; i < 3; ++i) {
      if (noise.w0[static_cast<size_t>(i)] < 0) throw ConfigError("noise volatility w0 must be >= 0");
      if (noise.kind == NoiseKind::Ou && noise.axis_active(i) && noise.theta[static_cast<size_t>(i)] <= 0)
        throw ConfigError("OU mean-reversion rate theta must be > 0");
    }
  }
};

// H(t) = [[delta/2, Omega sin t], [Omega sin t, -delta/2]]
template <class S = double>
Matrix2<S> lab_hamiltonian(double t, const PhysicalParams& p) {
  using C = std::complex<S>;
  const S c = static_cast<S>(p.rabi * std::sin(omega_drive * t));
  Matrix2<S> h;
  h << C(static_cast<S>(p.delta / 2)), C(c), C(c), C(static_cast<S>(-p.delta / 2));
  return h;
}

// time-independent rotating-frame Hamiltonian [[-Delta, Omega/2], [Omega/2, 0]]
template <class S = double>
Matrix2<S> rwa_hamiltonian(const PhysicalParams& p) {
  using C = std::complex<S>;
  Matrix2<S> h;
  h << C(static_cast<S>(-p.detuning())), C(static_cast<S>(p.rabi / 2)),
       C(static_cast<S>(p.rabi / 2)), C(0);
  return h;
}

// U(t) = e^{i delta t / 2} diag(e^{-i t}, -i); the rotating frame state is
// phi = U^dagger psi, i.e. psi = U phi
template <class S = double>
Matrix2<S> rwa_transform(double t, const PhysicalParams& p) {
  using C = std::complex<S>;
  const C global = std::exp(C(0, static_cast<S>(p.delta * t / 2)));
  Matrix2<S> u;
  u << global * std::exp(C(0, static_cast<S>(-omega_drive * t))), C(0), C(0), global * C(0, -1);
  return u;
}

// b . sigma
template <class S = double>
Matrix2<S> stochastic_hamiltonian(const std::array<double, 3>& b) {
  using C = std::complex<S>;
  Matrix2<S> h;
  h << C(static_cast<S>(b[2])), C(static_cast<S>(b[0]), static_cast<S>(-b[1])),
       C(static_cast<S>(b[0]), static_cast<S>(b[1])), C(static_cast<S>(-b[2]));
  return h;
}

// U^dagger(t) (b.sigma) U(t): the noise seen in the rotating frame.
// Closed form [[b_z, -i e^{+it}(b_x - i b_y)], [i e^{-it}(b_x + i b_y), -b_z]].
template <class S = double>
Matrix2<S> transformed_noise_hamiltonian(double t, const std::array<double, 3>& b) {
  using C = std::complex<S>;
  const C up(static_cast<S>(b[0]), static_cast<S>(-b[1]));
  const C phase = std::exp(C(0, static_cast<S>(omega_drive * t)));
  const C upper = C(0, -1) * phase * up;
  Matrix2<S> h;
  h << C(static_cast<S>(b[2])), upper, std::conj(upper), C(static_cast<S>(-b[2]));
  return h;
}

// same with the off-diagonal phase factors replaced by 1 (the +-i survive):
// what a transformation that ignored the non-commutation would produce
template <class S = double>
Matrix2<S> naive_noise_hamiltonian(const std::array<double, 3>& b) {
  using C = std::complex<S>;
  const C upper = C(0, -1) * C(static_cast<S>(b[0]), static_cast<S>(-b[1]));
  Matrix2<S> h;
  h << C(static_cast<S>(b[2])), upper, std::conj(upper), C(static_cast<S>(-b[2]));
  return h;
}

// unit-amplitude noise operator for one axis in the chosen frame
template <class S = double>
Matrix2<S> noise_operator(Frame f, Axis a, double t) {
  std::array<double, 3> e{0.0, 0.0, 0.0};
  e[static_cast<size_t>(static_cast<int>(a))] = 1.0;
  switch (f) {
    case Frame::Lab: return pauli<S>(a);
    case Frame::RwaFull: return transformed_noise_hamiltonian<S>(t, e);
    default: return naive_noise_hamiltonian<S>(e);
  }
}

template <class S = double>
Matrix2<S> effective_hamiltonian(double t, Frame f, const PhysicalParams& p,
                                 const std::array<double, 3>& b) {
  switch (f) {
    case Frame::Lab: return lab_hamiltonian<S>(t, p) + stochastic_hamiltonian<S>(b);
    case Frame::RwaFull: return rwa_hamiltonian<S>(p) + transformed_noise_hamiltonian<S>(t, b);
    default: return rwa_hamiltonian<S>(p) + naive_noise_hamiltonian<S>(b);
  }
}

// the rotating frame is a good approximation only for small detuning and weak drive
inline std::optional<std::string> rwa_validity_warning(const PhysicalParams& p) {
  if (std::abs(p.detuning()) <= 0.5 && p.rabi < 1.0) return std::nullopt;
  return "rotating-frame validity is doubtful here: need |Delta| << 1 and Omega < 1, got Delta = " +
         std::to_string(p.detuning()) + ", Omega = " + std::to_string(p.rabi);
}

// operator bundle used by the steppers and the master equation
struct LindbladOps {
  std::array<Complex2x2, 3> op;
  std::array<double, 3> w0;
  int n = 0;

  void add(const Complex2x2& v, double w) {
    op[static_cast<size_t>(n)] = v;
    w0[static_cast<size_t>(n)] = w;
    ++n;
  }
};

// noise operators of the scenario's active axes, evaluated at time t
inline LindbladOps scenario_noise_ops(const Scenario& s, double t) {
  LindbladOps ops;
  for (int i = 0; i < 3; ++i)
    if (s.noise.axis_active(i))
      ops.add(noise_operator(s.frame, static_cast<Axis>(i), t), s.noise.w0[static_cast<size_t>(i)]);
  return ops;
}

}  // namespace qsl
