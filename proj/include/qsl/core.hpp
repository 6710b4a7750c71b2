#pragma once

#include <array>
#include <utility>

#include "qsl/types.hpp"

namespace qsl {

enum class Axis : int { x = 0, y = 1, z = 2 };

template <class S = double>
Matrix2<S> pauli(Axis a) {
  using C = std::complex<S>;
  Matrix2<S> m;
  switch (a) {
    case Axis::x: m << C(0), C(1), C(1), C(0); break;
    case Axis::y: m << C(0), C(0, -1), C(0, 1), C(0); break;
    default: m << C(1), C(0), C(0), C(-1); break;
  }
  return m;
}

template <class D>
std::array<typename D::RealScalar, 3> bloch_vector(const Eigen::MatrixBase<D>& rho) {
  using S = typename D::RealScalar;
  const auto r01 = std::complex<S>(rho(0, 1));
  return {S(2) * std::real(r01), S(-2) * std::imag(r01),
          std::real(std::complex<S>(rho(0, 0)) - std::complex<S>(rho(1, 1)))};
}

template <class S = double>
Matrix2<S> density_from_bloch(const std::array<S, 3>& r) {
  Matrix2<S> rho = Matrix2<S>::Identity();
  rho += r[0] * pauli<S>(Axis::x) + r[1] * pauli<S>(Axis::y) + r[2] * pauli<S>(Axis::z);
  return S(0.5) * rho;
}

template <class D>
typename D::RealScalar purity(const Eigen::MatrixBase<D>& rho) {
  return (rho * rho).trace().real();
}

template <class DA, class DB>
double max_abs_diff(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

template <class D>
bool is_hermitian(const Eigen::MatrixBase<D>& m, double tol = 1e-12) {
  return max_abs_diff(m, m.adjoint().eval()) < tol;
}

template <class D>
bool is_unitary(const Eigen::MatrixBase<D>& m, double tol = 1e-12) {
  using M = Matrix2<typename D::RealScalar>;
  return max_abs_diff((m.adjoint() * m).eval(), M::Identity()) < tol;
}

// classical fourth-order step for dy/dt = f(t, y); State needs +, scalar *
template <class State, class Rhs>
State rk4_step(Rhs&& f, const State& y, double t, double dt) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * dt, State(y + (0.5 * dt) * k1));
  const State k3 = f(t + 0.5 * dt, State(y + (0.5 * dt) * k2));
  const State k4 = f(t + dt, State(y + dt * k3));
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace qsl
