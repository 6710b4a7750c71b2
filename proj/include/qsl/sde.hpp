#pragma once

#include <array>
#include <vector>

#include "qsl/core.hpp"
#include "qsl/model.hpp"
#include "qsl/noise.hpp"
#include "qsl/types.hpp"

namespace qsl {

struct Trajectory {
  std::vector<double> times;
  std::vector<double> survival;  // P_b(t) = |psi_b|^2 on the unit sphere
  std::vector<Spinor> states;    // filled only on request
  double max_norm_drift = 0.0;   // max ||psi| - 1| before renormalization
};

struct SdeOptions {
  bool renormalize = true;
  bool store_states = false;
};

// One Euler-Maruyama step of
//   d psi = [-i H_det - 1/2 sum_i w0_i^2 V_i^dag V_i] psi dt - i sum_i w0_i V_i psi dW_i
// followed by renormalization. The -i on the noise coupling makes the
// stochastic term the generator of a Hermitian Hamiltonian, so the norm is
// conserved pathwise up to the discretization error reported in *norm_err.
inline Spinor slsde_white_step(const Spinor& psi, double /*t*/, double dt, const Complex2x2& h_det,
                               const LindbladOps& ops, const double* dW, bool renormalize = true,
                               double* norm_err = nullptr) {
  const Complex mi(0.0, -1.0);
  Spinor out = psi + dt * (mi * (h_det * psi));
  for (int i = 0; i < ops.n; ++i) {
    const auto& v = ops.op[static_cast<size_t>(i)];
    const double w = ops.w0[static_cast<size_t>(i)];
    out -= (0.5 * w * w * dt) * (v.adjoint() * (v * psi));
    out += (mi * (w * dW[i])) * (v * psi);
  }
  const double nrm = out.norm();
  if (norm_err) *norm_err = std::abs(nrm - 1.0);
  if (renormalize && nrm > 0.0) out /= nrm;
  return out;
}

// the same step for the single operator V = sigma_z, written out in components
inline Spinor dephasing_pair_step(const Spinor& psi, double /*t*/, double dt,
                                  const Complex2x2& h_det, double w0, double dW,
                                  bool renormalize = true, double* norm_err = nullptr) {
  const Complex mi(0.0, -1.0);
  const Complex b = psi(0), a = psi(1);
  Spinor out;
  out(0) = b + dt * (mi * (h_det(0, 0) * b + h_det(0, 1) * a) - 0.5 * w0 * w0 * b) + mi * w0 * dW * b;
  out(1) = a + dt * (mi * (h_det(1, 0) * b + h_det(1, 1) * a) - 0.5 * w0 * w0 * a) - mi * w0 * dW * a;
  const double nrm = out.norm();
  if (norm_err) *norm_err = std::abs(nrm - 1.0);
  if (renormalize && nrm > 0.0) out /= nrm;
  return out;
}

// One step with Ornstein-Uhlenbeck fields: each active axis is advanced by its
// exact Gaussian transition, the spinor then sees the midpoint-frozen field
// value through a fourth-order substep (the OU field is smooth on the step
// scale, so the only stochastic input per step is the transition draw).
inline Spinor slsde_ou_step(const Spinor& psi, double t, double dt, Frame frame,
                            const PhysicalParams& p, std::array<OUState, 3>& ou,
                            std::array<RngStream, 3>& streams, const std::array<bool, 3>& active,
                            bool renormalize = true, double* norm_err = nullptr) {
  std::array<double, 3> mid{0.0, 0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    if (!active[static_cast<size_t>(i)]) continue;
    auto& o = ou[static_cast<size_t>(i)];
    const OUState next = ou_exact_step(o, dt, streams[static_cast<size_t>(i)].gaussian());
    mid[static_cast<size_t>(i)] = 0.5 * (o.value + next.value);
    o = next;
  }
  const auto rhs = [&](double tt, const Spinor& y) -> Spinor {
    return Complex(0.0, -1.0) * (effective_hamiltonian(tt, frame, p, mid) * y);
  };
  Spinor out = rk4_step(rhs, psi, t, dt);
  const double nrm = out.norm();
  if (norm_err) *norm_err = std::abs(nrm - 1.0);
  if (renormalize && nrm > 0.0) out /= nrm;
  return out;
}

// full trajectory from psi(0) = (1, 0); deterministic scenarios use the
// fourth-order stepper, white noise the Euler-Maruyama stepper, OU the
// midpoint-frozen stepper above
inline Trajectory integrate_trajectory(const Scenario& s, long realization,
                                       const SdeOptions& opts = {}) {
  s.validate();
  const long n = s.grid.n_steps();
  Trajectory tr;
  tr.times.reserve(static_cast<size_t>(n) + 1);
  tr.survival.reserve(static_cast<size_t>(n) + 1);
  if (opts.store_states) tr.states.reserve(static_cast<size_t>(n) + 1);

  Spinor psi;
  psi << Complex(1.0), Complex(0.0);
  const auto record = [&](long k) {
    tr.times.push_back(s.grid.time(k));
    tr.survival.push_back(std::norm(psi(0)) / psi.squaredNorm());
    if (opts.store_states) tr.states.push_back(psi);
  };
  const auto guard = [&](long k) {
    if (!psi.allFinite())
      throw IntegrationError("non-finite state in realization " + std::to_string(realization) +
                                 " at t = " + std::to_string(s.grid.time(k)),
                             realization, s.grid.time(k));
  };
  record(0);

  std::array<bool, 3> active{};
  std::array<RngStream, 3> streams;
  for (int i = 0; i < 3; ++i) {
    active[static_cast<size_t>(i)] = s.noise.axis_active(i);
    if (active[static_cast<size_t>(i)])
      streams[static_cast<size_t>(i)] =
          RngStream(s.seed, static_cast<std::uint64_t>(realization), static_cast<std::uint64_t>(i));
  }

  double norm_err = 0.0;
  if (s.noise.kind == NoiseKind::White && s.noise.any()) {
    const double sqdt = std::sqrt(s.grid.dt);
    for (long k = 0; k < n; ++k) {
      const double t = s.grid.time(k);
      const Complex2x2 h_det = (s.frame == Frame::Lab)
                                   ? lab_hamiltonian(t, s.params)
                                   : rwa_hamiltonian(s.params);
      LindbladOps ops;
      double dW[3];
      for (int i = 0; i < 3; ++i) {
        if (!active[static_cast<size_t>(i)]) continue;
        dW[ops.n] = streams[static_cast<size_t>(i)].gaussian() * sqdt;
        ops.add(noise_operator(s.frame, static_cast<Axis>(i), t), s.noise.w0[static_cast<size_t>(i)]);
      }
      psi = slsde_white_step(psi, t, s.grid.dt, h_det, ops, dW, opts.renormalize, &norm_err);
      tr.max_norm_drift = std::max(tr.max_norm_drift, norm_err);
      guard(k + 1);
      record(k + 1);
    }
  } else if (s.noise.kind == NoiseKind::Ou && s.noise.any()) {
    std::array<OUState, 3> ou;
    for (int i = 0; i < 3; ++i) {
      const auto u = static_cast<size_t>(i);
      ou[u] = OUState{s.noise.o0[u], s.noise.theta[u], s.noise.w0[u], s.noise.mu[u]};
    }
    for (long k = 0; k < n; ++k) {
      psi = slsde_ou_step(psi, s.grid.time(k), s.grid.dt, s.frame, s.params, ou, streams, active,
                          opts.renormalize, &norm_err);
      tr.max_norm_drift = std::max(tr.max_norm_drift, norm_err);
      guard(k + 1);
      record(k + 1);
    }
  } else {
    const std::array<double, 3> b0{0.0, 0.0, 0.0};
    const auto rhs = [&](double tt, const Spinor& y) -> Spinor {
      return Complex(0.0, -1.0) * (effective_hamiltonian(tt, s.frame, s.params, b0) * y);
    };
    for (long k = 0; k < n; ++k) {
      psi = rk4_step(rhs, psi, s.grid.time(k), s.grid.dt);
      tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(psi.norm() - 1.0));
      guard(k + 1);
      record(k + 1);
    }
  }
  return tr;
}

}  // namespace qsl
