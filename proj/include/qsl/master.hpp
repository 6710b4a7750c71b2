#pragma once

#include <cmath>
#include <vector>

#include "qsl/core.hpp"
#include "qsl/model.hpp"
#include "qsl/sde.hpp"
#include "qsl/types.hpp"

namespace qsl {

struct MasterSeries {
  std::vector<double> times;
  std::vector<DensityMatrix2> rho;

  double rho_bb(size_t k) const { return rho[k](0, 0).real(); }
  Complex rho_ba(size_t k) const { return rho[k](0, 1); }
  double purity_at(size_t k) const { return purity(rho[k]); }
};

// deterministic Schroedinger evolution (rejects stochastic scenarios)
inline Trajectory integrate_schrodinger(const Scenario& s, const SdeOptions& opts = {}) {
  if (s.noise.any()) throw ConfigError("integrate_schrodinger requires a noise-free scenario");
  return integrate_trajectory(s, 0, opts);
}

// rho' = -i[H, rho] + sum_j w0_j^2 (V rho V^dag - 1/2 {V^dag V, rho})
inline DensityMatrix2 lindblad_rhs(const DensityMatrix2& rho, const Complex2x2& h,
                                   const LindbladOps& ops) {
  const Complex mi(0.0, -1.0);
  DensityMatrix2 d = mi * (h * rho - rho * h);
  for (int i = 0; i < ops.n; ++i) {
    const auto& v = ops.op[static_cast<size_t>(i)];
    const double rate = ops.w0[static_cast<size_t>(i)] * ops.w0[static_cast<size_t>(i)];
    const Complex2x2 vdv = v.adjoint() * v;
    d += rate * (v * rho * v.adjoint() - 0.5 * (vdv * rho + rho * vdv));
  }
  return d;
}

enum class DissipatorMode {
  Static,        // jump operators are the bare Pauli matrices of the active axes
  TimeLocalRwa,  // jump operators are the transformed (co-rotating) axis operators
};

// Lindblad evolution from rho(0) = |b><b| on the scenario grid. White noise
// only: the OU process has a finite correlation time and no Lindblad limit.
inline MasterSeries integrate_master(const Scenario& s, DissipatorMode mode) {
  s.validate();
  if (s.noise.kind == NoiseKind::Ou)
    throw ConfigError("the master equation is only available for white noise");
  if (mode == DissipatorMode::TimeLocalRwa && s.frame != Frame::RwaFull)
    throw ConfigError("the time-local dissipator is tied to the rwa frame");

  const long n = s.grid.n_steps();
  MasterSeries out;
  out.times.reserve(static_cast<size_t>(n) + 1);
  out.rho.reserve(static_cast<size_t>(n) + 1);

  DensityMatrix2 rho;
  rho << Complex(1.0), Complex(0.0), Complex(0.0), Complex(0.0);

  const auto ops_at = [&](double t) -> LindbladOps {
    if (!s.noise.any()) return {};
    if (mode == DissipatorMode::TimeLocalRwa) return scenario_noise_ops(s, t);
    LindbladOps ops;
    for (int i = 0; i < 3; ++i)
      if (s.noise.axis_active(i))
        ops.add(pauli<double>(static_cast<Axis>(i)), s.noise.w0[static_cast<size_t>(i)]);
    return ops;
  };
  const auto rhs = [&](double tt, const DensityMatrix2& r) -> DensityMatrix2 {
    const Complex2x2 h =
        (s.frame == Frame::Lab) ? lab_hamiltonian(tt, s.params) : rwa_hamiltonian(s.params);
    return lindblad_rhs(r, h, ops_at(tt));
  };

  out.times.push_back(0.0);
  out.rho.push_back(rho);
  for (long k = 0; k < n; ++k) {
    rho = rk4_step(rhs, rho, s.grid.time(k), s.grid.dt);
    out.times.push_back(s.grid.time(k + 1));
    out.rho.push_back(rho);
  }
  return out;
}

inline double generalized_rabi(const PhysicalParams& p) {
  const double d = p.detuning();
  return std::sqrt(p.rabi * p.rabi + d * d);
}

// leading drive-induced shift of the resonance: delta* = 1 - rabi^2/4
inline double bloch_siegert_shift(double rabi) { return rabi * rabi / 4.0; }

// closed-form rotating-frame density matrix under isotropic white noise of
// strength w0 per axis, starting from |b><b|:
//   Gamma   = 4 w0^2
//   Og      = sqrt(rabi^2 + Delta^2)
//   rho_bb  = 1/2 + e^{-Gamma t} (Delta^2 + rabi^2 cos(Og t)) / (2 Og^2)
//   rho_ba  = e^{-Gamma t} rabi (-Delta (1 - cos(Og t)) + i Og sin(Og t)) / (2 Og^2)
inline DensityMatrix2 analytic_rwa_density(double t, const PhysicalParams& p, double w0) {
  const double gamma = 4.0 * w0 * w0;
  const double delta = p.detuning();
  const double og = generalized_rabi(p);
  const double damp = std::exp(-gamma * t);
  double pbb, re, im;
  if (og < 1e-300) {
    pbb = 0.5 * (1.0 + damp);
    re = 0.0;
    im = 0.0;
  } else {
    const double og2 = og * og;
    const double c = std::cos(og * t);
    pbb = 0.5 + damp * (delta * delta + p.rabi * p.rabi * c) / (2.0 * og2);
    re = damp * p.rabi * (-delta * (1.0 - c)) / (2.0 * og2);
    im = damp * p.rabi * (og * std::sin(og * t)) / (2.0 * og2);
  }
  DensityMatrix2 rho;
  rho(0, 0) = Complex(pbb, 0.0);
  rho(0, 1) = Complex(re, im);
  rho(1, 0) = std::conj(rho(0, 1));
  rho(1, 1) = Complex(1.0 - pbb, 0.0);
  return rho;
}

}  // namespace qsl
