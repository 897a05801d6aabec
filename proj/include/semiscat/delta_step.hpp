#ifndef SEMISCAT_DELTA_STEP_HPP
#define SEMISCAT_DELTA_STEP_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>

#include "semiscat/core.hpp"

namespace semiscat {

/// Relative size of k_L + k_R - u below which the delta-step amplitudes are
/// declared singular.
inline constexpr double kDeltaPoleThreshold = 1e-12;

struct DeltaStepParams {
  double v1 = 0.0;
  cplx v2;
  Units units{};

  /// u = 2 mu V2 / hbar^2
  [[nodiscard]] cplx u() const { return units.k2_per_energy() * v2; }
  /// U = sqrt(2 mu) V2 / hbar
  [[nodiscard]] cplx big_u() const { return std::sqrt(2.0 * units.mu) / units.hbar * v2; }
};

/// Outcome of a closed-form critical-energy formula.
enum class EnergyStatus {
  Found,
  OutOfRegime,      ///< the inequality selecting this phenomenon fails
  Boundary,         ///< U^2 = V1 (or W^2 = V1): degenerate, no energy
  ComplexStrength,  ///< V2 not real: no real closed-form energy
};

struct EnergyOutcome {
  std::optional<double> energy;
  EnergyStatus status = EnergyStatus::OutOfRegime;
};

namespace detail {

inline bool nearly_equal(double a, double b, double rel = 1e-12) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// ((U^2 + V1) / (2U))^2 under the regime test `want_ss` (U^2 > V1) or its
// complement.
inline EnergyOutcome delta_energy(const DeltaStepParams& p, bool want_ss) {
  if (p.v2.imag() != 0.0) return {std::nullopt, EnergyStatus::ComplexStrength};
  const double big_u = p.big_u().real();
  const double u2 = big_u * big_u;
  if (nearly_equal(u2, p.v1)) return {std::nullopt, EnergyStatus::Boundary};
  if (big_u <= 0.0 || (want_ss ? !(u2 > p.v1) : !(u2 < p.v1))) return {std::nullopt, EnergyStatus::OutOfRegime};
  // k_L = (U^2 + V1)/(2U) must be positive; a deep down-step has no solution.
  if (!(u2 + p.v1 > 0.0)) return {std::nullopt, EnergyStatus::OutOfRegime};
  const double root = (u2 + p.v1) / (2.0 * big_u);
  return {root * root, EnergyStatus::Found};
}

}  // namespace detail

/// Closed-form amplitudes from matching psi at x = 0 and jumping psi' by
/// i u psi(0). With `reversed` the wavenumbers are negated.
inline PoleOr<ScatteringMatrix> amplitudes_delta(const DeltaStepParams& p, double energy, bool reversed = false) {
  const WavenumberPair k = wavenumbers(energy, p.v1, p.units);
  const WavenumberPair ke = reversed ? k.negated() : k;
  const cplx kl = ke.k_left, kr = ke.k_right, u = p.u();
  const cplx den = kl + kr - u;
  if (std::abs(den) <= kDeltaPoleThreshold * (std::abs(kl) + std::abs(kr) + std::abs(u))) return Pole{std::abs(den)};
  ScatteringMatrix s;
  s.r_left = (kl - kr + u) / den;
  s.t_left = 2.0 * kl / den;
  s.r_right = (kr - kl + u) / den;
  s.t_right = 2.0 * kr / den;
  s.k = k;
  s.time_reversed = reversed;
  return s;
}

/// det S = (K + u)/(K - u) with K = k_L + k_R, K -> -K when reversed.
inline PoleOr<cplx> det_s_delta(const DeltaStepParams& p, double energy, bool reversed = false) {
  const WavenumberPair k = wavenumbers(energy, p.v1, p.units);
  const cplx big_k = reversed ? -(k.k_left + k.k_right) : k.k_left + k.k_right;
  const cplx u = p.u();
  const cplx den = big_k - u;
  if (std::abs(den) <= kDeltaPoleThreshold * (std::abs(big_k) + std::abs(u))) return Pole{std::abs(den)};
  return (big_k + u) / den;
}

/// Spectral-singularity energy E* = ((U^2+V1)/(2U))^2, present iff
/// U^2 > V1 and U^2 + V1 > 0.
inline EnergyOutcome ss_energy_delta(const DeltaStepParams& p) { return detail::delta_energy(p, true); }

/// Right-reflectionless energy E_i = ((U^2+V1)/(2U))^2, present iff U^2 < V1.
/// There r_R = 0, t_R = 1 and T = k_L/k_R.
inline EnergyOutcome reflectionless_energy_delta(const DeltaStepParams& p) {
  return detail::delta_energy(p, false);
}

}  // namespace semiscat

#endif  // SEMISCAT_DELTA_STEP_HPP
