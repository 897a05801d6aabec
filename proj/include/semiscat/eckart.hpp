#ifndef SEMISCAT_ECKART_HPP
#define SEMISCAT_ECKART_HPP

#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "semiscat/core.hpp"
#include "semiscat/delta_step.hpp"
#include "semiscat/special_functions.hpp"

namespace semiscat {

/// Parameters of V(x) = (V1/2)[1 + tanh(x/2a)] + i V2 sech^2(x/2a).
struct EckartParams {
  double v1 = 0.0;
  cplx v2;
  double a = 1.0;
  Units units{};

  /// Delta = hbar^2 / (2 mu a^2)
  [[nodiscard]] double delta() const { return 1.0 / (units.k2_per_energy() * a * a); }
};

/// alpha = k_L a, beta = k_R a, gamma = q + i s = sqrt(4 i V2/Delta - 1/4).
struct EckartKinematics {
  double alpha = 0.0;
  cplx beta;
  cplx gamma;
  [[nodiscard]] double q() const { return gamma.real(); }
  [[nodiscard]] double s() const { return gamma.imag(); }
};

inline cplx eckart_gamma(const EckartParams& p) {
  const cplx i(0.0, 1.0);
  return std::sqrt(4.0 * i * p.v2 / p.delta() - 0.25);
}

inline EckartKinematics kinematics(const EckartParams& p, double energy) {
  if (!(p.a > 0.0)) throw DomainError("kinematics: width a must be positive");
  const WavenumberPair k = wavenumbers(energy, p.v1, p.units);
  return {k.k_left.real() * p.a, k.k_right * p.a, eckart_gamma(p)};
}

namespace detail {

inline PoleOr<GammaRatio> eckart_r(cplx alpha, cplx beta, cplx gamma) {
  const cplx i(0.0, 1.0);
  return log_gamma_ratio({2.0 * i * alpha, 0.5 - i * (alpha + beta + gamma), 0.5 - i * (alpha + beta - gamma)},
                         {-2.0 * i * alpha, 0.5 + i * (alpha - beta - gamma), 0.5 + i * (alpha - beta + gamma)});
}

inline PoleOr<GammaRatio> eckart_t(cplx alpha, cplx beta, cplx gamma) {
  const cplx i(0.0, 1.0);
  return log_gamma_ratio({0.5 - i * (alpha + beta + gamma), 0.5 - i * (alpha + beta - gamma)},
                         {1.0 - 2.0 * i * beta, -2.0 * i * alpha});
}

// Gamma(+-2i alpha), Gamma(1 - 2i beta) and their right-incidence mirrors
// depend only on kinematics; their singularities are not properties of the
// potential.
inline void check_kinematic_gammas(cplx alpha, cplx beta) {
  const cplx i(0.0, 1.0);
  for (const cplx z : {2.0 * i * alpha, -2.0 * i * alpha, 1.0 - 2.0 * i * beta, 2.0 * i * beta, -2.0 * i * beta,
                       1.0 - 2.0 * i * alpha}) {
    if (is_pole(z)) throw UnphysicalPoint("amplitudes_eckart: kinematic Gamma singularity (unphysical point)");
  }
}

}  // namespace detail

/// Gamma-ratio amplitudes. Left incidence uses the (alpha, beta) slot order,
/// right incidence (beta, alpha); `reversed` negates both. A Gamma pole shared
/// by all amplitudes is returned as a pole state; a denominator pole makes the
/// corresponding amplitude exactly zero.
inline PoleOr<ScatteringMatrix> amplitudes_eckart(const EckartParams& p, double energy, bool reversed = false) {
  if (energy == p.v1) throw DomainError("amplitudes_eckart: E = V1 (beta = 0) excluded");
  const EckartKinematics kin = kinematics(p, energy);
  const double sign = reversed ? -1.0 : 1.0;
  const cplx alpha = sign * kin.alpha;
  const cplx beta = sign * kin.beta;
  detail::check_kinematic_gammas(alpha, beta);

  PoleOr<GammaRatio> t_l = Pole{};
  PoleOr<GammaRatio> t_r = Pole{};
  PoleOr<GammaRatio> r_l = Pole{};
  PoleOr<GammaRatio> r_r = Pole{};
  try {
    t_l = detail::eckart_t(alpha, beta, kin.gamma);
    if (t_l.is_pole()) return t_l.pole();
    t_r = detail::eckart_t(beta, alpha, kin.gamma);
    r_l = detail::eckart_r(alpha, beta, kin.gamma);
    r_r = detail::eckart_r(beta, alpha, kin.gamma);
  } catch (const std::invalid_argument&) {
    throw DomainError("amplitudes_eckart: coincident Gamma poles, amplitude indeterminate");
  }
  if (t_r.is_pole() || r_l.is_pole() || r_r.is_pole()) return Pole{};

  ScatteringMatrix s;
  s.t_left = t_l->value;
  s.t_right = t_r->value;
  s.r_left = r_l->value;
  s.r_right = r_r->value;
  s.k = wavenumbers(energy, p.v1, p.units);
  s.time_reversed = reversed;
  return s;
}

enum class ReflectionlessKind {
  Ez,  ///< r_R = 0 with t_R != 1 (n > 0)
  Ei,  ///< r_R = 0 and t_R = 1 (n = 0)
};

struct EckartCritical {
  cplx v2;
  double energy = 0.0;
  ReflectionlessKind kind = ReflectionlessKind::Ei;  ///< meaningful for reflectionless results only
};

/// V2 = (Delta/4)[(2n+1) q + i(n(n+1) - q^2)], which puts s = n + 1/2.
inline cplx eckart_v2_for(double a, double q, int n, const Units& units = {}) {
  if (!(q > 0.0)) throw DomainError("eckart_v2_for: q must be positive");
  if (n < 0) throw DomainError("eckart_v2_for: n must be non-negative");
  const EckartParams p{0.0, {}, a, units};
  const double nn = static_cast<double>(n);
  return p.delta() / 4.0 * cplx((2.0 * nn + 1.0) * q, nn * (nn + 1.0) - q * q);
}

/// W = q sqrt(Delta); both critical families sit at ((W^2 + V1)/(2W))^2.
inline double eckart_w(double a, double q, const Units& units = {}) {
  const EckartParams p{0.0, {}, a, units};
  return q * std::sqrt(p.delta());
}

/// Spectral singularity family: s = n + 1/2 and alpha + beta = q. Exists iff
/// W^2 > V1 and W^2 + V1 > 0.
inline std::optional<EckartCritical> ss_condition_eckart(double v1, double a, double q, int n, const Units& units = {}) {
  const cplx v2 = eckart_v2_for(a, q, n, units);
  const double w = eckart_w(a, q, units);
  if (!(w * w > v1) || detail::nearly_equal(w * w, v1) || !(w * w + v1 > 0.0)) return std::nullopt;
  const double root = (w * w + v1) / (2.0 * w);
  return EckartCritical{v2, root * root, ReflectionlessKind::Ei};
}

/// Right-reflectionless family: s = n + 1/2 and alpha - beta = q. Exists iff
/// W^2 < V1. n = 0 additionally gives t_R = 1.
inline std::optional<EckartCritical> reflectionless_condition_eckart(double v1, double a, double q, int n,
                                                                     const Units& units = {}) {
  const cplx v2 = eckart_v2_for(a, q, n, units);
  const double w = eckart_w(a, q, units);
  if (!(w * w < v1) || detail::nearly_equal(w * w, v1)) return std::nullopt;
  const double root = (w * w + v1) / (2.0 * w);
  return EckartCritical{v2, root * root, n == 0 ? ReflectionlessKind::Ei : ReflectionlessKind::Ez};
}

/// Recovers (q, n) from an explicit V2 when Im gamma is a positive
/// half-integer.
struct EckartFamily {
  double q = 0.0;
  int n = 0;
};

inline std::optional<EckartFamily> eckart_family(const EckartParams& p, double tol = 1e-9) {
  const cplx g = eckart_gamma(p);
  const double n = g.imag() - 0.5;
  const double rn = std::round(n);
  if (rn < 0.0 || std::abs(n - rn) > tol || !(g.real() > 0.0)) return std::nullopt;
  return EckartFamily{g.real(), static_cast<int>(rn)};
}

struct CpaIdentity {
  double residual = 0.0;    ///< |1/Y - 1/Z| / |1/Z|
  cplx inv_y;
  cplx inv_z;
  cplx x;                   ///< common factor of r r and t t under time reversal
  bool ss_conditions = false;  ///< s = n + 1/2 and alpha + beta = q hold
  std::string warning;
};

/// With time reversal, r_L r_R = X/Y and t_L t_R = X/Z, so det S(-k) =
/// X (1/Z - 1/Y). Evaluates 1/Y and 1/Z from their Gamma products and reports
/// the relative mismatch.
inline CpaIdentity cpa_identity_check(const EckartParams& p, double energy) {
  const EckartKinematics kin = kinematics(p, energy);
  const cplx i(0.0, 1.0);
  const cplx al = kin.alpha, be = kin.beta, ga = kin.gamma;

  CpaIdentity out;
  const auto fam = eckart_family(p);
  out.ss_conditions = fam && std::abs(al + be - fam->q) <= 1e-9 * std::max(1.0, fam->q);
  if (!out.ss_conditions) out.warning = "parameters are not at a spectral singularity; identity not expected to hold";

  const cplx plus1 = 0.5 + i * (al + be + ga), plus2 = 0.5 + i * (al + be - ga);
  const auto x = log_gamma_ratio({plus1, plus1, plus2, plus2}, {2.0 * i * al, 2.0 * i * be});
  const auto inv_y = log_gamma_ratio(
      {-2.0 * i * al, -2.0 * i * be},
      {0.5 - i * (al - be + ga), 0.5 - i * (al - be - ga), 0.5 + i * (al - be + ga), 0.5 + i * (al - be - ga)});
  const auto inv_z = log_gamma_ratio({}, {1.0 + 2.0 * i * al, 1.0 + 2.0 * i * be});
  if (x.is_pole() || inv_y.is_pole() || inv_z.is_pole())
    throw DomainError("cpa_identity_check: Gamma pole in X, 1/Y or 1/Z");
  out.x = x->value;
  out.inv_y = inv_y->value;
  out.inv_z = inv_z->value;
  if (x->exact_zero) out.warning = "X vanishes; identity carries no information";
  const double scale = std::abs(out.inv_z);
  out.residual = scale == 0.0 ? std::abs(out.inv_y - out.inv_z) : std::abs(out.inv_y - out.inv_z) / scale;
  return out;
}

}  // namespace semiscat

#endif  // SEMISCAT_ECKART_HPP
