#ifndef SEMISCAT_TRANSFER_HPP
#define SEMISCAT_TRANSFER_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "semiscat/core.hpp"
#include "semiscat/ode.hpp"
#include "semiscat/profile.hpp"

namespace semiscat {

/// Pole threshold on |m11| relative to the Frobenius norm of M.
inline constexpr double kTransferPoleThreshold = 1e-10;

/// End values of the interior solutions u (u(0)=1, u'(0)=0) and v (v(0)=0,
/// v'(0)=1) at x = -d1 (suffix 1) and x = +d2 (suffix 2).
struct FundamentalSolutions {
  cplx u1, du1, v1, dv1;
  cplx u2, du2, v2, dv2;
  double wronskian_drift = 0.0;  ///< max |W(x) - 1| / max(1, |u v'| + |u' v|) over accepted steps
  double error_estimate = 0.0;   ///< accumulated local error estimate
  std::size_t steps = 0;

  [[nodiscard]] cplx wronskian_left() const { return u1 * dv1 - du1 * v1; }
  [[nodiscard]] cplx wronskian_right() const { return u2 * dv2 - du2 * v2; }
};

/// M = M1^{-1} M5 M4 relating (A_L, B_L) to (A_R, B_R).
struct TransferMatrix {
  cplx m11, m12, m21, m22;
  cplx det_expected;              ///< k_R / k_L
  std::array<cplx, 4> interior{};  ///< M5 = [[w11, w12], [w21, w22]]

  [[nodiscard]] cplx det() const { return m11 * m22 - m12 * m21; }
  [[nodiscard]] cplx interior_det() const { return interior[0] * interior[3] - interior[1] * interior[2]; }
  [[nodiscard]] double norm() const {
    return std::sqrt(std::norm(m11) + std::norm(m12) + std::norm(m21) + std::norm(m22));
  }
};

namespace detail {

using Fund4 = ode::State<4>;

// |W - 1| relative to the size of the products forming W, so that growing
// (closed-channel) solutions are judged by their rounding level.
inline double wronskian_error(const Fund4& s) {
  const cplx a = s[0] * s[3], b = s[1] * s[2];
  return std::abs(a - b - 1.0) / std::max(1.0, std::abs(a) + std::abs(b));
}

// Integrates (u, u', v, v') from 0 to `end`, splitting at the given interior
// breakpoints. V is sampled strictly inside each segment so that jumps are
// seen as one-sided limits.
inline Fund4 integrate_side(const PotentialProfile& profile, double energy, double c, Fund4 y, double end,
                            std::vector<double> cuts, const IntegrationWindow& window, double& drift,
                            ode::Stats& stats) {
  const double dir = end >= 0.0 ? 1.0 : -1.0;
  std::erase_if(cuts, [&](double b) { return !(dir * b > 0.0 && dir * (end - b) > 0.0); });
  std::sort(cuts.begin(), cuts.end(), [&](double a, double b) { return dir * a < dir * b; });
  cuts.push_back(end);

  ode::Options opts;
  opts.rel_tol = window.step_tol;
  opts.abs_tol = window.step_tol;

  double start = 0.0;
  for (const double stop : cuts) {
    const double lo = std::min(start, stop);
    const double hi = std::max(start, stop);
    const double inset = std::min(1e-13 * std::max(1.0, std::max(std::abs(lo), std::abs(hi))), 0.25 * (hi - lo));
    auto rhs = [&](double x, const Fund4& s) -> Fund4 {
      const double xs = std::clamp(x, lo + inset, hi - inset);
      const cplx w = c * (profile.value(xs) - energy);
      return {s[1], w * s[0], s[3], w * s[2]};
    };
    auto observe = [&](double, const Fund4& s) { drift = std::max(drift, wronskian_error(s)); };
    y = ode::integrate<4>(rhs, start, stop, y, opts, stats, observe);
    start = stop;
  }
  return y;
}

}  // namespace detail

/// Integrates the two fundamental solutions outward from x = 0. A point
/// interaction s*delta(x) is applied as psi'(0+) = psi'(0-) + (2 mu/hbar^2) s psi(0);
/// the initial conditions hold at 0-.
inline FundamentalSolutions integrate_fundamental(const PotentialProfile& profile, double energy,
                                                  const IntegrationWindow& window, const Units& units = {}) {
  if (!(energy > 0.0)) throw DomainError("integrate_fundamental: E must be positive");
  check_window(profile, window);
  const double c = units.k2_per_energy();
  const auto cuts = profile.breakpoints();

  FundamentalSolutions out;
  ode::Stats stats;
  double drift = 0.0;

  const detail::Fund4 at_origin{cplx(1.0), cplx(0.0), cplx(0.0), cplx(1.0)};
  const detail::Fund4 left =
      detail::integrate_side(profile, energy, c, at_origin, -window.d1, cuts, window, drift, stats);

  detail::Fund4 right_start = at_origin;
  if (const auto s = profile.point_interaction()) {
    const cplx jump = c * *s;
    right_start[1] += jump * right_start[0];
    right_start[3] += jump * right_start[2];
  }
  const detail::Fund4 right =
      detail::integrate_side(profile, energy, c, right_start, window.d2, cuts, window, drift, stats);

  out.u1 = left[0];
  out.du1 = left[1];
  out.v1 = left[2];
  out.dv1 = left[3];
  out.u2 = right[0];
  out.du2 = right[1];
  out.v2 = right[2];
  out.dv2 = right[3];
  out.wronskian_drift = std::max({drift, detail::wronskian_error(left), detail::wronskian_error(right)});
  out.error_estimate = stats.error_sum;
  out.steps = stats.accepted;

  if (out.wronskian_drift > 100.0 * window.step_tol + 1e-13)
    throw AccuracyFailure("integrate_fundamental: Wronskian drift exceeds 100 x step_tol");
  return out;
}

/// Transfer matrix from the interior end values and the asymptotic plane
/// waves, f = exp(i k_L d1), g = exp(i k_R d2). Passing negated wavenumbers
/// gives the time-reversed matrix with the same interior solutions.
inline TransferMatrix transfer_matrix(const FundamentalSolutions& fund, const WavenumberPair& k,
                                      const IntegrationWindow& window) {
  if (k.k_left == 0.0) throw DomainError("transfer_matrix: k_L = 0, boundary matrix singular");
  const cplx i(0.0, 1.0);
  const cplx kl = k.k_left;
  const cplx kr = k.k_right;
  const cplx f = std::exp(i * kl * window.d1);
  const cplx g = std::exp(i * kr * window.d2);

  const cplx w11 = fund.u1 * fund.dv2 - fund.v1 * fund.du2;
  const cplx w12 = fund.u2 * fund.v1 - fund.u1 * fund.v2;
  const cplx w21 = fund.du1 * fund.dv2 - fund.du2 * fund.dv1;
  const cplx w22 = fund.u2 * fund.dv1 - fund.du1 * fund.v2;

  // M1^{-1} with M1 = [[1/f, f], [i kL/f, -i kL f]]
  const cplx inv_det1 = 1.0 / (-2.0 * i * kl);
  const cplx p11 = inv_det1 * (-i * kl * f), p12 = inv_det1 * (-f);
  const cplx p21 = inv_det1 * (-i * kl / f), p22 = inv_det1 * (1.0 / f);
  // M4 = [[g, 1/g], [i kR g, -i kR/g]]
  const cplx q11 = g, q12 = 1.0 / g, q21 = i * kr * g, q22 = -i * kr / g;

  const cplx n11 = w11 * q11 + w12 * q21, n12 = w11 * q12 + w12 * q22;
  const cplx n21 = w21 * q11 + w22 * q21, n22 = w21 * q12 + w22 * q22;

  TransferMatrix m;
  m.m11 = p11 * n11 + p12 * n21;
  m.m12 = p11 * n12 + p12 * n22;
  m.m21 = p21 * n11 + p22 * n21;
  m.m22 = p21 * n12 + p22 * n22;
  m.det_expected = kr / kl;
  m.interior = {w11, w12, w21, w22};
  return m;
}

/// S from M. Left incidence (B_R = 0): t_L = A_R/A_L = 1/m11 and
/// r_L = B_L/A_L = m21/m11. Right incidence (A_L = 0): r_R = A_R/B_R = -m12/m11
/// and t_R = B_L/B_R = det(M)/m11.
inline PoleOr<ScatteringMatrix> s_matrix_from_transfer(const TransferMatrix& m, const WavenumberPair& k,
                                                       bool reversed) {
  const double scale = m.norm();
  if (std::abs(m.m11) < kTransferPoleThreshold * scale) return Pole{std::abs(m.m11)};
  ScatteringMatrix s;
  s.t_left = 1.0 / m.m11;
  s.r_left = m.m21 / m.m11;
  s.r_right = -m.m12 / m.m11;
  s.t_right = m.det() / m.m11;
  s.k = k;
  s.time_reversed = reversed;
  return s;
}

/// One energy through the whole pipeline, forward and time-reversed.
struct NumericPoint {
  WavenumberPair k;
  FundamentalSolutions fund;
  TransferMatrix forward;
  TransferMatrix reversed;

  [[nodiscard]] PoleOr<ScatteringMatrix> s(bool time_reversed = false) const {
    return s_matrix_from_transfer(time_reversed ? reversed : forward, k, time_reversed);
  }
};

inline NumericPoint evaluate_numeric(const PotentialProfile& profile, double energy, const IntegrationWindow& window,
                                     const Units& units = {}) {
  NumericPoint p;
  p.k = wavenumbers(energy, profile.v1(), units);
  p.fund = integrate_fundamental(profile, energy, window, units);
  p.forward = transfer_matrix(p.fund, p.k, window);
  p.reversed = transfer_matrix(p.fund, p.k.negated(), window);
  return p;
}

inline PoleOr<ScatteringMatrix> s_matrix_numeric(const PotentialProfile& profile, double energy,
                                                 const IntegrationWindow& window, bool reversed,
                                                 const Units& units = {}) {
  const WavenumberPair k = wavenumbers(energy, profile.v1(), units);
  const FundamentalSolutions fund = integrate_fundamental(profile, energy, window, units);
  return s_matrix_from_transfer(transfer_matrix(fund, reversed ? k.negated() : k, window), k, reversed);
}

inline PoleOr<ScatteringMatrix> s_matrix_numeric(const PotentialProfile& profile, double energy, bool reversed = false,
                                                 const Units& units = {}) {
  return s_matrix_numeric(profile, energy, default_window(profile), reversed, units);
}

}  // namespace semiscat

#endif  // SEMISCAT_TRANSFER_HPP
