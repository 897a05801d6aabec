#ifndef SEMISCAT_CRITICAL_HPP
#define SEMISCAT_CRITICAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "semiscat/core.hpp"
#include "semiscat/delta_step.hpp"
#include "semiscat/eckart.hpp"
#include "semiscat/parallel.hpp"
#include "semiscat/profile.hpp"
#include "semiscat/transfer.hpp"

namespace semiscat {

enum class CriticalKind { SpectralSingularity, CPA, ReflectionlessLeft, ReflectionlessRight };
enum class Side { Left, Right };

inline const char* to_string(CriticalKind k) {
  switch (k) {
    case CriticalKind::SpectralSingularity: return "SpectralSingularity";
    case CriticalKind::CPA: return "CPA";
    case CriticalKind::ReflectionlessLeft: return "ReflectionlessLeft";
    case CriticalKind::ReflectionlessRight: return "ReflectionlessRight";
  }
  return "?";
}

struct SideTransmission {
  cplx amplitude;             ///< t on the reflectionless side
  double probability = 0.0;   ///< T, identical from either side
};

struct CriticalPoint {
  CriticalKind kind = CriticalKind::SpectralSingularity;
  double energy = 0.0;
  /// |m11|/||M|| for singularities, |r_side| for reflectionless points.
  double residual = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::optional<SideTransmission> transmission;
};

struct SearchOptions {
  std::optional<IntegrationWindow> window;  ///< default_window(profile) when unset
  Units units{};
  double accept_tol = 1e-8;
  double width_tol = 1e-12;          ///< relative bracket width that ends refinement
  double residual_stop = 1e-15;      ///< refinement also ends once the residual is this small
  double confirm_transmission = 1e8;  ///< T a singularity must exceed
  unsigned threads = 0;
};

/// Grid points for a search range: 200 per unit energy, at least `minimum`.
inline std::size_t default_grid(double e_lo, double e_hi, std::size_t minimum = 64) {
  return std::max<std::size_t>(minimum, static_cast<std::size_t>(std::ceil(200.0 * (e_hi - e_lo))) + 1);
}

namespace detail {

inline constexpr double kInvGolden = 0.6180339887498949;

struct Minimum {
  double x = 0.0;
  double f = 0.0;
};

// Golden-section minimisation on the bracket (a, b, c) with f(b) below both
// ends.
template <class F>
Minimum golden_section(F&& f, double a, double b, double c, double fb, double width_tol, double f_stop) {
  Minimum best{b, fb};
  double lo = a, hi = c;
  double x1 = hi - kInvGolden * (hi - lo);
  double x2 = lo + kInvGolden * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int iter = 0; iter < 200; ++iter) {
    if (f1 < best.f) best = {x1, f1};
    if (f2 < best.f) best = {x2, f2};
    if (best.f <= f_stop || (hi - lo) <= width_tol * std::max(1.0, std::abs(best.x))) break;
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvGolden * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvGolden * (hi - lo);
      f2 = f(x2);
    }
  }
  return best;
}

// Scans `residual` on a uniform grid, refines each interior local minimum and
// keeps those below `accept`.
template <class F>
std::vector<std::pair<Minimum, std::pair<double, double>>> scan_minima(F&& residual, double e_lo, double e_hi,
                                                                       std::size_t grid, const SearchOptions& opts) {
  if (grid < 3) grid = 3;
  const double h = (e_hi - e_lo) / static_cast<double>(grid - 1);
  auto energy_at = [&](std::size_t i) { return i + 1 == grid ? e_hi : e_lo + h * static_cast<double>(i); };
  const std::vector<double> values =
      parallel_map<double>(grid, [&](std::size_t i) { return residual(energy_at(i)); }, opts.threads);

  std::vector<std::pair<Minimum, std::pair<double, double>>> found;
  for (std::size_t i = 1; i + 1 < grid; ++i) {
    if (!(values[i] < values[i - 1] && values[i] <= values[i + 1])) continue;
    const double a = energy_at(i - 1), b = energy_at(i), c = energy_at(i + 1);
    const Minimum m = golden_section(residual, a, b, c, values[i], opts.width_tol, opts.residual_stop);
    if (!(m.f < opts.accept_tol)) continue;
    const bool duplicate = std::any_of(found.begin(), found.end(), [&](const auto& e) {
      return std::abs(e.first.x - m.x) <= 1e-9 * std::max(1.0, std::abs(m.x));
    });
    if (!duplicate) found.push_back({m, {a, c}});
  }
  return found;
}

inline void check_range(const PotentialProfile& profile, double e_lo, double e_hi) {
  if (!(e_hi > e_lo)) throw DomainError("critical search: empty energy range");
  if (!(e_lo > profile.v1())) throw DomainError("critical search: range must lie above V1");
}

inline IntegrationWindow window_for(const PotentialProfile& profile, const SearchOptions& opts) {
  return opts.window ? *opts.window : default_window(profile);
}

}  // namespace detail

/// |m11| / ||M|| of the forward transfer matrix; zero exactly at a spectral
/// singularity.
inline double singularity_residual(const PotentialProfile& profile, double energy, const IntegrationWindow& window,
                                   const Units& units = {}) {
  const WavenumberPair k = wavenumbers(energy, profile.v1(), units);
  const TransferMatrix m = transfer_matrix(integrate_fundamental(profile, energy, window, units), k, window);
  return std::abs(m.m11) / m.norm();
}

/// |r_L| or |r_R| of the forward S-matrix.
inline double reflection_residual(const PotentialProfile& profile, Side side, double energy,
                                  const IntegrationWindow& window, const Units& units = {}) {
  const WavenumberPair k = wavenumbers(energy, profile.v1(), units);
  const TransferMatrix m = transfer_matrix(integrate_fundamental(profile, energy, window, units), k, window);
  const cplx num = side == Side::Left ? m.m21 : -m.m12;
  if (m.m11 == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(num / m.m11);
}

/// Spectral singularities in (e_lo, e_hi): minima of |m11|/||M|| refined to
/// below `accept_tol` and confirmed by T > confirm_transmission.
inline std::vector<CriticalPoint> find_spectral_singularities(const PotentialProfile& profile, double e_lo,
                                                              double e_hi, std::size_t grid = 0,
                                                              const SearchOptions& opts = {}) {
  detail::check_range(profile, e_lo, e_hi);
  const IntegrationWindow window = detail::window_for(profile, opts);
  if (grid == 0) grid = default_grid(e_lo, e_hi);
  auto residual = [&](double e) { return singularity_residual(profile, e, window, opts.units); };

  std::vector<CriticalPoint> out;
  for (const auto& [m, bracket] : detail::scan_minima(residual, e_lo, e_hi, grid, opts)) {
    const NumericPoint p = evaluate_numeric(profile, m.x, window, opts.units);
    const auto s = p.s(false);
    if (s.has_value()) {
      const double t = p.k.k_right.real() / p.k.k_left.real() * std::norm(s->t_left);
      if (!(t > opts.confirm_transmission)) continue;
    }
    out.push_back({CriticalKind::SpectralSingularity, m.x, m.f, bracket.first, bracket.second, std::nullopt});
  }
  return out;
}

struct CpaVerdict {
  bool is_cpa = false;
  double dip = 0.0;  ///< |det S(-k)| at E*
  std::vector<std::pair<double, double>> probes;  ///< (E, |det S(-k)|)
};

/// |det S(-k)| of the numeric time-reversed S.
inline double reversed_det_magnitude(const PotentialProfile& profile, double energy, const IntegrationWindow& window,
                                     const Units& units = {}) {
  const auto s = s_matrix_numeric(profile, energy, window, true, units);
  if (s.is_pole()) return std::numeric_limits<double>::infinity();
  return std::abs(det_s(s.value()));
}

/// CPA test: |det S(-k)| below `tol` at E* and strictly smaller than at
/// E* +- 1e-2, 1e-3, 1e-4.
inline CpaVerdict verify_cpa(const PotentialProfile& profile, double e_star, double tol,
                             const SearchOptions& opts = {}) {
  if (!(e_star > profile.v1())) throw DomainError("verify_cpa: E* must exceed V1");
  const IntegrationWindow window = detail::window_for(profile, opts);
  CpaVerdict v;
  v.dip = reversed_det_magnitude(profile, e_star, window, opts.units);
  bool strict_min = true;
  for (const double delta : {1e-2, 1e-3, 1e-4}) {
    for (const double e : {e_star - delta, e_star + delta}) {
      if (!(e > profile.v1())) continue;
      const double d = reversed_det_magnitude(profile, e, window, opts.units);
      v.probes.emplace_back(e, d);
      strict_min = strict_min && v.dip < d;
    }
  }
  v.is_cpa = v.dip < tol && strict_min;
  return v;
}

/// Zeros of r on one side in (e_lo, e_hi), with t and T reported at each.
inline std::vector<CriticalPoint> find_reflectionless(const PotentialProfile& profile, Side side, double e_lo,
                                                      double e_hi, std::size_t grid = 0,
                                                      const SearchOptions& opts = {}) {
  detail::check_range(profile, e_lo, e_hi);
  const IntegrationWindow window = detail::window_for(profile, opts);
  if (grid == 0) grid = default_grid(e_lo, e_hi);
  auto residual = [&](double e) { return reflection_residual(profile, side, e, window, opts.units); };

  std::vector<CriticalPoint> out;
  for (const auto& [m, bracket] : detail::scan_minima(residual, e_lo, e_hi, grid, opts)) {
    const auto s = s_matrix_numeric(profile, m.x, window, false, opts.units);
    CriticalPoint cp{side == Side::Left ? CriticalKind::ReflectionlessLeft : CriticalKind::ReflectionlessRight,
                     m.x, m.f, bracket.first, bracket.second, std::nullopt};
    if (s.has_value()) {
      const double t = s->k.k_right.real() / s->k.k_left.real() * std::norm(s->t_left);
      cp.transmission = SideTransmission{side == Side::Left ? s->t_left : s->t_right, t};
    }
    out.push_back(cp);
  }
  return out;
}

enum class Regime { SpectralSingularity, Reflectionless, Boundary };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::SpectralSingularity: return "SSRegime";
    case Regime::Reflectionless: return "ReflectionlessRegime";
    case Regime::Boundary: return "Boundary";
  }
  return "?";
}

/// U^2 vs V1 for the delta-step model (real V2 only). For U^2 + V1 <= 0 the
/// SS regime carries no physical energy.
inline Regime classify_regime(const DeltaStepParams& p) {
  if (p.v2.imag() != 0.0) throw DomainError("classify_regime: delta-step strength must be real");
  const double big_u = p.big_u().real();
  const double u2 = big_u * big_u;
  if (detail::nearly_equal(u2, p.v1)) return Regime::Boundary;
  return u2 > p.v1 ? Regime::SpectralSingularity : Regime::Reflectionless;
}

struct EckartFamilyParams {
  double v1 = 0.0;
  double a = 1.0;
  double q = 1.0;
  int n = 0;
  Units units{};
};

/// W^2 = q^2 Delta vs V1 for the Eckart (q, n) family.
inline Regime classify_regime(const EckartFamilyParams& p) {
  const double w = eckart_w(p.a, p.q, p.units);
  if (detail::nearly_equal(w * w, p.v1)) return Regime::Boundary;
  return w * w > p.v1 ? Regime::SpectralSingularity : Regime::Reflectionless;
}

}  // namespace semiscat

#endif  // SEMISCAT_CRITICAL_HPP
