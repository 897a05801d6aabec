#ifndef SEMISCAT_SPECIAL_FUNCTIONS_HPP
#define SEMISCAT_SPECIAL_FUNCTIONS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "semiscat/core.hpp"

namespace semiscat {

/// Arguments closer than this to a non-positive integer are Gamma poles.
inline constexpr double kGammaPoleTolerance = 1e-12;

struct GammaResult {
  cplx value;
  double log_magnitude = 0.0;  ///< log|Gamma(z)|, finite even when |value| overflows
};

/// Result of a product/quotient of Gamma functions. `exact_zero` marks a
/// denominator pole (the ratio is exactly 0, not an underflow).
struct GammaRatio {
  cplx value;
  bool exact_zero = false;
};

namespace detail {

// Lanczos approximation, g = 7, n = 9.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

/// Distance from z to the nearest non-positive integer, or +inf if the nearest
/// integer is positive.
inline double pole_distance(cplx z) {
  const double n = std::round(z.real());
  if (n > 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(z - cplx(n, 0.0));
}

inline bool is_pole(cplx z) { return pole_distance(z) <= kGammaPoleTolerance; }

// log Gamma(z) for Re z >= 1/2.
inline cplx lanczos_log_gamma(cplx z) {
  z -= 1.0;
  cplx series = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) series += kLanczosCoeffs[i] / (z + static_cast<double>(i));
  const cplx t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

// log sin(pi z), overflow-safe for large |Im z|. Imaginary part is only defined
// modulo 2 pi.
inline cplx log_sin_pi(cplx z) {
  // sin(pi z) has period 2 in Re z; reduce exactly before scaling by pi.
  const double shift = 2.0 * std::round(z.real() / 2.0);
  const cplx w = kPi * (z - shift);
  const cplx i(0.0, 1.0);
  if (std::abs(w.imag()) < 20.0) return std::log(std::sin(w));
  if (w.imag() > 0.0) {
    // sin w = e^{-iw} (e^{2iw} - 1) / (2i), |e^{2iw}| < 1
    return -i * w + std::log((std::exp(2.0 * i * w) - 1.0) / (2.0 * i));
  }
  // sin w = e^{iw} (1 - e^{-2iw}) / (2i)
  return i * w + std::log((1.0 - std::exp(-2.0 * i * w)) / (2.0 * i));
}

}  // namespace detail

/// log Gamma(z) away from poles; reflection Gamma(z)Gamma(1-z) = pi/sin(pi z)
/// for Re z < 1/2. The imaginary part is not the principal-branch log Gamma,
/// only exp() of the result is meaningful.
inline PoleOr<cplx> log_gamma(cplx z) {
  const double dist = detail::pole_distance(z);
  if (dist <= kGammaPoleTolerance) return Pole{dist};
  if (z.real() < 0.5) return std::log(kPi) - detail::log_sin_pi(z) - detail::lanczos_log_gamma(1.0 - z);
  return detail::lanczos_log_gamma(z);
}

inline PoleOr<GammaResult> gamma(cplx z) {
  const auto lg = log_gamma(z);
  if (lg.is_pole()) return lg.pole();
  const cplx l = lg.value();
  return GammaResult{std::exp(l), l.real()};
}

/// prod Gamma(numerators) / prod Gamma(denominators), evaluated in log space.
/// A denominator pole gives an exact zero; a numerator pole gives a pole.
/// Coincident numerator and denominator poles are not cancelled: the caller has
/// to reduce the ratio first, and std::invalid_argument is thrown otherwise.
inline PoleOr<GammaRatio> log_gamma_ratio(std::span<const cplx> numerators, std::span<const cplx> denominators) {
  double num_pole = -1.0;
  bool den_pole = false;
  for (const cplx z : numerators) {
    const double d = detail::pole_distance(z);
    if (d <= kGammaPoleTolerance) num_pole = std::max(num_pole, d);
  }
  for (const cplx z : denominators) den_pole = den_pole || detail::is_pole(z);
  if (num_pole >= 0.0 && den_pole)
    throw std::invalid_argument("log_gamma_ratio: coincident numerator and denominator poles");
  if (num_pole >= 0.0) return Pole{num_pole};
  if (den_pole) return GammaRatio{cplx(0.0, 0.0), true};

  cplx acc(0.0, 0.0);
  for (const cplx z : numerators) acc += log_gamma(z).value();
  for (const cplx z : denominators) acc -= log_gamma(z).value();
  return GammaRatio{std::exp(acc), false};
}

inline PoleOr<GammaRatio> log_gamma_ratio(std::initializer_list<cplx> numerators,
                                          std::initializer_list<cplx> denominators) {
  return log_gamma_ratio(std::span<const cplx>(numerators.begin(), numerators.size()),
                         std::span<const cplx>(denominators.begin(), denominators.size()));
}

/// Error function of a real argument.
inline double erf_real(double x) { return std::erf(x); }

}  // namespace semiscat

#endif  // SEMISCAT_SPECIAL_FUNCTIONS_HPP
