#ifndef SEMISCAT_CORE_HPP
#define SEMISCAT_CORE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace semiscat {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Input outside the domain of an operation (E <= 0, E* <= V1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Probability bookkeeping requested where it is undefined (closed channel,
/// time-reversed matrix).
class UnsupportedRegime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Kinematic Gamma singularity of the closed-form amplitudes; these points are
/// not critical points of the potential.
class UnphysicalPoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical integration could not meet its accuracy contract.
class AccuracyFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integration produced non-finite state.
class StiffnessFailure : public AccuracyFailure {
 public:
  using AccuracyFailure::AccuracyFailure;
};

/// A checked identity (reciprocity, det M = k_R/k_L) failed beyond tolerance.
class IdentityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Pole state
// ---------------------------------------------------------------------------

/// A vanishing denominator. `denominator` is the magnitude that fell below the
/// pole threshold (or the distance of a Gamma argument from its pole).
struct Pole {
  double denominator = 0.0;
};

/// Either a finite value or a tagged pole. Poles are an expected outcome of
/// scans over energy, so they are values rather than exceptions.
template <class T>
class PoleOr {
 public:
  PoleOr(T value) : state_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  PoleOr(Pole pole) : state_(pole) {}            // NOLINT(google-explicit-constructor)

  [[nodiscard]] bool is_pole() const { return std::holds_alternative<Pole>(state_); }
  [[nodiscard]] bool has_value() const { return !is_pole(); }
  explicit operator bool() const { return has_value(); }

  [[nodiscard]] const T& value() const {
    if (is_pole()) throw std::logic_error("PoleOr::value() called on a pole state");
    return std::get<T>(state_);
  }
  const T& operator*() const { return value(); }
  const T* operator->() const { return &value(); }

  [[nodiscard]] const Pole& pole() const {
    if (!is_pole()) throw std::logic_error("PoleOr::pole() called on a finite value");
    return std::get<Pole>(state_);
  }

 private:
  std::variant<T, Pole> state_;
};

// ---------------------------------------------------------------------------
// Units and wavenumbers
// ---------------------------------------------------------------------------

/// Mass and reduced Planck constant. Defaults give 2*mu = hbar^2 = 1.
struct Units {
  double mu = 0.5;
  double hbar = 1.0;

  Units() = default;
  Units(double mass, double action) : mu(mass), hbar(action) {
    if (!(mu > 0.0) || !(hbar > 0.0)) throw DomainError("Units: mu and hbar must be positive");
  }

  /// 2*mu/hbar^2, the factor converting energy to squared wavenumber.
  [[nodiscard]] double k2_per_energy() const { return 2.0 * mu / (hbar * hbar); }
};

struct WavenumberPair {
  cplx k_left;
  cplx k_right;
  double energy = 0.0;
  double v1 = 0.0;

  [[nodiscard]] WavenumberPair negated() const { return {-k_left, -k_right, energy, v1}; }
  /// Both asymptotic channels propagate.
  [[nodiscard]] bool right_channel_open() const { return energy > v1; }
};

/// Asymptotic wavenumbers. Below the step the right wavenumber is taken on the
/// decaying branch, Im k_R > 0; exactly at threshold k_R = 0.
inline WavenumberPair wavenumbers(double energy, double v1, const Units& units = {}) {
  if (!(energy > 0.0)) throw DomainError("wavenumbers: E must be positive (no left channel)");
  const double c = units.k2_per_energy();
  WavenumberPair k;
  k.energy = energy;
  k.v1 = v1;
  k.k_left = cplx(std::sqrt(c * energy), 0.0);
  const double excess = energy - v1;
  if (excess > 0.0)
    k.k_right = cplx(std::sqrt(c * excess), 0.0);
  else if (excess < 0.0)
    k.k_right = cplx(0.0, std::sqrt(-c * excess));
  else
    k.k_right = cplx(0.0, 0.0);
  return k;
}

// ---------------------------------------------------------------------------
// Two-port S-matrix
// ---------------------------------------------------------------------------

/// Two-port scattering matrix S = [[t_L, r_L], [r_R, t_R]].
struct ScatteringMatrix {
  cplx t_left;
  cplx r_left;
  cplx r_right;
  cplx t_right;
  WavenumberPair k;
  bool time_reversed = false;

  /// Wavenumbers the amplitudes were evaluated at (negated when time reversed).
  [[nodiscard]] WavenumberPair effective_k() const { return time_reversed ? k.negated() : k; }
};

struct Probabilities {
  double transmission = 0.0;
  double reflection_left = 0.0;
  double reflection_right = 0.0;
};

/// Relative residual of k_L t_R = k_R t_L.
inline double transmission_reciprocity_residual(const ScatteringMatrix& s) {
  const WavenumberPair k = s.effective_k();
  const cplx lhs = k.k_left * s.t_right;
  const cplx rhs = k.k_right * s.t_left;
  const double scale = std::abs(lhs) + std::abs(rhs);
  return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

/// T, R_L, R_R with flux normalisation T = (k_R/k_L)|t_L|^2 = (k_L/k_R)|t_R|^2.
/// Only defined with both channels open and for the physical (forward) S.
inline Probabilities probabilities(const ScatteringMatrix& s, double tol = 1e-8) {
  if (s.time_reversed) throw UnsupportedRegime("probabilities: time-reversed S has no flux interpretation");
  if (!s.k.right_channel_open())
    throw UnsupportedRegime("probabilities: right channel closed (E <= V1)");
  const double kl = s.k.k_left.real();
  const double kr = s.k.k_right.real();
  const double from_left = kr / kl * std::norm(s.t_left);
  const double from_right = kl / kr * std::norm(s.t_right);
  const double scale = std::max(std::abs(from_left), std::abs(from_right));
  if (scale > 0.0 && std::abs(from_left - from_right) > tol * scale)
    throw IdentityViolation("probabilities: T_L != T_R beyond tolerance");
  return {from_left, std::norm(s.r_left), std::norm(s.r_right)};
}

/// |r_L|^2, meaningful at any energy. The closed-channel region is not given
/// full probability bookkeeping.
inline double left_reflection_probability(const ScatteringMatrix& s) { return std::norm(s.r_left); }

/// det S = t_L t_R - r_L r_R.
inline cplx det_s(const ScatteringMatrix& s) { return s.t_left * s.t_right - s.r_left * s.r_right; }

inline PoleOr<cplx> det_s(const PoleOr<ScatteringMatrix>& s) {
  if (s.is_pole()) return s.pole();
  return det_s(s.value());
}

}  // namespace semiscat

#endif  // SEMISCAT_CORE_HPP
