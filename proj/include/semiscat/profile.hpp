#ifndef SEMISCAT_PROFILE_HPP
#define SEMISCAT_PROFILE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "semiscat/core.hpp"
#include "semiscat/special_functions.hpp"

namespace semiscat {

/// V(x) = V1 Theta(x) + i V2 delta(x)
struct DeltaStep {
  double v1 = 0.0;
  cplx v2;
};

/// V(x) = (V1/2)[1 + tanh(x/2a)] + i V2 sech^2(x/2a)
struct Eckart {
  double v1 = 0.0;
  cplx v2;
  double a = 1.0;
};

/// V(x) = (V1/2)[1 + erf(x/a)] + i V2 exp(-x^2/a^2)
struct ErfGauss {
  double v1 = 0.0;
  cplx v2;
  double a = 1.0;
};

/// User-supplied smooth potential. `breakpoints` lists jump discontinuities
/// (integration is split there); `point_strength` adds s*delta(x) at x = 0.
struct Custom {
  std::function<cplx(double)> sampler;
  double v1 = 0.0;
  std::vector<double> breakpoints;
  std::optional<cplx> point_strength;
  std::string name = "custom";
};

/// Semi-infinite complex potential: V -> 0 at -inf, V -> V1 at +inf.
class PotentialProfile {
 public:
  using Kind = std::variant<DeltaStep, Eckart, ErfGauss, Custom>;

  PotentialProfile(Kind kind) : kind_(std::move(kind)) { validate(); }  // NOLINT(google-explicit-constructor)

  [[nodiscard]] const Kind& kind() const { return kind_; }

  [[nodiscard]] double v1() const {
    return std::visit([](const auto& p) { return p.v1; }, kind_);
  }

  [[nodiscard]] std::string name() const {
    return std::visit(
        [](const auto& p) -> std::string {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, DeltaStep>) return "delta-step";
          else if constexpr (std::is_same_v<P, Eckart>) return "eckart";
          else if constexpr (std::is_same_v<P, ErfGauss>) return "erf-gauss";
          else return p.name;
        },
        kind_);
  }

  /// Regular (non-distributional) part of V(x).
  [[nodiscard]] cplx value(double x) const {
    const cplx i(0.0, 1.0);
    return std::visit(
        [&](const auto& p) -> cplx {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, DeltaStep>) {
            return x > 0.0 ? cplx(p.v1, 0.0) : cplx(0.0, 0.0);
          } else if constexpr (std::is_same_v<P, Eckart>) {
            const double s = x / (2.0 * p.a);
            const double sech = 1.0 / std::cosh(s);
            return 0.5 * p.v1 * (1.0 + std::tanh(s)) + i * p.v2 * sech * sech;
          } else if constexpr (std::is_same_v<P, ErfGauss>) {
            const double s = x / p.a;
            return 0.5 * p.v1 * (1.0 + erf_real(s)) + i * p.v2 * std::exp(-s * s);
          } else {
            return p.sampler(x);
          }
        },
        kind_);
  }

  /// Strength s of an s*delta(x) term at the origin, if any.
  [[nodiscard]] std::optional<cplx> point_interaction() const {
    if (const auto* d = std::get_if<DeltaStep>(&kind_)) return cplx(0.0, 1.0) * d->v2;
    if (const auto* c = std::get_if<Custom>(&kind_)) return c->point_strength;
    return std::nullopt;
  }

  /// Jump discontinuities of the regular part, excluding x = 0 (integration
  /// always starts there).
  [[nodiscard]] std::vector<double> breakpoints() const {
    if (const auto* c = std::get_if<Custom>(&kind_)) {
      std::vector<double> out;
      for (double b : c->breakpoints)
        if (b != 0.0) out.push_back(b);
      return out;
    }
    return {};
  }

 private:
  void validate() const {
    std::visit(
        [](const auto& p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, Eckart> || std::is_same_v<P, ErfGauss>) {
            if (!(p.a > 0.0)) throw DomainError("PotentialProfile: width a must be positive");
          }
          if constexpr (std::is_same_v<P, Custom>) {
            if (!p.sampler) throw DomainError("PotentialProfile: custom profile needs a sampler");
          }
          if (!std::isfinite(p.v1)) throw DomainError("PotentialProfile: V1 must be finite");
        },
        kind_);
  }

  Kind kind_;
};

/// Integration interval [-d1, d2] outside which V is taken to be at its
/// asymptotes.
struct IntegrationWindow {
  double d1 = 0.0;
  double d2 = 0.0;
  double eps_pot = 1e-12;
  double step_tol = 1e-12;
};

/// Window derived from the profile's decay: Eckart tails fall like
/// exp(-|x|/a), the erf/Gauss tails like exp(-x^2/a^2). The delta-step is
/// matched directly at the interface.
inline IntegrationWindow default_window(const PotentialProfile& profile, double eps_pot = 1e-12,
                                        double step_tol = 1e-12) {
  IntegrationWindow w;
  w.eps_pot = eps_pot;
  w.step_tol = step_tol;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, DeltaStep>) {
          w.d1 = w.d2 = 0.0;
        } else if constexpr (std::is_same_v<P, Eckart>) {
          w.d1 = w.d2 = 2.0 * p.a * std::log(2.0 / eps_pot);
        } else if constexpr (std::is_same_v<P, ErfGauss>) {
          // erfc(s) < exp(-s^2), so s^2 >= ln(max(1,|V1|,|V2|)/eps) bounds both tails.
          const double scale = std::max({1.0, std::abs(p.v1), std::abs(p.v2)});
          w.d1 = w.d2 = p.a * std::ceil(std::sqrt(std::log(scale / eps_pot)));
        } else {
          throw DomainError("default_window: custom profiles need an explicit window");
        }
      },
      profile.kind());
  return w;
}

/// Throws DomainError when the potential has not reached its asymptotes at the
/// window edges.
inline void check_window(const PotentialProfile& profile, const IntegrationWindow& w) {
  if (w.d1 < 0.0 || w.d2 < 0.0) throw DomainError("IntegrationWindow: d1, d2 must be non-negative");
  if (!(w.step_tol > 0.0)) throw DomainError("IntegrationWindow: step_tol must be positive");
  const cplx left = profile.value(-w.d1 - (w.d1 == 0.0 ? 1e-300 : 0.0));
  const cplx right = profile.value(w.d2 + (w.d2 == 0.0 ? 1e-300 : 0.0));
  if (std::abs(left) > w.eps_pot || std::abs(right - profile.v1()) > w.eps_pot)
    throw DomainError("IntegrationWindow: potential not asymptotic at window edge");
}

}  // namespace semiscat

#endif  // SEMISCAT_PROFILE_HPP
