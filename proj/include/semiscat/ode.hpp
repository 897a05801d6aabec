#ifndef SEMISCAT_ODE_HPP
#define SEMISCAT_ODE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>

#include "semiscat/core.hpp"

namespace semiscat::ode {

template <std::size_t N>
using State = std::array<cplx, N>;

enum class Method {
  DormandPrince54,   ///< 7 stages (FSAL), embedded 4th-order estimate
  DormandPrince853,  ///< 12 stages, 5th/3rd-order combined estimate (Hairer's DOP853)
};

struct Options {
  Method method = Method::DormandPrince853;
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double initial_step = 0.0;  ///< 0 picks a step from the interval length
  double max_step = 0.0;      ///< 0 means unbounded
  std::size_t max_steps = 5'000'000;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  /// Sum of accepted local error estimates (scaled to the state), a crude
  /// bound on the global error.
  double error_sum = 0.0;
  double last_step = 0.0;
};

namespace detail {

namespace dp54 {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b*, the embedded 4th-order error weights
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace dp54

// Dormand-Prince 8(5,3) tableau, stages 1-12.
namespace dp853 {
inline constexpr std::array<double, 12> c = {0.0, 0.05260015195876773, 0.0789002279381516, 0.1183503419072274, 0.2816496580927726, 0.3333333333333333, 0.25, 0.3076923076923077, 0.6512820512820513, 0.6, 0.8571428571428571, 1.0};
inline constexpr std::array<std::array<double, 12>, 12> a = {{
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.05260015195876773, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0197250569845379, 0.0591751709536137, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.02958758547680685, 0.0, 0.08876275643042054, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.2413651341592667, 0.0, -0.8845494793282861, 0.924834003261792, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.037037037037037035, 0.0, 0.0, 0.17082860872947386, 0.12546768756682242, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.037109375, 0.0, 0.0, 0.17025221101954405, 0.06021653898045596, -0.017578125, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.03709200011850479, 0.0, 0.0, 0.17038392571223998, 0.10726203044637328, -0.015319437748624402, 0.008273789163814023, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.6241109587160757, 0.0, 0.0, -3.3608926294469414, -0.868219346841726, 27.59209969944671, 20.154067550477894, -43.48988418106996, 0.0, 0.0, 0.0, 0.0},
    {0.47766253643826434, 0.0, 0.0, -2.4881146199716677, -0.590290826836843, 21.230051448181193, 15.279233632882423, -33.28821096898486, -0.020331201708508627, 0.0, 0.0, 0.0},
    {-0.9371424300859873, 0.0, 0.0, 5.186372428844064, 1.0914373489967295, -8.149787010746927, -18.52006565999696, 22.739487099350505, 2.4936055526796523, -3.0467644718982196, 0.0, 0.0},
    {2.273310147516538, 0.0, 0.0, -10.53449546673725, -2.0008720582248625, -17.9589318631188, 27.94888452941996, -2.8589982771350235, -8.87285693353063, 12.360567175794303, 0.6433927460157636, 0.0},
}};
inline constexpr std::array<double, 12> b = {0.054293734116568765, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, 0.3111643669578199, -0.1521609496625161, 0.20136540080403034, 0.04471061572777259};
inline constexpr std::array<double, 13> e3 = {-0.18980075407240762, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, -0.4226823213237919, -0.1521609496625161, 0.20136540080403034, 0.02265179219836082, 0.0};
inline constexpr std::array<double, 13> e5 = {0.01312004499419488, 0.0, 0.0, 0.0, 0.0, -1.2251564463762044, -0.4957589496572502, 1.6643771824549864, -0.35032884874997366, 0.3341791187130175, 0.08192320648511571, -0.022355307863886294, 0.0};
}  // namespace dp853

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
  State<N> out = y;
  for (const auto& [w, k] : terms) {
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < N; ++i) out[i] += h * w * (*k)[i];
  }
  return out;
}

template <std::size_t N>
bool finite(const State<N>& y) {
  return std::all_of(y.begin(), y.end(), [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

}  // namespace detail

namespace detail {

template <std::size_t N, class Rhs, class Observer>
State<N> integrate_dp54(Rhs& rhs, double x0, double x1, State<N> y, const Options& opts, Stats& stats,
                        Observer& observer) {
  using namespace dp54;
  const double span = x1 - x0;
  if (span == 0.0) return y;
  const double dir = span > 0.0 ? 1.0 : -1.0;
  double h = opts.initial_step > 0.0 ? opts.initial_step : std::min(std::abs(span), 1e-2);
  if (opts.max_step > 0.0) h = std::min(h, opts.max_step);

  double x = x0;
  State<N> k1 = rhs(x, y);
  while (dir * (x1 - x) > 0.0) {
    if (stats.accepted + stats.rejected >= opts.max_steps)
      throw AccuracyFailure("ode::integrate: step budget exhausted");
    bool last = false;
    if (h >= std::abs(x1 - x)) {
      h = std::abs(x1 - x);
      last = true;
    }
    const double hs = dir * h;
    const State<N> k2 = rhs(x + c2 * hs, axpy<N>(y, hs, {{a21, &k1}}));
    const State<N> k3 = rhs(x + c3 * hs, axpy<N>(y, hs, {{a31, &k1}, {a32, &k2}}));
    const State<N> k4 = rhs(x + c4 * hs, axpy<N>(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State<N> k5 = rhs(x + c5 * hs, axpy<N>(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State<N> k6 =
        rhs(x + hs, axpy<N>(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State<N> y_new = axpy<N>(y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const double x_new = last ? x1 : x + hs;
    const State<N> k7 = rhs(x_new, y_new);

    if (!finite<N>(y_new)) throw StiffnessFailure("ode::integrate: non-finite state");

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const cplx e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(e) / scale);
    }

    if (err <= 1.0) {
      ++stats.accepted;
      stats.error_sum += err * opts.rel_tol;
      stats.last_step = h;
      x = x_new;
      y = y_new;
      k1 = k7;
      observer(x, y);
      if (last) break;
    } else {
      ++stats.rejected;
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= err <= 1.0 ? factor : std::min(factor, 1.0);
    if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
    if (h < 1e-14 * std::max(1.0, std::abs(x))) throw AccuracyFailure("ode::integrate: step size underflow");
  }
  return y;
}

template <std::size_t N, class Rhs, class Observer>
State<N> integrate_dp853(Rhs& rhs, double x0, double x1, State<N> y, const Options& opts, Stats& stats,
                         Observer& observer) {
  using namespace dp853;
  constexpr std::size_t S = 12;
  const double span = x1 - x0;
  if (span == 0.0) return y;
  const double dir = span > 0.0 ? 1.0 : -1.0;
  double h = opts.initial_step > 0.0 ? opts.initial_step : std::min(std::abs(span), 1e-2);
  if (opts.max_step > 0.0) h = std::min(h, opts.max_step);

  double x = x0;
  std::array<State<N>, S + 1> k;
  k[0] = rhs(x, y);
  while (dir * (x1 - x) > 0.0) {
    if (stats.accepted + stats.rejected >= opts.max_steps)
      throw AccuracyFailure("ode::integrate: step budget exhausted");
    bool last = false;
    if (h >= std::abs(x1 - x)) {
      h = std::abs(x1 - x);
      last = true;
    }
    const double hs = dir * h;
    for (std::size_t s = 1; s < S; ++s) {
      State<N> ys = y;
      for (std::size_t j = 0; j < s; ++j) {
        if (a[s][j] == 0.0) continue;
        for (std::size_t i = 0; i < N; ++i) ys[i] += hs * a[s][j] * k[j][i];
      }
      k[s] = rhs(x + c[s] * hs, ys);
    }
    State<N> y_new = y;
    for (std::size_t j = 0; j < S; ++j) {
      if (b[j] == 0.0) continue;
      for (std::size_t i = 0; i < N; ++i) y_new[i] += hs * b[j] * k[j][i];
    }
    if (!finite<N>(y_new)) throw StiffnessFailure("ode::integrate: non-finite state");
    const double x_new = last ? x1 : x + hs;
    k[S] = rhs(x_new, y_new);

    double norm5 = 0.0, norm3 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      cplx err5(0.0, 0.0), err3(0.0, 0.0);
      for (std::size_t j = 0; j <= S; ++j) {
        err5 += e5[j] * k[j][i];
        err3 += e3[j] * k[j][i];
      }
      const double scale = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      norm5 += std::norm(err5 / scale);
      norm3 += std::norm(err3 / scale);
    }
    const double denom = norm5 + 0.01 * norm3;
    const double err = denom == 0.0 ? 0.0 : h * norm5 / std::sqrt(denom * static_cast<double>(N));

    if (err <= 1.0) {
      ++stats.accepted;
      stats.error_sum += err * opts.rel_tol;
      stats.last_step = h;
      x = x_new;
      y = y_new;
      k[0] = k[S];
      observer(x, y);
      if (last) break;
    } else {
      ++stats.rejected;
    }
    const double factor = err == 0.0 ? 10.0 : std::clamp(0.9 * std::pow(err, -1.0 / 8.0), 0.2, 10.0);
    h *= err <= 1.0 ? factor : std::min(factor, 1.0);
    if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
    if (h < 1e-14 * std::max(1.0, std::abs(x))) throw AccuracyFailure("ode::integrate: step size underflow");
  }
  return y;
}

}  // namespace detail

/// Adaptive embedded Runge-Kutta integration of y' = f(x, y) from x0 to x1
/// (either direction). `observer(x, y)` is called after every accepted step.
/// Throws StiffnessFailure on non-finite state, AccuracyFailure when the step
/// budget is exhausted or the step size underflows.
template <std::size_t N, class Rhs, class Observer>
State<N> integrate(Rhs&& rhs, double x0, double x1, State<N> y, const Options& opts, Stats& stats,
                   Observer&& observer) {
  if (opts.method == Method::DormandPrince54) return detail::integrate_dp54<N>(rhs, x0, x1, y, opts, stats, observer);
  return detail::integrate_dp853<N>(rhs, x0, x1, y, opts, stats, observer);
}

template <std::size_t N, class Rhs>
State<N> integrate(Rhs&& rhs, double x0, double x1, State<N> y, const Options& opts, Stats& stats) {
  return integrate<N>(std::forward<Rhs>(rhs), x0, x1, y, opts, stats, [](double, const State<N>&) {});
}

}  // namespace semiscat::ode

#endif  // SEMISCAT_ODE_HPP
