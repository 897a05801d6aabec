#ifndef SEMISCAT_TESTS_SUPPORT_HPP
#define SEMISCAT_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "semiscat.hpp"

namespace testing_support {

using semiscat::cplx;

inline double rel_err(cplx got, cplx want) {
  const double scale = std::abs(want);
  return scale == 0.0 ? std::abs(got) : std::abs(got - want) / scale;
}

inline double rel_err(double got, double want) {
  const double scale = std::abs(want);
  return scale == 0.0 ? std::abs(got) : std::abs(got - want) / scale;
}

/// Largest entry difference relative to the largest entry of `want`.
inline double s_matrix_err(const semiscat::ScatteringMatrix& got, const semiscat::ScatteringMatrix& want) {
  const cplx a[] = {got.t_left, got.r_left, got.r_right, got.t_right};
  const cplx b[] = {want.t_left, want.r_left, want.r_right, want.t_right};
  double diff = 0.0, scale = 0.0;
  for (int i = 0; i < 4; ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max(scale, std::abs(b[i]));
  }
  return diff / scale;
}

using Rng = std::mt19937_64;

inline double uniform(Rng& gen, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }

}  // namespace testing_support

#endif
