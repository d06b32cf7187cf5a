#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "focal/types.hpp"

namespace focal {

namespace detail {

// j_l(x) = x^l/(2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1)).
// Returns the bracketed sum and the same sum weighted by (l + 2k + 1),
// which gives d(x j_l)/dx after multiplying by x^l/(2l+1)!!.
struct AscendingSums {
  double plain = 0.0;
  double weighted = 0.0;
};

inline AscendingSums ascending_sums(int ell, double x) {
  const double h = -0.5 * x * x;
  double term = 1.0;
  AscendingSums s{1.0, ell + 1.0};
  for (int k = 1; k < 200; ++k) {
    term *= h / (k * (2.0 * ell + 2.0 * k + 1.0));
    s.plain += term;
    s.weighted += term * (ell + 2.0 * k + 1.0);
    if (std::abs(term) < 1e-18 * std::abs(s.plain)) break;
  }
  return s;
}

inline constexpr double kSeriesThreshold = 0.5;

}  // namespace detail

/// Spherical Bessel functions j_0(x) .. j_{ell_max}(x).
///
/// Ascending series for x < 0.5; otherwise Miller's downward recurrence
/// started well above max(ell_max, x) and normalized against whichever of
/// j_0, j_1 is larger in magnitude (avoids the zeros of sin x / x).
inline std::vector<double> spherical_bessel_j(int ell_max, double x) {
  if (ell_max < 0) throw std::invalid_argument("spherical_bessel_j: ell_max must be >= 0");
  if (!(x >= 0.0)) throw std::invalid_argument("spherical_bessel_j: x must be >= 0");
  std::vector<double> j(ell_max + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  if (x < detail::kSeriesThreshold) {
    double lead = 1.0;  // x^l / (2l+1)!!
    for (int l = 0; l <= ell_max; ++l) {
      if (l > 0) lead *= x / (2.0 * l + 1.0);
      j[l] = lead * detail::ascending_sums(l, x).plain;
    }
    return j;
  }

  const double top = std::max<double>(ell_max, x);
  const int start = static_cast<int>(top + 30.0 + 10.0 * std::sqrt(top));
  double upper = 0.0;   // j_{l+1}
  double cur = 1e-30;   // j_l, arbitrary seed at l = start
  for (int l = start; l > 0; --l) {
    const double lower = (2.0 * l + 1.0) / x * cur - upper;
    upper = cur;
    cur = lower;
    if (l - 1 <= ell_max) j[l - 1] = cur;
    if (l <= ell_max) j[l] = upper;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      upper *= 1e-250;
      for (int m = l - 1; m <= ell_max; ++m)
        if (m >= 0) j[m] *= 1e-250;
    }
  }
  // cur = unnormalized j_0, upper = unnormalized j_1
  const double j0 = std::sin(x) / x;
  const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  const double scale = std::abs(j0) >= std::abs(j1) ? j0 / cur : j1 / upper;
  for (double& v : j) v *= scale;
  return j;
}

/// Riccati-Bessel derivatives S_l(x) = d(x j_l(x))/dx for l = 0..ell_max,
/// via S_l = x j_{l-1} - l j_l (S_0 = cos x).
inline std::vector<double> riccati_S(int ell_max, double x) {
  if (ell_max < 1) throw std::invalid_argument("riccati_S: ell_max must be >= 1");
  if (!(x >= 0.0)) throw std::invalid_argument("riccati_S: x must be >= 0");
  const auto j = spherical_bessel_j(ell_max, x);
  std::vector<double> s(ell_max + 1);
  s[0] = std::cos(x);
  for (int l = 1; l <= ell_max; ++l) s[l] = x * j[l - 1] - l * j[l];
  return s;
}

/// Radial factors of the regular vector multipoles at x = kr: j_l, S_l and
/// the ratios j_l/x, S_l/x that appear with a 1/kr prefactor. The ratios
/// come from the ascending series below x = 0.5, so they stay finite at
/// x = 0 (only l = 1 survives there: j_1/x -> 1/3, S_1/x -> 2/3).
/// Entry 0 of the ratio arrays is not used and holds NaN.
struct RadialFunctions {
  std::vector<double> j, S, j_over_x, S_over_x;
};

inline RadialFunctions radial_functions(int ell_max, double x) {
  if (ell_max < 1) throw std::invalid_argument("radial_functions: ell_max must be >= 1");
  if (!(x >= 0.0)) throw std::invalid_argument("radial_functions: x must be >= 0");
  RadialFunctions r;
  r.j = spherical_bessel_j(ell_max, x);
  r.S = riccati_S(ell_max, x);
  r.j_over_x.assign(ell_max + 1, std::numeric_limits<double>::quiet_NaN());
  r.S_over_x.assign(ell_max + 1, std::numeric_limits<double>::quiet_NaN());
  if (x < detail::kSeriesThreshold) {
    double lead = 1.0;  // x^(l-1) / (2l+1)!!
    for (int l = 1; l <= ell_max; ++l) {
      lead = (l == 1) ? 1.0 / 3.0 : lead * x / (2.0 * l + 1.0);
      const auto sums = detail::ascending_sums(l, x);
      r.j_over_x[l] = lead * sums.plain;
      r.S_over_x[l] = lead * sums.weighted;
    }
  } else {
    for (int l = 1; l <= ell_max; ++l) {
      r.j_over_x[l] = r.j[l] / x;
      r.S_over_x[l] = r.S[l] / x;
    }
  }
  return r;
}

/// Mie angle functions pi_l = P_l^1(cos t)/sin t and tau_l = dP_l^1(cos t)/dt
/// for l = 0..ell_max (index 0 holds zeros).
///
/// Convention: P_l^1 carries no Condon-Shortley phase, so P_1^1 = sin t and
/// pi_1 = +1. Upward recurrence in cos t; no division by sin t, so the poles
/// are regular: pi_l(0) = tau_l(0) = l(l+1)/2.
struct AngleFunctions {
  int ell_max = 0;
  std::vector<double> pi;
  std::vector<double> tau;
};

inline AngleFunctions angle_functions(int ell_max, double theta) {
  if (ell_max < 1) throw std::invalid_argument("angle_functions: ell_max must be >= 1");
  if (!(theta >= 0.0 && theta <= pi))
    throw std::invalid_argument("angle_functions: theta must lie in [0, pi]");
  AngleFunctions a;
  a.ell_max = ell_max;
  a.pi.assign(ell_max + 1, 0.0);
  a.tau.assign(ell_max + 1, 0.0);
  const double mu = std::cos(theta);
  a.pi[1] = 1.0;
  a.tau[1] = mu;
  for (int n = 2; n <= ell_max; ++n) {
    a.pi[n] = ((2.0 * n - 1.0) * mu * a.pi[n - 1] - n * a.pi[n - 2]) / (n - 1.0);
    a.tau[n] = n * mu * a.pi[n] - (n + 1.0) * a.pi[n - 1];
  }
  return a;
}

}  // namespace focal
