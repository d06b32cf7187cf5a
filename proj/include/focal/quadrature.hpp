#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "focal/types.hpp"

namespace focal {

/// Nodes (strictly increasing) and positive weights of a 1D rule.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  /// Affine map of a rule on [-1, 1] to [a, b].
  QuadratureRule mapped(double a, double b) const {
    QuadratureRule r;
    r.nodes.reserve(size());
    r.weights.reserve(size());
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < size(); ++i) {
      r.nodes.push_back(mid + half * nodes[i]);
      r.weights.push_back(half * weights[i]);
    }
    return r;
  }
};

/// Gauss-Legendre rule of order n on [-1, 1], exact for polynomials of
/// degree <= 2n-1. Roots by Newton iteration from the Tricomi initial guess.
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  // P_n(x) and P_n'(x) by the three-term recurrence
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // i-th largest root
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// One node of a product rule on the unit sphere.
struct SphereNode {
  double theta;
  double phi;
  double weight;  // includes the sin(theta) Jacobian
};

/// Product rule over directions {theta in [0, alpha], phi in [0, 2 pi)}.
///
/// The polar part is Gauss-Legendre in t = sqrt(cos theta), so that
/// dSigma = 2 t dt dphi; spectra carrying a sqrt(cos theta) apodization
/// become polynomial in t and integrate to machine precision even at
/// alpha = pi/2. The azimuthal part is the uniform trapezoid, exact for
/// trigonometric polynomials of order < n_phi.
struct SolidAngleQuadrature {
  double alpha = pi / 2;
  int n_theta = 0;
  int n_phi = 0;
  std::vector<double> theta;          // n_theta polar nodes, increasing
  std::vector<double> theta_weight;   // includes sin(theta) dtheta
  std::vector<double> phi;            // n_phi azimuthal nodes
  double phi_weight = 0.0;            // 2 pi / n_phi

  std::vector<SphereNode> nodes() const {
    std::vector<SphereNode> out;
    out.reserve(theta.size() * phi.size());
    for (std::size_t i = 0; i < theta.size(); ++i)
      for (double p : phi) out.push_back({theta[i], p, theta_weight[i] * phi_weight});
    return out;
  }

  template <class F>
  auto integrate(F&& f) const {
    using R = decltype(f(0.0, 0.0));
    R acc{};
    for (std::size_t i = 0; i < theta.size(); ++i) {
      R ring{};
      for (double p : phi) ring += f(theta[i], p);
      acc += ring * (theta_weight[i] * phi_weight);
    }
    return acc;
  }
};

namespace detail {

inline void fill_uniform_phi(SolidAngleQuadrature& q, int n_phi) {
  q.n_phi = n_phi;
  q.phi.resize(n_phi);
  for (int j = 0; j < n_phi; ++j) q.phi[j] = 2.0 * pi * j / n_phi;
  q.phi_weight = 2.0 * pi / n_phi;
}

// Polar nodes for t = sqrt(cos theta) over [t_lo, t_hi], appended in
// increasing-theta order.
inline void append_sqrt_cos_nodes(SolidAngleQuadrature& q, const QuadratureRule& gl, double t_lo,
                                  double t_hi) {
  const auto rule = gl.mapped(t_lo, t_hi);
  for (std::size_t i = rule.size(); i-- > 0;) {
    const double t = rule.nodes[i];
    q.theta.push_back(std::acos(t * t));
    q.theta_weight.push_back(2.0 * t * rule.weights[i]);
  }
}

}  // namespace detail

inline SolidAngleQuadrature solid_angle_quadrature(double alpha, int n_theta, int n_phi) {
  if (!(alpha > 0.0) || alpha > pi / 2 + 1e-15)
    throw std::invalid_argument("solid_angle_quadrature: alpha must lie in (0, pi/2]");
  if (n_theta < 2) throw std::invalid_argument("solid_angle_quadrature: n_theta must be >= 2");
  if (n_phi < 4) throw std::invalid_argument("solid_angle_quadrature: n_phi must be >= 4");
  SolidAngleQuadrature q;
  q.alpha = std::min(alpha, pi / 2);
  q.n_theta = n_theta;
  const double ca = std::max(0.0, std::cos(q.alpha));
  detail::append_sqrt_cos_nodes(q, gauss_legendre(n_theta), std::sqrt(ca), 1.0);
  detail::fill_uniform_phi(q, n_phi);
  return q;
}

/// Full-sphere product rule: Gauss-Legendre in cos(theta) on each hemisphere
/// separately, so integrands with a jump at theta = pi/2 are still resolved.
/// n_theta nodes per hemisphere.
inline SolidAngleQuadrature full_sphere_quadrature(int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 4)
    throw std::invalid_argument("full_sphere_quadrature: need n_theta >= 2 and n_phi >= 4");
  SolidAngleQuadrature q;
  q.alpha = pi;
  q.n_theta = 2 * n_theta;
  const auto gl = gauss_legendre(n_theta);
  for (const auto& [lo, hi] : {std::pair{0.0, 1.0}, std::pair{-1.0, 0.0}}) {
    const auto rule = gl.mapped(lo, hi);
    for (std::size_t i = rule.size(); i-- > 0;) {
      q.theta.push_back(std::acos(rule.nodes[i]));
      q.theta_weight.push_back(rule.weights[i]);
    }
  }
  detail::fill_uniform_phi(q, n_phi);
  return q;
}

}  // namespace focal
