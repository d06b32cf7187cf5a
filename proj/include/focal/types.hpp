#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace focal {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Raised when a requested evaluation lies outside the range where the
/// chosen discretization (quadrature order, series truncation) is trusted.
class accuracy_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a quantity is mathematically undefined at the given input.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

inline constexpr double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// Complex Cartesian 3-vector; one field sample (E or H) at a point.
struct ComplexField3 {
  cplx x{}, y{}, z{};

  ComplexField3& operator+=(const ComplexField3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  ComplexField3 operator+(const ComplexField3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  ComplexField3 operator-(const ComplexField3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  ComplexField3 operator*(cplx s) const { return {x * s, y * s, z * s}; }
  ComplexField3 operator-() const { return {-x, -y, -z}; }

  ComplexField3 conj() const { return {std::conj(x), std::conj(y), std::conj(z)}; }
  double norm2() const { return std::norm(x) + std::norm(y) + std::norm(z); }
  double norm() const { return std::sqrt(norm2()); }
};

inline ComplexField3 operator*(cplx s, const ComplexField3& v) { return v * s; }
inline ComplexField3 operator*(const Vec3& v, cplx s) { return {v.x * s, v.y * s, v.z * s}; }

inline cplx dot(const ComplexField3& a, const ComplexField3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline ComplexField3 cross(const ComplexField3& a, const ComplexField3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// Complex tangential pair (v_theta, v_phi) at a direction on the unit sphere.
struct TangentVector {
  cplx theta{}, phi{};

  TangentVector operator+(const TangentVector& o) const { return {theta + o.theta, phi + o.phi}; }
  TangentVector operator-(const TangentVector& o) const { return {theta - o.theta, phi - o.phi}; }
  TangentVector operator*(cplx s) const { return {theta * s, phi * s}; }
  TangentVector& operator+=(const TangentVector& o) {
    theta += o.theta;
    phi += o.phi;
    return *this;
  }
  double norm2() const { return std::norm(theta) + std::norm(phi); }
};

/// Local spherical frame (s, e_theta, e_phi) for polar angle theta measured
/// from +z and azimuth phi measured from +x.
struct SphericalFrame {
  Vec3 s, e_theta, e_phi;

  SphericalFrame(double theta, double phi) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    s = {st * cp, st * sp, ct};
    e_theta = {ct * cp, ct * sp, -st};
    e_phi = {-sp, cp, 0.0};
  }

  ComplexField3 to_cartesian(const TangentVector& v) const {
    return e_theta * v.theta + e_phi * v.phi;
  }
  TangentVector to_tangent(const ComplexField3& v) const {
    return {v.x * e_theta.x + v.y * e_theta.y + v.z * e_theta.z,
            v.x * e_phi.x + v.y * e_phi.y + v.z * e_phi.z};
  }
};

/// Polar and azimuthal angle of a point; the origin maps to (0, 0).
inline std::pair<double, double> polar_angles(const Vec3& r) {
  const double rho = std::hypot(r.x, r.y);
  if (rho == 0.0 && r.z == 0.0) return {0.0, 0.0};
  return {std::atan2(rho, r.z), rho == 0.0 ? 0.0 : std::atan2(r.y, r.x)};
}

/// Runs body(i) for i in [0, n) over the available hardware threads. Each
/// index is handled exactly once, so writes to distinct slots are race-free
/// and results do not depend on the thread count.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) body(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace focal
