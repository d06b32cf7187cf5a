#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "focal/beams.hpp"
#include "focal/quadrature.hpp"
#include "focal/types.hpp"

namespace focal {

inline constexpr int kDefaultFieldTheta = 64;
inline constexpr int kDefaultFieldPhi = 32;
/// Largest |k r| at which the Debye quadrature is trusted.
inline constexpr double kMaxFieldRadius = 1e3;

/// Quadrature orders needed at field radius |k r|. The phase factor
/// exp(i k r.s) oscillates ~|k r| times over the aperture, so both orders
/// grow linearly with the radius.
struct QuadratureOrder {
  int n_theta = kDefaultFieldTheta;
  int n_phi = kDefaultFieldPhi;

  static QuadratureOrder for_radius(double kr, int min_theta = kDefaultFieldTheta,
                                    int min_phi = kDefaultFieldPhi) {
    if (!(kr <= kMaxFieldRadius))
      throw accuracy_error("Debye quadrature: |kr| = " + std::to_string(kr) +
                           " exceeds the supported radius 1e3");
    const int m = static_cast<int>(std::ceil(kr));
    return {std::max(min_theta, 4 * m), std::max(min_phi, 2 * m + 16)};
  }

  bool operator<(const QuadratureOrder& o) const {
    return std::pair{n_theta, n_phi} < std::pair{o.n_theta, o.n_phi};
  }
};

/// Angular spectrum sampled on the aperture quadrature, with weights and the
/// Debye prefactor folded into the stored amplitudes. Ring-major layout: node
/// (i, j) sits at index i * n_phi + j.
struct SampledAperture {
  QuadratureOrder order;
  double k = 2.0 * pi;
  std::vector<double> ring_sin, ring_cos;  // per theta ring
  std::vector<double> sx, sy, sz;          // unit direction per node
  std::vector<ComplexField3> e_amp;        // -(ik/2 pi) w A
  std::vector<ComplexField3> h_amp;        // -(ik/2 pi) w s x A

  SampledAperture(const AngularSpectrum& spectrum, QuadratureOrder ord) : order(ord), k(spectrum.k()) {
    const auto q = solid_angle_quadrature(spectrum.alpha(), order.n_theta, order.n_phi);
    const cplx pref = -I * k / (2.0 * pi);
    const std::size_t n = q.theta.size() * q.phi.size();
    sx.reserve(n), sy.reserve(n), sz.reserve(n), e_amp.reserve(n), h_amp.reserve(n);
    for (std::size_t i = 0; i < q.theta.size(); ++i) {
      ring_sin.push_back(std::sin(q.theta[i]));
      ring_cos.push_back(std::cos(q.theta[i]));
      for (double p : q.phi) {
        const SphericalFrame fr(q.theta[i], p);
        const TangentVector a = spectrum(q.theta[i], p);
        const cplx w = pref * (q.theta_weight[i] * q.phi_weight);
        sx.push_back(fr.s.x);
        sy.push_back(fr.s.y);
        sz.push_back(fr.s.z);
        // s x e_theta = e_phi, s x e_phi = -e_theta
        e_amp.push_back(fr.to_cartesian(a) * w);
        h_amp.push_back(fr.to_cartesian({-a.phi, a.theta}) * w);
      }
    }
  }

  std::size_t size() const { return sx.size(); }
};

/// Electric and magnetic field pair at one point.
struct FieldPair {
  ComplexField3 E, H;
};

/// Evaluates the Debye integrals
///   E(r) = -(ik/2 pi) int A exp(ik r.s) dSigma,
///   H(r) = -(ik/2 pi c) int s x A exp(ik r.s) dSigma   (c = 1)
/// with a fixed quadrature. Immutable after construction; evaluation is
/// reentrant, so one integrator can be shared across threads.
class DebyeIntegrator {
 public:
  DebyeIntegrator(const AngularSpectrum& spectrum, QuadratureOrder order)
      : aperture_(std::make_shared<const SampledAperture>(spectrum, order)) {}

  explicit DebyeIntegrator(std::shared_ptr<const SampledAperture> aperture)
      : aperture_(std::move(aperture)) {}

  /// Integrator whose order covers every point with |k r| <= kr_max.
  static DebyeIntegrator for_radius(const AngularSpectrum& spectrum, double kr_max,
                                    int min_theta = kDefaultFieldTheta,
                                    int min_phi = kDefaultFieldPhi) {
    return DebyeIntegrator(spectrum, QuadratureOrder::for_radius(kr_max, min_theta, min_phi));
  }

  const SampledAperture& aperture() const { return *aperture_; }
  double k() const { return aperture_->k; }

  /// Largest |k r| this integrator's order resolves.
  double radius_limit() const {
    const auto& o = aperture_->order;
    return std::min(o.n_theta / 4.0, (o.n_phi - 16) / 2.0);
  }

  FieldPair fields(const Vec3& r) const {
    check_radius(r);
    const auto& ap = *aperture_;
    const double kx = ap.k * r.x, ky = ap.k * r.y, kz = ap.k * r.z;
    FieldPair out;
    for (std::size_t n = 0; n < ap.size(); ++n) {
      const double phase = kx * ap.sx[n] + ky * ap.sy[n] + kz * ap.sz[n];
      const cplx e{std::cos(phase), std::sin(phase)};
      out.E += ap.e_amp[n] * e;
      out.H += ap.h_amp[n] * e;
    }
    return out;
  }

  ComplexField3 electric(const Vec3& r) const {
    check_radius(r);
    const auto& ap = *aperture_;
    const double kx = ap.k * r.x, ky = ap.k * r.y, kz = ap.k * r.z;
    ComplexField3 E;
    for (std::size_t n = 0; n < ap.size(); ++n) {
      const double phase = kx * ap.sx[n] + ky * ap.sy[n] + kz * ap.sz[n];
      E += ap.e_amp[n] * cplx{std::cos(phase), std::sin(phase)};
    }
    return E;
  }

  ComplexField3 magnetic(const Vec3& r) const { return fields(r).H; }

 private:
  void check_radius(const Vec3& r) const {
    const double kr = aperture_->k * norm(r);
    if (kr > radius_limit() + 1e-9)
      throw accuracy_error("Debye quadrature order (" + std::to_string(aperture_->order.n_theta) +
                           ", " + std::to_string(aperture_->order.n_phi) +
                           ") does not resolve |kr| = " + std::to_string(kr));
  }

  std::shared_ptr<const SampledAperture> aperture_;
};

/// Single-point evaluation; the requested orders are raised to what |k r|
/// needs, and |k r| > 1e3 is rejected with accuracy_error.
inline ComplexField3 electric_field(const AngularSpectrum& spectrum, const Vec3& r,
                                    int n_theta = kDefaultFieldTheta, int n_phi = kDefaultFieldPhi) {
  return DebyeIntegrator::for_radius(spectrum, spectrum.k() * norm(r), n_theta, n_phi).electric(r);
}

inline ComplexField3 magnetic_field(const AngularSpectrum& spectrum, const Vec3& r,
                                    int n_theta = kDefaultFieldTheta, int n_phi = kDefaultFieldPhi) {
  return DebyeIntegrator::for_radius(spectrum, spectrum.k() * norm(r), n_theta, n_phi).magnetic(r);
}

/// z component of the time-averaged Poynting vector, (1/8 pi) Re(E x H*)_z.
inline double poynting_z(const FieldPair& f) {
  return (f.E.x * std::conj(f.H.y) - f.E.y * std::conj(f.H.x)).real() / (8.0 * pi);
}

inline double poynting_z(const AngularSpectrum& spectrum, const Vec3& r) {
  return poynting_z(DebyeIntegrator::for_radius(spectrum, spectrum.k() * norm(r)).fields(r));
}

/// Focal-plane (z = 0) samples on a square grid symmetric about the origin.
/// Coordinates are in units of 1/k; index (iy, ix) is stored at iy * n + ix.
struct FocalGrid {
  double k_extent = 0.0;        // grid spans [-k_extent, k_extent] on each axis
  int n = 0;                    // samples per axis
  std::vector<double> axis;     // k x (= k y) coordinates
  std::vector<double> s_z;
  std::vector<double> ex2;      // |E_x|^2
  std::vector<double> e2;       // |E|^2
  std::vector<double> phase_x;  // arg E_x
  double s_z_origin = 0.0;
  double ex2_origin = 0.0;
  std::vector<double> s_z_norm;  // s_z / s_z_origin
  std::vector<double> ex2_norm;  // ex2 / ex2_origin

  std::size_t index(int iy, int ix) const { return static_cast<std::size_t>(iy) * n + ix; }
};

inline std::vector<double> symmetric_axis(double half_width, int n) {
  std::vector<double> axis(n);
  for (int i = 0; i < n; ++i) axis[i] = half_width * (2.0 * i - (n - 1)) / (n - 1);
  return axis;
}

inline FocalGrid focal_plane_map(const AngularSpectrum& spectrum, double k_extent, int n) {
  if (!(k_extent > 0.0)) throw std::invalid_argument("focal_plane_map: extent must be > 0");
  if (n < 16) throw std::invalid_argument("focal_plane_map: need at least 16 samples per axis");
  FocalGrid g;
  g.k_extent = k_extent;
  g.n = n;
  g.axis = symmetric_axis(k_extent, n);
  const std::size_t total = static_cast<std::size_t>(n) * n;
  g.s_z.resize(total);
  g.ex2.resize(total);
  g.e2.resize(total);
  g.phase_x.resize(total);

  const double k = spectrum.k();
  const auto integ = DebyeIntegrator::for_radius(spectrum, std::sqrt(2.0) * k_extent);
  parallel_for(total, [&](std::size_t idx) {
    const int iy = static_cast<int>(idx / n), ix = static_cast<int>(idx % n);
    const auto f = integ.fields({g.axis[ix] / k, g.axis[iy] / k, 0.0});
    g.s_z[idx] = poynting_z(f);
    g.ex2[idx] = std::norm(f.E.x);
    g.e2[idx] = f.E.norm2();
    g.phase_x[idx] = std::arg(f.E.x);
  });
  const auto origin = integ.fields({});
  g.s_z_origin = poynting_z(origin);
  g.ex2_origin = std::norm(origin.E.x);
  g.s_z_norm.resize(total);
  g.ex2_norm.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    g.s_z_norm[i] = g.s_z[i] / g.s_z_origin;
    g.ex2_norm[i] = g.ex2[i] / g.ex2_origin;
  }
  return g;
}

/// Field samples along a line through the origin in the focal plane,
/// k r = t * direction for t in k_positions.
struct LineSample {
  double k_position = 0.0;
  FieldPair field;
  double s_z = 0.0;
};

inline std::vector<LineSample> focal_line(const AngularSpectrum& spectrum, const Vec3& direction,
                                          const std::vector<double>& k_positions) {
  const double len = norm(direction);
  if (!(len > 0.0)) throw std::invalid_argument("focal_line: direction must be nonzero");
  double kr_max = 0.0;
  for (double t : k_positions) kr_max = std::max(kr_max, std::abs(t));
  const auto integ = DebyeIntegrator::for_radius(spectrum, kr_max);
  const Vec3 u = direction * (1.0 / (len * spectrum.k()));
  std::vector<LineSample> out(k_positions.size());
  parallel_for(out.size(), [&](std::size_t i) {
    out[i].k_position = k_positions[i];
    out[i].field = integ.fields(u * k_positions[i]);
    out[i].s_z = poynting_z(out[i].field);
  });
  return out;
}

/// Phase of E_x on the optical axis relative to a plane wave exp(ikz).
struct AxialPhaseSample {
  double kz = 0.0;
  bool valid = false;   // false where |E_x| vanishes and the phase is undefined
  double wrapped = 0.0;  // arg E_x - kz reduced to (-pi, pi]
  double unwrapped = 0.0;
};

/// Relative |E_x| below which an axial sample counts as a node.
inline constexpr double kAxialNodeThreshold = 1e-9;

inline double wrap_phase(double a) {
  a = std::remainder(a, 2.0 * pi);
  return a <= -pi ? a + 2.0 * pi : a;
}

/// Axial phase anomaly arg E_x(0, 0, z) - k z at the given k z values.
/// Unwrapping continues each valid sample onto the branch nearest its valid
/// predecessor; node samples are flagged invalid and skipped.
inline std::vector<AxialPhaseSample> axial_phase(const AngularSpectrum& spectrum,
                                                 const std::vector<double>& kz_values) {
  double kz_max = 0.0;
  for (double v : kz_values) kz_max = std::max(kz_max, std::abs(v));
  const auto integ = DebyeIntegrator::for_radius(spectrum, kz_max);
  const double k = spectrum.k();
  std::vector<ComplexField3> fields(kz_values.size());
  parallel_for(fields.size(),
               [&](std::size_t i) { fields[i] = integ.electric({0.0, 0.0, kz_values[i] / k}); });
  const double scale = std::abs(integ.electric({}).x);

  std::vector<AxialPhaseSample> out(kz_values.size());
  std::optional<double> previous;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& s = out[i];
    s.kz = kz_values[i];
    const cplx ex = fields[i].x;
    s.valid = std::abs(ex) > kAxialNodeThreshold * scale;
    if (!s.valid) continue;
    s.wrapped = wrap_phase(std::arg(ex) - s.kz);
    s.unwrapped = previous ? *previous + wrap_phase(s.wrapped - *previous) : s.wrapped;
    previous = s.unwrapped;
  }
  return out;
}

/// Power through the focal-plane disk k rho <= k_rho_max, integral of S_z.
/// Radial Gauss-Legendre nodes (n_rho) times a uniform azimuthal trapezoid
/// (n_phi). Diagnostic only: the tail converges slowly toward the flux
/// through the reference sphere.
inline double focal_plane_power(const AngularSpectrum& spectrum, double k_rho_max, int n_rho = 0,
                                int n_phi = 16) {
  if (!(k_rho_max > 0.0)) throw std::invalid_argument("focal_plane_power: rho_max must be > 0");
  if (n_rho <= 0) n_rho = std::max(64, 2 * static_cast<int>(std::ceil(k_rho_max)));
  if (n_phi < 4) throw std::invalid_argument("focal_plane_power: n_phi must be >= 4");
  const double k = spectrum.k();
  const auto radial = gauss_legendre(n_rho).mapped(0.0, k_rho_max);

  // Aperture azimuth grids are chosen as multiples of n_phi so that the
  // field-point azimuths phi_m = 2 pi m / n_phi coincide with shifts of the
  // aperture grid: exp(i k rho sin(theta) cos(phi_j - phi_m)) is then a
  // permutation of one table per ring.
  auto order_for = [&](double kr) {
    auto o = QuadratureOrder::for_radius(kr);
    o.n_theta = 32 * ((o.n_theta + 31) / 32);
    o.n_phi = n_phi * ((o.n_phi + n_phi - 1) / n_phi);
    return o;
  };
  std::map<QuadratureOrder, std::shared_ptr<const SampledAperture>> apertures;
  for (double kr : radial.nodes) {
    const auto o = order_for(kr);
    if (!apertures.count(o)) apertures.emplace(o, std::make_shared<const SampledAperture>(spectrum, o));
  }

  std::vector<double> ring_power(radial.size());
  parallel_for(radial.size(), [&](std::size_t ir) {
    const double krho = radial.nodes[ir];
    const auto& ap = *apertures.at(order_for(krho));
    const int nt = ap.order.n_theta, np = ap.order.n_phi;
    const int stride = np / n_phi;
    std::vector<double> cos_phi(np);
    for (int j = 0; j < np; ++j) cos_phi[j] = std::cos(2.0 * pi * j / np);
    std::vector<cplx> table(np);
    double sum = 0.0;
    std::vector<FieldPair> acc(n_phi);
    for (int i = 0; i < nt; ++i) {
      const double a = krho * ap.ring_sin[i];
      for (int j = 0; j < np; ++j) table[j] = std::polar(1.0, a * cos_phi[j]);
      const std::size_t base = static_cast<std::size_t>(i) * np;
      for (int m = 0; m < n_phi; ++m) {
        const int shift = m * stride;
        auto& f = acc[m];
        for (int j = 0; j < np; ++j) {
          const cplx e = table[(j - shift + np) % np];
          f.E += ap.e_amp[base + j] * e;
          f.H += ap.h_amp[base + j] * e;
        }
      }
    }
    for (const auto& f : acc) sum += poynting_z(f);
    ring_power[ir] = sum * (2.0 * pi / n_phi);
  });
  double total = 0.0;
  for (std::size_t ir = 0; ir < radial.size(); ++ir)
    total += radial.weights[ir] * radial.nodes[ir] * ring_power[ir];
  return total / (k * k);
}

}  // namespace focal
