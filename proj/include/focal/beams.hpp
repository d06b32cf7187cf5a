#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "focal/quadrature.hpp"
#include "focal/types.hpp"

namespace focal {

/// FPW: aplanatically focused linearly polarized plane wave.
/// PX:  directional dipole wave (time-reversed x-dipole emission pattern).
enum class BeamKind { FPW, PX };

inline std::string_view to_string(BeamKind kind) {
  switch (kind) {
    case BeamKind::FPW: return "fpw";
    case BeamKind::PX: return "px";
  }
  throw std::invalid_argument("unknown beam kind");
}

inline BeamKind beam_kind_from_string(std::string_view name) {
  if (name == "fpw") return BeamKind::FPW;
  if (name == "px") return BeamKind::PX;
  throw std::invalid_argument("unknown beam kind: " + std::string(name));
}

/// Reduced units by default: lambda = 1 (k = 2 pi), f E0 = 1, c = 1.
struct BeamParams {
  BeamKind kind = BeamKind::PX;
  double alpha = pi / 2;     // semiaperture angle, radians
  double k = 2.0 * pi;       // wavenumber
  double amplitude = 1.0;    // f * E0

  double wavelength() const { return 2.0 * pi / k; }

  void validate() const {
    if (!(alpha > 0.0) || alpha > pi / 2 + 1e-15)
      throw std::invalid_argument("BeamParams: alpha must lie in (0, pi/2]");
    if (!(k > 0.0)) throw std::invalid_argument("BeamParams: k must be > 0");
    if (!(amplitude > 0.0)) throw std::invalid_argument("BeamParams: amplitude must be > 0");
  }
};

/// Vector angular spectrum A(theta, phi) on the entrance side of the Gaussian
/// reference sphere, in the (e_theta, e_phi) basis. Zero beyond the aperture.
class AngularSpectrum {
 public:
  explicit AngularSpectrum(const BeamParams& params) : params_(params) {
    params_.validate();
    if (params_.kind != BeamKind::FPW && params_.kind != BeamKind::PX)
      throw std::invalid_argument("AngularSpectrum: unknown beam kind");
  }

  const BeamParams& params() const { return params_; }
  BeamKind kind() const { return params_.kind; }
  double alpha() const { return params_.alpha; }
  double k() const { return params_.k; }
  double amplitude() const { return params_.amplitude; }

  TangentVector operator()(double theta, double phi) const {
    if (theta > params_.alpha) return {};
    const double ct = std::cos(theta);
    const double cp = std::cos(phi), sp = std::sin(phi);
    const double f = params_.amplitude;
    switch (params_.kind) {
      case BeamKind::FPW: {
        const double apod = f * std::sqrt(std::max(0.0, ct));
        return {apod * cp, -apod * sp};
      }
      case BeamKind::PX:
        return {f * ct * cp, -f * sp};
    }
    return {};
  }

  /// Cartesian form of A at direction (theta, phi).
  ComplexField3 cartesian(double theta, double phi) const {
    return SphericalFrame(theta, phi).to_cartesian((*this)(theta, phi));
  }

 private:
  BeamParams params_;
};

inline AngularSpectrum make_spectrum(const BeamParams& params) { return AngularSpectrum(params); }

inline constexpr int kDefaultPowerTheta = 32;
inline constexpr int kDefaultPowerPhi = 16;

/// Power carried by the beam through the entrance of the Gaussian reference
/// sphere, (1/8 pi) * integral |A|^2 dSigma (c = 1). Equals (f E0)^2 / 6 for
/// the p_x wave at alpha = pi/2 and (f E0)^2 sin^2(alpha) / 8 for the FPW.
inline double incident_power(const AngularSpectrum& spectrum, int n_theta = kDefaultPowerTheta,
                             int n_phi = kDefaultPowerPhi) {
  if (n_theta < kDefaultPowerTheta || n_phi < kDefaultPowerPhi)
    throw std::invalid_argument("incident_power: quadrature orders below (32, 16)");
  const auto q = solid_angle_quadrature(spectrum.alpha(), n_theta, n_phi);
  const double flux =
      q.integrate([&](double t, double p) { return spectrum(t, p).norm2(); });
  return flux / (8.0 * pi);
}

/// F(alpha) = (4 - 3 cos alpha - cos^3 alpha) / 4, the aperture factor shared
/// by the p_x focal field, inverse effective area and scattering ratio.
/// Small apertures use the factored form (1 - c)(c^2 + c + 4) / 4 with
/// 1 - c = 2 sin^2(alpha/2), which avoids the cancellation near c = 1.
inline double px_aperture_factor(double alpha) {
  const double c = std::cos(alpha);
  if (alpha < 0.5) {
    const double s = std::sin(0.5 * alpha);
    return 0.5 * s * s * (c * c + c + 4.0);
  }
  return 0.25 * (4.0 - 3.0 * c - c * c * c);
}

/// (8 - cos^{3/2} alpha (5 + 3 cos alpha)) / 10, the FPW counterpart that sets
/// the dipole coefficient A_e11 / (-i f k E0).
/// With u = sqrt(cos alpha) the bracket factors as
/// (1 - u)(8 + 8u + 8u^2 + 3u^3 + 3u^4), used for small apertures.
inline double fpw_aperture_factor(double alpha) {
  const double c = std::max(0.0, std::cos(alpha));
  const double u = std::sqrt(c);
  if (alpha < 0.5) {
    const double s = std::sin(0.5 * alpha);
    const double one_minus_u = 2.0 * s * s / (1.0 + u);
    return 0.1 * one_minus_u * (8.0 + u * (8.0 + u * (8.0 + u * (3.0 + 3.0 * u))));
  }
  return 0.1 * (8.0 - c * u * (5.0 + 3.0 * c));
}

/// Dipole-overlap factor of either beam: A_e11 = -i f k E0 * dipole_factor.
inline double dipole_factor(BeamKind kind, double alpha) {
  switch (kind) {
    case BeamKind::FPW: return fpw_aperture_factor(alpha);
    case BeamKind::PX: return px_aperture_factor(alpha);
  }
  throw std::invalid_argument("dipole_factor: unknown beam kind");
}

}  // namespace focal
