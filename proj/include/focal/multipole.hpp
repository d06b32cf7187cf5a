#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "focal/beams.hpp"
#include "focal/quadrature.hpp"
#include "focal/special_functions.hpp"
#include "focal/types.hpp"

namespace focal {

enum class Parity { Even, Odd };

/// Surface vector harmonics of azimuthal order 1 (Mie-theory convention):
///   M~_e = -sin(phi) pi_l e_theta - cos(phi) tau_l e_phi
///   M~_o =  cos(phi) pi_l e_theta - sin(phi) tau_l e_phi
///   N~_e =  cos(phi) tau_l e_theta - sin(phi) pi_l e_phi
///   N~_o =  sin(phi) tau_l e_theta + cos(phi) pi_l e_phi
/// N~ = s x M~. These overloads reuse precomputed angle functions.
inline TangentVector surface_M(const AngleFunctions& af, int ell, Parity parity, double phi) {
  const double p = af.pi[ell], t = af.tau[ell];
  const double c = std::cos(phi), s = std::sin(phi);
  return parity == Parity::Even ? TangentVector{-s * p, -c * t} : TangentVector{c * p, -s * t};
}

inline TangentVector surface_N(const AngleFunctions& af, int ell, Parity parity, double phi) {
  const double p = af.pi[ell], t = af.tau[ell];
  const double c = std::cos(phi), s = std::sin(phi);
  return parity == Parity::Even ? TangentVector{c * t, -s * p} : TangentVector{s * t, c * p};
}

inline TangentVector surface_M(int ell, Parity parity, double theta, double phi) {
  if (ell < 1) throw std::invalid_argument("surface_M: ell must be >= 1");
  return surface_M(angle_functions(ell, theta), ell, parity, phi);
}

inline TangentVector surface_N(int ell, Parity parity, double theta, double phi) {
  if (ell < 1) throw std::invalid_argument("surface_N: ell must be >= 1");
  return surface_N(angle_functions(ell, theta), ell, parity, phi);
}

/// Regular magnetic multipole M = j_l(kr) M~ at spherical position
/// (k_r, theta, phi), in Cartesian components.
inline ComplexField3 multipole_M(int ell, Parity parity, double k_r, double theta, double phi) {
  if (ell < 1) throw std::invalid_argument("multipole_M: ell must be >= 1");
  const auto j = spherical_bessel_j(ell, k_r);
  const SphericalFrame fr(theta, phi);
  return fr.to_cartesian(surface_M(ell, parity, theta, phi) * j[ell]);
}

/// Regular electric multipole
///   N = l(l+1) (j_l/kr) sin(theta) pi_l {cos, sin}(phi) e_r + (S_l/kr) N~,
/// finite at kr = 0 through the series form of j_l/kr and S_l/kr.
inline ComplexField3 multipole_N(int ell, Parity parity, double k_r, double theta, double phi) {
  if (ell < 1) throw std::invalid_argument("multipole_N: ell must be >= 1");
  const auto rad = radial_functions(ell, k_r);
  const auto af = angle_functions(ell, theta);
  const SphericalFrame fr(theta, phi);
  const double azimuth = parity == Parity::Even ? std::cos(phi) : std::sin(phi);
  const double radial =
      ell * (ell + 1.0) * rad.j_over_x[ell] * std::sin(theta) * af.pi[ell] * azimuth;
  return fr.s * cplx(radial) + fr.to_cartesian(surface_N(af, ell, parity, phi) * rad.S_over_x[ell]);
}

/// Expansion coefficients of an x-polarized beam: electric A_{e,1,l} and
/// magnetic B_{o,1,l} for l = 1..ell_max. Every other family vanishes for
/// such beams and is not stored.
struct MultipoleCoefficients {
  int ell_max = 0;
  double k = 2.0 * pi;
  std::vector<cplx> A_e1;  // A_e1[l - 1]
  std::vector<cplx> B_o1;  // B_o1[l - 1]

  cplx A(int ell) const { return A_e1.at(ell - 1); }
  cplx B(int ell) const { return B_o1.at(ell - 1); }
};

/// Coefficients by projecting the spectrum onto the surface harmonics:
///   B_{o,1,l} =  2k i^(l-1) (2l+1)/(2 pi l^2 (l+1)^2) int A . M~_{o,1,l} dSigma
///   A_{e,1,l} = -2k i^l     (2l+1)/(2 pi l^2 (l+1)^2) int A . N~_{e,1,l} dSigma
/// n_theta = 0 picks max(64, 2 ell_max).
inline MultipoleCoefficients expansion_coefficients(const AngularSpectrum& spectrum, int ell_max,
                                                    int n_theta = 0, int n_phi = 32) {
  if (ell_max < 1) throw std::invalid_argument("expansion_coefficients: ell_max must be >= 1");
  if (n_theta == 0) n_theta = std::max(64, 2 * ell_max);
  if (n_theta < 2 * ell_max)
    throw accuracy_error("expansion_coefficients: n_theta = " + std::to_string(n_theta) +
                         " under-resolves ell_max = " + std::to_string(ell_max) +
                         " (need n_theta >= 2 ell_max)");
  const auto q = solid_angle_quadrature(spectrum.alpha(), n_theta, n_phi);
  std::vector<cplx> acc_M(ell_max + 1), acc_N(ell_max + 1);
  for (std::size_t i = 0; i < q.theta.size(); ++i) {
    const auto af = angle_functions(ell_max, q.theta[i]);
    const double w = q.theta_weight[i] * q.phi_weight;
    for (double p : q.phi) {
      const TangentVector a = spectrum(q.theta[i], p);
      for (int l = 1; l <= ell_max; ++l) {
        const auto m = surface_M(af, l, Parity::Odd, p);
        const auto n = surface_N(af, l, Parity::Even, p);
        acc_M[l] += w * (a.theta * m.theta + a.phi * m.phi);
        acc_N[l] += w * (a.theta * n.theta + a.phi * n.phi);
      }
    }
  }
  MultipoleCoefficients c;
  c.ell_max = ell_max;
  c.k = spectrum.k();
  c.A_e1.resize(ell_max);
  c.B_o1.resize(ell_max);
  const double k = spectrum.k();
  cplx i_pow = 1.0;  // i^l
  for (int l = 1; l <= ell_max; ++l) {
    i_pow *= I;
    const double norm = (2.0 * l + 1.0) / (2.0 * pi * l * l * (l + 1.0) * (l + 1.0));
    c.B_o1[l - 1] = 2.0 * k * (i_pow / I) * norm * acc_M[l];
    c.A_e1[l - 1] = -2.0 * k * i_pow * norm * acc_N[l];
  }
  return c;
}

/// Unfocused x-polarized plane wave E0 exp(ikz) e_x:
///   B_{o,1,l} = i^l E0 (2l+1)/(l(l+1)),  A_{e,1,l} = -i B_{o,1,l}.
inline MultipoleCoefficients plane_wave_coefficients(int ell_max, double E0 = 1.0,
                                                     double k = 2.0 * pi) {
  if (ell_max < 1) throw std::invalid_argument("plane_wave_coefficients: ell_max must be >= 1");
  MultipoleCoefficients c;
  c.ell_max = ell_max;
  c.k = k;
  cplx i_pow = 1.0;
  for (int l = 1; l <= ell_max; ++l) {
    i_pow *= I;
    const double mag = E0 * (2.0 * l + 1.0) / (l * (l + 1.0));
    c.B_o1.push_back(i_pow * mag);
    c.A_e1.push_back(-I * i_pow * mag);
  }
  return c;
}

/// Closed-form dipole coefficient in units of f k E0:
///   FPW: -i (8 - cos^{3/2} a (5 + 3 cos a)) / 10,  p_x: -i (4 - 3 cos a - cos^3 a) / 4.
inline cplx a11_analytic(BeamKind kind, double alpha) {
  if (!(alpha > 0.0) || alpha > pi / 2 + 1e-15)
    throw std::invalid_argument("a11_analytic: alpha must lie in (0, pi/2]");
  return -I * dipole_factor(kind, alpha);
}

inline cplx a11_analytic(const BeamParams& params) {
  return a11_analytic(params.kind, params.alpha) * (params.amplitude * params.k);
}

/// |k r| beyond which a series truncated at ell_max is not trusted.
inline double reconstruction_radius(int ell_max) { return ell_max - 4.0; }

/// Source-free fields from the truncated series
///   E = sum (B_{o,1,l} M_{o,1,l} + A_{e,1,l} N_{e,1,l}),
///   H = -i sum (B_{o,1,l} N_{o,1,l} + A_{e,1,l} M_{e,1,l})   (c = 1).
struct MultipoleFields {
  ComplexField3 E, H;
};

inline MultipoleFields reconstruct_field(const MultipoleCoefficients& coeffs, const Vec3& r) {
  const double kr = coeffs.k * norm(r);
  if (kr > reconstruction_radius(coeffs.ell_max))
    throw accuracy_error("reconstruct_field: |kr| = " + std::to_string(kr) +
                         " exceeds the validity radius ell_max - 4 = " +
                         std::to_string(reconstruction_radius(coeffs.ell_max)));
  const auto [theta, phi] = polar_angles(r);
  const int L = coeffs.ell_max;
  const auto rad = radial_functions(L, kr);
  const auto af = angle_functions(L, theta);
  const SphericalFrame fr(theta, phi);
  const double st = std::sin(theta), cp = std::cos(phi), sp = std::sin(phi);

  cplx Er{}, Hr{};
  TangentVector Et, Ht;
  for (int l = 1; l <= L; ++l) {
    const cplx A = coeffs.A(l), B = coeffs.B(l);
    const double radial = l * (l + 1.0) * rad.j_over_x[l] * st * af.pi[l];
    // electric: B M_o + A N_e
    Et += surface_M(af, l, Parity::Odd, phi) * (B * rad.j[l]);
    Et += surface_N(af, l, Parity::Even, phi) * (A * rad.S_over_x[l]);
    Er += A * radial * cp;
    // magnetic: B N_o + A M_e
    Ht += surface_N(af, l, Parity::Odd, phi) * (B * rad.S_over_x[l]);
    Ht += surface_M(af, l, Parity::Even, phi) * (A * rad.j[l]);
    Hr += B * radial * sp;
  }
  MultipoleFields out;
  out.E = fr.s * Er + fr.to_cartesian(Et);
  out.H = (fr.s * Hr + fr.to_cartesian(Ht)) * (-I);
  return out;
}

/// Truncated surface-harmonic series of the angular spectrum,
///   A(theta, phi) = sum (-i)^(l-1)/(2k) (B_{o,1,l} M~_{o,1,l} + i A_{e,1,l} N~_{e,1,l}),
/// valid on the whole sphere (it tends to zero behind the aperture).
inline TangentVector reconstruct_spectrum(const MultipoleCoefficients& coeffs, double theta,
                                          double phi) {
  const auto af = angle_functions(coeffs.ell_max, theta);
  TangentVector sum;
  cplx pref = 1.0 / (2.0 * coeffs.k);  // (-i)^(l-1) / 2k
  for (int l = 1; l <= coeffs.ell_max; ++l) {
    sum += surface_M(af, l, Parity::Odd, phi) * (pref * coeffs.B(l));
    sum += surface_N(af, l, Parity::Even, phi) * (pref * I * coeffs.A(l));
    pref *= -I;
  }
  return sum;
}

/// Amplitude a(theta, phi) of the outgoing far field a e^{ikr}/(kr) of the
/// source-free series, from the Hankel asymptotics of the outgoing half
/// (1/2)(B M^(3) + A N^(3)); equals -k A(theta, phi) of the beam.
inline TangentVector outgoing_series_amplitude(const MultipoleCoefficients& coeffs, double theta,
                                               double phi) {
  const auto af = angle_functions(coeffs.ell_max, theta);
  TangentVector sum;
  cplx pref = -0.5 * I;  // (-i)^l / 2
  for (int l = 1; l <= coeffs.ell_max; ++l) {
    sum += surface_M(af, l, Parity::Odd, phi) * (pref * (-I) * coeffs.B(l));
    sum += surface_N(af, l, Parity::Even, phi) * (pref * coeffs.A(l));
    pref *= -I;
  }
  return sum;
}

/// L2 distance on the full sphere between the truncated series and the
/// exact spectrum (zero behind the aperture).
inline double spectrum_l2_error(const MultipoleCoefficients& coeffs,
                                const AngularSpectrum& spectrum, int n_theta = 128,
                                int n_phi = 16) {
  const auto q = full_sphere_quadrature(n_theta, n_phi);
  const double err2 = q.integrate([&](double t, double p) {
    return (reconstruct_spectrum(coeffs, t, p) - spectrum(t, p)).norm2();
  });
  return std::sqrt(err2);
}

/// Vector spherical harmonics of order m = 1 in unit normalization:
///   Y = i sqrt((2l+1)/4 pi) / (l(l+1)) (M~_e + i M~_o),  Z likewise with N~,
/// so that Z = s x Y and int |Y|^2 dSigma = 1.
inline std::pair<TangentVector, TangentVector> vector_harmonics_YZ(int ell, double theta,
                                                                   double phi) {
  if (ell < 1) throw std::invalid_argument("vector_harmonics_YZ: ell must be >= 1");
  const auto af = angle_functions(ell, theta);
  const cplx pref = I * std::sqrt((2.0 * ell + 1.0) / (4.0 * pi)) / (ell * (ell + 1.0));
  const auto Y = (surface_M(af, ell, Parity::Even, phi) + surface_M(af, ell, Parity::Odd, phi) * I) * pref;
  const auto Z = (surface_N(af, ell, Parity::Even, phi) + surface_N(af, ell, Parity::Odd, phi) * I) * pref;
  return {Y, Z};
}

}  // namespace focal
