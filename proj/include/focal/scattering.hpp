#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "focal/beams.hpp"
#include "focal/debye_fields.hpp"
#include "focal/multipole.hpp"
#include "focal/quadrature.hpp"
#include "focal/types.hpp"

namespace focal {

enum class OscillatorKind { Classical, TLS };

inline std::string_view to_string(OscillatorKind kind) {
  return kind == OscillatorKind::Classical ? "classical" : "tls";
}

inline OscillatorKind oscillator_kind_from_string(std::string_view name) {
  if (name == "classical") return OscillatorKind::Classical;
  if (name == "tls") return OscillatorKind::TLS;
  throw std::invalid_argument("unknown oscillator kind: " + std::string(name));
}

/// Radiatively broadened point scatterer. gamma is the linewidth (Gamma_1 for
/// a two-level system); detuning and rabi share its frequency unit. The Rabi
/// frequency is an independent input, not derived from the focal field.
struct Oscillator {
  OscillatorKind kind = OscillatorKind::Classical;
  double gamma = 1.0;
  double detuning = 0.0;
  double rabi = 0.0;

  void validate() const {
    if (!(gamma > 0.0)) throw std::invalid_argument("Oscillator: gamma must be > 0");
    if (!(rabi >= 0.0)) throw std::invalid_argument("Oscillator: rabi must be >= 0");
    if (kind == OscillatorKind::Classical && rabi != 0.0)
      throw std::invalid_argument("Oscillator: a classical oscillator has no Rabi frequency");
  }
};

/// Resonant cross section 3 lambda^2 / (2 pi).
inline double sigma0(double lambda) { return 3.0 * lambda * lambda / (2.0 * pi); }

/// sigma / sigma0: Gamma^2/(4 Delta^2 + Gamma^2), or with the saturation term
/// 2 Omega^2 in the denominator for a two-level system.
inline double cross_section_ratio(const Oscillator& osc) {
  osc.validate();
  const double g2 = osc.gamma * osc.gamma;
  const double d2 = 4.0 * osc.detuning * osc.detuning;
  const double sat = osc.kind == OscillatorKind::TLS ? 2.0 * osc.rabi * osc.rabi : 0.0;
  return g2 / (d2 + g2 + sat);
}

inline double cross_section(const Oscillator& osc, double lambda) {
  return sigma0(lambda) * cross_section_ratio(osc);
}

/// Complex dipole response Gamma / (2 Delta + i Gamma) of the classical
/// oscillator; sets the scattered far-field amplitude.
inline cplx lorentzian_amplitude(const Oscillator& osc) {
  osc.validate();
  if (osc.kind != OscillatorKind::Classical)
    throw std::invalid_argument("scattered fields are defined for the classical oscillator only");
  return osc.gamma / cplx(2.0 * osc.detuning, osc.gamma);
}

/// Effective focal area P_inc / (2 c W_el(O)) with W_el = |E(O)|^2 / 16 pi and
/// P_inc the flux through the Gaussian reference sphere. This energy-density
/// form holds for any beam; the S_z(O) form needs circular symmetry.
inline double effective_area_numeric(const AngularSpectrum& spectrum,
                                     int n_theta = kDefaultFieldTheta,
                                     int n_phi = kDefaultFieldPhi) {
  const double power = incident_power(spectrum, std::max(n_theta, kDefaultPowerTheta),
                                      std::max(n_phi, kDefaultPowerPhi));
  const double e2 = electric_field(spectrum, {}, n_theta, n_phi).norm2();
  if (!(e2 > 0.0)) throw domain_error("effective_area_numeric: the beam has no field at the focus");
  return power * 8.0 * pi / e2;
}

/// 3 pi / (k^2 F(alpha)) for the p_x wave.
inline double effective_area_px(double alpha, double k) {
  return 3.0 * pi / (k * k * px_aperture_factor(alpha));
}

/// K = P_sca / P_inc = sigma / area_eff, lambda taken from the beam.
inline double scattering_ratio(const Oscillator& osc, const AngularSpectrum& spectrum) {
  return cross_section(osc, spectrum.params().wavelength()) / effective_area_numeric(spectrum);
}

struct Transmittance {
  double T = 1.0;
  double R = 0.0;
};

/// Full-collection transmittance T = 1 - R, R = sigma / (2 area_eff).
inline Transmittance transmittance(const Oscillator& osc, const AngularSpectrum& spectrum) {
  const double R = 0.5 * scattering_ratio(osc, spectrum);
  return {1.0 - R, R};
}

/// Resonant, unsaturated p_x transmittance with entrance angle alpha and
/// collection angle beta:
///   1 - (4 - 3 cos a - cos^3 a)(4 + 3 cos m + cos^3 m) / 16,  m = max(a, b).
inline double transmittance_px(double alpha, double beta) {
  if (!(alpha > 0.0) || alpha > pi / 2 + 1e-15 || !(beta > 0.0) || beta > pi / 2 + 1e-15)
    throw std::invalid_argument("transmittance_px: angles must lie in (0, pi/2]");
  const double ca = std::cos(alpha);
  const double cm = std::cos(std::max(alpha, beta));
  return 1.0 - (4.0 - 3.0 * ca - ca * ca * ca) * (4.0 + 3.0 * cm + cm * cm * cm) / 16.0;
}

/// Far-field overlaps that fix the transmittance into a collection cone of
/// half angle beta. With a = A / (f E0) and p = cos(t) cos(f) e_t - sin(f) e_f
/// (the x-dipole pattern), the transmitted fraction normalized to the
/// incident power inside the cone is
///   T = 1 - (sigma / sigma0) * factor,
///   factor = (2 c I_ap - c^2 I_pp) / I_aa,
/// where c = A_e11 / (-i f k E0), I_aa = int |a|^2, I_ap = int a.p over
/// min(alpha, beta), and I_pp = int |p|^2 over beta.
struct CollectionFactors {
  double dipole = 0.0;  // c
  double I_aa = 0.0, I_ap = 0.0, I_pp = 0.0;

  double factor() const { return (2.0 * dipole * I_ap - dipole * dipole * I_pp) / I_aa; }
  double transmittance(double sigma_ratio) const { return 1.0 - sigma_ratio * factor(); }
};

inline CollectionFactors collection_factors(const AngularSpectrum& spectrum, double beta,
                                            int n_theta = kDefaultFieldTheta,
                                            int n_phi = kDefaultFieldPhi) {
  if (!(beta > 0.0) || beta > pi / 2 + 1e-15)
    throw std::invalid_argument("collection_factors: beta must lie in (0, pi/2]");
  const double f = spectrum.amplitude(), k = spectrum.k();
  CollectionFactors cf;
  // A_e11 from the focal field, E_x(O) = (2/3) A_e11
  const cplx a11 = 1.5 * electric_field(spectrum, {}, n_theta, n_phi).x;
  cf.dipole = (a11 / (-I * f * k)).real();
  auto pattern = [](double t, double p) { return TangentVector{std::cos(t) * std::cos(p), -std::sin(p)}; };
  const auto inner = solid_angle_quadrature(std::min(spectrum.alpha(), beta), n_theta, n_phi);
  cf.I_aa = inner.integrate([&](double t, double p) { return spectrum(t, p).norm2(); }) / (f * f);
  cf.I_ap = inner.integrate([&](double t, double p) {
    const auto a = spectrum(t, p);
    const auto d = pattern(t, p);
    return (a.theta * d.theta + a.phi * d.phi).real();
  }) / f;
  const auto cone = solid_angle_quadrature(beta, n_theta, n_phi);
  cf.I_pp = cone.integrate([&](double t, double p) { return pattern(t, p).norm2(); });
  return cf;
}

inline double collected_transmittance(const Oscillator& osc, const AngularSpectrum& spectrum,
                                      double beta) {
  return collection_factors(spectrum, beta).transmittance(cross_section_ratio(osc));
}

/// Smallest radius k r accepted by the far-field expressions.
inline constexpr double kFarFieldMinKr = 20.0;

inline void check_far_field(double k_r) {
  if (!(k_r >= kFarFieldMinKr))
    throw domain_error("far-field expressions need k r >= 20, got " + std::to_string(k_r));
}

/// Field radiated by a classical x-dipole driven by E_inc(O):
///   E_sca = -(3/2) E_inc(O) Gamma/(2 Delta + i Gamma) e^{ikr}/(kr) (cos t cos f e_t - sin f e_f).
inline TangentVector scattered_far_field(const Oscillator& osc, cplx e_inc_origin, double theta,
                                         double phi, double k_r) {
  check_far_field(k_r);
  const cplx amp =
      -1.5 * e_inc_origin * lorentzian_amplitude(osc) * std::polar(1.0 / k_r, k_r);
  return TangentVector{std::cos(theta) * std::cos(phi), -std::sin(phi)} * amp;
}

struct FarField {
  TangentVector incident, scattered, outgoing;
};

/// Coherent forward far field E_out = E_inc + E_sca. The incident part is the
/// outgoing branch of the focused beam, -k A(theta, phi) e^{ikr}/(kr) (the
/// stationary-phase limit of the Debye integral, equal to the Hankel-series
/// sum of the multipole expansion); the scattered part is driven by
/// E_inc(O) = (2/3) A_e11 taken from the coefficients.
inline FarField outgoing_far_field(const Oscillator& osc, const MultipoleCoefficients& coeffs,
                                   const AngularSpectrum& spectrum, double theta, double phi,
                                   double k_r) {
  check_far_field(k_r);
  if (!(theta >= 0.0 && theta <= pi / 2))
    throw domain_error("outgoing_far_field: theta must lie in the forward hemisphere");
  FarField f;
  f.incident = spectrum(theta, phi) * (-spectrum.k() * std::polar(1.0 / k_r, k_r));
  f.scattered = scattered_far_field(osc, (2.0 / 3.0) * coeffs.A(1), theta, phi, k_r);
  f.outgoing = f.incident + f.scattered;
  return f;
}

/// On-axis phase shift imposed by the oscillator,
///   Phi = arg(1 - i Gamma/(2 Delta + i Gamma) * c),
/// with c the beam's dipole factor; the minus sign carries the Gouy phase of
/// the incident field. Returns nullopt where the argument vanishes (c = 1 on
/// resonance), since the phase is undefined there.
inline std::optional<double> phase_shift(BeamKind kind, double alpha, double delta_over_gamma) {
  if (!(alpha > 0.0) || alpha > pi / 2 + 1e-15)
    throw std::invalid_argument("phase_shift: alpha must lie in (0, pi/2]");
  const double c = dipole_factor(kind, alpha);
  const cplx z = 1.0 - I / cplx(2.0 * delta_over_gamma, 1.0) * c;
  if (std::abs(z) < 1e-14) return std::nullopt;
  return std::arg(z);
}

struct SweepConfig {
  BeamParams beam;
  double beta = pi / 2;
  Oscillator oscillator;  // detuning is overridden per row
  double delta_min = -5.0, delta_max = 5.0;  // in units of gamma
  int steps = 201;
};

struct SweepRow {
  double delta_over_gamma = 0.0;
  double T = 1.0;
  double R = 0.0;
  std::optional<double> phi;
};

/// Transmittance into the collection cone and on-axis phase shift over a
/// uniform detuning grid.
inline std::vector<SweepRow> detuning_sweep(const SweepConfig& cfg) {
  if (cfg.steps < 1 || !(cfg.delta_max >= cfg.delta_min) || (cfg.steps > 1 && cfg.delta_max == cfg.delta_min))
    throw std::invalid_argument("detuning_sweep: empty detuning range");
  cfg.oscillator.validate();
  const AngularSpectrum spectrum(cfg.beam);
  const auto cf = collection_factors(spectrum, cfg.beta);
  std::vector<SweepRow> rows(cfg.steps);
  for (int i = 0; i < cfg.steps; ++i) {
    const double d = cfg.steps == 1
                         ? cfg.delta_min
                         : cfg.delta_min + (cfg.delta_max - cfg.delta_min) * i / (cfg.steps - 1);
    Oscillator osc = cfg.oscillator;
    osc.detuning = d * osc.gamma;
    auto& row = rows[i];
    row.delta_over_gamma = d;
    row.T = cf.transmittance(cross_section_ratio(osc));
    row.R = 1.0 - row.T;
    row.phi = phase_shift(cfg.beam.kind, cfg.beam.alpha, d);
  }
  return rows;
}

/// Observables of one beam/oscillator configuration; areas in units of lambda^2.
struct ScatteringSummary {
  double sigma = 0.0;
  double area_eff = 0.0;
  double K = 0.0;
  double T = 1.0;
  double R = 0.0;
  std::optional<double> phi;
};

inline ScatteringSummary summarize(const Oscillator& osc, const AngularSpectrum& spectrum) {
  const double lambda = spectrum.params().wavelength();
  ScatteringSummary s;
  s.sigma = cross_section(osc, lambda) / (lambda * lambda);
  s.area_eff = effective_area_numeric(spectrum) / (lambda * lambda);
  s.K = s.sigma / s.area_eff;
  s.R = 0.5 * s.K;
  s.T = 1.0 - s.R;
  s.phi = phase_shift(spectrum.kind(), spectrum.alpha(), osc.detuning / osc.gamma);
  return s;
}

}  // namespace focal
