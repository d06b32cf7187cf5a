#include <cmath>

#include <gtest/gtest.h>

#include "focal/scattering.hpp"

using namespace focal;

namespace {

constexpr double deg = 180.0 / pi;

Oscillator classical(double delta = 0.0) { return {OscillatorKind::Classical, 1.0, delta, 0.0}; }

}  // namespace

TEST(Oscillator, Validation) {
  EXPECT_THROW((Oscillator{OscillatorKind::Classical, 0.0}).validate(), std::invalid_argument);
  EXPECT_THROW((Oscillator{OscillatorKind::Classical, 1.0, 0.0, 0.5}).validate(), std::invalid_argument);
  EXPECT_THROW((Oscillator{OscillatorKind::TLS, 1.0, 0.0, -1.0}).validate(), std::invalid_argument);
  EXPECT_NO_THROW((Oscillator{OscillatorKind::TLS, 1.0, 0.0, 2.0}).validate());
  EXPECT_EQ(oscillator_kind_from_string("tls"), OscillatorKind::TLS);
  EXPECT_THROW(oscillator_kind_from_string("atom"), std::invalid_argument);
}

TEST(CrossSection, Examples) {
  EXPECT_DOUBLE_EQ(cross_section(classical(), 1.0), 3.0 / (2 * pi));
  EXPECT_DOUBLE_EQ(cross_section(classical(0.5), 1.0), 1.5 / (2 * pi));
  EXPECT_DOUBLE_EQ(cross_section({OscillatorKind::TLS, 2.0, 0.0, 2.0}, 1.0), sigma0(1.0) / 3);
  EXPECT_DOUBLE_EQ(cross_section(classical(), 2.0), 4 * sigma0(1.0));
  for (double d : {-3.0, -0.2, 0.7, 10.0}) {
    const double r = cross_section_ratio(classical(d));
    EXPECT_GT(r, 0.0);
    EXPECT_LT(r, 1.0);
  }
}

TEST(EffectiveArea, PxClosedFormOverAlphaGrid) {
  for (int i = 1; i <= 20; ++i) {
    const double a = i * (pi / 2) / 20;
    const AngularSpectrum s({BeamKind::PX, a});
    EXPECT_NEAR(effective_area_numeric(s) / effective_area_px(a, s.k()), 1.0, 1e-12);
  }
  EXPECT_NEAR(effective_area_numeric(AngularSpectrum({BeamKind::PX, pi / 2})), 3.0 / (4 * pi), 1e-14);
}

TEST(EffectiveArea, FpwFullAperture) {
  const AngularSpectrum s({BeamKind::FPW, pi / 2});
  const double k = s.k();
  EXPECT_NEAR(1.0 / effective_area_numeric(s), 64 * k * k / (225 * pi), 1e-12 * k * k);
  // S_z(O) form, valid for the circularly symmetric FPW: P / S_z(O)
  const double via_sz = incident_power(s) / poynting_z(s, {});
  EXPECT_NEAR(via_sz, effective_area_numeric(s), 1e-12);
}

TEST(ScatteringRatio, Examples) {
  const auto full = AngularSpectrum({BeamKind::PX, pi / 2});
  EXPECT_NEAR(scattering_ratio(classical(), full), 2.0, 1e-12);
  EXPECT_NEAR(scattering_ratio(classical(), AngularSpectrum({BeamKind::PX, pi / 3})), 1.1875, 1e-12);
  EXPECT_LT(scattering_ratio(classical(1e6), full), 1e-11);
  // K * A = sigma through independent code paths
  const auto s = AngularSpectrum({BeamKind::FPW, 1.1});
  const auto osc = classical(0.3);
  EXPECT_NEAR(scattering_ratio(osc, s) * effective_area_numeric(s), cross_section(osc, 1.0), 1e-14);
}

TEST(Transmittance, FullCollection) {
  const auto t = transmittance(classical(), AngularSpectrum({BeamKind::PX, pi / 2}));
  EXPECT_NEAR(t.T, 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(t.T + t.R, 1.0);
  EXPECT_NEAR(transmittance(classical(), AngularSpectrum({BeamKind::PX, pi / 3})).T, 0.40625, 1e-12);
  EXPECT_NEAR(transmittance(classical(1e6), AngularSpectrum({BeamKind::FPW, 1.0})).T, 1.0, 1e-11);
}

TEST(TransmittancePx, ClosedFormProperties) {
  EXPECT_EQ(transmittance_px(pi / 2, pi / 2), 0.0);
  EXPECT_NEAR(transmittance_px(pi / 3, pi / 3), 0.1650390625, 1e-15);
  EXPECT_EQ(transmittance_px(1.0, 0.2), transmittance_px(1.0, 0.9));
  for (double b : {0.3, 0.8, 1.5}) {
    double prev = 2.0;
    for (int i = 1; i <= 90; ++i) {
      const double t = transmittance_px(i * pi / 180, b);
      EXPECT_LE(t, prev);
      prev = t;
    }
  }
  EXPECT_THROW(transmittance_px(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(transmittance_px(1.0, 1.7), std::invalid_argument);
}

TEST(CollectedTransmittance, ReproducesPxClosedForm) {
  for (double a : {0.3, pi / 4, 1.2, pi / 2})
    for (double b : {0.2, pi / 4, 1.0, pi / 2}) {
      const AngularSpectrum s({BeamKind::PX, a});
      EXPECT_NEAR(collected_transmittance(classical(), s, b), transmittance_px(a, b), 1e-12)
          << a << "," << b;
    }
  // full collection coincides with 1 - K/2
  const AngularSpectrum s({BeamKind::PX, 0.9});
  EXPECT_NEAR(collected_transmittance(classical(), s, pi / 2),
              transmittance(classical(), s).T, 1e-12);
}

TEST(CollectedTransmittance, MatchesCoherentFarFieldIntegration) {
  // integrate |E_inc + E_sca|^2 over the collection cone directly
  const AngularSpectrum s({BeamKind::FPW, pi / 3});
  const auto co = expansion_coefficients(s, 8);
  const double beta = pi / 3, kr = 50.0;
  for (double d : {0.0, 0.4, -1.3}) {
    const auto osc = classical(d);
    const auto q = solid_angle_quadrature(beta, 64, 32);
    const double out = q.integrate([&](double t, double p) {
      return outgoing_far_field(osc, co, s, t, p, kr).outgoing.norm2();
    });
    const double in = q.integrate([&](double t, double p) {
      return outgoing_far_field(osc, co, s, t, p, kr).incident.norm2();
    });
    EXPECT_NEAR(collected_transmittance(osc, s, beta), out / in, 1e-10) << d;
  }
}

TEST(ScatteredField, AmplitudeAndNode) {
  const cplx e0 = cplx(0.3, -1.2);
  const auto f = scattered_far_field(classical(), e0, 0.0, 0.0, 20.0);
  const cplx expect = 1.5 * I * e0 * std::polar(1.0 / 20.0, 20.0);
  EXPECT_NEAR(std::abs(f.theta - expect), 0.0, 1e-15);
  EXPECT_LT(scattered_far_field(classical(), e0, pi / 2, 0.0, 30.0).norm2(), 1e-30);
  EXPECT_THROW(scattered_far_field(classical(), e0, 0, 0, 19.9), domain_error);
  EXPECT_THROW(scattered_far_field({OscillatorKind::TLS, 1, 0, 1}, e0, 0, 0, 30), std::invalid_argument);
}

TEST(ScatteredField, PowerMatchesScatteringRatio) {
  // (1/8 pi) int |E_sca|^2 r^2 dSigma = K P_inc
  for (double d : {0.0, 0.7}) {
    const AngularSpectrum s({BeamKind::FPW, 1.0});
    const auto osc = classical(d);
    const cplx e0 = electric_field(s, {}).x;
    const double kr = 40.0, k = s.k();
    const auto q = full_sphere_quadrature(16, 16);
    const double flux = q.integrate([&](double t, double p) {
      return scattered_far_field(osc, e0, t, p, kr).norm2();
    }) * (kr * kr) / (k * k) / (8 * pi);
    EXPECT_NEAR(flux / incident_power(s), scattering_ratio(osc, s), 1e-12);
  }
}

TEST(OutgoingField, ForwardExtinctionForFullAperturePx) {
  const AngularSpectrum s({BeamKind::PX, pi / 2});
  const auto co = expansion_coefficients(s, 8);
  const auto f = outgoing_far_field(classical(), co, s, 0.0, 0.0, 100.0);
  EXPECT_LT(std::sqrt(f.outgoing.norm2() / f.incident.norm2()), 1e-8);
}

TEST(OutgoingField, FpwPartialCancellation) {
  // forward: E_out / E_inc = 1 - A_e11 / (-i f k E0) = 1 - 0.8
  const AngularSpectrum s({BeamKind::FPW, pi / 2});
  const auto co = expansion_coefficients(s, 8);
  const auto f = outgoing_far_field(classical(), co, s, 0.0, 0.0, 100.0);
  EXPECT_NEAR(std::sqrt(f.outgoing.norm2() / f.incident.norm2()), 0.2, 1e-12);
  const auto far = outgoing_far_field(classical(1e9), co, s, 0.3, 0.2, 100.0);
  EXPECT_LT(std::sqrt((far.outgoing - far.incident).norm2() / far.incident.norm2()), 1e-8);
  EXPECT_THROW(outgoing_far_field(classical(), co, s, 2.0, 0.0, 100.0), domain_error);
}

TEST(OutgoingField, IncidentPartAgreesWithSeries) {
  const AngularSpectrum s({BeamKind::FPW, pi / 2});
  const auto co = expansion_coefficients(s, 60);
  const double kr = 50.0;
  const auto f = outgoing_far_field(classical(), co, s, 0.5, 1.0, kr);
  const auto series = outgoing_series_amplitude(co, 0.5, 1.0) * std::polar(1.0 / kr, kr);
  EXPECT_LT(std::sqrt((f.incident - series).norm2() / f.incident.norm2()), 1e-2);
}

TEST(PhaseShift, Examples) {
  const double c = fpw_aperture_factor(pi / 4);
  const double expect = std::atan2(-c / 2, 1 - c / 2);
  EXPECT_NEAR(*phase_shift(BeamKind::FPW, pi / 4, 0.5), expect, 1e-14);
  EXPECT_NEAR(std::abs(*phase_shift(BeamKind::FPW, pi / 4, 0.5)) * deg, 13.1, 0.05);
  EXPECT_LT(std::abs(*phase_shift(BeamKind::FPW, pi / 4, 1e6)), 1e-6);
  EXPECT_FALSE(phase_shift(BeamKind::PX, pi / 2, 0.0).has_value());
  EXPECT_TRUE(phase_shift(BeamKind::PX, pi / 2, 0.1).has_value());
  EXPECT_THROW(phase_shift(BeamKind::FPW, 0.0, 0.5), std::invalid_argument);
}

TEST(PhaseShift, Antisymmetric) {
  for (auto kind : {BeamKind::FPW, BeamKind::PX})
    for (double d : {0.1, 0.5, 2.0})
      EXPECT_NEAR(*phase_shift(kind, 1.0, -d), -*phase_shift(kind, 1.0, d), 1e-14);
  EXPECT_NEAR(*phase_shift(BeamKind::FPW, 1.0, 0.0), 0.0, 1e-15);
}

TEST(DetuningSweep, SymmetricDip) {
  SweepConfig cfg;
  cfg.beam = {BeamKind::PX, pi / 2};
  cfg.beta = pi / 2;
  cfg.steps = 41;
  cfg.delta_min = -2;
  cfg.delta_max = 2;
  const auto rows = detuning_sweep(cfg);
  ASSERT_EQ(rows.size(), 41u);
  EXPECT_NEAR(rows[20].T, 0.0, 1e-12);
  EXPECT_FALSE(rows[20].phi.has_value());
  for (int i = 0; i < 41; ++i) {
    EXPECT_NEAR(rows[i].T, rows[40 - i].T, 1e-14);
    EXPECT_DOUBLE_EQ(rows[i].T + rows[i].R, 1.0);
    if (i) {
      EXPECT_GT(rows[i].delta_over_gamma, rows[i - 1].delta_over_gamma);
    }
  }
  cfg.delta_max = cfg.delta_min;
  EXPECT_THROW(detuning_sweep(cfg), std::invalid_argument);
  cfg.steps = 0;
  EXPECT_THROW(detuning_sweep(cfg), std::invalid_argument);
}

TEST(DetuningSweep, FpwDipUsesCollectionFactor) {
  SweepConfig cfg;
  cfg.beam = {BeamKind::FPW, pi / 3};
  cfg.beta = pi / 3;
  cfg.steps = 3;
  cfg.delta_min = -1;
  cfg.delta_max = 1;
  const auto rows = detuning_sweep(cfg);
  const AngularSpectrum s(cfg.beam);
  const double dip = collection_factors(s, cfg.beta).transmittance(1.0);
  EXPECT_NEAR(rows[1].T, dip, 1e-14);
  EXPECT_GT(rows[0].T, rows[1].T);
  EXPECT_GT(dip, 0.0);
}

TEST(Summary, Consistency) {
  const AngularSpectrum s({BeamKind::FPW, 1.2});
  const auto sum = summarize(classical(0.25), s);
  EXPECT_NEAR(sum.K, sum.sigma / sum.area_eff, 1e-15);
  EXPECT_DOUBLE_EQ(sum.T + sum.R, 1.0);
  EXPECT_TRUE(sum.phi.has_value());
  const auto tls = summarize({OscillatorKind::TLS, 1.0, 0.0, 1.0}, AngularSpectrum({BeamKind::PX, pi / 2}));
  EXPECT_NEAR(tls.K, 2.0 / 3.0, 1e-12);
}
