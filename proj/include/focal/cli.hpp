#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "focal/beams.hpp"
#include "focal/debye_fields.hpp"
#include "focal/multipole.hpp"
#include "focal/scattering.hpp"
#include "focal/types.hpp"

namespace focal {

enum class Command { Fig1b, Fig2, Fig3, Fig4, Fig5, Fig6, Map, Coeffs, Sweep, Summary };

inline constexpr std::string_view kCommandNames[] = {"fig1b", "fig2",   "fig3",  "fig4",
                                                     "fig5",  "fig6",   "map",   "coeffs",
                                                     "sweep", "summary"};

inline std::string_view to_string(Command c) { return kCommandNames[static_cast<int>(c)]; }

inline Command command_from_string(std::string_view name) {
  for (int i = 0; i < static_cast<int>(std::size(kCommandNames)); ++i)
    if (kCommandNames[i] == name) return static_cast<Command>(i);
  throw std::invalid_argument("unknown command: " + std::string(name));
}

/// Everything a run needs. Angles are radians here; the argument parser
/// converts them when --degrees is given. Unset optionals take per-command
/// defaults (e.g. fig5 uses ell_max 8 for the FPW and 16 for p_x).
struct RunConfig {
  Command command = Command::Summary;
  BeamKind beam = BeamKind::PX;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<int> ell_max;
  int n_theta = kDefaultFieldTheta;
  int n_phi = kDefaultFieldPhi;
  double extent = 12.0;  // half-width in units of 1/k
  std::optional<int> samples;
  double delta_min = -5.0, delta_max = 5.0;  // units of gamma
  int delta_steps = 201;
  double detuning = 0.0;  // summary only, units of gamma
  OscillatorKind oscillator = OscillatorKind::Classical;
  double gamma = 1.0;
  double rabi = 0.0;
  std::string out = "-";

  void validate() const {
    auto check_angle = [](const std::optional<double>& a, const char* name) {
      if (a && (!(*a > 0.0) || *a > pi / 2 + 1e-12))
        throw std::invalid_argument(std::string(name) + " must lie in (0, pi/2]");
    };
    check_angle(alpha, "alpha");
    check_angle(beta, "beta");
    if (ell_max && *ell_max < 1) throw std::invalid_argument("ellmax must be >= 1");
    if (n_theta < 2 || n_phi < 4) throw std::invalid_argument("ntheta >= 2 and nphi >= 4 required");
    if (!(extent > 0.0)) throw std::invalid_argument("extent must be > 0");
    if (samples && *samples < 2) throw std::invalid_argument("samples must be >= 2");
    if (delta_steps < 1 || !(delta_max >= delta_min))
      throw std::invalid_argument("empty detuning range");
    oscillator_at(0.0).validate();
  }

  Oscillator oscillator_at(double delta_over_gamma) const {
    return {oscillator, gamma, delta_over_gamma * gamma, rabi};
  }

  // Angles clamp to pi/2 so that a rounded command-line value is accepted.
  double alpha_or(double fallback) const { return std::min(alpha.value_or(fallback), pi / 2); }
  double beta_or(double fallback) const { return std::min(beta.value_or(fallback), pi / 2); }
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "nan"; }

inline std::string fmt(int v) { return std::to_string(v); }

/// Comma-joined CSV writer; '#' lines carry metadata.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void meta(std::string_view key, const std::string& value) {
    os_ << "# " << key << ": " << value << '\n';
  }

  template <class... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
    os_ << '\n';
  }

 private:
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(std::string_view s) { return std::string(s); }
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(int v) { return fmt(v); }
  static std::string cell(const std::optional<double>& v) { return fmt(v); }

  std::ostream& os_;
};

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : (a * (n - 1 - i) + b * i) / (n - 1);
  return v;
}

inline void write_common_meta(CsvWriter& w, const RunConfig& c) {
  w.meta("command", std::string(to_string(c.command)));
  w.meta("units", "lambda = 1 (k = 2 pi), f E0 = 1, c = 1, Gaussian units; angles in radians");
  w.meta("quadrature", "n_theta = " + fmt(c.n_theta) + ", n_phi = " + fmt(c.n_phi));
}

inline void write_oscillator_meta(CsvWriter& w, const RunConfig& c) {
  w.meta("oscillator", std::string(to_string(c.oscillator)) + ", gamma = " + fmt(c.gamma) +
                           ", rabi = " + fmt(c.rabi));
  w.meta("detuning", "delta/gamma from " + fmt(c.delta_min) + " to " + fmt(c.delta_max) + " in " +
                         fmt(c.delta_steps) + " steps");
}

inline std::vector<double> detuning_grid(const RunConfig& c) {
  return linspace(c.delta_min, c.delta_max, c.delta_steps);
}

inline std::vector<SweepRow> sweep_for(const RunConfig& c, BeamKind kind, double alpha, double beta) {
  SweepConfig s;
  s.beam = {kind, alpha};
  s.beta = beta;
  s.oscillator = c.oscillator_at(0.0);
  s.delta_min = c.delta_min;
  s.delta_max = c.delta_max;
  s.steps = c.delta_steps;
  return detuning_sweep(s);
}

// T vs detuning for the two reference configurations.
inline void run_fig1b(const RunConfig& c, CsvWriter& w) {
  const auto fpw = sweep_for(c, BeamKind::FPW, pi / 3, pi / 3);
  const auto px = sweep_for(c, BeamKind::PX, pi / 2, pi / 2);
  write_oscillator_meta(w, c);
  w.meta("curves", "T_fpw: FPW alpha = beta = pi/3; T_px: p_x alpha = beta = pi/2");
  w.row("delta_over_gamma", "T_fpw", "T_px");
  for (std::size_t i = 0; i < fpw.size(); ++i) w.row(fpw[i].delta_over_gamma, fpw[i].T, px[i].T);
}

// Focal-plane lines (a, b), S_z map (c) and axial phase (d), long format.
inline void run_fig2(const RunConfig& c, CsvWriter& w) {
  const double alpha = c.alpha_or(pi / 2);
  const AngularSpectrum spectrum({c.beam, alpha});
  const int n_line = c.samples.value_or(241);
  const int n_map = std::max(16, c.samples.value_or(121));
  const auto line_pos = symmetric_axis(c.extent, n_line);
  const auto along_x = focal_line(spectrum, {1.0, 0.0, 0.0}, line_pos);
  const auto along_y = focal_line(spectrum, {0.0, 1.0, 0.0}, line_pos);
  const auto grid = focal_plane_map(spectrum, c.extent, n_map);
  const double kz_max = 30.0;
  const auto phase = axial_phase(spectrum, linspace(-kz_max, kz_max, 601));
  const auto origin = DebyeIntegrator::for_radius(spectrum, 0.0).fields({});
  const double sz0 = poynting_z(origin), ex0 = std::norm(origin.E.x);

  w.meta("beam", std::string(to_string(c.beam)) + ", alpha = " + fmt(alpha));
  w.meta("panels",
         "a: line along x (u = k x); b: line along y (u = k y); "
         "c: focal-plane grid (u = k x, v = k y); d: z axis (u = k z)");
  w.meta("columns",
         "s_z_norm and ex2_norm are normalized to their values at the origin; "
         "phase = arg E_x - k z, unwrapped, nan at nodes of E_x");
  w.row("panel", "u", "v", "s_z", "s_z_norm", "ex2_norm", "phase");
  const std::string none = "";
  for (const auto* line : {&along_x, &along_y}) {
    const char* panel = line == &along_x ? "a" : "b";
    for (const auto& s : *line)
      w.row(panel, s.k_position, 0.0, s.s_z, s.s_z / sz0, std::norm(s.field.E.x) / ex0, none);
  }
  for (int iy = 0; iy < grid.n; ++iy)
    for (int ix = 0; ix < grid.n; ++ix) {
      const auto i = grid.index(iy, ix);
      w.row("c", grid.axis[ix], grid.axis[iy], grid.s_z[i], grid.s_z_norm[i], grid.ex2_norm[i], none);
    }
  for (const auto& p : phase)
    w.row("d", p.kz, 0.0, none, none, none,
          p.valid ? std::optional<double>(p.unwrapped) : std::nullopt);
}

// Resonant p_x transmittance surface over (alpha, beta).
inline void run_fig3(const RunConfig& c, CsvWriter& w) {
  const int n = c.samples.value_or(90);
  w.meta("grid", fmt(n) + " x " + fmt(n) + " samples, alpha_i = beta_i = (i + 1) (pi/2) / n");
  w.row("alpha", "beta", "T0");
  for (int ia = 0; ia < n; ++ia)
    for (int ib = 0; ib < n; ++ib) {
      const double a = (ia + 1) * (pi / 2) / n, b = (ib + 1) * (pi / 2) / n;
      w.row(a, b, transmittance_px(a, b));
    }
}

inline MultipoleCoefficients coefficients_for(const RunConfig& c, const AngularSpectrum& s, int ell_max) {
  return expansion_coefficients(s, ell_max, std::max(c.n_theta, 2 * ell_max), c.n_phi);
}

// Focused p_x coefficients against the unfocused plane wave.
inline void run_fig4(const RunConfig& c, CsvWriter& w) {
  const int ell_max = c.ell_max.value_or(40);
  const double alpha = c.alpha_or(pi / 2);
  const AngularSpectrum spectrum({c.beam, alpha});
  const auto co = coefficients_for(c, spectrum, ell_max);
  const auto pw = plane_wave_coefficients(ell_max);
  const double fk = spectrum.amplitude() * spectrum.k();
  w.meta("beam", std::string(to_string(c.beam)) + ", alpha = " + fmt(alpha) + ", ell_max = " + fmt(ell_max));
  w.meta("columns", "focused beam in units of f k E0, plane wave in units of E0");
  w.row("ell", "abs_A_beam", "abs_B_beam", "abs_A_pw", "abs_B_pw");
  for (int l = 1; l <= ell_max; ++l)
    w.row(l, std::abs(co.A(l)) / fk, std::abs(co.B(l)) / fk, std::abs(pw.A(l)), std::abs(pw.B(l)));
}

// Exact and truncated-series angular spectra along the phi = 0 and pi/2 meridians.
inline void run_fig5(const RunConfig& c, CsvWriter& w) {
  const double alpha = c.alpha_or(pi / 2);
  const int n = c.samples.value_or(181);
  struct Entry {
    BeamKind kind;
    int ell_max;
  };
  const Entry entries[] = {{BeamKind::FPW, c.ell_max.value_or(8)}, {BeamKind::PX, c.ell_max.value_or(16)}};
  w.meta("alpha", fmt(alpha));
  w.meta("ell_max", "fpw " + fmt(entries[0].ell_max) + ", px " + fmt(entries[1].ell_max));
  w.meta("columns", "exact and series A_theta, A_phi in units of f E0; theta in [0, pi/2]");
  w.row("beam", "phi", "theta", "exact_A_theta", "exact_A_phi", "series_A_theta_re",
        "series_A_theta_im", "series_A_phi_re", "series_A_phi_im");
  for (const auto& e : entries) {
    const AngularSpectrum spectrum({e.kind, alpha});
    const auto co = coefficients_for(c, spectrum, e.ell_max);
    const double f = spectrum.amplitude();
    for (double phi : {0.0, pi / 2})
      for (double theta : linspace(0.0, pi / 2, n)) {
        const auto exact = spectrum(theta, phi) * (1.0 / f);
        const auto series = reconstruct_spectrum(co, theta, phi) * (1.0 / f);
        w.row(to_string(e.kind), phi, theta, exact.theta.real(), exact.phi.real(),
              series.theta.real(), series.theta.imag(), series.phi.real(), series.phi.imag());
      }
  }
}

// FPW phase shift versus detuning for one or two semiaperture angles.
inline void run_fig6(const RunConfig& c, CsvWriter& w) {
  std::vector<double> alphas = c.alpha ? std::vector<double>{c.alpha_or(0)}
                                       : std::vector<double>{pi / 6, pi / 4};
  std::string names;
  for (double a : alphas) names += (names.empty() ? "" : ", ") + fmt(a);
  w.meta("beam", std::string(to_string(c.beam)) + ", alpha = {" + names + "}");
  w.meta("detuning", "delta/gamma from " + fmt(c.delta_min) + " to " + fmt(c.delta_max) + " in " +
                         fmt(c.delta_steps) + " steps");
  w.meta("columns", "phase shift in degrees per alpha, nan where undefined");
  std::vector<std::string> header{"delta_over_gamma"};
  for (std::size_t i = 0; i < alphas.size(); ++i) header.push_back("phi_deg_" + fmt(static_cast<int>(i + 1)));
  if (header.size() == 2) w.row(header[0], header[1]);
  else w.row(header[0], header[1], header[2]);
  for (double d : detuning_grid(c)) {
    std::vector<std::optional<double>> vals;
    for (double a : alphas) {
      auto p = phase_shift(c.beam, a, d);
      vals.push_back(p ? std::optional<double>(*p * 180.0 / pi) : std::nullopt);
    }
    if (vals.size() == 1) w.row(d, vals[0]);
    else w.row(d, vals[0], vals[1]);
  }
}

inline void run_map(const RunConfig& c, CsvWriter& w) {
  const double alpha = c.alpha_or(pi / 2);
  const AngularSpectrum spectrum({c.beam, alpha});
  const auto g = focal_plane_map(spectrum, c.extent, std::max(16, c.samples.value_or(121)));
  w.meta("beam", std::string(to_string(c.beam)) + ", alpha = " + fmt(alpha));
  w.meta("grid", fmt(g.n) + " x " + fmt(g.n) + ", half-width " + fmt(g.k_extent) + " / k");
  w.meta("normalization", "s_z_origin = " + fmt(g.s_z_origin) + ", ex2_origin = " + fmt(g.ex2_origin));
  w.row("kx", "ky", "s_z", "s_z_norm", "ex2", "ex2_norm", "e2", "phase_x");
  for (int iy = 0; iy < g.n; ++iy)
    for (int ix = 0; ix < g.n; ++ix) {
      const auto i = g.index(iy, ix);
      w.row(g.axis[ix], g.axis[iy], g.s_z[i], g.s_z_norm[i], g.ex2[i], g.ex2_norm[i], g.e2[i], g.phase_x[i]);
    }
}

inline void run_coeffs(const RunConfig& c, CsvWriter& w) {
  const double alpha = c.alpha_or(pi / 2);
  const int ell_max = c.ell_max.value_or(40);
  const AngularSpectrum spectrum({c.beam, alpha});
  const auto co = coefficients_for(c, spectrum, ell_max);
  const double fk = spectrum.amplitude() * spectrum.k();
  w.meta("beam", std::string(to_string(c.beam)) + ", alpha = " + fmt(alpha) + ", ell_max = " + fmt(ell_max));
  w.meta("a11_analytic", fmt(a11_analytic(c.beam, alpha).imag()) + " i (units of f k E0)");
  w.row("ell", "A_re", "A_im", "B_re", "B_im", "abs_A_over_fk", "abs_B_over_fk");
  for (int l = 1; l <= ell_max; ++l)
    w.row(l, co.A(l).real(), co.A(l).imag(), co.B(l).real(), co.B(l).imag(), std::abs(co.A(l)) / fk,
          std::abs(co.B(l)) / fk);
}

inline void run_sweep(const RunConfig& c, CsvWriter& w) {
  const double alpha = c.alpha_or(pi / 2), beta = c.beta_or(alpha);
  const auto rows = sweep_for(c, c.beam, alpha, beta);
  w.meta("beam", std::string(to_string(c.beam)) + ", alpha = " + fmt(alpha) + ", beta = " + fmt(beta));
  write_oscillator_meta(w, c);
  w.row("delta_over_gamma", "T", "R", "phi_rad", "phi_deg");
  for (const auto& r : rows)
    w.row(r.delta_over_gamma, r.T, r.R, r.phi,
          r.phi ? std::optional<double>(*r.phi * 180.0 / pi) : std::nullopt);
}

inline void run_summary(const RunConfig& c, CsvWriter& w) {
  const double alpha = c.alpha_or(pi / 2);
  const AngularSpectrum spectrum({c.beam, alpha});
  const auto s = summarize(c.oscillator_at(c.detuning), spectrum);
  w.meta("beam", std::string(to_string(c.beam)) + ", alpha = " + fmt(alpha));
  w.meta("oscillator", std::string(to_string(c.oscillator)) + ", gamma = " + fmt(c.gamma) +
                           ", delta/gamma = " + fmt(c.detuning) + ", rabi = " + fmt(c.rabi));
  w.meta("columns", "sigma and area_eff in units of lambda^2; T = 1 - R with full collection");
  w.row("sigma", "area_eff", "K", "T", "R", "phi_rad");
  w.row(s.sigma, s.area_eff, s.K, s.T, s.R, s.phi);
}

}  // namespace detail

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitAccuracy = 3;
inline constexpr int kExitDomain = 4;

/// Runs one command, writing CSV to out. Errors are reported on err and
/// mapped to a nonzero exit code; nothing partial is written on failure.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::ostringstream buffer;
  try {
    config.validate();
    detail::CsvWriter w(buffer);
    detail::write_common_meta(w, config);
    switch (config.command) {
      case Command::Fig1b: detail::run_fig1b(config, w); break;
      case Command::Fig2: detail::run_fig2(config, w); break;
      case Command::Fig3: detail::run_fig3(config, w); break;
      case Command::Fig4: detail::run_fig4(config, w); break;
      case Command::Fig5: detail::run_fig5(config, w); break;
      case Command::Fig6: detail::run_fig6(config, w); break;
      case Command::Map: detail::run_map(config, w); break;
      case Command::Coeffs: detail::run_coeffs(config, w); break;
      case Command::Sweep: detail::run_sweep(config, w); break;
      case Command::Summary: detail::run_summary(config, w); break;
    }
  } catch (const accuracy_error& e) {
    err << "accuracy error: " << e.what() << '\n';
    return kExitAccuracy;
  } catch (const domain_error& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  }
  out << buffer.str();
  return out ? kExitOk : kExitUsage;
}

}  // namespace focal
