#pragma once

#include <string>
#include <vector>

#include <CLI11.hpp>

#include "focal/cli.hpp"

namespace focal {

/// Registers every flag on app, writing into config. Angle and optional
/// flags land in raw holders first; call finalize() after parsing.
struct CliBinding {
  RunConfig config;
  std::string command = "summary";
  std::string beam = "px";
  std::string oscillator = "classical";
  double alpha = 0.0, beta = 0.0;
  int ell_max = 0, samples = 0;
  bool degrees = false;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* beta_opt = nullptr;
  CLI::Option* ell_opt = nullptr;
  CLI::Option* samples_opt = nullptr;

  void attach(CLI::App& app) {
    app.add_option("command", command, "fig1b|fig2|fig3|fig4|fig5|fig6|map|coeffs|sweep|summary")
        ->required()
        ->check(CLI::IsMember({"fig1b", "fig2", "fig3", "fig4", "fig5", "fig6", "map", "coeffs",
                               "sweep", "summary"}));
    app.add_option("--beam", beam, "beam kind")->check(CLI::IsMember({"fpw", "px"}));
    alpha_opt = app.add_option("--alpha", alpha, "semiaperture angle");
    beta_opt = app.add_option("--beta", beta, "collection half angle");
    ell_opt = app.add_option("--ellmax", ell_max, "highest multipole order");
    app.add_option("--ntheta", config.n_theta, "polar quadrature order")->capture_default_str();
    app.add_option("--nphi", config.n_phi, "azimuthal quadrature order")->capture_default_str();
    app.add_option("--extent", config.extent, "focal-plane half-width in units of 1/k")
        ->capture_default_str();
    samples_opt = app.add_option("--samples", samples, "samples per axis");
    app.add_option("--detuning-min", config.delta_min, "lowest detuning / gamma")->capture_default_str();
    app.add_option("--detuning-max", config.delta_max, "highest detuning / gamma")->capture_default_str();
    app.add_option("--detuning-steps", config.delta_steps, "detuning samples")->capture_default_str();
    app.add_option("--detuning", config.detuning, "detuning / gamma for summary")->capture_default_str();
    app.add_option("--oscillator", oscillator, "oscillator model")
        ->check(CLI::IsMember({"classical", "tls"}));
    app.add_option("--gamma", config.gamma, "linewidth")->capture_default_str();
    app.add_option("--rabi", config.rabi, "Rabi frequency (tls only)")->capture_default_str();
    app.add_option("--out", config.out, "output path, - for stdout")->capture_default_str();
    app.add_flag("--degrees", degrees, "read --alpha and --beta in degrees");
  }

  RunConfig finalize() {
    RunConfig c = config;
    c.command = command_from_string(command);
    c.beam = beam_kind_from_string(beam);
    c.oscillator = oscillator_kind_from_string(oscillator);
    const double scale = degrees ? pi / 180.0 : 1.0;
    if (alpha_opt->count()) c.alpha = alpha * scale;
    if (beta_opt->count()) c.beta = beta * scale;
    if (ell_opt->count()) c.ell_max = ell_max;
    if (samples_opt->count()) c.samples = samples;
    c.validate();
    return c;
  }
};

}  // namespace focal
