#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "focal/cli_args.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Focused-beam fields and single-oscillator scattering, CSV output"};
  focal::CliBinding binding;
  binding.attach(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : focal::kExitUsage;
  }

  focal::RunConfig config;
  try {
    config = binding.finalize();
  } catch (const std::exception& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return focal::kExitUsage;
  }

  if (config.out == "-") return focal::run(config, std::cout, std::cerr);
  std::ofstream file(config.out);
  if (!file) {
    std::cerr << "cannot open " << config.out << " for writing\n";
    return focal::kExitUsage;
  }
  return focal::run(config, file, std::cerr);
}
