#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "focal/cli_args.hpp"

using namespace focal;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_config(const RunConfig& c) {
  std::ostringstream out, err;
  const int code = run(c, out, err);
  return {code, out.str(), err.str()};
}

RunConfig parse(std::vector<std::string> args) {
  CLI::App app;
  CliBinding b;
  b.attach(app);
  std::vector<const char*> argv{"focal_cli"};
  for (auto& a : args) argv.push_back(a.c_str());
  app.parse(static_cast<int>(argv.size()), const_cast<char**>(argv.data()));
  return b.finalize();
}

// Data rows (non-comment lines after the header), split into cells.
std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream is(csv);
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    out.push_back(cells);
  }
  return out;
}

}  // namespace

TEST(Cli, EveryCommandRunsAndIsDeterministic) {
  for (auto name : kCommandNames) {
    RunConfig c;
    c.command = command_from_string(name);
    if (c.command == Command::Fig2 || c.command == Command::Map) c.samples = 21;
    const auto a = run_config(c), b = run_config(c);
    EXPECT_EQ(a.code, kExitOk) << name << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << name;
    EXPECT_NE(a.out.find("# command: " + std::string(name)), std::string::npos);
    EXPECT_NE(a.out.find("# units:"), std::string::npos);
    EXPECT_FALSE(rows(a.out).empty()) << name;
  }
}

TEST(Cli, Fig4DipoleRowIsUnity) {
  RunConfig c;
  c.command = Command::Fig4;
  c.beam = BeamKind::PX;
  c.alpha = 1.5707963;
  const auto r = rows(run_config(c).out);
  ASSERT_GE(r.size(), 1u);
  EXPECT_EQ(r[0][0], "1");
  EXPECT_NEAR(std::stod(r[0][1]), 1.0, 1e-6);
}

TEST(Cli, Fig3GridAndShadowEdge) {
  RunConfig c;
  c.command = Command::Fig3;
  const auto r = rows(run_config(c).out);
  ASSERT_EQ(r.size(), 8100u);
  // below the diagonal (beta < alpha) each alpha row is flat
  for (int ia = 10; ia < 90; ia += 20) {
    const double flat = std::stod(r[ia * 90][2]);
    for (int ib = 0; ib < ia; ++ib) EXPECT_EQ(std::stod(r[ia * 90 + ib][2]), flat);
    EXPECT_GT(std::stod(r[ia * 90 + 89][2]), flat);
  }
}

TEST(Cli, Fig1bPxDipReachesZero) {
  RunConfig c;
  c.command = Command::Fig1b;
  const auto r = rows(run_config(c).out);
  ASSERT_EQ(r.size(), 201u);
  EXPECT_EQ(std::stod(r[100][0]), 0.0);
  EXPECT_NEAR(std::stod(r[100][2]), 0.0, 1e-12);
  EXPECT_GT(std::stod(r[100][1]), 0.0);
  for (const auto& row : r) EXPECT_GE(std::stod(row[2]) + 1e-12, std::stod(r[100][2]));
}

TEST(Cli, Fig6DefaultsToTwoApertures) {
  RunConfig c;
  c.command = Command::Fig6;
  c.beam = BeamKind::FPW;
  const auto out = run_config(c).out;
  EXPECT_NE(out.find("phi_deg_2"), std::string::npos);
  for (const auto& row : rows(out)) ASSERT_EQ(row.size(), 3u);
}

TEST(Cli, UndefinedPhaseWrittenAsNan) {
  RunConfig c;
  c.command = Command::Summary;
  const auto r = rows(run_config(c).out);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].back(), "nan");
}

TEST(Cli, ErrorsMapToExitCodes) {
  RunConfig c;
  c.command = Command::Map;
  c.alpha = 2.0;
  auto r = run_config(c);
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_TRUE(r.out.empty());
  c.alpha.reset();
  c.extent = 2000.0;
  c.samples = 16;
  r = run_config(c);
  EXPECT_EQ(r.code, kExitAccuracy);
  EXPECT_NE(r.err.find("accuracy"), std::string::npos);
  c = RunConfig{};
  c.command = Command::Sweep;
  c.delta_min = 1.0;
  c.delta_max = -1.0;
  EXPECT_EQ(run_config(c).code, kExitUsage);
}

TEST(CliArgs, ParsesFlagsAndDegrees) {
  const auto c = parse({"sweep", "--beam", "fpw", "--alpha", "60", "--beta", "45", "--degrees",
                        "--detuning-min", "-2", "--detuning-max", "3", "--detuning-steps", "11",
                        "--oscillator", "tls", "--rabi", "0.5", "--gamma", "2"});
  EXPECT_EQ(c.command, Command::Sweep);
  EXPECT_EQ(c.beam, BeamKind::FPW);
  EXPECT_NEAR(*c.alpha, pi / 3, 1e-15);
  EXPECT_NEAR(*c.beta, pi / 4, 1e-15);
  EXPECT_EQ(c.delta_steps, 11);
  EXPECT_EQ(c.oscillator, OscillatorKind::TLS);
  EXPECT_EQ(c.rabi, 0.5);
  EXPECT_EQ(c.gamma, 2.0);
  EXPECT_FALSE(c.ell_max.has_value());
}

TEST(CliArgs, RejectsBadInput) {
  EXPECT_THROW(parse({}), CLI::ParseError);
  EXPECT_THROW(parse({"fig7"}), CLI::ParseError);
  EXPECT_THROW(parse({"map", "--beam", "gauss"}), CLI::ParseError);
  EXPECT_THROW(parse({"map", "--alpha", "100", "--degrees"}), std::invalid_argument);
  EXPECT_THROW(parse({"summary", "--rabi", "1"}), std::invalid_argument);
}

TEST(CliBinary, WritesFileAndReportsStatus) {
  const char* exe = std::getenv("FOCAL_CLI");
  if (!exe) GTEST_SKIP() << "FOCAL_CLI not set";
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "focal_cli_test_fig6.csv";
  const std::string cmd = std::string(exe) + " fig6 --out " + path.string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(rows(ss.str()).size(), 201u);
  std::filesystem::remove(path);
  const std::string bad = std::string(exe) + " map --alpha 3 > /dev/null 2>&1";
  EXPECT_NE(std::system(bad.c_str()), 0);
  const std::string unknown = std::string(exe) + " --nope > /dev/null 2>&1";
  EXPECT_NE(std::system(unknown.c_str()), 0);
}
