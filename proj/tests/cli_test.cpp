// End-to-end tests of the command line binary through a subprocess: exit
// codes, byte-identical reruns, curve artifacts, report provenance.

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hawkes/deviations.hpp"
#include "hawkes/kernels.hpp"
#include "hawkes/sequence.hpp"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string(HAWKES_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed");
  RunResult r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string scenario(const std::string& name) {
  return std::string(HAWKES_SCENARIO_DIR) + "/" + name + ".json";
}

std::string fresh_dir(const std::string& tag) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("hawkes_cli_" + tag + "_" +
                        std::to_string(getpid()) + "_" +
                        std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in.good()) << path;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

double scalar_of(const json& report, const std::string& name) {
  for (const json& s : report.at("scalars"))
    if (s.at("name").get<std::string>() == name)
      return s.at("value").get<double>();
  ADD_FAILURE() << "scalar " << name << " missing from report";
  return std::numeric_limits<double>::quiet_NaN();
}

TEST(CliMoments, ClassicalClosedForm) {
  const std::string out = fresh_dir("moments");
  const RunResult r =
      run_cli("moments --scenario " + scenario("classical") + " --out " + out);
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const json report = json::parse(r.out);
  EXPECT_NEAR(scalar_of(report, "m"), 2.0, 1e-10);
  EXPECT_NEAR(scalar_of(report, "sigma2"), 8.0, 1e-9);
  EXPECT_NEAR(scalar_of(report, "rho"), 0.5, 1e-12);
  // and the written report parses to the same scalars
  const json filed = json::parse(slurp(out + "/moments_report.json"));
  EXPECT_EQ(scalar_of(filed, "m"), scalar_of(report, "m"));
}

TEST(CliSimulate, RerunsAreByteIdentical) {
  const std::string a = fresh_dir("sim_a");
  const std::string b = fresh_dir("sim_b");
  const std::string base =
      "simulate --scenario " + scenario("classical") +
      " --reps 1 --seed 99 --horizon 50 --out ";
  ASSERT_EQ(run_cli(base + a).exit_code, 0);
  ASSERT_EQ(run_cli(base + b).exit_code, 0);
  const std::string csv_a = slurp(a + "/events_0.csv");
  const std::string csv_b = slurp(b + "/events_0.csv");
  EXPECT_FALSE(csv_a.empty());
  EXPECT_EQ(csv_a, csv_b);
  EXPECT_EQ(csv_a.substr(0, 16), "time,generation\n");
  // a different seed changes the draw
  const std::string c = fresh_dir("sim_c");
  ASSERT_EQ(run_cli("simulate --scenario " + scenario("classical") +
                    " --reps 1 --seed 100 --horizon 50 --out " + c)
                .exit_code,
            0);
  EXPECT_NE(csv_a, slurp(c + "/events_0.csv"));
}

TEST(CliLdp, CurveMatchesRateFunction) {
  const std::string out = fresh_dir("ldp");
  const RunResult r = run_cli("ldp --scenario " + scenario("classical") +
                              " --curve x:0.5:4:50 --out " + out);
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const std::vector<std::string> rows = lines_of(slurp(out + "/ldp_curve.csv"));
  ASSERT_EQ(rows.size(), 51u);
  EXPECT_EQ(rows[0], "x,rate");

  const hawkes::KernelSequence seq(
      hawkes::Baseline(hawkes::ConstantBaseline{1.0}),
      {hawkes::Kernel(hawkes::Exponential{2.0, 1.0})},
      hawkes::Extension::kTailConstant);
  const hawkes::CumulantModel model(seq, 1e-12);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const std::size_t comma = rows[k].find(',');
    ASSERT_NE(comma, std::string::npos);
    const double x = std::stod(rows[k].substr(0, comma));
    const double rate = std::stod(rows[k].substr(comma + 1));
    EXPECT_NEAR(rate, hawkes::rate_I(model, x), 2e-9) << rows[k];
  }
}

TEST(CliLdp, ReportsCriticalTheta) {
  const std::string out = fresh_dir("ldp_tc");
  const RunResult r = run_cli("ldp --scenario " + scenario("classical") +
                              " --theta 0.1 --out " + out);
  ASSERT_EQ(r.exit_code, 0);
  const json report = json::parse(r.out);
  EXPECT_NEAR(scalar_of(report, "theta_c"), std::log(2.0) - 0.5, 1e-9);
  EXPECT_NEAR(scalar_of(report, "gamma_prime_at_zero"), 2.0, 1e-6);
  EXPECT_GT(scalar_of(report, "gamma_at_theta"), 0.0);
}

TEST(CliExitCodes, ValidationProblemsExitTwo) {
  EXPECT_EQ(run_cli("moments --scenario /nonexistent/file.json").exit_code, 2);
  EXPECT_EQ(run_cli("ldp --scenario " + scenario("classical") +
                    " --curve x:1:2")
                .exit_code,
            2);
  EXPECT_EQ(run_cli("unknown-subcommand").exit_code, 2);
  EXPECT_EQ(run_cli("moments").exit_code, 2);  // --scenario is required
  EXPECT_EQ(run_cli("microstructure --scenario " + scenario("classical"))
                .exit_code,
            2);  // no partition block
  EXPECT_EQ(run_cli("ruin --scenario " + scenario("classical")).exit_code,
            2);  // no claims block
}

TEST(CliExitCodes, NumericalProblemsExitThree) {
  // theta past the finite domain of the cumulant
  EXPECT_EQ(run_cli("ldp --scenario " + scenario("classical") +
                    " --theta 0.5 --out " + fresh_dir("ldp_div"))
                .exit_code,
            3);
}

TEST(CliReport, CarriesProvenanceAndEcho) {
  const std::string out = fresh_dir("prov");
  const RunResult r = run_cli("moments --scenario " + scenario("classical") +
                              " --seed 12345 --out " + out);
  ASSERT_EQ(r.exit_code, 0);
  const json report = json::parse(r.out);
  EXPECT_EQ(report.at("subcommand"), "moments");
  EXPECT_EQ(report.at("rng").at("name"), "philox4x32-10");
  EXPECT_EQ(report.at("rng").at("seed").get<std::uint64_t>(), 12345u);
  EXPECT_EQ(report.at("scenario").at("name"), "classical");
  EXPECT_EQ(report.at("scenario").at("seed").get<std::uint64_t>(), 12345u);
  EXPECT_GE(report.at("wall_seconds").get<double>(), 0.0);
  for (const json& s : report.at("scalars")) {
    const std::string kind = s.at("error_kind").get<std::string>();
    EXPECT_TRUE(kind == "exact" || kind == "truncation" || kind == "mc_se" ||
                kind == "bound")
        << kind;
  }
}

TEST(CliReport, OutputDirFallsBackToEnvironment) {
  const std::string out = fresh_dir("envdir");
  setenv("HAWKES_OUT_DIR", out.c_str(), 1);
  const RunResult r =
      run_cli("moments --scenario " + scenario("classical"));
  unsetenv("HAWKES_OUT_DIR");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_TRUE(fs::exists(out + "/moments_report.json"));
}

TEST(CliRuin, LightTailReportsExponent) {
  const std::string out = fresh_dir("ruin");
  const RunResult r = run_cli("ruin --scenario " + scenario("ruin_light") +
                              " --reps 2000 --out " + out);
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const json report = json::parse(r.out);
  const double psi = scalar_of(report, "psi");
  EXPECT_GT(psi, 0.0);
  EXPECT_LT(psi, 1.0);
  EXPECT_NEAR(scalar_of(report, "theta_dagger"), 0.141679704915654, 1e-6);
  EXPECT_EQ(scalar_of(report, "net_profit"), 1.0);
}

TEST(CliRuin, HeavyTailReportsAsymptote) {
  const std::string out = fresh_dir("ruin_heavy");
  const RunResult r = run_cli("ruin --scenario " + scenario("ruin_heavy") +
                              " --reps 1000 --curve u:20:80:4 --out " + out);
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const json report = json::parse(r.out);
  EXPECT_GT(scalar_of(report, "heavy_constant"), 0.0);
  const std::vector<std::string> rows =
      lines_of(slurp(out + "/ruin_curve.csv"));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "u,asymptote");
}

TEST(CliEquilibrium, WritesDecreasingBoundCurve) {
  const std::string out = fresh_dir("equi");
  const RunResult r =
      run_cli("equilibrium --scenario " + scenario("classical") +
              " --curve s:1:9:5 --horizon 20 --out " + out);
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const json report = json::parse(r.out);
  EXPECT_GT(scalar_of(report, "strong_cap"), 0.0);
  const std::vector<std::string> rows =
      lines_of(slurp(out + "/equilibrium_curve.csv"));
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], "s,bound");
  std::vector<double> bounds;
  for (std::size_t k = 1; k < rows.size(); ++k)
    bounds.push_back(std::stod(rows[k].substr(rows[k].find(',') + 1)));
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k)
    EXPECT_GT(bounds[k], bounds[k + 1]);
}

TEST(CliMdpCheck, WritesCurveWithTheoryColumn) {
  const std::string out = fresh_dir("mdp");
  const RunResult r =
      run_cli("mdp-check --scenario " + scenario("classical") +
              " --reps 300 --horizon 100 --curve x:0.5:1:2 --out " + out);
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const std::vector<std::string> rows = lines_of(slurp(out + "/mdp_curve.csv"));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "x,rate,empirical");
  // theory column: x^2 / (2 sigma^2) with sigma^2 = 8
  const std::string& row = rows[1];
  const std::size_t c1 = row.find(',');
  const std::size_t c2 = row.find(',', c1 + 1);
  EXPECT_NEAR(std::stod(row.substr(c1 + 1, c2 - c1 - 1)),
              0.25 / 16.0, 1e-9);
}

TEST(CliMicrostructure, WritesSignatureAndEppsCurves) {
  const std::string out = fresh_dir("micro");
  const RunResult r =
      run_cli("microstructure --scenario " + scenario("microstructure") +
              " --reps 10 --horizon 30 --tau-grid 0.2:1:3 --tol 0.001"
              " --out " + out);
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const std::vector<std::string> sig = lines_of(slurp(out + "/signature.csv"));
  ASSERT_EQ(sig.size(), 4u);
  EXPECT_EQ(sig[0], "tau,empirical,se,analytic");
  const std::vector<std::string> epps = lines_of(slurp(out + "/epps.csv"));
  ASSERT_EQ(epps.size(), 4u);
  const json report = json::parse(r.out);
  EXPECT_GE(scalar_of(report, "table_depth"), 2.0);
  const json& files = report.at("files");
  EXPECT_EQ(files.size(), 2u);
}

}  // namespace
