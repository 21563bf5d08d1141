#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli/checks.hpp"
#include "cli/config.hpp"
#include "cli/csv.hpp"
#include "cli/run.hpp"

using namespace magstab;
using namespace magstab::cli;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "magstab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const std::vector<std::string> kFastSweep = {"sweep", "--param", "b-bar", "--from", "0", "--to", "1",
                                             "--steps", "3", "--alpha", "0.5", "--beta", "0.5",
                                             "--scan-step", "5e-3"};

}  // namespace

TEST(Csv, HeaderIsFixed) {
  EXPECT_STREQ(kCsvHeader,
               "case_id,k,K,b_bar,mu_ratio,alpha_s,beta_s,alpha_u,beta_u,gamma_s,gamma_u,"
               "lambda_cr_compression,lambda_cr_tension,status,det_evals,notes");
  EXPECT_EQ(format_number(0.5437), "0.5437");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
}

TEST(Csv, RoundTrip) {
  ResultRow a;
  a.case_id = "x";
  a.k = 0.1;
  a.K = 0.0543689014;
  a.b_bar = 1.5;
  a.lambda_cr_compression = 0.543689014;
  a.status = "ok";
  a.det_evals = 42;
  a.notes = "dip-refined;lambda-nudges=1";
  ResultRow b = a;
  b.case_id = "y";
  b.K.reset();
  b.lambda_cr_compression.reset();
  b.lambda_cr_tension = 1.25;
  b.notes = "";
  std::stringstream ss;
  write_csv(ss, {a, b});
  const auto back = read_csv(ss);
  ASSERT_EQ(back.size(), 2u);
  std::stringstream again;
  write_csv(again, back);
  std::stringstream first;
  write_csv(first, {a, b});
  EXPECT_EQ(first.str(), again.str());
  EXPECT_FALSE(back[1].lambda_cr_compression);
  EXPECT_EQ(*back[1].lambda_cr_tension, 1.25);
  EXPECT_EQ(back[0].notes, a.notes);
}

TEST(Csv, RejectsWrongFieldCount) {
  std::stringstream ss(std::string(kCsvHeader) + "\na,b,c\n");
  EXPECT_THROW(read_csv(ss), ConfigError);
}

TEST(Cli, CriticalReportsBiot) {
  const auto r = invoke({"critical"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("lambda_cr_compression = 0.5436"), std::string::npos) << r.out;
}

TEST(Cli, SweepCsvIsDeterministicAndParses) {
  auto args = kFastSweep;
  const auto a = invoke(args);
  args.insert(args.end(), {"--threads", "2"});
  const auto b = invoke(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.find('\r'), std::string::npos);
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), kCsvHeader);
  std::istringstream is(a.out);
  const auto rows = read_csv(is);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[2].b_bar, 1.0);
  for (const auto& r : rows) EXPECT_EQ(r.status, "ok");
  std::ostringstream os;
  write_csv(os, rows);
  EXPECT_EQ(os.str(), a.out);
}

TEST(Cli, OutFileMatchesStdout) {
  const std::string path = "cli_test_out.csv";
  auto args = kFastSweep;
  args.insert(args.end(), {"--out", path});
  ASSERT_EQ(invoke(args).code, kExitOk);
  std::ifstream in(path, std::ios::binary);
  const std::string file((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(file, invoke(kFastSweep).out);
}

TEST(Cli, ConfigurationErrorsExitTwo) {
  EXPECT_EQ(invoke({"figure", "fig99"}).code, kExitConfig);
  EXPECT_EQ(invoke({"critical", "--no-such-flag"}).code, kExitConfig);
  EXPECT_EQ(invoke({"critical", "--exterior-reduction", "paper-13"}).code, kExitConfig);
  EXPECT_EQ(invoke({"critical", "--k", "-1"}).code, kExitConfig);
  EXPECT_EQ(invoke({"critical", "--alpha", "0", "--beta", "0"}).code, kExitConfig);
  EXPECT_EQ(invoke({"sweep", "--param", "b-bar"}).code, kExitConfig);
  EXPECT_EQ(invoke({"critical", "--config", "does-not-exist.json"}).code, kExitConfig);
  EXPECT_EQ(invoke({}).code, kExitConfig);
}

TEST(Cli, StrictModeExitsOneOnPointFailure) {
  const std::vector<std::string> bad = {"critical", "--alpha", "1", "--beta", "-0.5", "--b-bar", "2"};
  EXPECT_EQ(invoke(bad).code, kExitOk);
  auto strict = bad;
  strict.push_back("--strict");
  EXPECT_EQ(invoke(strict).code, kExitNumerical);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  {
    std::ofstream f("cli_test_config.json");
    f << R"({"k": 2.0, "b-bar": 0.5, "alpha": 0.5, "beta": 0.5, "mu-ratio": 2, "scan-step": 0.005})";
  }
  const auto from_file = invoke({"critical", "--config", "cli_test_config.json", "--out", "cli_a.csv"});
  ASSERT_EQ(from_file.code, kExitOk) << from_file.err;
  const auto overridden = invoke({"critical", "--config", "cli_test_config.json", "--k", "3", "--out", "cli_b.csv"});
  ASSERT_EQ(overridden.code, kExitOk);
  std::ifstream a("cli_a.csv"), b("cli_b.csv");
  const auto ra = read_csv(a), rb = read_csv(b);
  ASSERT_EQ(ra.size(), 1u);
  ASSERT_EQ(rb.size(), 1u);
  EXPECT_EQ(ra[0].k, 2.0);
  EXPECT_EQ(ra[0].b_bar, 0.5);
  EXPECT_EQ(ra[0].mu_ratio, 2.0);
  EXPECT_EQ(rb[0].k, 3.0);
  EXPECT_EQ(rb[0].b_bar, 0.5);

  {
    std::ofstream f("cli_test_bad.json");
    f << R"({"kay": 2.0})";
  }
  EXPECT_EQ(invoke({"critical", "--config", "cli_test_bad.json"}).code, kExitConfig);
  {
    std::ofstream f("cli_test_broken.json");
    f << "{";
  }
  EXPECT_EQ(invoke({"critical", "--config", "cli_test_broken.json"}).code, kExitConfig);
}

TEST(Cli, LagrangianConventionKeepsK) {
  const auto r = invoke({"critical", "--k", "2", "--wavenumber-convention", "lagrangian", "--out", "cli_c.csv"});
  ASSERT_EQ(r.code, kExitOk);
  std::ifstream in("cli_c.csv");
  const auto rows = read_csv(in);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(*rows[0].K, 2.0);
}

TEST(Cli, DetTraceHasRequestedSamples) {
  const auto r = invoke({"det-trace", "--from", "0.4", "--to", "0.8", "--steps", "5"});
  ASSERT_EQ(r.code, kExitOk);
  std::istringstream is(r.out);
  std::string line;
  int n = 0;
  while (std::getline(is, line)) ++n;
  EXPECT_EQ(n, 6);
}

TEST(Cli, FigurePresetsExpand) {
  for (const auto& name : preset_names()) {
    const auto cases = build_cases(figure_preset(name));
    EXPECT_FALSE(cases.empty()) << name;
  }
  EXPECT_THROW(figure_preset("fig1"), ConfigError);
}

TEST(Cli, BlockDecouplingWithoutField) {
  EXPECT_LT(block_decoupling_mismatch({non_magnetizable(), {2, 1, 0.5, 1.5}}, 0.7, 1.3), 1e-8);
}

TEST(Cli, BinaryExitCodes) {
  const std::string bin = MAGSTAB_CLI_PATH;
  auto status = [&](const std::string& a) {
    const int s = std::system((bin + " " + a + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(s);
  };
  EXPECT_EQ(status("--help"), 0);
  EXPECT_EQ(status("figure fig99"), 2);
  EXPECT_EQ(status("critical --alpha 1 --beta -0.5 --b-bar 2 --strict"), 1);
}

TEST(Cli, SweepAxisFromConfigFile) {
  {
    std::ofstream f("cli_test_axis.json");
    f << R"({"param": "k", "from": 0.5, "to": 2, "steps": 2})";
  }
  const auto r = invoke({"sweep", "--config", "cli_test_axis.json", "--steps", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream is(r.out);
  const auto rows = read_csv(is);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].k, 0.5);
  EXPECT_EQ(rows[1].k, 1.25);
  EXPECT_EQ(rows[2].k, 2.0);
  for (const auto& row : rows) EXPECT_NEAR(*row.lambda_cr_compression, 0.5437, 1e-4);
}
