#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "jcas/cli.hpp"

using namespace jcas;
using jcas::cli::Subcommand;
namespace fs = std::filesystem;

namespace {

const std::string kSamples = JCAS_SAMPLES_DIR;
const std::string kBinary = kSamples + "/binary_q0.5_a0.5.json";
const std::string kBinary03 = kSamples + "/binary_q0.3_a0.5.json";
const std::string kMalformed = kSamples + "/malformed_kernel.json";

struct Result {
  int code;
  std::string out, err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("jcas_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

} // namespace

TEST(ParseArgs, RegionCommand) {
  const auto cmd = cli::parse_args({"region", "chan.json", "--mode", "single_exact_deg", "--grid",
                                    "16", "--samples", "4", "--seed", "9"});
  EXPECT_EQ(cmd.sub, Subcommand::region);
  EXPECT_EQ(cmd.file, "chan.json");
  EXPECT_EQ(cmd.mode, Mode::single_exact_deg);
  EXPECT_EQ(cmd.grid, 16u);
  EXPECT_EQ(cmd.samples, 4u);
  EXPECT_EQ(cmd.seed, 9u);
  EXPECT_FALSE(cmd.convexify);
  EXPECT_FALSE(cmd.out.has_value());
}

TEST(ParseArgs, EstimatorParsesDistribution) {
  const auto cmd = cli::parse_args({"estimator", "c.json", "--px", "0.25,0.75"});
  EXPECT_EQ(cmd.px, (std::vector<double>{0.25, 0.75}));
}

TEST(ParseArgs, UsageErrors) {
  EXPECT_THROW(cli::parse_args({}), cli::UsageError);
  EXPECT_THROW(cli::parse_args({"example", "--q", "1.2", "--alpha", "0.5", "--grid", "4"}),
               cli::UsageError);
  EXPECT_THROW(cli::parse_args({"classify", "c.json", "--bogus"}), cli::UsageError);
  EXPECT_THROW(cli::parse_args({"region", "c.json", "--mode", "nope", "--grid", "4", "--samples",
                                "1", "--seed", "1"}),
               cli::UsageError);
  EXPECT_THROW(cli::parse_args({"crosscheck", "--q", "0.5", "--alpha", "0.5"}), cli::UsageError);
  EXPECT_THROW(cli::parse_args({"frobnicate"}), cli::UsageError);
  try {
    cli::parse_args({});
  } catch (const cli::UsageError& e) {
    EXPECT_NE(e.help().find("classify"), std::string::npos);
  }
}

TEST(ParseArgs, HelpIsNotAnError) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("region"), std::string::npos);
}

TEST(Execute, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"example", "--q", "1.2", "--alpha", "0.5", "--grid", "4"}).code, 2);
  EXPECT_EQ(run({"region", kMalformed, "--mode", "single_exact_deg", "--grid", "8", "--samples",
                 "1", "--seed", "1"})
                .code,
            1);
  EXPECT_EQ(run({"classify", kSamples + "/does_not_exist.json"}).code, 1);
}

TEST(Execute, ClassifyBinary) {
  const auto r = run({"classify", kBinary});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "physically-degraded");
  EXPECT_NE(r.out.find("residual_rev,"), std::string::npos);
}

TEST(Execute, ValidateListsFindings) {
  EXPECT_EQ(run({"validate", kBinary}).out, "valid\n");
  const auto r = run({"validate", kMalformed});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "kind,location,magnitude\nstochasticity,kernel[1][1][1],0.02\n");
}

TEST(Execute, Crosscheck) {
  const auto r = run({"crosscheck", "--q", "0.5", "--alpha", "0.5", "--p", "0.5", "--tol", "1e-9"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 5), "PASS\n");
  EXPECT_NE(r.out.find("r,0.5,0.5\n"), std::string::npos);
}

TEST(Execute, ExampleAndBaseline) {
  const auto e = run({"example", "--q", "0.5", "--alpha", "0.5", "--grid", "2"});
  EXPECT_EQ(e.code, 0);
  EXPECT_EQ(e.out,
            "q,alpha,p,r,d1,d2\n0.5,0.5,0,0,0.5,0.25\n0.5,0.5,0.5,0.5,0.25,0.125\n"
            "0.5,0.5,1,0,0,0\n");
  const auto b = run({"baseline", "--q", "0.5", "--alpha", "0.5", "--grid", "2"});
  EXPECT_EQ(b.code, 0);
  EXPECT_NE(b.out.find("0.5,0.5,0.5,0.25,0.125,0.0625,0.5\n"), std::string::npos);
  EXPECT_EQ(run({"example", "--q", "0.5", "--alpha", "0.5", "--grid", "1"}).code, 1);
}

TEST(Execute, EstimatorTable) {
  const auto r = run({"estimator", kBinary03, "--px", "0.5,0.5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "x,y1,y2,shat1,shat2");
  EXPECT_NE(r.out.find("1,1,1,1,1\n"), std::string::npos);
  EXPECT_NE(r.out.find("receiver,expected_distortion\n1,0.15\n"), std::string::npos);
  EXPECT_EQ(run({"estimator", kBinary03, "--px", "0.6,0.6"}).code, 1);
}

TEST(Execute, SimulateReport) {
  const auto r = run({"simulate", kBinary03, "--px", "0.5,0.5", "--n", "200000", "--seed", "4",
                      "--tol", "0.01"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("d1,0.15,"), std::string::npos);
  EXPECT_NE(r.out.find("tv_distance,,"), std::string::npos);
  EXPECT_EQ(r.out.substr(r.out.size() - 5), "PASS\n");
  const auto fail = run({"simulate", kBinary03, "--px", "0.5,0.5", "--n", "10", "--seed", "4",
                         "--tol", "0"});
  EXPECT_EQ(fail.code, 1);
  EXPECT_EQ(fail.out.substr(fail.out.size() - 5), "FAIL\n");
}

TEST(Execute, RegionOutWritesFileAtomically) {
  const auto dir = scratch_dir("region_out");
  const std::vector<std::string> base{"region", kBinary, "--mode", "ps_inner", "--grid", "8",
                                      "--samples", "3", "--seed", "42"};
  const auto to_stdout = run(base);
  ASSERT_EQ(to_stdout.code, 0);
  EXPECT_EQ(to_stdout.out.substr(0, to_stdout.out.find('\n')), "mode,design_tag,r1,r2,r,d1,d2");
  auto args = base;
  args.insert(args.end(), {"--out", (dir / "frontier.csv").string()});
  const auto to_file = run(args);
  ASSERT_EQ(to_file.code, 0);
  EXPECT_TRUE(to_file.out.empty());
  EXPECT_EQ(slurp(dir / "frontier.csv"), to_stdout.out);
  EXPECT_EQ(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}), 1);
  fs::remove_all(dir);
}

TEST(Execute, OuterRegionLabelGoesToStderr) {
  const auto r = run({"region", kBinary, "--mode", "single_outer", "--grid", "4", "--samples", "1",
                      "--seed", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("necessary-condition"), std::string::npos);
  EXPECT_EQ(r.out.find('#'), std::string::npos);
}

TEST(Execute, ByteIdenticalAcrossThreadCounts) {
  const std::vector<std::vector<std::string>> cmds{
      {"region", kBinary, "--mode", "ps_outer", "--grid", "8", "--samples", "4", "--seed", "3"},
      {"region", kBinary03, "--mode", "single_inner", "--grid", "8", "--samples", "4", "--seed",
       "3", "--convexify"},
      {"simulate", kBinary03, "--px", "0.5,0.5", "--n", "150000", "--seed", "8", "--tol", "0.01"},
  };
  for (const auto& c : cmds) {
    auto one = c, eight = c;
    one.insert(one.end(), {"--threads", "1"});
    eight.insert(eight.end(), {"--threads", "8"});
    const auto a = run(one), b = run(one), d = run(eight);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, d.out);
    EXPECT_EQ(a.code, d.code);
  }
}
