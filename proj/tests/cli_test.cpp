#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "../tools/cli.hpp"
#include "otbyz/experiments.hpp"

namespace otbyz {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "otbyz");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("otbyz_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Cli, DcPrintsBlindingStrength) {
  const auto r = invoke({"dc", "--N", "10", "--s", "3", "--alpha0", "0.3", "--D", "5"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.out.find("D*        = 5"), std::string::npos);
  const auto honest = invoke({"dc", "--alpha0", "0"});
  EXPECT_EQ(honest.code, cli::kOk);
  EXPECT_NE(honest.out.find("n/a"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({"pe", "--N", "0"}).code, cli::kInvalidSpec);
  EXPECT_EQ(invoke({"pe", "--alpha0", "2"}).code, cli::kInvalidSpec);
  EXPECT_EQ(invoke({"sweep", "--metrics", "bogus"}).code, cli::kInvalidSpec);
  EXPECT_EQ(invoke({"sweep", "--param", "q"}).code, cli::kInvalidSpec);
  EXPECT_EQ(invoke({"preset", "fig9"}).code, cli::kInvalidSpec);
  EXPECT_EQ(invoke({"bounds", "--N", "1"}).code, cli::kInvalidSpec);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kInvalidSpec);
  EXPECT_EQ(invoke({"pe", "--config", "/nonexistent/otbyz.ini"}).code, cli::kIoError);
  EXPECT_EQ(invoke({"sweep", "--grid", "1", "--metrics", "pe_analytic", "--out", "/nonexistent/dir/x.csv"}).code,
            cli::kIoError);
  EXPECT_EQ(invoke({"--help"}).code, cli::kOk);
}

TEST(Cli, ConfigFileWithCommandLineOverride) {
  const auto dir = scratch_dir("config");
  std::ofstream(dir / "run.ini") << "N = 4\ns = 2\nalpha0 = 0.5\nD = 1\n";
  const auto from_file = invoke({"dc", "--config", (dir / "run.ini").string()});
  ASSERT_EQ(from_file.code, cli::kOk) << from_file.err;
  // N = 4, mu = 2, eta = 0: E[Z|H1] = 4 (0.5 * 2 + 0.5 * 0) = 4.
  EXPECT_NE(from_file.out.find("E[Z|H1]   = 4\n"), std::string::npos) << from_file.out;
  const auto overridden = invoke({"dc", "--config", (dir / "run.ini").string(), "--N", "8"});
  ASSERT_EQ(overridden.code, cli::kOk);
  EXPECT_NE(overridden.out.find("E[Z|H1]   = 8\n"), std::string::npos) << overridden.out;
  fs::remove_all(dir);
}

TEST(Cli, SweepWritesCsv) {
  const auto dir = scratch_dir("sweep");
  const auto path = (dir / "s.csv").string();
  const auto r = invoke({"sweep", "--N", "10", "--alpha0", "0.3", "--grid", "0:4:2", "--metrics",
                         "pe_analytic,ns_empirical", "--trials", "500", "--out", path});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto back = parse_csv(path);
  EXPECT_EQ(back.rows.size(), 3u);
  EXPECT_EQ(back.columns.front(), "D");
  EXPECT_TRUE(fs::exists(path + ".meta.json"));
  fs::remove_all(dir);
}

TEST(Cli, PresetWritesOneFilePerSeries) {
  const auto dir = scratch_dir("preset");
  const auto r = invoke({"preset", "fig2", "--trials", "1000", "--out", dir.string()});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_TRUE(fs::exists(dir / "fig2_alpha0.3.csv"));
  EXPECT_TRUE(fs::exists(dir / "fig2_alpha0.5.csv"));
  fs::remove_all(dir);
}

TEST(Cli, BoundsAndPe) {
  const auto b = invoke({"bounds", "--N", "20", "--alpha0", "0.3", "--D", "2"});
  EXPECT_EQ(b.code, cli::kOk);
  EXPECT_NE(b.out.find("lower bound"), std::string::npos);
  EXPECT_EQ(invoke({"bounds", "--bounds-mode", "nope"}).code, cli::kInvalidSpec);
  const auto p = invoke({"pe", "--trials", "2000"});
  EXPECT_EQ(p.code, cli::kOk);
  EXPECT_NE(p.out.find("simulated"), std::string::npos);
}

}  // namespace
}  // namespace otbyz
