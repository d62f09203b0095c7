#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(NCSIGMA_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ncsigma_cli_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Cli, InstantonJson) {
  const auto r = run("instanton --trunc 24");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["chern"].get<double>(), -1.0, 1e-4);
  EXPECT_EQ(j["config"]["trunc_box"], 24);
  EXPECT_EQ(j["convergence"].size(), 4u);
}

TEST(Cli, OutputFilesAreByteIdentical) {
  const auto a = temp_path("a.json");
  const auto b = temp_path("b.json");
  ASSERT_EQ(run("instanton --trunc 16 --out " + a.string()).code, 0);
  ASSERT_EQ(run("instanton --trunc 16 --out " + b.string()).code, 0);
  EXPECT_FALSE(slurp(a).empty());
  EXPECT_EQ(slurp(a), slurp(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(Cli, SweepCsv) {
  const auto r = run("sweep --param lambda --values 0.5,-0.5,0 --format csv");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string header, line;
  std::getline(in, header);
  EXPECT_NE(header.find("c1"), std::string::npos);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("sweep --param theta").code, 2);
  EXPECT_EQ(run("models --model endo --matrix 1,0,0,-1").code, 2);
  EXPECT_EQ(run("models --model su2 --matrix 1,0,0,1").code, 2);
  EXPECT_EQ(run("instanton --theta 1.5").code, 2);
  EXPECT_EQ(run("instanton --grid-points 100").code, 2);
  EXPECT_EQ(run("instanton --format xml").code, 2);
  EXPECT_EQ(run("verify --suite nope").code, 2);
  EXPECT_EQ(run("instanton --config /nonexistent.cfg").code, 2);
}

TEST(Cli, NumericalFailureExitsThree) {
  EXPECT_EQ(run("instanton --trunc 3").code, 3);
}

TEST(Cli, FlagsOverrideConfigFile) {
  const auto cfg = temp_path("run.cfg");
  {
    std::ofstream out(cfg);
    out << "theta=0.3\ntrunc=16\n# comment\nseed=9\n";
  }
  const auto r = run("instanton --config " + cfg.string() + " --trunc 24");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["config"]["theta"], 0.3);
  EXPECT_EQ(j["config"]["trunc_box"], 24);
  EXPECT_EQ(j["config"]["seed"], 9);
  std::filesystem::remove(cfg);
}

TEST(Cli, ModelsAndVerify) {
  EXPECT_EQ(run("models --model chiral --mn 1,2").code, 0);
  EXPECT_EQ(run("models --model endo --matrix 1,1,0,1").code, 0);
  EXPECT_EQ(run("models --model su2 --matrix 1,0,2,0").code, 0);
  const auto v = run("verify --suite algebra --format csv");
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out.rfind("check,pass,value,threshold", 0), 0u);
}

TEST(Cli, HelpDocumentsCsvColumns) {
  const auto r = run("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("CSV output"), std::string::npos);
  EXPECT_NE(r.out.find("Exit codes"), std::string::npos);
}

}  // namespace
