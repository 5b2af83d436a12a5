#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include <gtest/gtest.h>

#include "minmax/io.hpp"

using minmax::io::Json;

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" MINMAX_CLI_PATH "\" " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string doc(const char* name) { return std::string("\"" MINMAX_DATA_DIR "/") + name + "\""; }

}  // namespace

TEST(Cli, SolveBilinear) {
  const CliRun r = run_cli("solve " + doc("bilinear.json"));
  ASSERT_EQ(r.status, 0) << r.out;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["command"], "solve");
  EXPECT_NEAR(j["values"]["primal"].get<double>(), 0.0, 1e-3);
  EXPECT_EQ(j["input_digest"].get<std::string>().size(), 16u);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("check " + doc("bilinear.json")).status, 0);
  EXPECT_EQ(run_cli("check " + doc("nonconcave.json")).status, 2);
  EXPECT_EQ(run_cli("separate " + doc("overlapping_balls.json")).status, 3);
  EXPECT_EQ(run_cli("solve /nonexistent/problem.json").status, 64);
  EXPECT_EQ(run_cli("frobnicate " + doc("bilinear.json")).status, 64);
  EXPECT_EQ(run_cli("separate " + doc("bilinear.json")).status, 2);
}

TEST(Cli, GapOnInvalidProblemNeedsFlag) {
  EXPECT_EQ(run_cli("gap " + doc("nonconcave.json")).status, 2);
  const CliRun r = run_cli("gap --allow-invalid " + doc("nonconcave.json"));
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NEAR(Json::parse(r.out)["values"]["gap"].get<double>(), 0.25, 1e-3);
}

TEST(Cli, Separate) {
  const CliRun r = run_cli("separate " + doc("balls.json"));
  ASSERT_EQ(r.status, 0) << r.out;
  const Json v = Json::parse(r.out)["values"];
  EXPECT_NEAR(v["v"][0].get<double>(), 1.0, 1e-3);
  EXPECT_NEAR(v["v"][1].get<double>(), 0.0, 1e-3);
  EXPECT_NEAR(v["margin"].get<double>(), 1.0, 1e-3);
}

TEST(Cli, OutputIsDeterministic) {
  const CliRun a = run_cli("solve " + doc("saddle_quadratic.json"), "MINMAX_THREADS=1");
  const CliRun b = run_cli("solve " + doc("saddle_quadratic.json"), "MINMAX_THREADS=4");
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
}
