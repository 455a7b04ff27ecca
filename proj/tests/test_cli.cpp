#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "json.hpp"

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(PSICM_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    return {-1, ""};
  }
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    out.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

void expect_schema(const nlohmann::json& j, const std::string& command) {
  for (const char* key : {"command", "parameters", "results", "status", "tool_version"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["command"], command);
  EXPECT_TRUE(j["status"] == "pass" || j["status"] == "fail" || j["status"] == "indeterminate");
  EXPECT_TRUE(j["tool_version"].is_string());
}

}  // namespace

TEST(Cli, ClassifyVerdicts) {
  auto r = run("classify --i 1 --alpha 2 --beta 0");
  ASSERT_EQ(r.exit_code, 0);
  auto j = nlohmann::json::parse(r.out);
  expect_schema(j, "classify");
  EXPECT_EQ(j["results"]["complete_monotonicity"], "CompletelyMonotonicIff");

  r = run("classify --i 1 --alpha 1.5 --beta 0.25");
  ASSERT_EQ(r.exit_code, 0);
  j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["results"]["complete_monotonicity"], "SufficientOnly");
  EXPECT_NEAR(j["results"]["alpha_star"].get<double>(), 1.1953147279157609, 1e-12);

  r = run("classify --i 1 --alpha 1.5 --beta 0.25 --format text");
  EXPECT_NE(r.out.find("alpha*: 1.19531"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("classify --i 0 --alpha 1 --beta 0").exit_code, 2);
  EXPECT_EQ(run("classify --i 1 --alpha 1 --beta -1").exit_code, 2);
  EXPECT_EQ(run("classify --i 1 --alpha 1").exit_code, 2);
  EXPECT_EQ(run("classify --i x --alpha 1 --beta 0").exit_code, 2);
  EXPECT_EQ(run("").exit_code, 2);
  EXPECT_EQ(run("frobnicate").exit_code, 2);
  EXPECT_EQ(run("threshold --beta-lo 0.3 --beta-hi 0.2").exit_code, 2);
  EXPECT_EQ(run("threshold --beta-lo 0.1 --beta-hi 0.6").exit_code, 2);
  EXPECT_EQ(run("threshold --count 1").exit_code, 2);
  EXPECT_EQ(run("threshold --i 0").exit_code, 2);
  EXPECT_EQ(run("verify --suite nope").exit_code, 2);
  EXPECT_EQ(run("verify --suite theorem3 --k-max 13").exit_code, 2);
  EXPECT_EQ(run("verify --suite theorem3 --grid-lo 0").exit_code, 2);
  EXPECT_EQ(run("classify --i 1 --alpha 1 --beta 0 --format xml").exit_code, 2);
  EXPECT_EQ(run("--help").exit_code, 0);
}

TEST(Cli, ThresholdCsv) {
  const auto r = run("threshold --i 1 --beta-lo 0.05 --beta-hi 0.45 --count 9 --format csv");
  ASSERT_EQ(r.exit_code, 0);
  ASSERT_EQ(r.out.rfind("beta,s,alpha_star\n", 0), 0u);
  std::vector<std::array<double, 3>> rows;
  std::size_t pos = r.out.find('\n') + 1;
  while (pos < r.out.size()) {
    const std::size_t end = r.out.find('\n', pos);
    std::array<double, 3> row{};
    ASSERT_EQ(std::sscanf(r.out.substr(pos, end - pos).c_str(), "%lf,%lf,%lf", &row[0], &row[1], &row[2]), 3);
    rows.push_back(row);
    pos = end + 1;
  }
  ASSERT_EQ(rows.size(), 9u);
  for (std::size_t n = 1; n < rows.size(); ++n) {
    EXPECT_LT(rows[n][1], rows[n - 1][1]);
    EXPECT_LT(rows[n][2], rows[n - 1][2]);
  }
  EXPECT_NEAR(rows[4][0], 0.25, 1e-15);
  EXPECT_NEAR(rows[4][1], 1.6323065927174806, 1e-12);
  EXPECT_NEAR(rows[4][2], 1.1953147279157609, 1e-12);
}

TEST(Cli, ThresholdEndpoints) {
  const auto r = run("threshold --i 2 --beta-lo 1e-6 --beta-hi 0.499999 --count 2");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  expect_schema(j, "threshold");
  const auto& rows = j["results"]["rows"];
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(rows[0]["alpha_star"].get<double>(), 3.0, 1e-4);
  EXPECT_NEAR(rows[1]["alpha_star"].get<double>(), 2.0, 1e-4);
}

TEST(Cli, VerifySuites) {
  auto r = run("verify --suite corollary2");
  EXPECT_EQ(r.exit_code, 0);
  auto j = nlohmann::json::parse(r.out);
  expect_schema(j, "verify");
  EXPECT_EQ(j["status"], "pass");

  r = run("verify --suite theorem3 --alpha-offset -0.5");
  EXPECT_EQ(r.exit_code, 0);
  j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["status"], "pass");
  for (const auto& c : j["results"]["checks"]) {
    EXPECT_EQ(c["detail"]["scans"][0]["function"], "-f");
    EXPECT_EQ(c["detail"]["scans"][0]["verdict"], "pass");
  }

  r = run("verify --suite identities");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["status"], "pass");
}

TEST(Cli, VerifyFailureExitsOne) {
  // At x ~ 1e12..1e18 the alpha = i, beta = 0 expression is a 1/x sliver of its
  // terms, so rounding noise shows up once the tolerance is set below it.
  const std::string base =
      "verify --suite theorem3 --i 1 --alpha-offset 0 --beta 0 --grid-lo 1e12 --grid-hi 1e18 --grid-count 50 "
      "--k-max 0 --tolerance ";
  const auto bad = run(base + "1e-40");
  EXPECT_EQ(bad.exit_code, 1);
  const auto j = nlohmann::json::parse(bad.out);
  EXPECT_EQ(j["status"], "fail");
  EXPECT_FALSE(j["results"]["checks"][0]["detail"]["scans"][0]["witnesses"].empty());
  EXPECT_EQ(run(base + "1e-9").exit_code, 0);
}

TEST(Cli, DeterministicOutput) {
  const std::string args = "verify --suite theorem3 --i 2 --k-max 6 --grid-count 120";
  const auto a = run(args);
  const auto b = run(args);
  EXPECT_EQ(a.exit_code, b.exit_code);
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty());
  const auto c = run("threshold --format json");
  EXPECT_EQ(c.out, run("threshold --format json").out);
}

TEST(Cli, OutFileMatchesStdout) {
  const std::string path = ::testing::TempDir() + "psicm_cli_out.json";
  const auto r = run("classify --i 2 --alpha 2 --beta 0.5 --out " + path);
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.out.empty());
  FILE* f = std::fopen(path.c_str(), "rb");
  ASSERT_NE(f, nullptr);
  std::string content;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), f)) > 0) {
    content.append(buf.data(), n);
  }
  std::fclose(f);
  EXPECT_EQ(content, run("classify --i 2 --alpha 2 --beta 0.5").out);
}

TEST(Cli, SeventeenDigitFloats) {
  const auto r = run("classify --i 1 --alpha 0.1 --beta 0.25");
  EXPECT_NE(r.out.find("0.10000000000000001"), std::string::npos);
}
