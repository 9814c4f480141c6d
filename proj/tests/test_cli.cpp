// Copyright 2026 The qexcite Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "qexcite/sweep.hpp"

namespace qexcite {
namespace {

struct ToolRun {
  int status = -1;
  std::string out;
};

/// Runs the tool with the given arguments; stderr is discarded.
ToolRun run(const std::string& args) {
  const std::string cmd = std::string(QEXCITE_TOOL) + " " + args + " 2>/dev/null";
  ToolRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

class TempConfig {
 public:
  explicit TempConfig(const std::string& text) {
    path_ = (std::filesystem::temp_directory_path() /
             ("qexcite_cli_" + std::to_string(getpid()) + "_" + std::to_string(counter_++) + ".cfg"))
                .string();
    std::ofstream(path_) << text;
  }
  ~TempConfig() { std::filesystem::remove(path_); }
  const std::string& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::string path_;
};

std::string recipe(const char* name) { return std::string(QEXCITE_RECIPES) + "/" + name; }

/// Data lines of a CSV table (comments and the header removed).
std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  bool header = true;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    out.push_back(line);
  }
  return out;
}

TEST(Cli, SteadyRecipe) {
  const ToolRun r = run("steady --config " + recipe("steady.cfg"));
  ASSERT_EQ(r.status, 0);
  const auto records = from_csv(r.out);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_NEAR(records[0].n_a, 1.0, 1e-4);
  EXPECT_NEAR(*records[0].g2, 0.8178, 1e-3);
  EXPECT_EQ(records[0].status, "ok");
}

TEST(Cli, SweepCsvAndJsonAgree) {
  const TempConfig cfg(
      "gamma_a = 0.5\n"
      "sweep.param = Omega_sigma\n"
      "sweep.scale = log\n"
      "sweep.min = 0.1\n"
      "sweep.max = 10\n"
      "sweep.count = 5\n");
  const ToolRun csv = run("sweep --jobs 2 --config " + cfg.path());
  const ToolRun json = run("sweep --format json --config " + cfg.path());
  ASSERT_EQ(csv.status, 0);
  ASSERT_EQ(json.status, 0);
  const auto a = from_csv(csv.out);
  const auto b = from_json(json.out);
  ASSERT_EQ(a.size(), 5u);
  ASSERT_EQ(b.size(), 5u);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_TRUE(same_emitted_fields(a[k], b[k])) << k;
  EXPECT_EQ(a[2].param1, 1.0);
}

TEST(Cli, SweepWritesFile) {
  const TempConfig cfg("drive = incoherent\nsweep.param = P_sigma\nsweep.min = 0\nsweep.max = 1\nsweep.count = 3\n");
  const std::string out = cfg.path() + ".csv";
  ASSERT_EQ(run("sweep --config " + cfg.path() + " --out " + out).status, 0);
  std::ifstream f(out);
  std::stringstream text;
  text << f.rdbuf();
  std::filesystem::remove(out);
  const auto records = from_csv(text.str());
  ASSERT_EQ(records.size(), 3u);
  EXPECT_FALSE(records[0].g2.has_value());
}

TEST(Cli, SweepNeedsPlan) {
  EXPECT_EQ(run("sweep --config " + recipe("steady.cfg")).status, 2);
}

TEST(Cli, ConfigErrorsExitTwo) {
  const TempConfig bad("gamma_a = 1\nepsilon_1 = 1.5\n");
  EXPECT_EQ(run("steady --config " + bad.path()).status, 2);
  const TempConfig unknown("gamma_a = 1\ncolour = red\n");
  EXPECT_EQ(run("steady --config " + unknown.path()).status, 2);
  EXPECT_EQ(run("steady --config /nonexistent/qexcite.cfg").status, 2);
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run("").status, 1);
  EXPECT_EQ(run("steady").status, 1);
  EXPECT_EQ(run("teleport").status, 1);
  EXPECT_EQ(run("steady --config " + recipe("steady.cfg") + " --format xml").status, 1);
}

TEST(Cli, SpectrumIntegratesToPopulation) {
  const TempConfig cfg("drive = incoherent\nP_sigma = 0.5\ngamma_a = 1\n");
  const ToolRun r = run("spectrum --mode source --omega-min -40 --omega-max 40 --points 8001 --config " + cfg.path());
  ASSERT_EQ(r.status, 0);
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 8001u);
  double area = 0.0, last_w = 0.0, last_s = 0.0;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    double w = 0.0, s = 0.0;
    ASSERT_EQ(std::sscanf(lines[k].c_str(), "%lf,%lf", &w, &s), 2) << lines[k];
    if (k > 0) area += 0.5 * (s + last_s) * (w - last_w);
    last_w = w;
    last_s = s;
  }
  // Lorentzian of width 1.5 and weight 1/3, truncated at |w| = 40.
  const double expected = (1.0 / 3.0) * 2.0 / M_PI * std::atan(40.0 / 0.75);
  EXPECT_NEAR(area, expected, 1e-4);
}

TEST(Cli, G2TauStartsAntibunched) {
  const TempConfig cfg("Omega_sigma = 1\ngamma_a = 1\n");
  const ToolRun r = run("g2tau --mode source --tau-max 5 --points 51 --config " + cfg.path());
  ASSERT_EQ(r.status, 0);
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 51u);
  double tau = -1.0, g2 = -1.0;
  ASSERT_EQ(std::sscanf(lines[0].c_str(), "%lf,%lf", &tau, &g2), 2);
  EXPECT_EQ(tau, 0.0);
  EXPECT_NEAR(g2, 0.0, 1e-10);
}

TEST(Cli, WignerJson) {
  const ToolRun r = run("wigner --format json --points 41 --config " + recipe("steady.cfg"));
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.contains("norm"));
  EXPECT_NEAR(j["norm"].get<double>(), 1.0, 1e-3);
}

TEST(Cli, ChartColumns) {
  const ToolRun r = run("chart --n-min 0.5 --n-max 1.5 --points 3");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("n_a,boundary_g2,boundary_g3,incoherent_envelope,coherent_envelope"), std::string::npos);
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 3u);
  double n = 0.0, b2 = 0.0;
  ASSERT_EQ(std::sscanf(lines[2].c_str(), "%lf,%lf", &n, &b2), 2);
  EXPECT_EQ(n, 1.5);
  EXPECT_NEAR(b2, 4.0 / 9.0, 1e-15);
}

TEST(Cli, VerifyChartSuitePasses) {
  const ToolRun r = run("verify --only chart");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, VerifyDetectsWeakenedCascade) {
  const ToolRun r = run("verify --only 4 --mutate-cascade 0.5");
  EXPECT_EQ(r.status, 3) << r.out;
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

}  // namespace
}  // namespace qexcite
