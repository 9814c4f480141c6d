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

#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "qexcite/sweep.hpp"

namespace qexcite {
namespace {

int error_line(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string error_text(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

// ----------------------------------------------------------------- parsing

TEST(ParseConfig, DefaultsWithoutKeys) {
  const ConfigFile f = parse_config("# only a comment\n\n");
  EXPECT_EQ(f.config.scheme, CouplingScheme::cascaded);
  EXPECT_EQ(f.config.drive, Drive::coherent_two_channel);
  EXPECT_EQ(f.config.epsilon_1, 0.5);
  EXPECT_EQ(f.config.tail_tol, 1e-8);
  EXPECT_FALSE(f.plan.has_value());
}

TEST(ParseConfig, ReadsEveryField) {
  const ConfigFile f = parse_config(
      "scheme = hamiltonian\n"
      "drive = coherent_two_channel   # trailing comment\n"
      "gamma_sigma = 2\n"
      "gamma_a = 0.25\n"
      "Omega_sigma = 1.5e-1\n"
      "epsilon_1 = 0.3\n"
      "delta_sigma = -0.5\n"
      "delta_a = 1\n"
      "gamma_sigma_star = 0.1\n"
      "gamma_phi = 0.2\n"
      "N_boost = 3\n"
      "n_max = 12\n"
      "tail_tol = 1e-10\n");
  const SystemConfig& c = f.config;
  EXPECT_EQ(c.scheme, CouplingScheme::hamiltonian);
  EXPECT_EQ(c.gamma_sigma, 2.0);
  EXPECT_EQ(c.gamma_a, 0.25);
  EXPECT_EQ(c.Omega_sigma, 0.15);
  EXPECT_EQ(c.epsilon_1, 0.3);
  EXPECT_EQ(c.delta_sigma, -0.5);
  EXPECT_EQ(c.delta_a, 1.0);
  EXPECT_EQ(c.gamma_sigma_star, 0.1);
  EXPECT_EQ(c.gamma_phi, 0.2);
  EXPECT_EQ(c.N_boost, 3.0);
  EXPECT_EQ(c.n_max, 12);
  EXPECT_EQ(c.tail_tol, 1e-10);
}

TEST(ParseConfig, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("gamma_a = 1\nbogus = 2\n"), 2);
  EXPECT_EQ(error_line("gamma_a = 1\n\n# c\ngamma_a = 2\n"), 4);
  EXPECT_EQ(error_line("gamma_a = abc\n"), 1);
  EXPECT_EQ(error_line("gamma_a = 1\nepsilon_1 = 1.5\n"), 2);
  EXPECT_EQ(error_line("scheme = sideways\n"), 1);
  EXPECT_EQ(error_line("drive = incoherent\nn_max = 2.5\n"), 2);
  EXPECT_EQ(error_line("gamma_a\n"), 1);
  EXPECT_EQ(error_line("gamma_a =\n"), 1);
  EXPECT_EQ(error_line("gamma_phi = -1\n"), 1);
  EXPECT_EQ(error_line("N_boost = 0.5\n"), 1);
  EXPECT_EQ(error_line("sweep.step = 3\n"), 1);
}

TEST(ParseConfig, ErrorsNameTheKey) {
  EXPECT_NE(error_text("bogus = 2\n").find("bogus"), std::string::npos);
  EXPECT_NE(error_text("epsilon_1 = 1.5\n").find("epsilon_1"), std::string::npos);
  EXPECT_NE(error_text("gamma_a = 1\ngamma_a = 2\n").find("duplicate"), std::string::npos);
}

TEST(ParseConfig, CrossFieldValidation) {
  // Omega_sigma with an incoherent drive is inconsistent as a whole.
  EXPECT_EQ(error_line("drive = incoherent\nOmega_sigma = 1\n"), 2);
  EXPECT_THROW(parse_config("scheme = hamiltonian\ndrive = coherent_single_channel\n"), ConfigError);
}

TEST(ParseConfig, SweepPlan) {
  const ConfigFile f = parse_config(
      "drive = incoherent\n"
      "sweep.param = P_sigma\n"
      "sweep.scale = log\n"
      "sweep.min = 0.01\n"
      "sweep.max = 100\n"
      "sweep.count = 5\n");
  ASSERT_TRUE(f.plan.has_value());
  ASSERT_EQ(f.plan->axes.size(), 1u);
  const auto v = f.plan->axes[0].values();
  ASSERT_EQ(v.size(), 5u);
  EXPECT_EQ(v.front(), 0.01);
  EXPECT_EQ(v[2], 1.0);
  EXPECT_EQ(v.back(), 100.0);
  EXPECT_EQ(f.plan->base.drive, Drive::incoherent);
}

TEST(ParseConfig, SweepErrors) {
  const std::string head = "drive = incoherent\n";
  EXPECT_EQ(error_line(head + "sweep.param = P_sigma\nsweep.min = 0\nsweep.max = 1\nsweep.count = 1\n"), 5);
  EXPECT_EQ(error_line(head + "sweep.param = P_sigma\nsweep.scale = log\nsweep.min = 0\nsweep.max = 1\nsweep.count = 3\n"), 4);
  EXPECT_EQ(error_line(head + "sweep.param = colour\nsweep.min = 0\nsweep.max = 1\nsweep.count = 3\n"), 2);
  EXPECT_EQ(error_line(head + "sweep.param = P_sigma\nsweep.min = -1\nsweep.max = 1\nsweep.count = 3\n"), 3);
  EXPECT_EQ(error_line(head + "sweep.param = P_sigma, gamma_a\nsweep.min = 0\nsweep.max = 1, 2\nsweep.count = 3, 3\n"), 3);
  EXPECT_THROW(parse_config(head + "sweep.param = P_sigma\nsweep.min = 0\n"), ConfigError);
}

TEST(LoadConfig, MissingFile) {
  try {
    load_config("/nonexistent/qexcite.cfg");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 0);
  }
}

TEST(LoadConfig, ShippedRecipesParse) {
  for (const char* name : {"fig2.cfg", "fig3.cfg", "fig3_coherent.cfg", "fig4d.cfg", "steady.cfg"})
    EXPECT_NO_THROW(load_config(std::string(QEXCITE_RECIPES) + "/" + name)) << name;
  const ConfigFile f = load_config(std::string(QEXCITE_RECIPES) + "/fig3.cfg");
  ASSERT_TRUE(f.plan.has_value());
  ASSERT_EQ(f.plan->axes.size(), 2u);
  EXPECT_EQ(f.plan->axes[0].name, "P_sigma");
  EXPECT_EQ(f.plan->axes[1].name, "gamma_a");
  EXPECT_EQ(f.plan->size(), 41u * 41u);
  EXPECT_EQ(f.plan->base.scheme, CouplingScheme::cascaded);
}

TEST(LoadConfig, TrajectoryRecipeEndpoints) {
  const ConfigFile f = load_config(std::string(QEXCITE_RECIPES) + "/fig2.cfg");
  ASSERT_TRUE(f.plan.has_value());
  const auto ratios = f.plan->axes[1].values();
  ASSERT_EQ(ratios.size(), 4u);
  EXPECT_EQ(ratios[0], 0.1);
  EXPECT_EQ(ratios[1], 1.0);
  EXPECT_EQ(ratios[2], 10.0);
  EXPECT_EQ(ratios[3], 100.0);
  const auto pumps = f.plan->axes[0].values();
  EXPECT_EQ(pumps.front(), 1e-3);
  EXPECT_EQ(pumps.back(), 1e3);
}

// ------------------------------------------------------------------- sweep

SweepPlan small_plan(int jobs) {
  SweepPlan plan;
  plan.base.drive = Drive::coherent_two_channel;
  plan.base.gamma_a = 0.5;
  plan.axes = {{"Omega_sigma", Scale::log, 0.1, 3.0, 4}, {"gamma_a", Scale::linear, 0.2, 2.0, 3}};
  plan.jobs = jobs;
  return plan;
}

TEST(RunSweep, PointMatchesDirectSolve) {
  SweepPlan plan;
  plan.base.gamma_a = 0.7;
  plan.axes = {{"Omega_sigma", Scale::linear, 0.4, 0.8, 2}};
  const auto records = run_sweep(plan);
  ASSERT_EQ(records.size(), 2u);
  SystemConfig c = plan.base;
  c.Omega_sigma = 0.8;
  const ObservableRecord direct = make_record(solve_steady(c));
  EXPECT_EQ(records[1].param1, 0.8);
  EXPECT_FALSE(records[1].param2.has_value());
  EXPECT_EQ(records[1].n_a, direct.n_a);
  EXPECT_EQ(*records[1].g2, *direct.g2);
  EXPECT_EQ(*records[1].g3, *direct.g3);
}

TEST(RunSweep, RowMajorOrder) {
  const auto records = run_sweep(small_plan(1));
  ASSERT_EQ(records.size(), 12u);
  EXPECT_EQ(records[0].param1, 0.1);
  EXPECT_EQ(*records[0].param2, 0.2);
  EXPECT_EQ(*records[1].param2, 1.1);
  EXPECT_DOUBLE_EQ(records[3].param1, records[0].param1 * std::pow(30.0, 1.0 / 3.0));
  EXPECT_EQ(*records[11].param2, 2.0);
  EXPECT_EQ(records[11].param1, 3.0);
  for (const auto& r : records) {
    EXPECT_EQ(r.config.Omega_sigma, r.param1);
    EXPECT_EQ(r.config.gamma_a, *r.param2);
  }
}

TEST(RunSweep, IndependentOfThreadCount) {
  const auto serial = run_sweep(small_plan(1));
  const auto parallel = run_sweep(small_plan(4));
  ASSERT_EQ(serial.size(), parallel.size());
  EXPECT_EQ(to_csv(serial), to_csv(parallel));
}

TEST(RunSweep, FailedPointsAreMarked) {
  SweepPlan plan;
  plan.base.drive = Drive::incoherent;
  plan.axes = {{"P_sigma", Scale::linear, 0.0, 1.0, 2}};
  const auto records = run_sweep(plan);
  // P = 0 leaves the target dark: correlators undefined, not zero.
  EXPECT_EQ(records[0].status, "ok");
  EXPECT_FALSE(records[0].g2.has_value());
  EXPECT_TRUE(records[1].g2.has_value());

  SweepPlan bad;
  bad.axes = {{"epsilon_1", Scale::linear, 0.5, 1.5, 2}};
  bad.base.Omega_sigma = 1.0;
  const auto out = run_sweep(bad);
  EXPECT_EQ(out[0].status, "ok");
  EXPECT_EQ(out[1].status.rfind("error: ", 0), 0u);
  EXPECT_TRUE(std::isnan(out[1].n_a));
}

// ------------------------------------------------------------------ output

TEST(Emission, CsvHeaderAndNA) {
  SweepPlan plan;
  plan.base.drive = Drive::incoherent;
  plan.axes = {{"P_sigma", Scale::linear, 0.0, 1.0, 2}};
  const std::string csv = to_csv(run_sweep(plan));
  EXPECT_EQ(csv.rfind(std::string(kCsvHeader) + "\n", 0), 0u);
  const auto second = csv.substr(csv.find('\n') + 1);
  EXPECT_EQ(second.rfind("0,NA,0,NA,NA,", 0), 0u) << second;
}

TEST(Emission, CsvRoundTrip) {
  const auto records = run_sweep(small_plan(2));
  const auto back = from_csv(to_csv(records));
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t k = 0; k < records.size(); ++k) EXPECT_TRUE(same_emitted_fields(records[k], back[k])) << k;
}

TEST(Emission, JsonRoundTrip) {
  auto records = run_sweep(small_plan(1));
  records[3].g2.reset();
  records[3].status = "error: something; odd";
  const auto back = from_json(to_json(records));
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t k = 0; k < records.size(); ++k) EXPECT_TRUE(same_emitted_fields(records[k], back[k])) << k;
  EXPECT_NE(to_json(records).find("null"), std::string::npos);
}

TEST(Emission, ShortestRoundTripReals) {
  for (const double v : {0.1, 1.0 / 3.0, 1e-300, 123456.789, -2.5}) {
    const std::string s = detail::format_real(v);
    EXPECT_EQ(std::stod(s), v) << s;
  }
  EXPECT_EQ(detail::format_real(std::nan("")), "NA");
  EXPECT_EQ(detail::format_real(std::optional<double>{}), "NA");
}

TEST(Emission, RejectsForeignCsv) { EXPECT_THROW(from_csv("a,b,c\n1,2,3\n"), InvalidConfig); }

}  // namespace
}  // namespace qexcite
