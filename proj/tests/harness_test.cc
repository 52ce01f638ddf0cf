// Copyright 2026 The olp Authors.
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

#include "olp/harness.h"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "olp/errors.h"
#include "olp/report_io.h"

namespace olp {
namespace {

using nlohmann::json;

json BaseConfig() {
  return json::parse(R"({
    "experiment_id": "unit",
    "distribution": {"kind": "multisecretary_beta", "params": {"beta": 0}},
    "inventory": {"d": 0.5},
    "T_grid": [50, 100],
    "trials": 8,
    "base_seed": 3,
    "policies": ["CE", "StaticFluid"]
  })");
}

std::string ConfigErrorFor(const json& j) {
  try {
    ExperimentConfig::FromJson(j);
  } catch (const OlpError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigError) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "config accepted: " << j.dump();
  return "";
}

TEST(HarnessTest, ConfigErrorsNameTheField) {
  for (const char* field : {"distribution", "inventory", "T_grid", "policies"}) {
    json j = BaseConfig();
    j.erase(field);
    EXPECT_NE(ConfigErrorFor(j).find(field), std::string::npos) << field;
  }
  json j = BaseConfig();
  j["T_grid"] = {100, 50};
  EXPECT_NE(ConfigErrorFor(j).find("strictly increasing"), std::string::npos);
  j = BaseConfig();
  j["trials"] = 0;
  EXPECT_NE(ConfigErrorFor(j).find("trials"), std::string::npos);
  j = BaseConfig();
  j["distribution"]["params"].erase("beta");
  EXPECT_NE(ConfigErrorFor(j).find("distribution.params.beta"), std::string::npos);
  j = BaseConfig();
  j["inventory"] = {{"d", {0.5, 0.5}}};
  EXPECT_NE(ConfigErrorFor(j).find("inventory.d"), std::string::npos);
  j = BaseConfig();
  j["solver"] = {{"step_rule", "sideways"}};
  EXPECT_NE(ConfigErrorFor(j).find("solver"), std::string::npos);
  j = BaseConfig();
  j["inventory"] = {{"explicit", {{"50", 20}}}};
  EXPECT_NE(ConfigErrorFor(j).find("inventory.explicit.100"), std::string::npos);
}

TEST(HarnessTest, SeedAcceptsSignedAndUnsignedIntegers) {
  json j = BaseConfig();
  j["base_seed"] = 5;  // signed when built in code
  EXPECT_EQ(ExperimentConfig::FromJson(j).base_seed, 5u);
  j["base_seed"] = 18446744073709551615ULL;
  EXPECT_EQ(ExperimentConfig::FromJson(j).base_seed, 18446744073709551615ULL);
  j["base_seed"] = -1;
  EXPECT_NE(ConfigErrorFor(j).find("base_seed"), std::string::npos);
  j["base_seed"] = 1.5;
  EXPECT_NE(ConfigErrorFor(j).find("base_seed"), std::string::npos);
}

TEST(HarnessTest, InventoryRules) {
  const RequestDistribution dist = RequestDistribution::MultisecretaryBeta(0.0);
  InventoryRule rule;
  rule.d = Vec{0.5};
  EXPECT_EQ(rule.For(dist, 101), Vec({50.0}));
  // 0.3 * 10 is 2.9999999999999996 in binary; the floor still gives 3.
  rule.d = Vec{0.3};
  EXPECT_EQ(rule.For(dist, 10), Vec({3.0}));
  InventoryRule deg;
  deg.degenerate_at = Vec{0.0};
  EXPECT_EQ(deg.For(RequestDistribution::UnitSquareShifted(), 1000), Vec({1500.0}));
  InventoryRule ex;
  ex.explicit_b[10] = Vec{4.0};
  EXPECT_EQ(ex.For(dist, 10), Vec({4.0}));
  EXPECT_THROW(ex.For(dist, 11), OlpError);
}

TEST(HarnessTest, FitScalingSyntheticPowerLaws) {
  std::vector<std::pair<long, double>> pts;
  for (long T : {250, 500, 1000, 2000, 4000}) pts.push_back({T, 3.0 * std::sqrt(double(T))});
  ScalingFit fit = FitScaling(pts, FitCorrection::kNone);
  EXPECT_NEAR(fit.slope, 0.5, 1e-6);
  EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-6);
  EXPECT_NEAR(fit.r2, 1.0, 1e-9);
  pts.clear();
  for (long T : {250, 500, 1000, 2000}) pts.push_back({T, std::pow(std::log(double(T)), 2)});
  EXPECT_NEAR(FitScaling(pts, FitCorrection::kLog2).slope, 0.0, 1e-6);
  pts.clear();
  for (long T : {250, 500, 1000, 2000}) pts.push_back({T, double(T) * std::log(double(T))});
  EXPECT_NEAR(FitScaling(pts, FitCorrection::kLog).slope, 1.0, 1e-6);
  pts.resize(3);
  try {
    FitScaling(pts, FitCorrection::kNone);
    FAIL();
  } catch (const OlpError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientData);
  }
  // Zero means do not count as points.
  pts = {{10, 1.0}, {20, 0.0}, {40, 2.0}, {80, 3.0}};
  EXPECT_THROW(FitScaling(pts, FitCorrection::kNone), OlpError);
}

TEST(HarnessTest, SummarizeMeansAndStandardErrors) {
  std::vector<RegretRow> rows = {{"CE", 10, 0, 1.0, 0}, {"CE", 10, 1, 3.0, 0},
                                 {"CE", 20, 0, 2.0, 0}, {"X", 10, 0, 5.0, 0}};
  const std::vector<CellSummary> cells = Summarize(rows);
  ASSERT_EQ(cells.size(), 3u);
  EXPECT_EQ(cells[0].policy, "CE");
  EXPECT_NEAR(cells[0].mean, 2.0, 1e-15);
  EXPECT_NEAR(cells[0].standard_error, std::sqrt(2.0) / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(cells[1].trials, 1);
  EXPECT_EQ(cells[1].standard_error, 0.0);
}

TEST(HarnessTest, SweepAcceptIfFeasibleWithHugeInventoryHasZeroRegret) {
  json j = BaseConfig();
  j["inventory"] = {{"d", 1000.0}};
  j["T_grid"] = {10};
  j["trials"] = 1;
  j["policies"] = {"AcceptIfFeasible"};
  const RegretReport rep = RunRegretSweep(ExperimentConfig::FromJson(j));
  ASSERT_EQ(rep.rows.size(), 1u);
  EXPECT_NEAR(rep.rows[0].regret, 0.0, 1e-12);
}

TEST(HarnessTest, SweepRowsAreOrderedAndNonnegative) {
  const ExperimentConfig cfg = ExperimentConfig::FromJson(BaseConfig());
  const RegretReport rep = RunRegretSweep(cfg);
  ASSERT_EQ(rep.rows.size(), 2u * 2u * 8u);
  for (size_t k = 0; k < rep.rows.size(); ++k) {
    const RegretRow& r = rep.rows[k];
    EXPECT_EQ(r.policy, k < 16 ? "CE" : "StaticFluid");
    EXPECT_EQ(r.horizon, (k % 16) < 8 ? 50 : 100);
    EXPECT_EQ(r.trial, static_cast<long>(k % 8));
    EXPECT_EQ(r.seed, EpisodeSeed("unit", 3, r.horizon, r.trial));
    EXPECT_GE(r.regret, -1e-6);
  }
  // Policies share realizations: same seeds row for row.
  for (size_t k = 0; k < 16; ++k) EXPECT_EQ(rep.rows[k].seed, rep.rows[k + 16].seed);
  const json summary = rep.SummaryJson(cfg);
  EXPECT_EQ(summary.at("trials"), 8);
  EXPECT_EQ(summary.at("cells").size(), 4u);
}

TEST(HarnessTest, DeterministicAcrossThreadCounts) {
  const ExperimentConfig cfg = ExperimentConfig::FromJson(BaseConfig());
  std::ostringstream one, four;
  setenv("OLP_THREADS", "1", 1);
  EXPECT_EQ(WorkerCount(), 1);
  WriteRegretCsv(one, RunRegretSweep(cfg).rows);
  setenv("OLP_THREADS", "4", 1);
  EXPECT_EQ(WorkerCount(), 4);
  WriteRegretCsv(four, RunRegretSweep(cfg).rows);
  unsetenv("OLP_THREADS");
  EXPECT_EQ(one.str(), four.str());
}

TEST(HarnessTest, StandardErrorShrinksWithTrials) {
  json j = BaseConfig();
  j["T_grid"] = {200};
  j["policies"] = {"CE"};
  j["trials"] = 50;
  const double se50 = RunRegretSweep(ExperimentConfig::FromJson(j)).cells[0].standard_error;
  j["trials"] = 800;
  const double se800 = RunRegretSweep(ExperimentConfig::FromJson(j)).cells[0].standard_error;
  // sqrt(800 / 50) = 4; allow sampling noise in the standard deviation.
  EXPECT_NEAR(se50 / se800, 4.0, 1.2);
}

TEST(HarnessTest, ResolvingBeatsStaticThresholdOnMultisecretary) {
  json j = BaseConfig();
  j["T_grid"] = {250, 500, 1000, 2000, 4000, 8000, 16000};
  j["trials"] = 60;
  const RegretReport rep = RunRegretSweep(ExperimentConfig::FromJson(j));
  std::map<long, double> ce, fluid;
  for (const CellSummary& c : rep.cells) (c.policy == "CE" ? ce : fluid)[c.horizon] = c.mean;
  for (const auto& [T, mean] : ce) EXPECT_LE(mean, fluid[T]) << "T=" << T;
}

TEST(HarnessTest, ProbeConfigAndReport) {
  const json j = json::parse(R"({
    "distribution": {"kind": "multisecretary_beta", "params": {"beta": 0}},
    "inventory": {"d": 0.5}, "T": 200, "trials": 6, "base_seed": 2
  })");
  const ProbeConfig cfg = ProbeConfig::FromJson(j);
  const ProbeReport rep = RunProbe(cfg);
  ASSERT_EQ(rep.trials.size(), 6u);
  EXPECT_EQ(rep.b, Vec({100.0}));
  EXPECT_EQ(rep.first_trace.steps.size(), 200u);
  for (const ProbeTrial& t : rep.trials) {
    EXPECT_GE(t.regret, -1e-6);
    EXPECT_FALSE(t.concentration.empty());
  }
  EXPECT_GE(rep.DecompositionBound(), rep.MeanRegret() - 3.0 * rep.RegretStandardError());
  std::ostringstream trials, conc;
  rep.WriteTrialsCsv(trials);
  rep.WriteConcentrationCsv(conc);
  EXPECT_EQ(trials.str().substr(0, trials.str().find('\n')),
            "trial,seed,regret,term_over,term_under");
  EXPECT_EQ(conc.str().substr(0, conc.str().find('\n')), "trial,t,measured,envelope");
  json bad = j;
  bad.erase("T");
  EXPECT_THROW(ProbeConfig::FromJson(bad), OlpError);
}

}  // namespace
}  // namespace olp
