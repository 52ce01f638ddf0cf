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

#ifndef OLP_HARNESS_H_
#define OLP_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "olp/distributions.h"
#include "olp/fluid_dual.h"
#include "olp/policy.h"

namespace olp {

// b = floor(d T) per resource, with d given directly or built as the
// degenerate inventory at a dual point; or an explicit vector per T.
struct InventoryRule {
  std::optional<Vec> d;
  std::optional<Vec> degenerate_at;
  std::map<long, Vec> explicit_b;

  Vec NormalizedInventory(const RequestDistribution& dist) const;
  Vec For(const RequestDistribution& dist, long horizon) const;
  nlohmann::json ToJson() const;
};

enum class FitCorrection { kNone, kLog, kLog2 };
std::string FitCorrectionName(FitCorrection c);
FitCorrection ParseFitCorrection(const std::string& name);

struct ExperimentConfig {
  std::string experiment_id = "olp";
  nlohmann::json distribution_json;
  std::optional<RequestDistribution> distribution;
  InventoryRule inventory;
  std::vector<long> t_grid;
  long trials = 200;
  std::vector<PolicySpec> policies;
  uint64_t base_seed = 1;
  SolverConfig solver;
  FitCorrection correction = FitCorrection::kNone;
  std::string csv_path;
  std::string summary_path;
  std::string svg_path;

  // Throws ConfigError naming the offending field.
  static ExperimentConfig FromJson(const nlohmann::json& j);
};

// Distribution block of a config; field names in errors gain the
// "distribution." prefix.
RequestDistribution DistributionFromConfig(const nlohmann::json& j);
// A number (broadcast to m entries) or an array of m numbers.
Vec VectorFromConfig(const nlohmann::json& v, int m, const std::string& path);
// {"d": ...} or {"degenerate_at": ...} or {"explicit": {"T": b, ...}}.
InventoryRule InventoryRuleFromConfig(const nlohmann::json& j,
                                      const RequestDistribution& dist);

// Parses the "solver" block; absent fields keep their defaults.
SolverConfig SolverConfigFromJson(const nlohmann::json& j);
nlohmann::json SolverConfigToJson(const SolverConfig& cfg);

struct RegretRow {
  std::string policy;
  long horizon = 0;
  long trial = 0;
  double regret = 0.0;
  uint64_t seed = 0;
};

struct CellSummary {
  std::string policy;
  long horizon = 0;
  double mean = 0.0;
  double standard_error = 0.0;
  long trials = 0;
};

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  long points = 0;
  FitCorrection correction = FitCorrection::kNone;
};

struct RegretReport {
  std::vector<RegretRow> rows;  // (policy order, T, trial) order
  std::vector<CellSummary> cells;
  std::map<std::string, ScalingFit> fits;  // policies with enough points

  nlohmann::json SummaryJson(const ExperimentConfig& cfg) const;
};

// Mean and standard error per (policy, T), in first-appearance order.
std::vector<CellSummary> Summarize(const std::vector<RegretRow>& rows);

// OLS of log(mean / correction(T)) on log T over points with positive mean.
// Throws InsufficientData below four such points.
ScalingFit FitScaling(std::span<const std::pair<long, double>> points,
                      FitCorrection correction);
ScalingFit FitScaling(const std::vector<CellSummary>& cells, const std::string& policy,
                      FitCorrection correction);

// Worker threads: OLP_THREADS when set to a positive integer, else the
// hardware concurrency.
int WorkerCount();

// Runs every (T, trial) realization once and scores every policy on it.
RegretReport RunRegretSweep(const ExperimentConfig& cfg, std::ostream* progress = nullptr);

// Diagnostics of one policy at a single horizon: regret decomposition and
// dual concentration per seed.
struct ProbeConfig {
  std::string experiment_id = "probe";
  std::optional<RequestDistribution> distribution;
  InventoryRule inventory;
  long horizon = 0;
  long trials = 200;
  uint64_t base_seed = 1;
  PolicySpec policy;
  SolverConfig solver;
  // Overrides the distribution's declared beta in the envelope.
  std::optional<double> beta;
  std::string summary_path;
  std::string decomposition_path;
  std::string concentration_path;
  std::string trace_path;

  static ProbeConfig FromJson(const nlohmann::json& j);
};

struct ProbeTrial {
  long trial = 0;
  uint64_t seed = 0;
  double regret = 0.0;
  double term_over = 0.0;
  double term_under = 0.0;
  // Empty when no beta is known for the distribution.
  std::vector<ConcentrationPoint> concentration;
  // Median of measured / envelope over the points; NaN when empty.
  double ratio_median = 0.0;
};

struct ProbeReport {
  Vec b;
  double c0 = 0.0;
  double c0_log_bound = 0.0;
  std::vector<ProbeTrial> trials;
  // Trace of trial 0, kept for export.
  EpisodeTrace first_trace;

  double MeanRegret() const;
  double RegretStandardError() const;
  // mean(term_over + term_under) + C0 log T.
  double DecompositionBound() const;
  nlohmann::json SummaryJson(const ProbeConfig& cfg) const;
  // Columns trial,seed,regret,term_over,term_under.
  void WriteTrialsCsv(std::ostream& out) const;
  // Columns trial,t,measured,envelope.
  void WriteConcentrationCsv(std::ostream& out) const;
};

ProbeReport RunProbe(const ProbeConfig& cfg, std::ostream* progress = nullptr);

}  // namespace olp

#endif  // OLP_HARNESS_H_
