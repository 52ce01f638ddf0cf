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

#ifndef OLP_POLICY_H_
#define OLP_POLICY_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "olp/distributions.h"
#include "olp/fluid_dual.h"
#include "olp/hindsight.h"

namespace olp {

enum class PolicyKind { kCE, kStaticFluid, kAcceptIfFeasible };

// A policy plus an optional tie-break override for its dual solves. Written
// "CE", "StaticFluid", "AcceptIfFeasible", optionally suffixed ":largest" or
// ":midpoint".
struct PolicySpec {
  PolicyKind kind = PolicyKind::kCE;
  std::optional<TieBreak> tie_break;

  std::string Name() const;
  static PolicySpec Parse(const std::string& name);
};

struct StepRecord {
  long t = 0;
  Vec a;
  double r = 0.0;
  double threshold = 0.0;  // a_t' lambda_t
  Vec lambda;              // dual price used at step t
  bool accepted = false;
  Vec b;  // inventory after step t
};

struct EpisodeTrace {
  PolicySpec policy;
  long horizon = 0;
  Vec b0;
  uint64_t seed = 0;
  std::vector<StepRecord> steps;
  double total_reward = 0.0;

  RequestSample Realization() const;
  // Columns t,r,threshold,accepted,b_1..b_m.
  void WriteCsv(std::ostream& out) const;
};

struct CeDecision {
  bool accept = false;
  double threshold = 0.0;
  Vec lambda;
};

// Step t in 1..T with inventory b_prev. Solves the fluid dual at
// b_prev / (T - t) for t < T and prices at zero in the last period; accepts
// iff r >= a'lambda and a <= b_prev.
CeDecision CeDecide(const RequestDistribution& dist, std::span<const double> b_prev,
                    long t, long horizon, std::span<const double> a, double r,
                    const SolverConfig& cfg, const Vec* warm_start = nullptr);

RequestSample SampleRealization(const RequestDistribution& dist, long horizon,
                                uint64_t seed);

// Applies `policy` to a fixed realization. keep_steps = false records only
// the total reward.
EpisodeTrace RunPolicy(const RequestDistribution& dist, std::span<const double> b,
                       const RequestSample& realization, const PolicySpec& policy,
                       const SolverConfig& cfg, uint64_t seed = 0,
                       bool keep_steps = true);

EpisodeTrace RunEpisode(const RequestDistribution& dist, std::span<const double> b,
                        long horizon, const PolicySpec& policy, uint64_t seed,
                        const SolverConfig& cfg);

// Hindsight value minus policy reward on one realization.
double EpisodeRegret(const RequestDistribution& dist, std::span<const double> b,
                     long horizon, const PolicySpec& policy, uint64_t seed,
                     const SolverConfig& cfg);

struct DecompositionStep {
  long t = 0;
  double r = 0.0;
  double threshold_tilde = 0.0;
  double threshold_star = 0.0;
  std::optional<double> threshold_bar;  // absent when a_t exceeds b_{t-1}
  double over = 0.0;
  double under = 0.0;
};

struct DecompositionReport {
  double term_over = 0.0;
  double term_under = 0.0;
  double c0 = 0.0;
  double c0_log_bound = 0.0;
  std::vector<DecompositionStep> per_step;

  void WriteCsv(std::ostream& out) const;
};

// (over, under) terms of one step from its three thresholds.
std::pair<double, double> DecompositionTerms(double r, double threshold_tilde,
                                             double threshold_star,
                                             std::optional<double> threshold_bar);

// 2 (1 + m A_max / A_min) m r_max.
double DecompositionConstant(const RequestDistribution& dist);

// Hindsight duals of the remaining items t+1..T at b_{t-1} (and at
// b_{t-1} - a_t when that is nonnegative) for every step of the trace.
struct RemainingDual {
  Vec lambda_star;
  std::optional<Vec> lambda_bar;
};
std::vector<RemainingDual> RemainingDuals(const EpisodeTrace& trace,
                                          const SolverConfig& cfg);

DecompositionReport ComputeDecomposition(const RequestDistribution& dist,
                                         const EpisodeTrace& trace,
                                         const SolverConfig& cfg);
DecompositionReport ComputeDecomposition(const RequestDistribution& dist,
                                         const EpisodeTrace& trace,
                                         const std::vector<RemainingDual>& duals);

struct ConcentrationPoint {
  long t = 0;
  double measured = 0.0;
  double envelope = 0.0;
};

// E_a[(F_a(a'l~) - F_a(a'l*)) (a'l~ - a'l*)] along a trace against
// (log(T - t) / (T - t))^((2 + beta) / (2 + 2 beta)) for t <= T - 2. beta
// defaults to the distribution's declared value.
std::vector<ConcentrationPoint> ConcentrationFromTrace(
    const RequestDistribution& dist, const EpisodeTrace& trace,
    const std::vector<RemainingDual>& duals, std::optional<double> beta = std::nullopt);

std::vector<ConcentrationPoint> ConcentrationProbe(const RequestDistribution& dist,
                                                   std::span<const double> b, long horizon,
                                                   uint64_t seed, const SolverConfig& cfg,
                                                   std::optional<double> beta = std::nullopt);

void WriteConcentrationCsv(std::ostream& out, const std::vector<ConcentrationPoint>& rows);

}  // namespace olp

#endif  // OLP_POLICY_H_
