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

#ifndef OLP_DISTRIBUTIONS_H_
#define OLP_DISTRIBUTIONS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "olp/reward_law.h"
#include "olp/rng.h"

namespace olp {

using Vec = std::vector<double>;

double Dot(std::span<const double> x, std::span<const double> y);

enum class DistributionKind {
  kMultisecretaryBeta,
  kHyperCube,
  kGeneralizedLinear,
  kGapMultisecretary,
  kTwoPointConsumption,
  kUnitSquareShifted,
  kDiscrete,
};

std::string KindName(DistributionKind kind);

struct Request {
  Vec a;
  double r = 0.0;
};

// Support bounds: a in [a_lower, a_upper]^m and
// r <= r_upper.
struct SupportBounds {
  double a_lower = 1.0;
  double a_upper = 1.0;
  double r_upper = 1.0;
};

// Declared (reverse) Hoelder parameters of the conditional reward CDFs:
//   c_beta (z2 - z1)^(1 + beta) <= F(z2) - F(z1) <= c_nu (z2 - z1)^nu.
struct HolderParams {
  double beta = 0.0;
  double nu = 1.0;
  double c_beta = 1.0;
  double c_nu = 1.0;
};

struct Atom {
  Vec a;
  double r = 0.0;
  double p = 0.0;
};

// Piecewise-linear link with constant extrapolation outside the knots.
struct LinkTable {
  Vec x;
  Vec y;
  double operator()(double t) const;
};

struct GeneralizedLinearParams {
  Vec weights;          // z >= 0
  LinkTable link;       // g >= 0
  double noise_half_width = 0.5;  // epsilon ~ U[-L, L]
  Vec a_lower;
  Vec a_upper;
};

// An i.i.d. request law F over (a, r). Immutable and cheap to copy; safe to
// share across threads.
class RequestDistribution {
 public:
  static RequestDistribution MultisecretaryBeta(double beta);
  static RequestDistribution HyperCube(int m);
  static RequestDistribution GeneralizedLinear(GeneralizedLinearParams params);
  static RequestDistribution GapMultisecretary();
  static RequestDistribution TwoPointConsumption();
  static RequestDistribution UnitSquareShifted();
  static RequestDistribution Discrete(std::vector<Atom> atoms);

  // {"kind": ..., "m": ..., "params": {...}}
  static RequestDistribution FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;

  DistributionKind kind() const;
  int dim() const;
  const SupportBounds& bounds() const;
  const std::optional<HolderParams>& holder() const;
  // Atom list for the discrete kind, empty otherwise.
  const std::vector<Atom>& atoms() const;

  // Upper end of the dual box per coordinate: r_upper / (smallest positive
  // consumption of that resource).
  Vec DualUpper() const;

  // True when every conditional reward law is a point mass, which makes the
  // fluid dual piecewise linear.
  bool IsPiecewiseLinear() const;
  // True when expectations are exact (closed form or exact piecewise rules)
  // rather than tensor quadrature or Monte Carlo.
  bool HasExactExpectations() const;
  // True when a is degenerate at the scalar 1, so the m = 1 dual solves to a
  // reward quantile.
  bool IsMultisecretary() const;
  // Reward law of the multisecretary kinds; throws for other kinds.
  const RewardLaw& MultisecretaryRewardLaw() const;

  Request Sample(Rng& rng) const;
  double ConditionalRewardCdf(std::span<const double> a, double z) const;
  // E[(r - a'lambda)^+].
  double HingeExpectation(std::span<const double> lambda) const;
  // E[a 1{r > a'lambda}].
  Vec ConsumptionExpectation(std::span<const double> lambda) const;
  // E r - E[a'lambda] + E int_0^{a'lambda} F_a(v) dv, evaluated by
  // integrating the CDF. Equals HingeExpectation for nonnegative rewards.
  double HingeByCdfIntegral(std::span<const double> lambda) const;
  Vec MeanConsumption() const;
  double MeanReward() const;

  // E_a[f(a, law_a)] with the kind's integration scheme. `kinks` are the dual
  // points whose thresholds a'lambda make f non-smooth; exact schemes split
  // the a-domain there.
  double ExpectOverConsumption(
      std::span<const Vec> kinks,
      const std::function<double(std::span<const double>, const RewardLaw&)>&
          f) const;

  // Nodes of the fixed quadrature / Monte Carlo rule (0 for exact kinds).
  size_t IntegrationNodeCount() const;

  struct Impl;

 private:
  explicit RequestDistribution(std::shared_ptr<const Impl> impl)
      : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace olp

#endif  // OLP_DISTRIBUTIONS_H_
