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

#ifndef OLP_REWARD_LAW_H_
#define OLP_REWARD_LAW_H_

#include <vector>

namespace olp {

// One-dimensional reward law used as the conditional distribution of r given
// a. Every law has bounded support and a closed-form CDF and hinge.
class RewardLaw {
 public:
  struct Piece {
    double lo;
    double hi;
    double weight;
  };

  static RewardLaw Uniform(double lo, double hi);
  // Non-overlapping uniform pieces; weights must sum to one.
  static RewardLaw UniformMixture(std::vector<Piece> pieces);
  // Density (1 + beta) |1 - 2x|^beta on [0, 1].
  static RewardLaw SymmetricPower(double beta);
  static RewardLaw PointMass(double value);

  // Law of X + shift.
  RewardLaw Shifted(double shift) const;

  // Right-continuous CDF; 0 left of the support and 1 right of it.
  double Cdf(double z) const;
  // P(X > z).
  double Tail(double z) const { return 1.0 - Cdf(z); }
  // E[(X - c)^+].
  double Hinge(double c) const;
  // Integral of the CDF over [lo, hi] by piecewise quadrature. Independent of
  // Hinge(); used to cross-check the dual objective.
  double CdfIntegral(double lo, double hi) const;
  double Mean() const;
  // Smallest z with Cdf(z) >= p, for p in (0, 1].
  double Quantile(double p) const;
  // Inverse-CDF transform of a uniform variate.
  double Sample(double u) const;

  double SupportLo() const;
  double SupportHi() const;
  // Points where the CDF is not smooth (support endpoints, atoms, gaps).
  std::vector<double> Breakpoints() const;

  bool is_point_mass() const { return kind_ == Kind::kPointMass; }

 private:
  enum class Kind { kUniformMixture, kSymmetricPower, kPointMass };

  RewardLaw(Kind kind) : kind_(kind) {}

  double BaseCdf(double z) const;
  double BaseHinge(double c) const;

  Kind kind_;
  std::vector<Piece> pieces_;
  double beta_ = 0.0;
  double point_ = 0.0;
  double shift_ = 0.0;
};

}  // namespace olp

#endif  // OLP_REWARD_LAW_H_
