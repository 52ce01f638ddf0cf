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

#include "olp/reward_law.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "olp/errors.h"
#include "olp/quadrature.h"

namespace olp {
namespace {

double UniformCdf(double lo, double hi, double z) {
  if (z <= lo) return 0.0;
  if (z >= hi) return 1.0;
  return (z - lo) / (hi - lo);
}

double UniformHinge(double lo, double hi, double c) {
  if (c <= lo) return 0.5 * (lo + hi) - c;
  if (c >= hi) return 0.0;
  const double gap = hi - c;
  return gap * gap / (2.0 * (hi - lo));
}

}  // namespace

RewardLaw RewardLaw::Uniform(double lo, double hi) {
  return UniformMixture({{lo, hi, 1.0}});
}

RewardLaw RewardLaw::UniformMixture(std::vector<Piece> pieces) {
  if (pieces.empty()) Fail(ErrorCode::kInvalidArgument, "empty mixture");
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& x, const Piece& y) { return x.lo < y.lo; });
  double total = 0.0;
  for (size_t k = 0; k < pieces.size(); ++k) {
    const Piece& p = pieces[k];
    if (!(p.hi > p.lo) || !(p.weight > 0.0)) {
      Fail(ErrorCode::kInvalidArgument, "uniform piece needs hi > lo, weight > 0");
    }
    if (k > 0 && p.lo < pieces[k - 1].hi) {
      Fail(ErrorCode::kInvalidArgument, "uniform pieces overlap");
    }
    total += p.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    Fail(ErrorCode::kInvalidArgument, "mixture weights must sum to one");
  }
  RewardLaw law(Kind::kUniformMixture);
  law.pieces_ = std::move(pieces);
  return law;
}

RewardLaw RewardLaw::SymmetricPower(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    Fail(ErrorCode::kInvalidArgument, "beta must be finite and >= 0");
  }
  RewardLaw law(Kind::kSymmetricPower);
  law.beta_ = beta;
  return law;
}

RewardLaw RewardLaw::PointMass(double value) {
  RewardLaw law(Kind::kPointMass);
  law.point_ = value;
  return law;
}

RewardLaw RewardLaw::Shifted(double shift) const {
  RewardLaw copy = *this;
  copy.shift_ += shift;
  return copy;
}

double RewardLaw::BaseCdf(double z) const {
  switch (kind_) {
    case Kind::kUniformMixture: {
      double f = 0.0;
      for (const Piece& p : pieces_) f += p.weight * UniformCdf(p.lo, p.hi, z);
      return std::min(f, 1.0);
    }
    case Kind::kSymmetricPower: {
      if (z <= 0.0) return 0.0;
      if (z >= 1.0) return 1.0;
      const double e = 1.0 + beta_;
      if (z <= 0.5) return 0.5 * (1.0 - std::pow(1.0 - 2.0 * z, e));
      return 0.5 * (1.0 + std::pow(2.0 * z - 1.0, e));
    }
    case Kind::kPointMass:
      return z >= point_ ? 1.0 : 0.0;
  }
  return 0.0;
}

double RewardLaw::BaseHinge(double c) const {
  switch (kind_) {
    case Kind::kUniformMixture: {
      double h = 0.0;
      for (const Piece& p : pieces_) h += p.weight * UniformHinge(p.lo, p.hi, c);
      return h;
    }
    case Kind::kSymmetricPower: {
      if (c <= 0.0) return 0.5 - c;
      if (c >= 1.0) return 0.0;
      const double e = 2.0 + beta_;
      if (c >= 0.5) {
        return 0.5 * (1.0 - c) - (1.0 - std::pow(2.0 * c - 1.0, e)) / (4.0 * e);
      }
      const double at_half = 0.25 - 1.0 / (4.0 * e);
      return at_half + 0.5 * (0.5 - c) + std::pow(1.0 - 2.0 * c, e) / (4.0 * e);
    }
    case Kind::kPointMass:
      return std::max(point_ - c, 0.0);
  }
  return 0.0;
}

double RewardLaw::Cdf(double z) const { return BaseCdf(z - shift_); }

double RewardLaw::Hinge(double c) const { return BaseHinge(c - shift_); }

double RewardLaw::CdfIntegral(double lo, double hi) const {
  if (hi < lo) return -CdfIntegral(hi, lo);
  const std::vector<double> cuts = Breakpoints();
  // The symmetric-power CDF is not polynomial for fractional beta, so use a
  // high-order rule; it is exact for the piecewise-linear laws.
  return IntegratePiecewise([this](double v) { return Cdf(v); }, lo, hi, cuts,
                            kind_ == Kind::kSymmetricPower ? 64 : 8);
}

double RewardLaw::Mean() const {
  switch (kind_) {
    case Kind::kUniformMixture: {
      double m = 0.0;
      for (const Piece& p : pieces_) m += p.weight * 0.5 * (p.lo + p.hi);
      return m + shift_;
    }
    case Kind::kSymmetricPower:
      return 0.5 + shift_;
    case Kind::kPointMass:
      return point_ + shift_;
  }
  return 0.0;
}

double RewardLaw::Quantile(double p) const {
  p = std::clamp(p, 0.0, 1.0);
  switch (kind_) {
    case Kind::kUniformMixture: {
      double acc = 0.0;
      for (const Piece& piece : pieces_) {
        if (acc + piece.weight >= p) {
          const double frac = std::max(p - acc, 0.0) / piece.weight;
          return piece.lo + frac * (piece.hi - piece.lo) + shift_;
        }
        acc += piece.weight;
      }
      return pieces_.back().hi + shift_;
    }
    case Kind::kSymmetricPower: {
      const double inv = 1.0 / (1.0 + beta_);
      double z;
      if (p < 0.5) {
        z = 0.5 * (1.0 - std::pow(1.0 - 2.0 * p, inv));
      } else {
        z = 0.5 * (1.0 + std::pow(2.0 * p - 1.0, inv));
      }
      return z + shift_;
    }
    case Kind::kPointMass:
      return point_ + shift_;
  }
  return 0.0;
}

double RewardLaw::Sample(double u) const {
  if (kind_ == Kind::kPointMass) return point_ + shift_;
  // Quantile(0) would pin to the left edge of the first piece; fine for u=0.
  return Quantile(u);
}

double RewardLaw::SupportLo() const {
  switch (kind_) {
    case Kind::kUniformMixture: return pieces_.front().lo + shift_;
    case Kind::kSymmetricPower: return shift_;
    case Kind::kPointMass: return point_ + shift_;
  }
  return 0.0;
}

double RewardLaw::SupportHi() const {
  switch (kind_) {
    case Kind::kUniformMixture: return pieces_.back().hi + shift_;
    case Kind::kSymmetricPower: return 1.0 + shift_;
    case Kind::kPointMass: return point_ + shift_;
  }
  return 0.0;
}

std::vector<double> RewardLaw::Breakpoints() const {
  std::vector<double> out;
  switch (kind_) {
    case Kind::kUniformMixture:
      for (const Piece& p : pieces_) {
        out.push_back(p.lo + shift_);
        out.push_back(p.hi + shift_);
      }
      break;
    case Kind::kSymmetricPower:
      out = {shift_, 0.5 + shift_, 1.0 + shift_};
      break;
    case Kind::kPointMass:
      out = {point_ + shift_};
      break;
  }
  return out;
}

}  // namespace olp
