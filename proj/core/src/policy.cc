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

#include "olp/policy.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <ostream>

#include "olp/errors.h"
#include "olp/format.h"

namespace olp {

std::string PolicySpec::Name() const {
  std::string name;
  switch (kind) {
    case PolicyKind::kCE: name = "CE"; break;
    case PolicyKind::kStaticFluid: name = "StaticFluid"; break;
    case PolicyKind::kAcceptIfFeasible: name = "AcceptIfFeasible"; break;
  }
  if (tie_break) name += ":" + TieBreakName(*tie_break);
  return name;
}

PolicySpec PolicySpec::Parse(const std::string& name) {
  PolicySpec spec;
  std::string base = name;
  const size_t colon = name.find(':');
  if (colon != std::string::npos) {
    base = name.substr(0, colon);
    spec.tie_break = ParseTieBreak(name.substr(colon + 1));
  }
  if (base == "CE" || base == "ce") {
    spec.kind = PolicyKind::kCE;
  } else if (base == "StaticFluid" || base == "static_fluid") {
    spec.kind = PolicyKind::kStaticFluid;
  } else if (base == "AcceptIfFeasible" || base == "accept_if_feasible") {
    spec.kind = PolicyKind::kAcceptIfFeasible;
  } else {
    Fail(ErrorCode::kConfigError, "unknown policy '" + name + "'");
  }
  return spec;
}

RequestSample EpisodeTrace::Realization() const {
  RequestSample sample;
  sample.m = static_cast<int>(b0.size());
  sample.items.reserve(steps.size());
  for (const StepRecord& s : steps) sample.items.push_back({s.a, s.r});
  return sample;
}

void EpisodeTrace::WriteCsv(std::ostream& out) const {
  out << "t,r,threshold,accepted";
  for (size_t i = 0; i < b0.size(); ++i) out << ",b_" << (i + 1);
  out << '\n';
  for (const StepRecord& s : steps) {
    out << s.t << ',' << FormatDouble(s.r) << ',' << FormatDouble(s.threshold) << ','
        << (s.accepted ? 1 : 0);
    for (double bi : s.b) out << ',' << FormatDouble(bi);
    out << '\n';
  }
}

namespace {

bool Fits(std::span<const double> a, std::span<const double> b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

void CheckEpisodeInputs(const RequestDistribution& dist, std::span<const double> b,
                        long horizon) {
  if (horizon < 1) Fail(ErrorCode::kInvalidArgument, "horizon must be >= 1");
  if (b.size() != static_cast<size_t>(dist.dim())) {
    Fail(ErrorCode::kDimensionMismatch, "inventory has wrong dimension");
  }
  for (double v : b) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      Fail(ErrorCode::kInvalidArgument, "inventory must be finite and >= 0");
    }
  }
}

// Active-set view of a one-resource sample ordered by r / a, answering the
// smallest empirical dual optimum in O(log n) per query.
class RatioIndex {
 public:
  explicit RatioIndex(const RequestSample& sample) {
    const size_t n = sample.size();
    std::vector<size_t> order;
    for (size_t j = 0; j < n; ++j) {
      if (sample.items[j].a[0] > 0.0) order.push_back(j);
    }
    auto ratio = [&](size_t j) { return sample.items[j].r / sample.items[j].a[0]; };
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t x, size_t y) { return ratio(x) > ratio(y); });
    rank_.assign(n, kNone);
    size_ = order.size();
    rho_.resize(size_);
    weight_.resize(size_);
    positive_ = 0;
    for (size_t k = 0; k < size_; ++k) {
      rank_[order[k]] = k;
      rho_[k] = ratio(order[k]);
      weight_[k] = sample.items[order[k]].a[0];
      if (rho_[k] > 0.0) positive_ = k + 1;
    }
    fw_weight_.assign(size_ + 1, 0.0);
    fw_count_.assign(size_ + 1, 0);
    removed_.assign(size_, 0);
    for (size_t k = 0; k < size_; ++k) Add(k, weight_[k], 1);
    step_ = 1;
    while (step_ * 2 <= size_) step_ *= 2;
  }

  void Remove(size_t item) {
    const size_t k = rank_[item];
    if (k == kNone || removed_[k]) return;
    removed_[k] = 1;
    Add(k, -weight_[k], -1);
  }

  // Smallest minimizer of b lambda + sum (r_j - a_j lambda)^+ over the active
  // items, as in ScanPiecewiseLinear with TieBreak::kSmallest.
  double SmallestOptimum(double b) const {
    const double total = PrefixWeight(size_);
    const double eps = 1e-12 * (1.0 + std::abs(b) + total);
    if (PrefixWeight(positive_) <= b + eps) return 0.0;
    // Largest prefix length p with weight <= b + eps, then the next active rank.
    size_t pos = 0;
    double acc = 0.0;
    for (size_t s = step_; s > 0; s >>= 1) {
      if (pos + s <= size_ && acc + fw_weight_[pos + s] <= b + eps) {
        pos += s;
        acc += fw_weight_[pos];
      }
    }
    const long target = PrefixCount(pos) + 1;
    size_t at = 0;
    long cnt = 0;
    for (size_t s = step_; s > 0; s >>= 1) {
      if (at + s <= size_ && cnt + fw_count_[at + s] < target) {
        at += s;
        cnt += fw_count_[at];
      }
    }
    return rho_[at];
  }

 private:
  static constexpr size_t kNone = static_cast<size_t>(-1);

  void Add(size_t k, double w, long c) {
    for (size_t i = k + 1; i <= size_; i += i & (~i + 1)) {
      fw_weight_[i] += w;
      fw_count_[i] += c;
    }
  }
  double PrefixWeight(size_t len) const {
    double s = 0.0;
    for (size_t i = len; i > 0; i -= i & (~i + 1)) s += fw_weight_[i];
    return s;
  }
  long PrefixCount(size_t len) const {
    long s = 0;
    for (size_t i = len; i > 0; i -= i & (~i + 1)) s += fw_count_[i];
    return s;
  }

  size_t size_ = 0;
  size_t positive_ = 0;
  size_t step_ = 1;
  std::vector<size_t> rank_;
  std::vector<double> rho_;
  std::vector<double> weight_;
  std::vector<double> fw_weight_;
  std::vector<long> fw_count_;
  std::vector<char> removed_;
};

}  // namespace

CeDecision CeDecide(const RequestDistribution& dist, std::span<const double> b_prev,
                    long t, long horizon, std::span<const double> a, double r,
                    const SolverConfig& cfg, const Vec* warm_start) {
  if (t < 1 || t > horizon) Fail(ErrorCode::kInvalidArgument, "step index outside 1..T");
  const size_t m = b_prev.size();
  if (a.size() != m || m != static_cast<size_t>(dist.dim())) {
    Fail(ErrorCode::kDimensionMismatch, "consumption or inventory has wrong dimension");
  }
  CeDecision dec;
  if (t < horizon) {
    Vec d(m);
    const double left = static_cast<double>(horizon - t);
    for (size_t i = 0; i < m; ++i) d[i] = b_prev[i] / left;
    SolverConfig local = cfg;
    local.probe_flat = false;
    SolveHints hints;
    hints.warm_start = warm_start;
    dec.lambda = SolveFluidDual(dist, d, local, hints).lambda;
  } else {
    dec.lambda.assign(m, 0.0);
  }
  dec.threshold = Dot(a, dec.lambda);
  dec.accept = r >= dec.threshold && Fits(a, b_prev);
  return dec;
}

RequestSample SampleRealization(const RequestDistribution& dist, long horizon,
                                uint64_t seed) {
  if (horizon < 1) Fail(ErrorCode::kInvalidArgument, "horizon must be >= 1");
  RequestSample sample;
  sample.m = dist.dim();
  sample.items.reserve(static_cast<size_t>(horizon));
  Rng rng(seed);
  for (long t = 0; t < horizon; ++t) sample.items.push_back(dist.Sample(rng));
  return sample;
}

EpisodeTrace RunPolicy(const RequestDistribution& dist, std::span<const double> b,
                       const RequestSample& realization, const PolicySpec& policy,
                       const SolverConfig& cfg, uint64_t seed, bool keep_steps) {
  const long horizon = static_cast<long>(realization.size());
  CheckEpisodeInputs(dist, b, horizon);
  SolverConfig local = cfg;
  local.probe_flat = false;
  if (policy.tie_break) local.tie_break = *policy.tie_break;
  const size_t m = b.size();
  EpisodeTrace trace;
  trace.policy = policy;
  trace.horizon = horizon;
  trace.b0.assign(b.begin(), b.end());
  trace.seed = seed;
  if (keep_steps) trace.steps.reserve(static_cast<size_t>(horizon));
  Vec left(b.begin(), b.end());
  Vec static_lambda;
  if (policy.kind == PolicyKind::kStaticFluid) {
    Vec d(m);
    for (size_t i = 0; i < m; ++i) d[i] = b[i] / static_cast<double>(horizon);
    static_lambda = SolveFluidDual(dist, d, local).lambda;
  }
  Vec lambda_prev;
  for (long t = 1; t <= horizon; ++t) {
    const Request& req = realization.items[static_cast<size_t>(t - 1)];
    StepRecord rec;
    rec.t = t;
    switch (policy.kind) {
      case PolicyKind::kCE: {
        CeDecision dec = CeDecide(dist, left, t, horizon, req.a, req.r, local,
                                  lambda_prev.empty() ? nullptr : &lambda_prev);
        rec.accepted = dec.accept;
        rec.threshold = dec.threshold;
        if (t < horizon) lambda_prev = dec.lambda;
        rec.lambda = std::move(dec.lambda);
        break;
      }
      case PolicyKind::kStaticFluid:
        rec.threshold = Dot(req.a, static_lambda);
        rec.accepted = req.r >= rec.threshold && Fits(req.a, left);
        rec.lambda = static_lambda;
        break;
      case PolicyKind::kAcceptIfFeasible:
        rec.lambda.assign(m, 0.0);
        rec.threshold = 0.0;
        rec.accepted = Fits(req.a, left);
        break;
    }
    if (rec.accepted) {
      for (size_t i = 0; i < m; ++i) left[i] -= req.a[i];
      trace.total_reward += req.r;
    }
    if (keep_steps) {
      rec.a = req.a;
      rec.r = req.r;
      rec.b = left;
      trace.steps.push_back(std::move(rec));
    }
  }
  return trace;
}

EpisodeTrace RunEpisode(const RequestDistribution& dist, std::span<const double> b,
                        long horizon, const PolicySpec& policy, uint64_t seed,
                        const SolverConfig& cfg) {
  CheckEpisodeInputs(dist, b, horizon);
  const RequestSample sample = SampleRealization(dist, horizon, seed);
  return RunPolicy(dist, b, sample, policy, cfg, seed, true);
}

double EpisodeRegret(const RequestDistribution& dist, std::span<const double> b,
                     long horizon, const PolicySpec& policy, uint64_t seed,
                     const SolverConfig& cfg) {
  CheckEpisodeInputs(dist, b, horizon);
  const RequestSample sample = SampleRealization(dist, horizon, seed);
  const double reward = RunPolicy(dist, b, sample, policy, cfg, seed, false).total_reward;
  return HindsightValue(sample, b, cfg) - reward;
}

std::pair<double, double> DecompositionTerms(double r, double threshold_tilde,
                                             double threshold_star,
                                             std::optional<double> threshold_bar) {
  double over = 0.0;
  if (threshold_bar && threshold_tilde <= r && r <= *threshold_bar) {
    over = *threshold_bar - r;
  }
  double under = 0.0;
  if (threshold_star <= r && r <= threshold_tilde) under = r - threshold_star;
  return {over, under};
}

double DecompositionConstant(const RequestDistribution& dist) {
  const SupportBounds& s = dist.bounds();
  const double m = dist.dim();
  return 2.0 * (1.0 + m * s.a_upper / s.a_lower) * m * s.r_upper;
}

std::vector<RemainingDual> RemainingDuals(const EpisodeTrace& trace,
                                          const SolverConfig& cfg) {
  const size_t T = trace.steps.size();
  const int m = static_cast<int>(trace.b0.size());
  const RequestSample sample = trace.Realization();
  std::vector<RemainingDual> out(T);
  SolverConfig local = cfg;
  local.tie_break = TieBreak::kSmallest;
  std::optional<RatioIndex> index;
  if (m == 1) index.emplace(sample);
  Vec warm;
  Vec warm_bar;
  for (size_t k = 0; k < T; ++k) {
    const StepRecord& s = trace.steps[k];
    const Vec& b_prev = k == 0 ? trace.b0 : trace.steps[k - 1].b;
    Vec b_bar(m);
    bool feasible = true;
    for (int i = 0; i < m; ++i) {
      b_bar[i] = b_prev[i] - s.a[i];
      feasible = feasible && b_bar[i] >= 0.0;
    }
    if (m == 1) {
      index->Remove(k);
      out[k].lambda_star = {index->SmallestOptimum(b_prev[0])};
      if (feasible) out[k].lambda_bar = Vec{index->SmallestOptimum(b_bar[0])};
      continue;
    }
    if (k + 1 == T) {
      out[k].lambda_star.assign(m, 0.0);
      if (feasible) out[k].lambda_bar = Vec(m, 0.0);
      continue;
    }
    const RequestSample rest = sample.Tail(k + 1);
    const DualSolution star =
        SolveEmpiricalDual(rest, b_prev, local, warm.empty() ? nullptr : &warm);
    warm = star.lambda;
    out[k].lambda_star = star.lambda;
    if (feasible) {
      const DualSolution bar =
          SolveEmpiricalDual(rest, b_bar, local, warm_bar.empty() ? nullptr : &warm_bar);
      warm_bar = bar.lambda;
      out[k].lambda_bar = bar.lambda;
    }
  }
  return out;
}

DecompositionReport ComputeDecomposition(const RequestDistribution& dist,
                                         const EpisodeTrace& trace,
                                         const SolverConfig& cfg) {
  if (trace.b0.size() != static_cast<size_t>(dist.dim())) {
    Fail(ErrorCode::kDimensionMismatch, "trace dimension does not match distribution");
  }
  return ComputeDecomposition(dist, trace, RemainingDuals(trace, cfg));
}

DecompositionReport ComputeDecomposition(const RequestDistribution& dist,
                                         const EpisodeTrace& trace,
                                         const std::vector<RemainingDual>& duals) {
  if (trace.b0.size() != static_cast<size_t>(dist.dim())) {
    Fail(ErrorCode::kDimensionMismatch, "trace dimension does not match distribution");
  }
  if (duals.size() != trace.steps.size()) {
    Fail(ErrorCode::kDimensionMismatch, "dual path does not match the trace");
  }
  DecompositionReport rep;
  rep.c0 = DecompositionConstant(dist);
  rep.c0_log_bound = rep.c0 * std::log(static_cast<double>(std::max<long>(trace.horizon, 1)));
  for (size_t k = 0; k < trace.steps.size(); ++k) {
    const StepRecord& s = trace.steps[k];
    DecompositionStep step;
    step.t = s.t;
    step.r = s.r;
    step.threshold_tilde = s.threshold;
    step.threshold_star = Dot(s.a, duals[k].lambda_star);
    if (duals[k].lambda_bar) step.threshold_bar = Dot(s.a, *duals[k].lambda_bar);
    std::tie(step.over, step.under) =
        DecompositionTerms(s.r, step.threshold_tilde, step.threshold_star, step.threshold_bar);
    rep.term_over += step.over;
    rep.term_under += step.under;
    rep.per_step.push_back(step);
  }
  return rep;
}

void DecompositionReport::WriteCsv(std::ostream& out) const {
  out << "t,r,threshold_tilde,threshold_star,threshold_bar,over,under\n";
  for (const DecompositionStep& s : per_step) {
    out << s.t << ',' << FormatDouble(s.r) << ',' << FormatDouble(s.threshold_tilde) << ','
        << FormatDouble(s.threshold_star) << ','
        << (s.threshold_bar ? FormatDouble(*s.threshold_bar) : std::string()) << ','
        << FormatDouble(s.over) << ',' << FormatDouble(s.under) << '\n';
  }
}

std::vector<ConcentrationPoint> ConcentrationFromTrace(
    const RequestDistribution& dist, const EpisodeTrace& trace,
    const std::vector<RemainingDual>& duals, std::optional<double> beta) {
  if (!beta) {
    if (!dist.holder()) {
      Fail(ErrorCode::kInvalidArgument,
           KindName(dist.kind()) + " declares no beta; pass one explicitly");
    }
    beta = dist.holder()->beta;
  }
  if (duals.size() != trace.steps.size()) {
    Fail(ErrorCode::kDimensionMismatch, "dual path does not match the trace");
  }
  const double power = (2.0 + *beta) / (2.0 + 2.0 * *beta);
  const long T = trace.horizon;
  std::vector<ConcentrationPoint> out;
  for (size_t k = 0; k < trace.steps.size(); ++k) {
    const StepRecord& s = trace.steps[k];
    const long rest = T - s.t;
    if (rest < 2) continue;
    const Vec& tilde = s.lambda;
    const Vec& star = duals[k].lambda_star;
    const std::vector<Vec> kinks{tilde, star};
    ConcentrationPoint p;
    p.t = s.t;
    p.measured = dist.ExpectOverConsumption(
        kinks, [&](std::span<const double> a, const RewardLaw& law) {
          const double x = Dot(a, tilde);
          const double y = Dot(a, star);
          return (law.Cdf(x) - law.Cdf(y)) * (x - y);
        });
    const double n = static_cast<double>(rest);
    p.envelope = std::pow(std::log(n) / n, power);
    out.push_back(p);
  }
  return out;
}

std::vector<ConcentrationPoint> ConcentrationProbe(const RequestDistribution& dist,
                                                   std::span<const double> b, long horizon,
                                                   uint64_t seed, const SolverConfig& cfg,
                                                   std::optional<double> beta) {
  const EpisodeTrace trace =
      RunEpisode(dist, b, horizon, PolicySpec{PolicyKind::kCE, std::nullopt}, seed, cfg);
  return ConcentrationFromTrace(dist, trace, RemainingDuals(trace, cfg), beta);
}

void WriteConcentrationCsv(std::ostream& out, const std::vector<ConcentrationPoint>& rows) {
  out << "t,measured,envelope\n";
  for (const ConcentrationPoint& p : rows) {
    out << p.t << ',' << FormatDouble(p.measured) << ',' << FormatDouble(p.envelope) << '\n';
  }
}

}  // namespace olp
