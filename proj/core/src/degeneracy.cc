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

#include "olp/degeneracy.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "olp/errors.h"
#include "olp/hindsight.h"

namespace olp {
namespace {

constexpr double kTol = 1e-7;

void RequireDiscrete(const RequestDistribution& dist) {
  if (dist.kind() != DistributionKind::kDiscrete) {
    Fail(ErrorCode::kInvalidArgument, "the deterministic LP needs a discrete distribution");
  }
}

RequestSample WeightedAtoms(const RequestDistribution& dist) {
  RequestSample sample;
  sample.m = dist.dim();
  for (const Atom& at : dist.atoms()) {
    Request req;
    req.a = at.a;
    for (double& v : req.a) v *= at.p;
    req.r = at.p * at.r;
    sample.items.push_back(std::move(req));
  }
  return sample;
}

Vec Usage(const RequestDistribution& dist, std::span<const double> x) {
  Vec used(dist.dim(), 0.0);
  const std::vector<Atom>& atoms = dist.atoms();
  for (size_t j = 0; j < atoms.size(); ++j) {
    for (int i = 0; i < dist.dim(); ++i) used[i] += atoms[j].p * atoms[j].a[i] * x[j];
  }
  return used;
}

}  // namespace

DlpSolution SolveDlp(const RequestDistribution& dist, std::span<const double> d,
                     const SolverConfig& cfg) {
  RequireDiscrete(dist);
  SolverConfig local = cfg;
  local.probe_flat = false;
  DlpSolution sol;
  sol.lambda = SolveFluidDual(dist, d, local).lambda;
  sol.x = RecoverPrimal(WeightedAtoms(dist), d, sol.lambda).x;
  sol.dual_value = Dot(d, sol.lambda);
  for (size_t j = 0; j < dist.atoms().size(); ++j) {
    const Atom& at = dist.atoms()[j];
    const double eta = at.p * std::max(at.r - Dot(at.a, sol.lambda), 0.0);
    sol.eta.push_back(eta);
    sol.dual_value += eta;
    sol.primal_value += at.p * at.r * sol.x[j];
  }
  return sol;
}

NondegeneracyResult DlpNondegeneracyCheck(const DlpSolution& sol,
                                          const RequestDistribution& dist,
                                          std::span<const double> d) {
  RequireDiscrete(dist);
  if (d.size() != static_cast<size_t>(dist.dim()) || sol.x.size() != dist.atoms().size()) {
    Fail(ErrorCode::kDimensionMismatch, "solution does not match the distribution");
  }
  NondegeneracyResult res;
  for (double x : sol.x) {
    if (x <= kTol || x >= 1.0 - kTol) ++res.count;
  }
  const Vec used = Usage(dist, sol.x);
  for (int i = 0; i < dist.dim(); ++i) {
    if (std::abs(used[i] - d[i]) <= kTol) ++res.count;
  }
  res.nondegenerate = res.count == static_cast<int>(sol.x.size());
  return res;
}

bool StrictCsCheck(const RequestDistribution& dist, std::span<const double> d,
                   std::span<const double> lambda, const SolverConfig& cfg) {
  const int m = dist.dim();
  if (d.size() != static_cast<size_t>(m) || lambda.size() != static_cast<size_t>(m)) {
    Fail(ErrorCode::kDimensionMismatch, "d or lambda has wrong dimension");
  }
  if (dist.kind() != DistributionKind::kDiscrete) {
    const Vec slack = FluidSubgradient(dist, d, lambda);
    for (int i = 0; i < m; ++i) {
      if ((lambda[i] <= kTol) != (slack[i] > kTol)) return false;
    }
    return true;
  }
  if (!ProbeFlatDirections(dist, d, lambda, cfg).empty()) return false;
  const Vec x = RecoverPrimal(WeightedAtoms(dist), d, lambda).x;
  const Vec used = Usage(dist, x);
  for (int i = 0; i < m; ++i) {
    if (lambda[i] <= kTol && d[i] - used[i] <= kTol) return false;
  }
  const std::vector<Atom>& atoms = dist.atoms();
  for (size_t j = 0; j < atoms.size(); ++j) {
    const double e = atoms[j].p * (atoms[j].r - Dot(atoms[j].a, lambda));
    const double eta = std::max(e, 0.0);
    const double reduced = std::max(-e, 0.0);
    if (eta <= kTol && x[j] >= 1.0 - kTol) return false;
    if (reduced <= kTol && x[j] <= kTol) return false;
  }
  return true;
}

bool DualUniquenessCheck(const RequestDistribution& dist, std::span<const double> d,
                         const SolverConfig& cfg) {
  SolverConfig local = cfg;
  local.probe_flat = true;
  return SolveFluidDual(dist, d, local).flat_directions.empty();
}

Vec MakeDegenerateInventory(const RequestDistribution& dist,
                            std::span<const double> lambda0) {
  if (lambda0.size() != static_cast<size_t>(dist.dim())) {
    Fail(ErrorCode::kDimensionMismatch, "lambda0 has wrong dimension");
  }
  const DualDomain dom = DualDomain::For(dist);
  if (!dom.Contains(lambda0, 1e-12)) {
    Fail(ErrorCode::kInvalidArgument, "lambda0 lies outside the dual box");
  }
  if (std::none_of(lambda0.begin(), lambda0.end(), [](double v) { return v == 0.0; })) {
    Fail(ErrorCode::kInvalidArgument, "lambda0 needs at least one zero entry");
  }
  return dist.ConsumptionExpectation(lambda0);
}

DegeneracyVerdict Diagnose(const RequestDistribution& dist, std::span<const double> d,
                           const SolverConfig& cfg) {
  SolverConfig local = cfg;
  local.probe_flat = true;
  const DualSolution sol = SolveFluidDual(dist, d, local);
  DegeneracyVerdict v;
  v.d.assign(d.begin(), d.end());
  v.lambda = sol.lambda;
  v.value = sol.value;
  v.flat_directions = sol.flat_directions;
  v.dual_unique = sol.flat_directions.empty();
  v.strict_cs = StrictCsCheck(dist, d, sol.lambda, cfg);
  std::ostringstream details;
  details << (v.dual_unique ? "no alternate dual optimum found"
                            : std::to_string(sol.flat_directions.size()) +
                                  " flat probe directions");
  if (dist.kind() == DistributionKind::kDiscrete) {
    const DlpSolution dlp = SolveDlp(dist, d, cfg);
    const NondegeneracyResult nd = DlpNondegeneracyCheck(dlp, dist, d);
    v.dlp_nondegenerate = nd.nondegenerate;
    v.nondeg_count = nd.count;
    details << "; nondegeneracy count " << nd.count << " of " << dlp.x.size();
  }
  v.details = details.str();
  return v;
}

nlohmann::json DegeneracyVerdict::ToJson() const {
  nlohmann::json j;
  j["d"] = d;
  j["lambda"] = lambda;
  j["value"] = value;
  j["dual_unique"] = dual_unique;
  j["strict_cs"] = strict_cs;
  j["dlp_nondegenerate"] =
      dlp_nondegenerate ? nlohmann::json(*dlp_nondegenerate) : nlohmann::json(nullptr);
  j["nondeg_count"] = nondeg_count ? nlohmann::json(*nondeg_count) : nlohmann::json(nullptr);
  j["flat_directions"] = flat_directions;
  j["details"] = details;
  return j;
}

}  // namespace olp
