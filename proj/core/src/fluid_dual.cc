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

#include "olp/fluid_dual.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include "olp/errors.h"
#include "olp/format.h"
#include "olp/knapsack_lp.h"
#include "olp/linalg.h"

namespace olp {

DualDomain DualDomain::For(const RequestDistribution& dist) {
  DualDomain dom;
  dom.m = dist.dim();
  dom.upper = dist.DualUpper();
  return dom;
}

double DualDomain::Diameter() const {
  double s = 0.0;
  for (double u : upper) s += u * u;
  return std::sqrt(s);
}

bool DualDomain::Contains(std::span<const double> lambda, double slack) const {
  for (int i = 0; i < m; ++i) {
    if (lambda[i] < -slack || lambda[i] > upper[i] + slack) return false;
  }
  return true;
}

Vec DualDomain::Project(std::span<const double> lambda) const {
  Vec out(m);
  for (int i = 0; i < m; ++i) out[i] = std::clamp(lambda[i], 0.0, upper[i]);
  return out;
}

double DualDomain::MaxStep(std::span<const double> lambda,
                           std::span<const double> u) const {
  double t = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    if (u[i] > 0.0) t = std::min(t, (upper[i] - lambda[i]) / u[i]);
    if (u[i] < 0.0) t = std::min(t, -lambda[i] / u[i]);
  }
  return std::max(t, 0.0);
}

std::string StepRuleName(StepRule rule) {
  return rule == StepRule::kPolyakLike ? "polyak_like" : "diminishing";
}

std::string TieBreakName(TieBreak tie) {
  switch (tie) {
    case TieBreak::kSmallest: return "smallest";
    case TieBreak::kLargest: return "largest";
    case TieBreak::kMidpoint: return "midpoint";
  }
  return "smallest";
}

StepRule ParseStepRule(const std::string& name) {
  if (name == "polyak_like") return StepRule::kPolyakLike;
  if (name == "diminishing") return StepRule::kDiminishing;
  Fail(ErrorCode::kConfigError, "unknown step_rule '" + name + "'");
}

TieBreak ParseTieBreak(const std::string& name) {
  if (name == "smallest") return TieBreak::kSmallest;
  if (name == "largest") return TieBreak::kLargest;
  if (name == "midpoint") return TieBreak::kMidpoint;
  Fail(ErrorCode::kConfigError, "unknown tie_break '" + name + "'");
}

double ResolvedTol(const RequestDistribution& dist, const SolverConfig& cfg) {
  if (cfg.tol) return *cfg.tol;
  return dist.HasExactExpectations() ? 1e-8 : 1e-6;
}

void ValidateSolverConfig(const SolverConfig& cfg) {
  if (cfg.max_iters < 1) Fail(ErrorCode::kInvalidArgument, "max_iters must be >= 1");
  if (cfg.tol && !(*cfg.tol > 0.0)) Fail(ErrorCode::kInvalidArgument, "tol must be > 0");
  if (cfg.grid_resolution < 2) {
    Fail(ErrorCode::kInvalidArgument, "grid_resolution must be >= 2");
  }
}

void WriteSolverTraceCsv(std::ostream& out, const std::vector<SolverTraceRow>& rows) {
  out << "iter,value,subgrad_norm\n";
  out << std::setprecision(17);
  for (const SolverTraceRow& row : rows) {
    out << row.iter << ',' << row.value << ',' << row.subgrad_norm << '\n';
  }
}

namespace {

void CheckInputs(const RequestDistribution& dist, std::span<const double> d,
                 std::span<const double> lambda) {
  const size_t m = static_cast<size_t>(dist.dim());
  if (d.size() != m) Fail(ErrorCode::kDimensionMismatch, "d has wrong dimension");
  if (lambda.size() != m) {
    Fail(ErrorCode::kDimensionMismatch, "lambda has wrong dimension");
  }
}

void CheckInventory(const RequestDistribution& dist, std::span<const double> d) {
  if (d.size() != static_cast<size_t>(dist.dim())) {
    Fail(ErrorCode::kDimensionMismatch, "d has wrong dimension");
  }
  for (double v : d) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      Fail(ErrorCode::kInvalidArgument, "d must be finite and >= 0");
    }
  }
}

double Norm(std::span<const double> v) { return std::sqrt(Dot(v, v)); }

// ||lambda - P(lambda - g)||: zero exactly at box-constrained stationarity.
double ProjectedResidual(const DualDomain& dom, std::span<const double> lambda,
                         std::span<const double> g) {
  double s = 0.0;
  for (int i = 0; i < dom.m; ++i) {
    const double step = lambda[i] - std::clamp(lambda[i] - g[i], 0.0, dom.upper[i]);
    s += step * step;
  }
  return std::sqrt(s);
}

// Root of a continuous nondecreasing g on [0, upper] shifted by `shift`:
// smallest lambda with g(lambda) + shift >= 0 (Illinois false position).
template <typename G>
double MonotoneRoot(G&& g, double upper, double shift) {
  double lo = 0.0;
  double flo = g(lo) + shift;
  if (flo >= 0.0) return 0.0;
  double hi = upper;
  double fhi = g(hi) + shift;
  if (fhi < 0.0) return upper;
  int side = 0;
  const double xtol = 1e-14 * (1.0 + upper);
  for (int iter = 0; iter < 400 && hi - lo > xtol; ++iter) {
    double x = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    // Every third step bisects: false position barely moves on a flat
    // stretch of g, and the bracket must still close.
    if (iter % 3 == 2) x = 0.5 * (lo + hi);
    const double fx = g(x) + shift;
    if (fx >= 0.0) {
      hi = x;
      fhi = fx;
      if (side == 1) flo *= 0.5;
      side = 1;
    } else {
      lo = x;
      flo = fx;
      if (side == -1) fhi *= 0.5;
      side = -1;
    }
  }
  return hi;
}

// Exact one-sided directional derivative of the discrete fluid dual.
double DiscreteDirectional(const std::vector<Atom>& atoms, std::span<const double> d,
                           std::span<const double> lambda, std::span<const double> u,
                           double tie_tol) {
  double D = Dot(d, u);
  for (const Atom& at : atoms) {
    const double e = at.r - Dot(at.a, lambda);
    const double s = Dot(at.a, u);
    if (e > tie_tol) {
      D -= at.p * s;
    } else if (e >= -tie_tol) {
      D += at.p * std::max(-s, 0.0);
    }
  }
  return D;
}

// Distance along u until some non-tied atom changes sides.
double DiscreteFlatLength(const std::vector<Atom>& atoms, std::span<const double> lambda,
                          std::span<const double> u, double tie_tol, double tmax) {
  double t = tmax;
  for (const Atom& at : atoms) {
    const double e = at.r - Dot(at.a, lambda);
    if (std::abs(e) <= tie_tol) continue;
    const double s = Dot(at.a, u);
    if (s == 0.0) continue;
    const double cross = e / s;
    if (cross > 0.0) t = std::min(t, cross);
  }
  return t;
}

Vec Normalized(Vec v) {
  const double n = Norm(v);
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
  return v;
}

std::vector<Vec> RandomDirections(int m, int count, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vec> out;
  for (int k = 0; k < count; ++k) {
    Vec u(m);
    for (double& x : u) x = normal(gen);
    out.push_back(Normalized(std::move(u)));
  }
  return out;
}

std::vector<Vec> CoordinateDirections(int m) {
  std::vector<Vec> out;
  for (int i = 0; i < m; ++i) {
    Vec e(m, 0.0);
    e[i] = 1.0;
    out.push_back(e);
    e[i] = -1.0;
    out.push_back(e);
  }
  return out;
}

// Edge directions of the hyperplane arrangement through lambda: null vectors
// of every (m - 1)-subset of the active normals, plus random directions inside
// the common null space.
std::vector<Vec> ArrangementDirections(const RequestDistribution& dist,
                                       std::span<const double> lambda,
                                       const DualDomain& dom, double tie_tol) {
  const int m = dom.m;
  std::vector<Vec> normals;
  for (const Atom& at : dist.atoms()) {
    if (std::abs(at.r - Dot(at.a, lambda)) <= tie_tol) normals.push_back(at.a);
  }
  for (int i = 0; i < m; ++i) {
    if (lambda[i] <= tie_tol || lambda[i] >= dom.upper[i] - tie_tol) {
      Vec e(m, 0.0);
      e[i] = 1.0;
      normals.push_back(e);
    }
  }
  std::vector<Vec> out;
  auto push_pair = [&](const Vec& v) {
    out.push_back(Normalized(v));
    Vec neg = out.back();
    for (double& x : neg) x = -x;
    out.push_back(neg);
  };
  const size_t k = normals.size();
  const int need = m - 1;
  if (need >= 1 && k >= static_cast<size_t>(need)) {
    std::vector<int> idx(need);
    std::iota(idx.begin(), idx.end(), 0);
    int combos = 0;
    while (combos++ < 4096) {
      std::vector<Vec> rows;
      for (int j : idx) rows.push_back(normals[j]);
      const std::vector<Vec> null = NullSpace(rows, m);
      if (null.size() == 1) push_pair(null.front());
      int pos = need - 1;
      while (pos >= 0 && idx[pos] == static_cast<int>(k) - need + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int j = pos + 1; j < need; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  const std::vector<Vec> common = NullSpace(normals, m);
  if (!common.empty()) {
    for (const Vec& r : RandomDirections(m, 8, 0x6e756c6cULL)) {
      Vec p(m, 0.0);
      for (const Vec& b : common) {
        const double c = Dot(b, r);
        for (int i = 0; i < m; ++i) p[i] += c * b[i];
      }
      if (Norm(p) > 1e-12) push_pair(p);
    }
  }
  return out;
}

double TieTolerance(const RequestDistribution& dist) {
  return 1e-9 * (1.0 + std::abs(dist.bounds().r_upper));
}

DualSolution SolveScalar(const RequestDistribution& dist, std::span<const double> d,
                         const SolverConfig& cfg, const DualDomain& dom) {
  const double upper = dom.upper[0];
  const double d0 = d[0];
  double lambda = 0.0;
  if (dist.kind() == DistributionKind::kDiscrete) {
    std::vector<ScanItem> items;
    for (const Atom& at : dist.atoms()) {
      if (at.a[0] > 0.0) items.push_back({at.r / at.a[0], at.p * at.a[0]});
    }
    lambda = ScanPiecewiseLinear(std::move(items), d0, upper, cfg.tie_break);
  } else {
    auto g = [&](double x) { return d0 - dist.ConsumptionExpectation({&x, 1})[0]; };
    const double eps = 1e-13 * (1.0 + d0 + dist.bounds().a_upper);
    double lo;
    if (dist.IsMultisecretary()) {
      lo = d0 >= 1.0 ? 0.0
                     : std::clamp(dist.MultisecretaryRewardLaw().Quantile(1.0 - d0), 0.0,
                                  upper);
    } else {
      lo = MonotoneRoot(g, upper, eps);
    }
    lambda = lo;
    if (cfg.tie_break != TieBreak::kSmallest) {
      const double hi = MonotoneRoot(g, upper, -eps);
      lambda = cfg.tie_break == TieBreak::kLargest ? std::max(lo, hi) : 0.5 * (lo + std::max(lo, hi));
    }
  }
  DualSolution sol;
  sol.lambda = {lambda};
  sol.iterations = 1;
  return sol;
}

// Dual prices of the discrete fluid LP; `primal_value` receives its optimum.
DualSolution SolveDiscreteLp(const RequestDistribution& dist, std::span<const double> d,
                             const SolverConfig& cfg, const DualDomain& dom,
                             const Vec* warm, double& primal_value) {
  const std::vector<Atom>& atoms = dist.atoms();
  KnapsackLp lp;
  lp.m = dom.m;
  lp.n = static_cast<int>(atoms.size());
  lp.b.assign(d.begin(), d.end());
  for (const Atom& at : atoms) {
    lp.c.push_back(at.p * at.r);
    for (double ai : at.a) lp.a.push_back(at.p * ai);
  }
  KnapsackLpOptions opts;
  opts.max_iterations = std::max<long>(cfg.max_iters, 10L * (lp.n + lp.m) + 100);
  if (warm) opts.lambda_guess = *warm;
  const KnapsackLpSolution lps = SolveKnapsackLp(lp, opts);
  DualSolution sol;
  sol.lambda = dom.Project(lps.y);
  sol.iterations = lps.iterations;
  primal_value = lps.value;
  return sol;
}

DualSolution SolveSmooth(const RequestDistribution& dist, std::span<const double> d,
                         const SolverConfig& cfg, const DualDomain& dom, double tol,
                         const Vec* warm, std::vector<SolverTraceRow>* trace) {
  const int m = dom.m;
  auto value = [&](const Vec& l) { return FluidObjective(dist, d, l); };
  auto grad = [&](const Vec& l) { return FluidSubgradient(dist, d, l); };

  Vec lambda = warm ? dom.Project(*warm) : Vec(m, 0.0);
  double f = value(lambda);
  Vec g = grad(lambda);
  double lower = f - BoxGapBound(dom, lambda, g);
  Vec best = lambda;
  double best_f = f;
  Vec avg = lambda;
  const double radius = dom.Diameter();
  const double G = Norm(d) + std::sqrt(static_cast<double>(m)) * dist.bounds().a_upper;
  long iter = 0;
  auto record = [&](long k, double v, const Vec& at, const Vec& gr) {
    if (trace) trace->push_back({k, v, ProjectedResidual(dom, at, gr)});
  };
  record(0, f, lambda, g);
  for (iter = 1; iter <= cfg.max_iters; ++iter) {
    if (best_f - lower <= tol) break;
    const double gnorm2 = Dot(g, g);
    if (gnorm2 == 0.0) {
      lower = f;
      break;
    }
    Vec next(m);
    if (cfg.step_rule == StepRule::kDiminishing) {
      const double step = (radius / G) / std::sqrt(static_cast<double>(iter));
      for (int i = 0; i < m; ++i) next[i] = lambda[i] - step * g[i];
      lambda = dom.Project(next);
      for (int i = 0; i < m; ++i) avg[i] += (lambda[i] - avg[i]) / (iter + 1.0);
      f = value(lambda);
      g = grad(lambda);
      lower = std::max(lower, f - BoxGapBound(dom, lambda, g));
      if (f < best_f) {
        best_f = f;
        best = lambda;
      }
      const double fa = value(avg);
      const Vec ga = grad(avg);
      lower = std::max(lower, fa - BoxGapBound(dom, avg, ga));
      if (fa < best_f) {
        best_f = fa;
        best = avg;
      }
    } else {
      // Polyak step toward the certified lower bound, then backtrack until the
      // quadratic upper model holds.
      // Components pushing against an active bound are discarded by the
      // projection, so they must not shrink the step.
      double free2 = 0.0;
      for (int i = 0; i < m; ++i) {
        const bool pinned = (lambda[i] <= 0.0 && g[i] > 0.0) ||
                            (lambda[i] >= dom.upper[i] && g[i] < 0.0);
        if (!pinned) free2 += g[i] * g[i];
      }
      if (free2 == 0.0) {
        lower = std::max(lower, f - BoxGapBound(dom, lambda, g));
        break;
      }
      double step = std::max((f - lower) / free2, 1e-300);
      double fn = 0.0;
      for (int bt = 0; bt < 80; ++bt) {
        for (int i = 0; i < m; ++i) next[i] = lambda[i] - step * g[i];
        next = dom.Project(next);
        fn = value(next);
        double lin = 0.0;
        double sq = 0.0;
        for (int i = 0; i < m; ++i) {
          const double diff = next[i] - lambda[i];
          lin += g[i] * diff;
          sq += diff * diff;
        }
        if (fn <= f + lin + sq / (2.0 * step) + 1e-15 * (1.0 + std::abs(f))) break;
        step *= 0.5;
      }
      lambda = next;
      f = fn;
      g = grad(lambda);
      lower = std::max(lower, f - BoxGapBound(dom, lambda, g));
      if (f < best_f) {
        best_f = f;
        best = lambda;
      }
    }
    record(iter, f, lambda, g);
  }
  if (best_f - lower > tol) {
    Fail(ErrorCode::kSolverBudgetExceeded,
         "fluid dual certificate " + FormatDouble(best_f - lower) + " above tol " +
             FormatDouble(tol) + " after " + std::to_string(cfg.max_iters) +
             " iterations");
  }
  DualSolution sol;
  sol.lambda = best;
  sol.iterations = std::min(iter, cfg.max_iters);
  sol.certified_gap = std::max(0.0, best_f - lower);
  return sol;
}

}  // namespace

double FluidObjective(const RequestDistribution& dist, std::span<const double> d,
                      std::span<const double> lambda) {
  CheckInputs(dist, d, lambda);
  return Dot(d, lambda) + dist.HingeExpectation(lambda);
}

double FluidObjectiveIntegralForm(const RequestDistribution& dist,
                                  std::span<const double> d,
                                  std::span<const double> lambda) {
  CheckInputs(dist, d, lambda);
  return Dot(d, lambda) + dist.HingeByCdfIntegral(lambda);
}

Vec FluidSubgradient(const RequestDistribution& dist, std::span<const double> d,
                     std::span<const double> lambda) {
  CheckInputs(dist, d, lambda);
  Vec g = dist.ConsumptionExpectation(lambda);
  for (size_t i = 0; i < g.size(); ++i) g[i] = d[i] - g[i];
  return g;
}

double BoxGapBound(const DualDomain& domain, std::span<const double> lambda,
                   std::span<const double> g) {
  double gap = 0.0;
  for (int i = 0; i < domain.m; ++i) {
    gap += g[i] > 0.0 ? g[i] * lambda[i] : g[i] * (lambda[i] - domain.upper[i]);
  }
  return std::max(gap, 0.0);
}

DualSolution SolveFluidDual(const RequestDistribution& dist, std::span<const double> d,
                            const SolverConfig& cfg, SolveHints hints) {
  ValidateSolverConfig(cfg);
  CheckInventory(dist, d);
  const DualDomain dom = DualDomain::For(dist);
  const double tol = ResolvedTol(dist, cfg);
  DualSolution sol;
  double primal_value = 0.0;
  if (dom.m == 1) {
    sol = SolveScalar(dist, d, cfg, dom);
  } else if (dist.IsPiecewiseLinear()) {
    sol = SolveDiscreteLp(dist, d, cfg, dom, hints.warm_start, primal_value);
  } else {
    sol = SolveSmooth(dist, d, cfg, dom, tol, hints.warm_start, hints.trace);
  }
  sol.value = FluidObjective(dist, d, sol.lambda);
  const Vec g = FluidSubgradient(dist, d, sol.lambda);
  sol.subgrad_norm = ProjectedResidual(dom, sol.lambda, g);
  if (dom.m == 1) {
    // The subdifferential at a kink is [g_-, g_+]; the certificate uses the
    // best element, which is zero at an exact optimum.
    double gap = BoxGapBound(dom, sol.lambda, g);
    if (dist.IsPiecewiseLinear()) {
      const double tie_tol = TieTolerance(dist);
      // One-sided slopes with atoms within tie_tol of the kink counted as
      // tied, so a one-ulp miss of a'lambda = r does not break the proof.
      const double left = -DiscreteDirectional(dist.atoms(), d, sol.lambda,
                                               Vec{-1.0}, tie_tol);
      const double right = DiscreteDirectional(dist.atoms(), d, sol.lambda,
                                               Vec{1.0}, tie_tol);
      if (left <= 0.0 && right >= 0.0) gap = 0.0;
      gap = std::min({gap, BoxGapBound(dom, sol.lambda, Vec{left}),
                      BoxGapBound(dom, sol.lambda, Vec{right})});
    }
    sol.certified_gap = gap;
    if (hints.trace) hints.trace->push_back({0, sol.value, sol.subgrad_norm});
  } else if (dist.IsPiecewiseLinear()) {
    sol.certified_gap = std::max(0.0, sol.value - primal_value);
    if (hints.trace) hints.trace->push_back({sol.iterations, sol.value, sol.subgrad_norm});
  }
  if (sol.certified_gap > tol) {
    Fail(ErrorCode::kSolverBudgetExceeded,
         "fluid dual certificate " + FormatDouble(sol.certified_gap) +
             " exceeds tol " + FormatDouble(tol));
  }
  if (cfg.probe_flat) sol.flat_directions = ProbeFlatDirections(dist, d, sol.lambda, cfg);
  return sol;
}

double FluidValue(const RequestDistribution& dist, std::span<const double> d,
                  const SolverConfig& cfg) {
  return SolveFluidDual(dist, d, cfg).value;
}

std::vector<Vec> ProbeFlatDirections(const RequestDistribution& dist,
                                     std::span<const double> d,
                                     std::span<const double> lambda,
                                     const SolverConfig& cfg) {
  CheckInputs(dist, d, lambda);
  const DualDomain dom = DualDomain::For(dist);
  const int m = dom.m;
  const double tol = ResolvedTol(dist, cfg);
  const double min_len = 10.0 * tol;
  std::vector<Vec> dirs = CoordinateDirections(m);
  if (m > 1) {
    for (Vec& u : RandomDirections(m, 32, 0x666c6174ULL)) dirs.push_back(std::move(u));
  }
  std::vector<Vec> flat;
  if (dist.IsPiecewiseLinear()) {
    const double tie_tol = TieTolerance(dist);
    for (Vec& u : ArrangementDirections(dist, lambda, dom, tie_tol)) dirs.push_back(std::move(u));
    double scale = 1.0 + Norm(d);
    for (const Atom& at : dist.atoms()) scale += at.p * Norm(at.a);
    for (const Vec& u : dirs) {
      const double tmax = dom.MaxStep(lambda, u);
      if (tmax < min_len) continue;
      const double D = DiscreteDirectional(dist.atoms(), d, lambda, u, tie_tol);
      if (D > 1e-9 * scale) continue;
      if (DiscreteFlatLength(dist.atoms(), lambda, u, tie_tol, tmax) >= min_len) {
        flat.push_back(u);
      }
    }
    return flat;
  }
  const double f0 = FluidObjective(dist, d, lambda);
  const double radius = std::max(min_len, 0.05 * dom.Diameter());
  for (const Vec& u : dirs) {
    const double tmax = dom.MaxStep(lambda, u);
    if (tmax < radius) continue;
    Vec p(m);
    for (int i = 0; i < m; ++i) p[i] = lambda[i] + radius * u[i];
    if (FluidObjective(dist, d, p) - f0 < 10.0 * tol) flat.push_back(u);
  }
  return flat;
}

double EstimateGrowthExponent(const RequestDistribution& dist, std::span<const double> d,
                              std::span<const double> lambda, const SolverConfig& cfg) {
  CheckInputs(dist, d, lambda);
  (void)cfg;
  const DualDomain dom = DualDomain::For(dist);
  const int m = dom.m;
  const double flat_radius = 0.05 * dom.Diameter();
  const double slope_tol =
      1e-13 * (1.0 + Norm(d) + std::sqrt(static_cast<double>(m)) * dist.bounds().a_upper);
  std::vector<Vec> dirs = CoordinateDirections(m);
  if (m > 1) {
    for (const Vec& u : RandomDirections(m, 8, 0x67726f77ULL)) {
      dirs.push_back(u);
      Vec neg = u;
      for (double& x : neg) x = -x;
      dirs.push_back(neg);
    }
  }
  auto at = [&](const Vec& base, const Vec& u, double t) {
    Vec p(m);
    for (int i = 0; i < m; ++i) p[i] = base[i] + t * u[i];
    return p;
  };
  const Vec origin(lambda.begin(), lambda.end());
  auto slope_along = [&](const Vec& u, double t) {
    return Dot(FluidSubgradient(dist, d, at(origin, u, t)), u);
  };
  // Extent of the flat piece along each direction.
  std::vector<double> extent(dirs.size(), 0.0);
  std::vector<double> tmax(dirs.size(), 0.0);
  for (size_t k = 0; k < dirs.size(); ++k) {
    tmax[k] = dom.MaxStep(lambda, dirs[k]);
    if (tmax[k] <= 0.0 || slope_along(dirs[k], 0.0) > slope_tol) continue;
    double lo = 0.0;
    double hi = tmax[k];
    if (slope_along(dirs[k], hi) <= slope_tol) {
      lo = hi;
    } else {
      for (int it = 0; it < 80 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (slope_along(dirs[k], mid) <= slope_tol ? lo : hi) = mid;
      }
    }
    extent[k] = lo;
  }
  for (size_t k = 0; k + 1 < dirs.size(); k += 2) {
    if (extent[k] >= flat_radius && extent[k + 1] >= flat_radius) {
      Fail(ErrorCode::kDegenerateFit,
           "lambda lies inside a flat segment of the dual objective");
    }
  }
  // Pooled slope with one intercept per direction.
  std::vector<std::vector<std::pair<double, double>>> groups;
  for (size_t k = 0; k < dirs.size(); ++k) {
    const Vec& u = dirs[k];
    const double shift = extent[k] >= flat_radius ? extent[k] : 0.0;
    const Vec anchor = at(origin, u, shift);
    const double f0 = FluidObjective(dist, d, anchor);
    const double g0 = Dot(FluidSubgradient(dist, d, anchor), u);
    std::vector<std::pair<double, double>> pts;
    for (int e = 3; e <= 12; ++e) {
      const double eps = std::ldexp(1.0, -e);
      if (shift + eps > tmax[k]) continue;
      const double gap = FluidObjective(dist, d, at(anchor, u, eps)) - f0 - g0 * eps;
      if (gap > 1e-13) pts.push_back({std::log(eps), std::log(gap)});
    }
    if (pts.size() >= 2) groups.push_back(std::move(pts));
  }
  double sxy = 0.0;
  double sxx = 0.0;
  size_t count = 0;
  for (const auto& pts : groups) {
    double mx = 0.0;
    double my = 0.0;
    for (const auto& [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= pts.size();
    my /= pts.size();
    for (const auto& [x, y] : pts) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    count += pts.size();
  }
  if (count < 3 || sxx <= 0.0) {
    Fail(ErrorCode::kDegenerateFit, "all probed growth gaps are below 1e-13");
  }
  return sxy / sxx - 2.0;
}

double ScanPiecewiseLinear(std::vector<ScanItem> items, double d, double upper,
                           TieBreak tie) {
  std::sort(items.begin(), items.end(),
            [](const ScanItem& x, const ScanItem& y) { return x.rho > y.rho; });
  double total = 0.0;
  for (const ScanItem& it : items) total += it.weight;
  const double eps = 1e-12 * (1.0 + std::abs(d) + total);
  // Candidates in ascending order: 0 and the positive breakpoints.
  std::vector<double> cands{0.0};
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    if (it->rho > 0.0 && it->rho <= upper) cands.push_back(it->rho);
  }
  // Ascending sweep with a running pointer keeps this O(n log n).
  std::vector<double> suffix(items.size() + 1, 0.0);
  for (size_t k = 0; k < items.size(); ++k) suffix[k + 1] = suffix[k] + items[k].weight;
  auto slope_at = [&](double lambda) {
    // Number of items with rho > lambda in the descending order.
    const auto pos = std::partition_point(
        items.begin(), items.end(), [&](const ScanItem& it) { return it.rho > lambda; });
    return d - suffix[static_cast<size_t>(pos - items.begin())];
  };
  double lo = upper;
  for (double c : cands) {
    if (slope_at(c) >= -eps) {
      lo = c;
      break;
    }
  }
  if (tie == TieBreak::kSmallest) return lo;
  double hi = upper;
  for (double c : cands) {
    if (c >= lo && slope_at(c) > eps) {
      hi = c;
      break;
    }
  }
  return tie == TieBreak::kLargest ? hi : 0.5 * (lo + hi);
}

}  // namespace olp
