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

#include "olp/hindsight.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "olp/errors.h"
#include "olp/format.h"
#include "olp/knapsack_lp.h"

namespace olp {

RequestSample RequestSample::Tail(size_t first) const {
  RequestSample out;
  out.m = m;
  if (first < items.size()) out.items.assign(items.begin() + first, items.end());
  return out;
}

void RequestSample::WriteCsv(std::ostream& out) const {
  for (int i = 0; i < m; ++i) out << "a_" << (i + 1) << ',';
  out << "r\n";
  out.precision(17);
  for (const Request& req : items) {
    for (double ai : req.a) out << ai << ',';
    out << req.r << '\n';
  }
}

RequestSample RequestSample::ReadCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) Fail(ErrorCode::kConfigError, "empty request sample CSV");
  RequestSample sample;
  const long columns = std::count(line.begin(), line.end(), ',') + 1;
  if (columns < 2) Fail(ErrorCode::kConfigError, "request sample CSV needs a_1..a_m,r");
  sample.m = static_cast<int>(columns - 1);
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Vec values;
    while (std::getline(ss, cell, ',')) {
      size_t used = 0;
      try {
        values.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cell.size()) {
        Fail(ErrorCode::kConfigError, "bad number '" + cell + "' on CSV row " +
                                          std::to_string(row));
      }
    }
    if (static_cast<long>(values.size()) != columns) {
      Fail(ErrorCode::kConfigError, "CSV row " + std::to_string(row) + " has " +
                                        std::to_string(values.size()) + " fields");
    }
    Request req;
    req.a.assign(values.begin(), values.end() - 1);
    req.r = values.back();
    sample.items.push_back(std::move(req));
  }
  return sample;
}

namespace {

void CheckDims(const RequestSample& sample, std::span<const double> b) {
  if (b.size() != static_cast<size_t>(sample.m)) {
    Fail(ErrorCode::kDimensionMismatch, "inventory has wrong dimension");
  }
  for (const Request& req : sample.items) {
    if (req.a.size() != static_cast<size_t>(sample.m)) {
      Fail(ErrorCode::kDimensionMismatch, "request consumption has wrong dimension");
    }
  }
}

void CheckInventory(std::span<const double> b) {
  for (double v : b) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      Fail(ErrorCode::kInvalidArgument, "inventory must be finite and >= 0");
    }
  }
}

double MaxPositiveReward(const RequestSample& sample) {
  double r = 0.0;
  for (const Request& req : sample.items) r = std::max(r, req.r);
  return r;
}

}  // namespace

DualDomain SampleDomain(const RequestSample& sample) {
  DualDomain dom;
  dom.m = sample.m;
  dom.upper.assign(sample.m, 0.0);
  const double r = MaxPositiveReward(sample);
  for (int i = 0; i < sample.m; ++i) {
    double lo = std::numeric_limits<double>::infinity();
    for (const Request& req : sample.items) {
      if (req.a[i] > 0.0) lo = std::min(lo, req.a[i]);
    }
    if (std::isfinite(lo)) dom.upper[i] = r / lo;
  }
  return dom;
}

double EmpiricalDualObjective(const RequestSample& sample, std::span<const double> b,
                              std::span<const double> lambda) {
  CheckDims(sample, b);
  if (lambda.size() != b.size()) Fail(ErrorCode::kDimensionMismatch, "lambda has wrong dimension");
  double v = Dot(b, lambda);
  for (const Request& req : sample.items) v += std::max(req.r - Dot(req.a, lambda), 0.0);
  return v;
}

Vec EmpiricalDualSubgradient(const RequestSample& sample, std::span<const double> b,
                             std::span<const double> lambda) {
  CheckDims(sample, b);
  if (lambda.size() != b.size()) Fail(ErrorCode::kDimensionMismatch, "lambda has wrong dimension");
  Vec g(b.begin(), b.end());
  for (const Request& req : sample.items) {
    if (req.r > Dot(req.a, lambda)) {
      for (int i = 0; i < sample.m; ++i) g[i] -= req.a[i];
    }
  }
  return g;
}

DualSolution SolveEmpiricalDual(const RequestSample& sample, std::span<const double> b,
                                const SolverConfig& cfg, const Vec* warm_start) {
  ValidateSolverConfig(cfg);
  CheckDims(sample, b);
  CheckInventory(b);
  const DualDomain dom = SampleDomain(sample);
  DualSolution sol;
  double primal_value = std::numeric_limits<double>::quiet_NaN();
  if (sample.m == 1) {
    std::vector<ScanItem> items;
    items.reserve(sample.size());
    for (const Request& req : sample.items) {
      if (req.a[0] > 0.0) items.push_back({req.r / req.a[0], req.a[0]});
    }
    sol.lambda = {ScanPiecewiseLinear(std::move(items), b[0], dom.upper[0], cfg.tie_break)};
    sol.iterations = 1;
  } else {
    KnapsackLp lp;
    lp.m = sample.m;
    lp.n = static_cast<int>(sample.size());
    lp.b.assign(b.begin(), b.end());
    for (const Request& req : sample.items) {
      lp.c.push_back(req.r);
      lp.a.insert(lp.a.end(), req.a.begin(), req.a.end());
    }
    KnapsackLpOptions opts;
    opts.max_iterations = std::max<long>(cfg.max_iters, 20L * (lp.n + lp.m) + 100);
    if (warm_start) opts.lambda_guess = *warm_start;
    const KnapsackLpSolution lps = SolveKnapsackLp(lp, opts);
    sol.lambda = dom.Project(lps.y);
    sol.iterations = lps.iterations;
    primal_value = lps.value;
  }
  sol.value = EmpiricalDualObjective(sample, b, sol.lambda);
  const Vec g = EmpiricalDualSubgradient(sample, b, sol.lambda);
  double s = 0.0;
  for (int i = 0; i < sample.m; ++i) {
    const double step = sol.lambda[i] - std::clamp(sol.lambda[i] - g[i], 0.0, dom.upper[i]);
    s += step * step;
  }
  sol.subgrad_norm = std::sqrt(s);
  sol.certified_gap = std::isnan(primal_value) ? 0.0 : std::max(0.0, sol.value - primal_value);
  const double tol = cfg.tol.value_or(1e-8) * (1.0 + std::abs(sol.value));
  if (sol.certified_gap > tol) {
    Fail(ErrorCode::kSolverBudgetExceeded,
         "empirical dual certificate " + FormatDouble(sol.certified_gap) +
             " exceeds tolerance");
  }
  return sol;
}

double HindsightValue(const RequestSample& sample, std::span<const double> b,
                      const SolverConfig& cfg) {
  return SolveEmpiricalDual(sample, b, cfg).value;
}

Allocation GreedyM1(const RequestSample& sample, double b) {
  if (sample.m != 1) Fail(ErrorCode::kWrongDimension, "greedy oracle needs m = 1");
  if (!(b >= 0.0)) Fail(ErrorCode::kInvalidArgument, "inventory must be >= 0");
  const size_t n = sample.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto ratio = [&](size_t j) {
    const Request& q = sample.items[j];
    return q.a[0] > 0.0 ? q.r / q.a[0] : std::numeric_limits<double>::infinity();
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t x, size_t y) { return ratio(x) > ratio(y); });
  Allocation alloc;
  alloc.x.assign(n, 0.0);
  double left = b;
  for (size_t j : order) {
    const Request& q = sample.items[j];
    if (!(q.r > 0.0)) break;
    double take = 1.0;
    if (q.a[0] > 0.0) take = std::min(1.0, left / q.a[0]);
    if (take <= 0.0) break;
    alloc.x[j] = take;
    left = std::max(0.0, left - take * q.a[0]);
    alloc.value += take * q.r;
    if (take < 1.0) ++alloc.fractional_count;
  }
  return alloc;
}

Allocation RecoverPrimal(const RequestSample& sample, std::span<const double> b,
                         std::span<const double> lambda) {
  CheckDims(sample, b);
  CheckInventory(b);
  if (lambda.size() != b.size()) Fail(ErrorCode::kDimensionMismatch, "lambda has wrong dimension");
  const int m = sample.m;
  const size_t n = sample.size();
  const double boundary_tol = 1e-7 * (1.0 + MaxPositiveReward(sample));
  Allocation alloc;
  alloc.x.assign(n, 0.0);
  Vec left(b.begin(), b.end());
  std::vector<size_t> boundary;
  for (size_t j = 0; j < n; ++j) {
    const Request& q = sample.items[j];
    bool blocked = false;
    for (int i = 0; i < m; ++i) blocked = blocked || (q.a[i] > 0.0 && b[i] <= 0.0);
    if (blocked) continue;
    const double e = q.r - Dot(q.a, lambda);
    if (e > boundary_tol) {
      alloc.x[j] = 1.0;
      for (int i = 0; i < m; ++i) left[i] -= q.a[i];
    } else if (e >= -boundary_tol && q.r > 0.0) {
      boundary.push_back(j);
    }
  }
  const double scale = 1.0 + std::accumulate(b.begin(), b.end(), 0.0);
  for (int i = 0; i < m; ++i) {
    if (left[i] < -1e-9 * scale) {
      Fail(ErrorCode::kRecoveryFailed,
           "items priced strictly above lambda overflow resource " + std::to_string(i + 1));
    }
    left[i] = std::max(left[i], 0.0);
  }
  if (!boundary.empty()) {
    if (m == 1) {
      for (size_t j : boundary) {
        const double a = sample.items[j].a[0];
        const double take = a > 0.0 ? std::min(1.0, left[0] / a) : 1.0;
        if (take <= 0.0) break;
        alloc.x[j] = take;
        left[0] = std::max(0.0, left[0] - take * a);
      }
    } else {
      // Residual multi-knapsack over the boundary items; a basic optimum has
      // at most m fractional entries.
      KnapsackLp lp;
      lp.m = m;
      lp.n = static_cast<int>(boundary.size());
      lp.b = left;
      for (size_t j : boundary) {
        lp.c.push_back(sample.items[j].r);
        lp.a.insert(lp.a.end(), sample.items[j].a.begin(), sample.items[j].a.end());
      }
      const KnapsackLpSolution lps = SolveKnapsackLp(lp);
      for (size_t k = 0; k < boundary.size(); ++k) alloc.x[boundary[k]] = lps.x[k];
    }
  }
  for (size_t j = 0; j < n; ++j) {
    const double x = alloc.x[j];
    alloc.value += x * sample.items[j].r;
    if (x > 1e-12 && x < 1.0 - 1e-12) ++alloc.fractional_count;
  }
  const double dual = EmpiricalDualObjective(sample, b, lambda);
  if (dual - alloc.value > 1e-6 * (1.0 + std::abs(alloc.value))) {
    Fail(ErrorCode::kRecoveryFailed,
         "recovered value " + FormatDouble(alloc.value) + " misses dual value " +
             FormatDouble(dual));
  }
  return alloc;
}

bool ValueInductionCheck(const RequestSample& sample, std::span<const double> b,
                         size_t t_index) {
  CheckDims(sample, b);
  CheckInventory(b);
  if (t_index >= sample.size()) {
    Fail(ErrorCode::kInvalidArgument, "t_index is past the last item");
  }
  const int m = sample.m;
  const RequestSample rest = sample.Tail(t_index + 1);
  const double lhs = HindsightValue(sample.Tail(t_index), b);
  const Request& q = sample.items[t_index];
  double x_max = 1.0;
  for (int i = 0; i < m; ++i) {
    if (q.a[i] > 0.0) x_max = std::min(x_max, b[i] / q.a[i]);
  }
  auto rhs = [&](double x) {
    Vec left(m);
    for (int i = 0; i < m; ++i) left[i] = std::max(0.0, b[i] - q.a[i] * x);
    const double tail = rest.items.empty() ? 0.0 : HindsightValue(rest, left);
    return q.r * x + tail;
  };
  double best_x = 0.0;
  double best = rhs(0.0);
  constexpr int kGrid = 100;
  for (int k = 1; k <= kGrid; ++k) {
    const double x = x_max * k / kGrid;
    const double v = rhs(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  const double v1 = rhs(std::min(1.0, x_max));
  if (v1 > best) {
    best = v1;
    best_x = std::min(1.0, x_max);
  }
  // The right-hand side is concave in x; refine around the grid maximizer.
  double lo = std::max(0.0, best_x - x_max / kGrid);
  double hi = std::min(x_max, best_x + x_max / kGrid);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = rhs(x1);
  double f2 = rhs(x2);
  for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = rhs(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = rhs(x1);
    }
  }
  best = std::max({best, f1, f2});
  return std::abs(lhs - best) <= 1e-6;
}

}  // namespace olp
