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

#include "olp/knapsack_lp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "olp/errors.h"

namespace olp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Status { kBasic, kLower, kUpper };

class Simplex {
 public:
  Simplex(const KnapsackLp& lp, const KnapsackLpOptions& options)
      : lp_(lp), m_(lp.m), n_(lp.n), options_(options) {
    upper_.resize(n_ + m_);
    for (int j = 0; j < n_; ++j) upper_[j] = lp.upper.empty() ? 1.0 : lp.upper[j];
    for (int i = 0; i < m_; ++i) upper_[n_ + i] = kInf;
    double cmax = 0.0;
    for (double v : lp.c) cmax = std::max(cmax, std::abs(v));
    double scale = 0.0;
    for (double v : lp.a) scale = std::max(scale, std::abs(v));
    for (double v : lp.b) scale = std::max(scale, std::abs(v));
    opt_tol_ = 1e-11 * (1.0 + cmax) * (1.0 + scale);
    feas_tol_ = 1e-11 * (1.0 + scale);
  }

  KnapsackLpSolution Run() {
    Start();
    long degenerate_run = 0;
    long iter = 0;
    long since_refactor = 0;
    for (;; ++iter) {
      if (iter >= options_.max_iterations) {
        Fail(ErrorCode::kSolverBudgetExceeded,
             "knapsack simplex exceeded " + std::to_string(options_.max_iterations) +
                 " iterations");
      }
      if (since_refactor >= 64) {
        Refactor();
        since_refactor = 0;
      }
      ComputePrices();
      const bool bland = degenerate_run > 32;
      const int q = Price(bland);
      if (q < 0) break;
      const bool increase = status_[q] == Status::kLower;
      Column(q, alpha_);
      // x_B moves by -dir * t * alpha.
      const double dir = increase ? 1.0 : -1.0;
      double step = upper_[q];
      int leave = -1;
      bool leave_to_upper = false;
      for (int i = 0; i < m_; ++i) {
        const double rate = dir * alpha_[i];
        const int var = basis_[i];
        double limit = kInf;
        bool to_upper = false;
        if (rate > 1e-12) {
          limit = std::max(0.0, xb_[i]) / rate;
        } else if (rate < -1e-12 && std::isfinite(upper_[var])) {
          limit = std::max(0.0, upper_[var] - xb_[i]) / -rate;
          to_upper = true;
        }
        if (limit < step || (limit == step && leave >= 0 && bland && var < basis_[leave])) {
          step = limit;
          leave = i;
          leave_to_upper = to_upper;
        }
      }
      degenerate_run = step <= feas_tol_ ? degenerate_run + 1 : 0;
      for (int i = 0; i < m_; ++i) xb_[i] -= dir * step * alpha_[i];
      if (leave < 0) {
        status_[q] = increase ? Status::kUpper : Status::kLower;
        continue;
      }
      const int out = basis_[leave];
      status_[out] = leave_to_upper ? Status::kUpper : Status::kLower;
      status_[q] = Status::kBasic;
      basis_[leave] = q;
      xb_[leave] = increase ? step : upper_[q] - step;
      UpdateInverse(leave);
      ++since_refactor;
    }
    Refactor();
    ComputePrices();
    return Extract(iter);
  }

 private:
  double A(int row, int col) const {
    if (col < n_) return lp_.a[static_cast<size_t>(col) * m_ + row];
    return col - n_ == row ? 1.0 : 0.0;
  }
  double Cost(int col) const { return col < n_ ? lp_.c[col] : 0.0; }

  void Start() {
    status_.assign(n_ + m_, Status::kLower);
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      status_[n_ + i] = Status::kBasic;
    }
    if (options_.lambda_guess && static_cast<int>(options_.lambda_guess->size()) == m_) {
      Crash(*options_.lambda_guess);
    }
    Refactor();
  }

  // Put items with positive reduced cost under the guess at their upper bound,
  // then drop the least profitable ones until A x <= b.
  void Crash(const std::vector<double>& lambda) {
    std::vector<std::pair<double, int>> gains;
    for (int j = 0; j < n_; ++j) {
      double reduced = lp_.c[j];
      for (int i = 0; i < m_; ++i) reduced -= lambda[i] * A(i, j);
      if (reduced > 0.0) gains.push_back({reduced, j});
    }
    std::sort(gains.begin(), gains.end(), std::greater<>());
    std::vector<double> used(m_, 0.0);
    for (const auto& [gain, j] : gains) {
      bool fits = true;
      for (int i = 0; i < m_; ++i) {
        if (used[i] + A(i, j) * upper_[j] > lp_.b[i] + feas_tol_) fits = false;
      }
      if (!fits) continue;
      for (int i = 0; i < m_; ++i) used[i] += A(i, j) * upper_[j];
      status_[j] = Status::kUpper;
    }
  }

  // Recompute B^-1 and x_B from scratch.
  void Refactor() {
    const int m = m_;
    std::vector<double> mat(static_cast<size_t>(m) * m);
    binv_.assign(static_cast<size_t>(m) * m, 0.0);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) mat[r * m + c] = A(r, basis_[c]);
      binv_[r * m + r] = 1.0;
    }
    for (int col = 0; col < m; ++col) {
      int piv = col;
      for (int r = col + 1; r < m; ++r) {
        if (std::abs(mat[r * m + col]) > std::abs(mat[piv * m + col])) piv = r;
      }
      if (std::abs(mat[piv * m + col]) < 1e-14) {
        Fail(ErrorCode::kSolverBudgetExceeded, "knapsack simplex basis became singular");
      }
      if (piv != col) {
        for (int c = 0; c < m; ++c) {
          std::swap(mat[piv * m + c], mat[col * m + c]);
          std::swap(binv_[piv * m + c], binv_[col * m + c]);
        }
      }
      const double inv = 1.0 / mat[col * m + col];
      for (int c = 0; c < m; ++c) {
        mat[col * m + c] *= inv;
        binv_[col * m + c] *= inv;
      }
      for (int r = 0; r < m; ++r) {
        if (r == col) continue;
        const double f = mat[r * m + col];
        if (f == 0.0) continue;
        for (int c = 0; c < m; ++c) {
          mat[r * m + c] -= f * mat[col * m + c];
          binv_[r * m + c] -= f * binv_[col * m + c];
        }
      }
    }
    std::vector<double> rhs(lp_.b);
    for (int j = 0; j < n_; ++j) {
      if (status_[j] != Status::kUpper) continue;
      for (int i = 0; i < m; ++i) rhs[i] -= A(i, j) * upper_[j];
    }
    xb_.assign(m, 0.0);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) xb_[r] += binv_[r * m + c] * rhs[c];
    }
  }

  void UpdateInverse(int leave) {
    const int m = m_;
    const double piv = alpha_[leave];
    for (int c = 0; c < m; ++c) binv_[leave * m + c] /= piv;
    for (int r = 0; r < m; ++r) {
      if (r == leave || alpha_[r] == 0.0) continue;
      for (int c = 0; c < m; ++c) binv_[r * m + c] -= alpha_[r] * binv_[leave * m + c];
    }
  }

  void ComputePrices() {
    y_.assign(m_, 0.0);
    for (int c = 0; c < m_; ++c) {
      for (int r = 0; r < m_; ++r) y_[c] += Cost(basis_[r]) * binv_[r * m_ + c];
    }
  }

  double Reduced(int j) const {
    double d = Cost(j);
    if (j < n_) {
      const double* col = lp_.a.data() + static_cast<size_t>(j) * m_;
      for (int i = 0; i < m_; ++i) d -= y_[i] * col[i];
    } else {
      d -= y_[j - n_];
    }
    return d;
  }

  int Price(bool bland) const {
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == Status::kBasic) continue;
      const double d = Reduced(j);
      double score = 0.0;
      if (status_[j] == Status::kLower && d > opt_tol_) score = d;
      if (status_[j] == Status::kUpper && d < -opt_tol_) score = -d;
      if (score <= 0.0) continue;
      if (bland) return j;
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  void Column(int q, std::vector<double>& out) const {
    out.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      double s = 0.0;
      for (int c = 0; c < m_; ++c) s += binv_[r * m_ + c] * A(c, q);
      out[r] = s;
    }
  }

  KnapsackLpSolution Extract(long iterations) const {
    KnapsackLpSolution sol;
    sol.iterations = iterations;
    sol.x.assign(n_, 0.0);
    std::vector<double> full(n_ + m_, 0.0);
    for (int j = 0; j < n_; ++j) {
      if (status_[j] == Status::kUpper) full[j] = upper_[j];
    }
    for (int i = 0; i < m_; ++i) {
      const int var = basis_[i];
      full[var] = std::clamp(xb_[i], 0.0, upper_[var]);
      if (var < n_) sol.basic_columns.push_back(var);
    }
    std::sort(sol.basic_columns.begin(), sol.basic_columns.end());
    for (int j = 0; j < n_; ++j) sol.x[j] = full[j];
    sol.slack.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      double used = 0.0;
      for (int j = 0; j < n_; ++j) used += A(i, j) * sol.x[j];
      sol.slack[i] = std::max(0.0, lp_.b[i] - used);
    }
    sol.value = 0.0;
    for (int j = 0; j < n_; ++j) sol.value += lp_.c[j] * sol.x[j];
    sol.y.resize(m_);
    for (int i = 0; i < m_; ++i) sol.y[i] = std::max(0.0, y_[i]);
    return sol;
  }

  const KnapsackLp& lp_;
  int m_;
  int n_;
  KnapsackLpOptions options_;
  std::vector<double> upper_;
  std::vector<Status> status_;
  std::vector<int> basis_;
  std::vector<double> binv_;
  std::vector<double> xb_;
  std::vector<double> y_;
  std::vector<double> alpha_;
  double opt_tol_ = 1e-11;
  double feas_tol_ = 1e-11;
};

}  // namespace

KnapsackLpSolution SolveKnapsackLp(const KnapsackLp& lp,
                                   const KnapsackLpOptions& options) {
  if (lp.m < 1 || lp.n < 0 || static_cast<int>(lp.c.size()) != lp.n ||
      lp.a.size() != static_cast<size_t>(lp.m) * lp.n ||
      static_cast<int>(lp.b.size()) != lp.m ||
      (!lp.upper.empty() && static_cast<int>(lp.upper.size()) != lp.n)) {
    Fail(ErrorCode::kDimensionMismatch, "knapsack LP dimensions are inconsistent");
  }
  for (double bi : lp.b) {
    if (!(bi >= 0.0)) Fail(ErrorCode::kInvalidArgument, "knapsack capacity must be >= 0");
  }
  for (double v : lp.a) {
    if (!(v >= 0.0)) Fail(ErrorCode::kInvalidArgument, "knapsack consumption must be >= 0");
  }
  Simplex simplex(lp, options);
  return simplex.Run();
}

}  // namespace olp
