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

#include "olp/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "olp/degeneracy.h"
#include "olp/errors.h"
#include "olp/format.h"
#include "olp/hindsight.h"

namespace olp {
namespace {

[[noreturn]] void ConfigFail(const std::string& message) {
  Fail(ErrorCode::kConfigError, message);
}

const nlohmann::json& Field(const nlohmann::json& j, const std::string& name,
                            const std::string& path = "") {
  if (!j.is_object() || !j.contains(name)) ConfigFail("missing field '" + path + name + "'");
  return j.at(name);
}

// Runs fn(item) for item in [0, n) on WorkerCount() threads. The first
// failure stops the pool and is rethrown with context(item) prepended.
template <typename Fn, typename Context>
void ParallelFor(size_t n, Fn&& fn, Context&& context) {
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mu;
  auto worker = [&]() {
    for (;;) {
      const size_t item = next.fetch_add(1);
      if (item >= n || failed.load()) return;
      try {
        fn(item);
      } catch (const OlpError& e) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failed.exchange(true)) {
          error = std::make_exception_ptr(OlpError(e.code(), context(item) + ": " + e.detail()));
        }
        return;
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  const int workers = static_cast<int>(std::min<size_t>(static_cast<size_t>(WorkerCount()), n));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::string OptionalString(const nlohmann::json& j, const std::string& name,
                           const std::string& path) {
  if (!j.contains(name)) return "";
  if (!j.at(name).is_string()) ConfigFail("field '" + path + name + "' must be a string");
  return j.at(name).get<std::string>();
}

long PositiveInteger(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long>() < 1) {
    ConfigFail("field '" + path + "' must be a positive integer");
  }
  return v.get<long>();
}

uint64_t Seed(const nlohmann::json& v) {
  // Values built in code arrive as signed integers; parsed text as unsigned.
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  if (v.is_number_integer() && v.get<int64_t>() >= 0) return static_cast<uint64_t>(v.get<int64_t>());
  ConfigFail("field 'base_seed' must be a nonnegative integer");
}

}  // namespace

RequestDistribution DistributionFromConfig(const nlohmann::json& j) {
  try {
    return RequestDistribution::FromJson(j);
  } catch (const OlpError& e) {
    std::string msg = e.detail();
    const std::string key = "field '";
    const size_t at = msg.find(key);
    if (at != std::string::npos) msg.insert(at + key.size(), "distribution.");
    Fail(e.code(), msg);
  }
}

Vec VectorFromConfig(const nlohmann::json& v, int m, const std::string& path) {
  Vec out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number()) ConfigFail("field '" + path + "' must hold numbers");
      out.push_back(e.get<double>());
    }
  } else {
    ConfigFail("field '" + path + "' must be a number or an array of numbers");
  }
  if (out.size() == 1 && m > 1) out.assign(m, out[0]);
  if (out.size() != static_cast<size_t>(m)) {
    ConfigFail("field '" + path + "' has " + std::to_string(out.size()) +
               " entries for m = " + std::to_string(m));
  }
  return out;
}

InventoryRule InventoryRuleFromConfig(const nlohmann::json& inv,
                                      const RequestDistribution& dist) {
  const int m = dist.dim();
  InventoryRule rule;
  if (!inv.is_object()) ConfigFail("field 'inventory' must be an object");
  if (inv.contains("d")) {
    rule.d = VectorFromConfig(inv.at("d"), m, "inventory.d");
    for (double v : *rule.d) {
      if (!(v >= 0.0)) ConfigFail("field 'inventory.d' must be >= 0");
    }
  } else if (inv.contains("degenerate_at")) {
    rule.degenerate_at =
        VectorFromConfig(inv.at("degenerate_at"), m, "inventory.degenerate_at");
  } else if (inv.contains("explicit")) {
    const nlohmann::json& e = inv.at("explicit");
    if (!e.is_object()) ConfigFail("field 'inventory.explicit' must map T to b");
    for (const auto& [key, value] : e.items()) {
      const std::string path = "inventory.explicit." + key;
      long T = 0;
      try {
        T = std::stol(key);
      } catch (const std::exception&) {
        ConfigFail("field '" + path + "' needs an integer key");
      }
      rule.explicit_b[T] = VectorFromConfig(value, m, path);
    }
  } else {
    ConfigFail("missing field 'inventory.d'");
  }
  // Resolve now so a bad degenerate point fails as a config error.
  if (rule.explicit_b.empty()) {
    try {
      (void)rule.NormalizedInventory(dist);
    } catch (const OlpError& e) {
      ConfigFail("inventory: " + e.detail());
    }
  }
  return rule;
}

Vec InventoryRule::NormalizedInventory(const RequestDistribution& dist) const {
  if (degenerate_at) return MakeDegenerateInventory(dist, *degenerate_at);
  if (d) return *d;
  Fail(ErrorCode::kConfigError, "inventory rule has no normalized inventory");
}

Vec InventoryRule::For(const RequestDistribution& dist, long horizon) const {
  if (!explicit_b.empty()) {
    const auto it = explicit_b.find(horizon);
    if (it == explicit_b.end()) {
      ConfigFail("missing field 'inventory.explicit." + std::to_string(horizon) + "'");
    }
    return it->second;
  }
  Vec b = NormalizedInventory(dist);
  // A small guard keeps floor(d T) stable when d T is an integer up to
  // rounding in d.
  for (double& v : b) v = std::floor(v * static_cast<double>(horizon) + 1e-9);
  return b;
}

nlohmann::json InventoryRule::ToJson() const {
  nlohmann::json j = nlohmann::json::object();
  if (d) j["d"] = *d;
  if (degenerate_at) j["degenerate_at"] = *degenerate_at;
  if (!explicit_b.empty()) {
    nlohmann::json e = nlohmann::json::object();
    for (const auto& [T, b] : explicit_b) e[std::to_string(T)] = b;
    j["explicit"] = e;
  }
  return j;
}

std::string FitCorrectionName(FitCorrection c) {
  switch (c) {
    case FitCorrection::kNone: return "none";
    case FitCorrection::kLog: return "log";
    case FitCorrection::kLog2: return "log2";
  }
  return "none";
}

FitCorrection ParseFitCorrection(const std::string& name) {
  if (name == "none") return FitCorrection::kNone;
  if (name == "log") return FitCorrection::kLog;
  if (name == "log2") return FitCorrection::kLog2;
  ConfigFail("unknown fit_correction '" + name + "'");
}

SolverConfig SolverConfigFromJson(const nlohmann::json& j) {
  SolverConfig cfg;
  if (j.is_null()) return cfg;
  if (!j.is_object()) ConfigFail("field 'solver' must be an object");
  std::string key;
  try {
    auto has = [&](const char* name) {
      key = name;
      return j.contains(name);
    };
    if (has("max_iters")) cfg.max_iters = j.at("max_iters").get<long>();
    if (has("tol")) cfg.tol = j.at("tol").get<double>();
    if (has("grid_resolution")) cfg.grid_resolution = j.at("grid_resolution").get<int>();
    if (has("step_rule")) cfg.step_rule = ParseStepRule(j.at("step_rule").get<std::string>());
    if (has("tie_break")) cfg.tie_break = ParseTieBreak(j.at("tie_break").get<std::string>());
  } catch (const nlohmann::json::exception&) {
    ConfigFail("field 'solver." + key + "' has the wrong type");
  } catch (const OlpError& e) {
    ConfigFail("field 'solver." + key + "': " + e.detail());
  }
  try {
    ValidateSolverConfig(cfg);
  } catch (const OlpError& e) {
    ConfigFail("field 'solver': " + e.detail());
  }
  return cfg;
}

nlohmann::json SolverConfigToJson(const SolverConfig& cfg) {
  nlohmann::json j;
  j["max_iters"] = cfg.max_iters;
  j["tol"] = cfg.tol ? nlohmann::json(*cfg.tol) : nlohmann::json("auto");
  j["grid_resolution"] = cfg.grid_resolution;
  j["step_rule"] = StepRuleName(cfg.step_rule);
  j["tie_break"] = TieBreakName(cfg.tie_break);
  return j;
}

ExperimentConfig ExperimentConfig::FromJson(const nlohmann::json& j) {
  if (!j.is_object()) ConfigFail("experiment config must be a JSON object");
  ExperimentConfig cfg;
  try {
    cfg.experiment_id = OptionalString(j, "experiment_id", "");
    if (cfg.experiment_id.empty()) cfg.experiment_id = "olp";
    cfg.distribution_json = Field(j, "distribution");
    cfg.distribution = DistributionFromConfig(cfg.distribution_json);
    cfg.inventory = InventoryRuleFromConfig(Field(j, "inventory"), *cfg.distribution);

    const nlohmann::json& grid = Field(j, "T_grid");
    if (!grid.is_array() || grid.empty()) ConfigFail("field 'T_grid' must be a nonempty array");
    for (const auto& v : grid) {
      const long T = PositiveInteger(v, "T_grid");
      if (!cfg.t_grid.empty() && T <= cfg.t_grid.back()) {
        ConfigFail("field 'T_grid' must be strictly increasing");
      }
      cfg.t_grid.push_back(T);
    }
    for (long T : cfg.t_grid) {
      if (!cfg.inventory.explicit_b.empty() && !cfg.inventory.explicit_b.count(T)) {
        ConfigFail("missing field 'inventory.explicit." + std::to_string(T) + "'");
      }
    }

    if (j.contains("trials")) cfg.trials = PositiveInteger(j.at("trials"), "trials");

    const nlohmann::json& pol = Field(j, "policies");
    if (!pol.is_array() || pol.empty()) ConfigFail("field 'policies' must be a nonempty array");
    for (const auto& p : pol) {
      if (!p.is_string()) ConfigFail("field 'policies' must hold strings");
      cfg.policies.push_back(PolicySpec::Parse(p.get<std::string>()));
    }

    if (j.contains("base_seed")) cfg.base_seed = Seed(j.at("base_seed"));
    if (j.contains("solver")) cfg.solver = SolverConfigFromJson(j.at("solver"));
    if (j.contains("fit_correction")) {
      cfg.correction = ParseFitCorrection(j.at("fit_correction").get<std::string>());
    }
    if (j.contains("output")) {
      const nlohmann::json& out = j.at("output");
      if (!out.is_object()) ConfigFail("field 'output' must be an object");
      cfg.csv_path = OptionalString(out, "csv", "output.");
      cfg.summary_path = OptionalString(out, "summary", "output.");
      cfg.svg_path = OptionalString(out, "svg", "output.");
    }
  } catch (const nlohmann::json::exception& e) {
    ConfigFail(std::string("malformed experiment config: ") + e.what());
  }
  return cfg;
}

std::vector<CellSummary> Summarize(const std::vector<RegretRow>& rows) {
  std::vector<CellSummary> cells;
  std::map<std::pair<std::string, long>, size_t> index;
  std::vector<std::vector<double>> values;
  for (const RegretRow& row : rows) {
    const auto key = std::make_pair(row.policy, row.horizon);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, cells.size()).first;
      cells.push_back({row.policy, row.horizon, 0.0, 0.0, 0});
      values.emplace_back();
    }
    values[it->second].push_back(row.regret);
  }
  for (size_t k = 0; k < cells.size(); ++k) {
    const std::vector<double>& v = values[k];
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    cells[k].mean = mean;
    cells[k].trials = static_cast<long>(v.size());
    cells[k].standard_error = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  }
  return cells;
}

ScalingFit FitScaling(std::span<const std::pair<long, double>> points,
                      FitCorrection correction) {
  std::vector<std::pair<double, double>> xy;
  for (const auto& [T, mean] : points) {
    if (!(mean > 0.0) || T < 2) continue;
    const double lt = std::log(static_cast<double>(T));
    double denom = 1.0;
    if (correction == FitCorrection::kLog) denom = lt;
    if (correction == FitCorrection::kLog2) denom = lt * lt;
    xy.push_back({lt, std::log(mean / denom)});
  }
  if (xy.size() < 4) {
    Fail(ErrorCode::kInsufficientData,
         "scaling fit needs at least 4 grid points with positive mean regret, got " +
             std::to_string(xy.size()));
  }
  const double n = static_cast<double>(xy.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : xy) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.points = static_cast<long>(xy.size());
  fit.correction = correction;
  return fit;
}

ScalingFit FitScaling(const std::vector<CellSummary>& cells, const std::string& policy,
                      FitCorrection correction) {
  std::vector<std::pair<long, double>> points;
  for (const CellSummary& c : cells) {
    if (c.policy == policy) points.push_back({c.horizon, c.mean});
  }
  return FitScaling(points, correction);
}

int WorkerCount() {
  if (const char* env = std::getenv("OLP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

RegretReport RunRegretSweep(const ExperimentConfig& cfg, std::ostream* progress) {
  if (!cfg.distribution) Fail(ErrorCode::kConfigError, "experiment has no distribution");
  const RequestDistribution& dist = *cfg.distribution;
  const size_t n_policies = cfg.policies.size();
  const size_t n_trials = static_cast<size_t>(cfg.trials);
  const size_t n_items = cfg.t_grid.size() * n_trials;
  std::vector<Vec> inventories;
  for (long T : cfg.t_grid) inventories.push_back(cfg.inventory.For(dist, T));

  std::vector<double> regrets(n_items * n_policies, 0.0);
  std::vector<uint64_t> seeds(n_items, 0);
  std::vector<std::atomic<long>> remaining(cfg.t_grid.size());
  for (auto& r : remaining) r.store(static_cast<long>(n_trials));
  std::mutex progress_mu;

  ParallelFor(
      n_items,
      [&](size_t item) {
        const size_t ti = item / n_trials;
        const long T = cfg.t_grid[ti];
        const uint64_t seed =
            EpisodeSeed(cfg.experiment_id, cfg.base_seed, T, static_cast<long>(item % n_trials));
        seeds[item] = seed;
        const RequestSample sample = SampleRealization(dist, T, seed);
        const double hindsight = HindsightValue(sample, inventories[ti], cfg.solver);
        for (size_t p = 0; p < n_policies; ++p) {
          const double reward = RunPolicy(dist, inventories[ti], sample, cfg.policies[p],
                                          cfg.solver, seed, false)
                                    .total_reward;
          regrets[item * n_policies + p] = hindsight - reward;
        }
        if (remaining[ti].fetch_sub(1) == 1 && progress) {
          std::lock_guard<std::mutex> lock(progress_mu);
          *progress << "T=" << T << " done (" << n_trials << " trials)\n";
        }
      },
      [&](size_t item) {
        return "T=" + std::to_string(cfg.t_grid[item / n_trials]) +
               ", trial=" + std::to_string(item % n_trials);
      });

  RegretReport report;
  report.rows.reserve(regrets.size());
  for (size_t p = 0; p < n_policies; ++p) {
    const std::string name = cfg.policies[p].Name();
    for (size_t item = 0; item < n_items; ++item) {
      report.rows.push_back({name, cfg.t_grid[item / n_trials],
                             static_cast<long>(item % n_trials),
                             regrets[item * n_policies + p], seeds[item]});
    }
  }
  report.cells = Summarize(report.rows);
  for (const PolicySpec& p : cfg.policies) {
    try {
      report.fits[p.Name()] = FitScaling(report.cells, p.Name(), cfg.correction);
    } catch (const OlpError& e) {
      if (e.code() != ErrorCode::kInsufficientData) throw;
    }
  }
  return report;
}

nlohmann::json RegretReport::SummaryJson(const ExperimentConfig& cfg) const {
  nlohmann::json j;
  j["experiment_id"] = cfg.experiment_id;
  j["distribution"] = cfg.distribution ? cfg.distribution->ToJson() : cfg.distribution_json;
  j["inventory"] = cfg.inventory.ToJson();
  j["T_grid"] = cfg.t_grid;
  j["trials"] = cfg.trials;
  j["base_seed"] = cfg.base_seed;
  j["solver"] = SolverConfigToJson(cfg.solver);
  j["fit_correction"] = FitCorrectionName(cfg.correction);
  nlohmann::json policies = nlohmann::json::array();
  for (const PolicySpec& p : cfg.policies) policies.push_back(p.Name());
  j["policies"] = policies;
  nlohmann::json cells_json = nlohmann::json::array();
  for (const CellSummary& c : cells) {
    cells_json.push_back({{"policy", c.policy},
                          {"T", c.horizon},
                          {"mean", c.mean},
                          {"standard_error", c.standard_error},
                          {"trials", c.trials}});
  }
  j["cells"] = cells_json;
  nlohmann::json fits_json = nlohmann::json::object();
  for (const auto& [name, fit] : fits) {
    fits_json[name] = {{"slope", fit.slope},
                       {"intercept", fit.intercept},
                       {"r2", fit.r2},
                       {"points", fit.points},
                       {"correction", FitCorrectionName(fit.correction)}};
  }
  j["fits"] = fits_json;
  return j;
}

ProbeConfig ProbeConfig::FromJson(const nlohmann::json& j) {
  if (!j.is_object()) ConfigFail("probe config must be a JSON object");
  ProbeConfig cfg;
  try {
    cfg.experiment_id = OptionalString(j, "experiment_id", "");
    if (cfg.experiment_id.empty()) cfg.experiment_id = "probe";
    cfg.distribution = DistributionFromConfig(Field(j, "distribution"));
    cfg.inventory = InventoryRuleFromConfig(Field(j, "inventory"), *cfg.distribution);
    cfg.horizon = PositiveInteger(Field(j, "T"), "T");
    if (!cfg.inventory.explicit_b.empty() && !cfg.inventory.explicit_b.count(cfg.horizon)) {
      ConfigFail("missing field 'inventory.explicit." + std::to_string(cfg.horizon) + "'");
    }
    if (j.contains("trials")) cfg.trials = PositiveInteger(j.at("trials"), "trials");
    if (j.contains("base_seed")) cfg.base_seed = Seed(j.at("base_seed"));
    if (j.contains("policy")) {
      if (!j.at("policy").is_string()) ConfigFail("field 'policy' must be a string");
      cfg.policy = PolicySpec::Parse(j.at("policy").get<std::string>());
    }
    if (j.contains("solver")) cfg.solver = SolverConfigFromJson(j.at("solver"));
    if (j.contains("beta")) {
      if (!j.at("beta").is_number() || !(j.at("beta").get<double>() >= 0.0)) {
        ConfigFail("field 'beta' must be a nonnegative number");
      }
      cfg.beta = j.at("beta").get<double>();
    }
    if (j.contains("output")) {
      const nlohmann::json& out = j.at("output");
      if (!out.is_object()) ConfigFail("field 'output' must be an object");
      cfg.summary_path = OptionalString(out, "summary", "output.");
      cfg.decomposition_path = OptionalString(out, "decomposition", "output.");
      cfg.concentration_path = OptionalString(out, "concentration", "output.");
      cfg.trace_path = OptionalString(out, "trace", "output.");
    }
  } catch (const nlohmann::json::exception& e) {
    ConfigFail(std::string("malformed probe config: ") + e.what());
  }
  return cfg;
}

double ProbeReport::MeanRegret() const {
  double sum = 0.0;
  for (const ProbeTrial& t : trials) sum += t.regret;
  return trials.empty() ? 0.0 : sum / static_cast<double>(trials.size());
}

double ProbeReport::RegretStandardError() const {
  const size_t n = trials.size();
  if (n < 2) return 0.0;
  const double mean = MeanRegret();
  double ss = 0.0;
  for (const ProbeTrial& t : trials) ss += (t.regret - mean) * (t.regret - mean);
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

double ProbeReport::DecompositionBound() const {
  double sum = 0.0;
  for (const ProbeTrial& t : trials) sum += t.term_over + t.term_under;
  return (trials.empty() ? 0.0 : sum / static_cast<double>(trials.size())) + c0_log_bound;
}

nlohmann::json ProbeReport::SummaryJson(const ProbeConfig& cfg) const {
  nlohmann::json j;
  j["experiment_id"] = cfg.experiment_id;
  if (cfg.distribution) j["distribution"] = cfg.distribution->ToJson();
  j["inventory"] = cfg.inventory.ToJson();
  j["b"] = b;
  j["T"] = cfg.horizon;
  j["trials"] = static_cast<long>(trials.size());
  j["base_seed"] = cfg.base_seed;
  j["policy"] = cfg.policy.Name();
  j["solver"] = SolverConfigToJson(cfg.solver);
  j["mean_regret"] = MeanRegret();
  j["regret_standard_error"] = RegretStandardError();
  j["c0"] = c0;
  j["c0_log_T"] = c0_log_bound;
  j["decomposition_bound"] = DecompositionBound();
  j["bound_covers_regret"] = DecompositionBound() >= MeanRegret() - 3.0 * RegretStandardError();

  std::vector<double> medians;
  double min_measured = std::numeric_limits<double>::infinity();
  for (const ProbeTrial& t : trials) {
    for (const ConcentrationPoint& p : t.concentration) {
      min_measured = std::min(min_measured, p.measured);
    }
    if (!std::isnan(t.ratio_median)) medians.push_back(t.ratio_median);
  }
  if (medians.empty()) {
    j["concentration"] = nullptr;
  } else {
    std::sort(medians.begin(), medians.end());
    j["concentration"] = {{"min_measured", min_measured},
                          {"ratio_median_min", medians.front()},
                          {"ratio_median_median", medians[medians.size() / 2]},
                          {"ratio_median_max", medians.back()}};
  }
  return j;
}

void ProbeReport::WriteTrialsCsv(std::ostream& out) const {
  out << "trial,seed,regret,term_over,term_under\n";
  for (const ProbeTrial& t : trials) {
    out << t.trial << ',' << t.seed << ',' << FormatDouble(t.regret) << ','
        << FormatDouble(t.term_over) << ',' << FormatDouble(t.term_under) << '\n';
  }
}

void ProbeReport::WriteConcentrationCsv(std::ostream& out) const {
  out << "trial,t,measured,envelope\n";
  for (const ProbeTrial& t : trials) {
    for (const ConcentrationPoint& p : t.concentration) {
      out << t.trial << ',' << p.t << ',' << FormatDouble(p.measured) << ','
          << FormatDouble(p.envelope) << '\n';
    }
  }
}

ProbeReport RunProbe(const ProbeConfig& cfg, std::ostream* progress) {
  if (!cfg.distribution) Fail(ErrorCode::kConfigError, "probe has no distribution");
  const RequestDistribution& dist = *cfg.distribution;
  const std::optional<double> beta =
      cfg.beta ? cfg.beta
               : (dist.holder() ? std::optional<double>(dist.holder()->beta) : std::nullopt);
  ProbeReport report;
  report.b = cfg.inventory.For(dist, cfg.horizon);
  report.c0 = DecompositionConstant(dist);
  report.c0_log_bound =
      report.c0 * std::log(static_cast<double>(std::max<long>(cfg.horizon, 1)));
  report.trials.resize(static_cast<size_t>(cfg.trials));
  std::atomic<long> done{0};
  std::mutex progress_mu;

  ParallelFor(
      report.trials.size(),
      [&](size_t k) {
        ProbeTrial& out = report.trials[k];
        out.trial = static_cast<long>(k);
        out.seed = EpisodeSeed(cfg.experiment_id, cfg.base_seed, cfg.horizon, out.trial);
        const RequestSample sample = SampleRealization(dist, cfg.horizon, out.seed);
        EpisodeTrace trace =
            RunPolicy(dist, report.b, sample, cfg.policy, cfg.solver, out.seed, true);
        out.regret = HindsightValue(sample, report.b, cfg.solver) - trace.total_reward;
        const std::vector<RemainingDual> duals = RemainingDuals(trace, cfg.solver);
        const DecompositionReport dec = ComputeDecomposition(dist, trace, duals);
        out.term_over = dec.term_over;
        out.term_under = dec.term_under;
        out.ratio_median = std::numeric_limits<double>::quiet_NaN();
        if (beta) {
          out.concentration = ConcentrationFromTrace(dist, trace, duals, beta);
          std::vector<double> ratios;
          for (const ConcentrationPoint& p : out.concentration) {
            if (p.envelope > 0.0) ratios.push_back(p.measured / p.envelope);
          }
          if (!ratios.empty()) {
            std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
            out.ratio_median = ratios[ratios.size() / 2];
          }
        }
        if (k == 0) report.first_trace = std::move(trace);
        const long finished = done.fetch_add(1) + 1;
        if (progress && finished % 50 == 0) {
          std::lock_guard<std::mutex> lock(progress_mu);
          *progress << finished << " of " << cfg.trials << " probe trials done\n";
        }
      },
      [&](size_t k) {
        return "T=" + std::to_string(cfg.horizon) + ", trial=" + std::to_string(k);
      });
  return report;
}

}  // namespace olp
