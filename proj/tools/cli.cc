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

#include "cli.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "olp/degeneracy.h"
#include "olp/fluid_dual.h"
#include "olp/harness.h"
#include "olp/report_io.h"

namespace olp::cli {
namespace {

using nlohmann::json;

nlohmann::json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kConfigError, "cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kConfigError, "'" + path + "' is not valid JSON: " + e.what());
  }
}

// Writes through `emit` into `path`, or into `fallback` when path is empty.
void WriteOutput(const std::string& path, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& emit) {
  if (path.empty()) {
    emit(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) Fail(ErrorCode::kConfigError, "cannot write '" + path + "'");
  emit(file);
  if (!file) Fail(ErrorCode::kConfigError, "write to '" + path + "' failed");
}

void WriteIfSet(const std::string& path, const std::function<void(std::ostream&)>& emit) {
  if (!path.empty()) {
    std::ostringstream sink;
    WriteOutput(path, sink, emit);
  }
}

json ObjectConfig(const std::string& path, const char* what) {
  json j = ReadJsonFile(path);
  if (!j.is_object()) {
    Fail(ErrorCode::kConfigError, std::string(what) + " config must be a JSON object");
  }
  if (!j.contains("distribution")) Fail(ErrorCode::kConfigError, "missing field 'distribution'");
  return j;
}

// The fluid and degeneracy configs carry "d" or "degenerate_at" at top level.
Vec NormalizedInventoryFromConfig(const json& j, const RequestDistribution& dist) {
  json inv = json::object();
  if (j.contains("d")) {
    inv["d"] = j.at("d");
  } else if (j.contains("degenerate_at")) {
    inv["degenerate_at"] = j.at("degenerate_at");
  } else {
    Fail(ErrorCode::kConfigError, "missing field 'd'");
  }
  try {
    return InventoryRuleFromConfig(inv, dist).NormalizedInventory(dist);
  } catch (const OlpError& e) {
    std::string msg = e.detail();
    // Config keys here live at top level, not under "inventory.".
    for (size_t at; (at = msg.find("inventory.")) != std::string::npos;) msg.erase(at, 10);
    Fail(e.code(), msg);
  }
}

SolverConfig SolverFromConfig(const json& j) {
  return j.contains("solver") ? SolverConfigFromJson(j.at("solver")) : SolverConfig{};
}

struct SweepArgs {
  std::string config;
  std::string csv;
  std::string summary;
  std::string svg;
  bool progress = false;
};

int RunSweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg = ExperimentConfig::FromJson(ReadJsonFile(a.config));
  if (!a.csv.empty()) cfg.csv_path = a.csv;
  if (!a.summary.empty()) cfg.summary_path = a.summary;
  if (!a.svg.empty()) cfg.svg_path = a.svg;
  const RegretReport report = RunRegretSweep(cfg, a.progress ? &err : nullptr);
  WriteOutput(cfg.csv_path, out, [&](std::ostream& s) { WriteRegretCsv(s, report.rows); });
  const std::string summary = report.SummaryJson(cfg).dump(2) + "\n";
  if (cfg.csv_path.empty()) {
    WriteIfSet(cfg.summary_path, [&](std::ostream& s) { s << summary; });
  } else {
    WriteOutput(cfg.summary_path, out, [&](std::ostream& s) { s << summary; });
  }
  WriteIfSet(cfg.svg_path,
             [&](std::ostream& s) { s << RenderRegretSvg(report.cells, report.fits); });
  return kExitOk;
}

int RunFluid(const std::string& config, const std::string& trace_path,
             const std::string& out_path, std::ostream& out) {
  const json j = ObjectConfig(config, "fluid");
  const RequestDistribution dist = DistributionFromConfig(j.at("distribution"));
  const Vec d = NormalizedInventoryFromConfig(j, dist);
  const SolverConfig cfg = SolverFromConfig(j);
  std::string trace_file = trace_path;
  if (trace_file.empty() && j.contains("output") && j.at("output").contains("trace")) {
    trace_file = j.at("output").at("trace").get<std::string>();
  }

  std::vector<SolverTraceRow> trace;
  SolveHints hints;
  hints.trace = &trace;
  const DualSolution sol = SolveFluidDual(dist, d, cfg, hints);
  const std::vector<Vec> flat = ProbeFlatDirections(dist, d, sol.lambda, cfg);

  json result;
  result["distribution"] = dist.ToJson();
  result["d"] = d;
  result["lambda"] = sol.lambda;
  result["value"] = sol.value;
  result["subgrad_norm"] = sol.subgrad_norm;
  result["certified_gap"] = sol.certified_gap;
  result["iterations"] = sol.iterations;
  result["tol"] = ResolvedTol(dist, cfg);
  result["flat_directions"] = flat;
  result["dual_unique"] = flat.empty();
  try {
    result["growth_exponent"] = EstimateGrowthExponent(dist, d, sol.lambda, cfg);
  } catch (const OlpError& e) {
    if (e.code() != ErrorCode::kDegenerateFit) throw;
    result["growth_exponent"] = nullptr;
    result["growth_error"] = e.what();
  }
  WriteIfSet(trace_file, [&](std::ostream& s) { WriteSolverTraceCsv(s, trace); });
  WriteOutput(out_path, out, [&](std::ostream& s) { s << result.dump(2) << '\n'; });
  return kExitOk;
}

int RunDegeneracy(const std::string& config, const std::string& out_path, std::ostream& out) {
  const json j = ObjectConfig(config, "degeneracy");
  const RequestDistribution dist = DistributionFromConfig(j.at("distribution"));
  const Vec d = NormalizedInventoryFromConfig(j, dist);
  const DegeneracyVerdict verdict = Diagnose(dist, d, SolverFromConfig(j));
  json result = verdict.ToJson();
  if (j.contains("degenerate_at")) result["degenerate_at"] = j.at("degenerate_at");
  WriteOutput(out_path, out, [&](std::ostream& s) { s << result.dump(2) << '\n'; });
  return kExitOk;
}

struct ProbeArgs {
  std::string config;
  std::string summary;
  std::string decomposition;
  std::string concentration;
  std::string trace;
  bool progress = false;
};

int RunProbeCommand(const ProbeArgs& a, std::ostream& out, std::ostream& err) {
  ProbeConfig cfg = ProbeConfig::FromJson(ReadJsonFile(a.config));
  if (!a.summary.empty()) cfg.summary_path = a.summary;
  if (!a.decomposition.empty()) cfg.decomposition_path = a.decomposition;
  if (!a.concentration.empty()) cfg.concentration_path = a.concentration;
  if (!a.trace.empty()) cfg.trace_path = a.trace;
  const ProbeReport report = RunProbe(cfg, a.progress ? &err : nullptr);
  WriteIfSet(cfg.decomposition_path, [&](std::ostream& s) { report.WriteTrialsCsv(s); });
  WriteIfSet(cfg.concentration_path,
             [&](std::ostream& s) { report.WriteConcentrationCsv(s); });
  WriteIfSet(cfg.trace_path, [&](std::ostream& s) { report.first_trace.WriteCsv(s); });
  WriteOutput(cfg.summary_path, out,
              [&](std::ostream& s) { s << report.SummaryJson(cfg).dump(2) << '\n'; });
  return kExitOk;
}

int RunPlot(const std::string& csv, const std::string& svg, const std::string& correction,
            std::ostream& out) {
  std::ifstream in(csv);
  if (!in) Fail(ErrorCode::kConfigError, "cannot open report '" + csv + "'");
  const std::vector<RegretRow> rows = ReadRegretCsv(in);
  const std::vector<CellSummary> cells = Summarize(rows);
  const FitCorrection corr = ParseFitCorrection(correction);
  std::map<std::string, ScalingFit> fits;
  for (const CellSummary& c : cells) {
    if (fits.count(c.policy)) continue;
    try {
      fits[c.policy] = FitScaling(cells, c.policy, corr);
    } catch (const OlpError& e) {
      if (e.code() != ErrorCode::kInsufficientData) throw;
    }
  }
  WriteOutput(svg, out, [&](std::ostream& s) { s << RenderRegretSvg(cells, fits); });
  return kExitOk;
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSolverBudgetExceeded:
    case ErrorCode::kRecoveryFailed:
    case ErrorCode::kDegenerateFit:
      return kExitSolver;
    default:
      return kExitConfig;
  }
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online linear programming experiments: re-solving policies, fluid duals, "
               "degeneracy diagnostics and regret sweeps."};
  app.name("olp");
  app.require_subcommand(1);

  SweepArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Regret sweep over a T grid");
  sweep_cmd->add_option("config", sweep.config, "Experiment config (JSON)")->required();
  sweep_cmd->add_option("--csv", sweep.csv, "Per-trial regret CSV (default: stdout)");
  sweep_cmd->add_option("--summary", sweep.summary, "Summary JSON with means and fits");
  sweep_cmd->add_option("--svg", sweep.svg, "Log-log regret plot");
  sweep_cmd->add_flag("--progress", sweep.progress, "Report progress on stderr");

  std::string fluid_config, fluid_trace, fluid_out;
  CLI::App* fluid_cmd = app.add_subcommand("fluid", "Fluid dual solve and growth exponent");
  fluid_cmd->add_option("config", fluid_config, "Fluid config (JSON)")->required();
  fluid_cmd->add_option("--trace", fluid_trace, "Solver trace CSV");
  fluid_cmd->add_option("-o,--out", fluid_out, "Result JSON (default: stdout)");

  std::string deg_config, deg_out;
  CLI::App* deg_cmd = app.add_subcommand("degeneracy", "Degeneracy verdicts at an inventory");
  deg_cmd->add_option("config", deg_config, "Degeneracy config (JSON)")->required();
  deg_cmd->add_option("-o,--out", deg_out, "Verdict JSON (default: stdout)");

  ProbeArgs probe;
  CLI::App* probe_cmd =
      app.add_subcommand("probe", "Regret decomposition and dual concentration at one T");
  probe_cmd->add_option("config", probe.config, "Probe config (JSON)")->required();
  probe_cmd->add_option("--summary", probe.summary, "Summary JSON (default: stdout)");
  probe_cmd->add_option("--decomposition", probe.decomposition, "Per-trial terms CSV");
  probe_cmd->add_option("--concentration", probe.concentration, "Concentration series CSV");
  probe_cmd->add_option("--trace", probe.trace, "Episode trace CSV of trial 0");
  probe_cmd->add_flag("--progress", probe.progress, "Report progress on stderr");

  std::string plot_csv, plot_svg, plot_correction = "none";
  CLI::App* plot_cmd = app.add_subcommand("plot", "SVG log-log plot of a regret report");
  plot_cmd->add_option("report", plot_csv, "Regret CSV from sweep")->required();
  plot_cmd->add_option("-o,--out", plot_svg, "SVG path (default: stdout)");
  plot_cmd->add_option("--correction", plot_correction, "Fit correction: none, log, log2")
      ->check(CLI::IsMember({"none", "log", "log2"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sweep_cmd) return RunSweep(sweep, out, err);
    if (*fluid_cmd) return RunFluid(fluid_config, fluid_trace, fluid_out, out);
    if (*deg_cmd) return RunDegeneracy(deg_config, deg_out, out);
    if (*probe_cmd) return RunProbeCommand(probe, out, err);
    if (*plot_cmd) return RunPlot(plot_csv, plot_svg, plot_correction, out);
  } catch (const OlpError& e) {
    err << "olp: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const json::exception& e) {
    err << "olp: ConfigError: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace olp::cli
