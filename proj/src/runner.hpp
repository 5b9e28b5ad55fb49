#pragma once

// Pipelines behind the CLI: cohomology-only analysis, full runs with CSV and
// JSON artifacts, parameter sweeps, and the human-readable report digest.

#include <json.hpp>

#include <string>
#include <vector>

#include "config.hpp"
#include "diagnostics.hpp"

namespace krf {

struct AnalyzeResult {
  std::string scenario;
  CohomologySummary coh;
  std::vector<std::pair<double, double>> volume_samples;  // (t, [omega_t]^n)
  nlohmann::json json;
  std::string text;  // human-readable rendering
};

// Cohomology-only pipeline: T, limit class, collapse exponent, nef checks,
// volume polynomial samples.  No PDE or ODE evaluation.  Writes
// <out>/analyze.json when `write_outputs`.
AnalyzeResult analyze_scenario(const ScenarioConfig& cfg, bool write_outputs = false);

struct RunResult {
  std::string scenario;
  CohomologySummary coh;
  std::vector<DiagnosticsRecord> records;
  FitReport fit;
  VerdictSet verdict;
  double d_threshold = 0.0;
  std::string backend;     // "product" | "calabi"
  std::string status;      // "ok" | "kaehler-violation" | "solver-failure"
  std::optional<RunFailure> failure;
  double t_stop = 0.0;
  long steps = 0;
  long newton_iters = 0;
  int exit_code = 0;  // 0 ok, 2 Kaehler violation, 3 verdict inconsistency
  std::string out_dir;
  std::string timeseries_path;  // empty if CSV not written
  std::string summary_path;     // empty if JSON not written
  nlohmann::json summary;
};

// Executes the flow backend, streams one CSV row per sample and writes the
// summary JSON.  Partial outputs are flushed on failure.
RunResult run_scenario(const ScenarioConfig& cfg);

struct SweepPoint {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
  std::string dir;
  std::string summary_path;
  std::string status;  // "ok" | "failed" | error kind
  int exit_code = 0;
};

struct SweepResult {
  std::string scenario;
  std::vector<SweepPoint> points;
  std::string index_path;
  nlohmann::json index;
  int exit_code = 0;  // worst point exit code; per-point failures isolated
};

// Cross product over the config's [sweep] entries; `jobs` concurrent runs.
SweepResult sweep_scenario(const ScenarioConfig& cfg, int jobs = 1);

struct ReportResult {
  std::string table;       // per-scenario digest table
  nlohmann::json digest;
  int exit_code = 0;       // 3 if any verdict failed, 1 if any input missing
  std::string digest_path; // written when out_dir nonempty
};

// Digests summary.json files (or index.json files, which expand to their
// points).  Missing files are reported per entry.
ReportResult report_summaries(const std::vector<std::string>& paths,
                              const std::string& out_dir = "");

// Deterministic sample schedule for a scenario (used when diagnostics.samples
// is 'auto'): uniform coarse samples, a log-spaced tail approaching the
// singular time down to delta_stop, and the exact offsets T - 10^{-j}.
std::vector<double> auto_sample_schedule(const ScenarioConfig& cfg, const SingularityTime& sing);

// CSV column header for the fixed timeseries layout.
std::string timeseries_header(const ScenarioConfig& cfg);
std::string format_alpha(double alpha);

}  // namespace krf
