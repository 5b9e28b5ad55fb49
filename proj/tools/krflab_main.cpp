// krflab command line: analyze | run | sweep | report | scenarios.
// Talks to the shared library exclusively through the C API.

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "krflab/krflab.h"

namespace {

struct ScenarioDeleter {
  void operator()(krf_scenario* s) const { krf_scenario_release(s); }
};
struct ResultDeleter {
  void operator()(krf_result* r) const { krf_result_release(r); }
};
using ScenarioPtr = std::unique_ptr<krf_scenario, ScenarioDeleter>;
using ResultPtr = std::unique_ptr<krf_result, ResultDeleter>;

int fail(krf_status s) {
  std::fprintf(stderr, "krflab: %s", krf_status_name(s));
  const char* detail = krf_last_error();
  if (detail && *detail) std::fprintf(stderr, ": %s", detail);
  std::fprintf(stderr, "\n");
  return static_cast<int>(s);
}

ScenarioPtr open_scenario(const std::string& config, const std::string& scenario,
                          const std::string& out, krf_status& status) {
  krf_scenario* raw = nullptr;
  if (!config.empty())
    status = krf_scenario_load(config.c_str(), &raw);
  else
    status = krf_scenario_builtin(scenario.c_str(), &raw);
  ScenarioPtr s(raw);
  if (status == KRF_OK && !out.empty()) status = krf_scenario_set_output_dir(s.get(), out.c_str());
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"krflab — Kaehler–Ricci flow laboratory on symmetric model geometries"};
  app.require_subcommand(1);

  std::string config, scenario, out;
  int jobs = 1;
  bool quiet = false;

  auto add_scenario_opts = [&](CLI::App* cmd) {
    auto* c = cmd->add_option("--config", config, "scenario configuration file");
    auto* s = cmd->add_option("--scenario", scenario, "bundled scenario name");
    cmd->add_option("--out", out, "output directory (overrides the configuration)");
    c->excludes(s);
  };

  CLI::App* analyze = app.add_subcommand("analyze", "cohomology-only analysis (no PDE)");
  add_scenario_opts(analyze);

  CLI::App* run = app.add_subcommand("run", "full flow run with CSV/JSON artifacts");
  add_scenario_opts(run);
  run->add_flag("--quiet", quiet, "suppress the summary JSON on stdout");

  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep over the [sweep] section");
  add_scenario_opts(sweep);
  sweep->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);

  std::vector<std::string> paths;
  CLI::App* report = app.add_subcommand("report", "digest summary.json / index.json files");
  report->add_option("paths", paths, "summary or index files")->required();
  report->add_option("--out", out, "directory for digest.csv");

  CLI::App* list = app.add_subcommand("scenarios", "list bundled scenarios");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (int i = 0; i < krf_scenario_count(); ++i) std::printf("%s\n", krf_scenario_name(i));
    return 0;
  }

  if (report->parsed()) {
    std::vector<const char*> cpaths;
    for (const std::string& p : paths) cpaths.push_back(p.c_str());
    krf_result* raw = nullptr;
    const krf_status st =
        krf_report(cpaths.data(), static_cast<int>(cpaths.size()), out.empty() ? nullptr : out.c_str(), &raw);
    ResultPtr res(raw);
    if (!res) return fail(st);
    std::printf("%s", krf_result_text(res.get()));
    return krf_result_exit_code(res.get());
  }

  if (config.empty() == scenario.empty()) {
    std::fprintf(stderr, "krflab: exactly one of --config or --scenario is required\n");
    return static_cast<int>(KRF_ERR_CONFIG);
  }

  krf_status st = KRF_OK;
  ScenarioPtr s = open_scenario(config, scenario, out, st);
  if (st != KRF_OK) return fail(st);

  krf_result* raw = nullptr;
  if (analyze->parsed()) {
    st = krf_analyze(s.get(), /*write_outputs=*/!out.empty(), &raw);
    ResultPtr res(raw);
    if (!res) return fail(st);
    std::printf("%s", krf_result_text(res.get()));
    return krf_result_exit_code(res.get());
  }
  if (run->parsed()) {
    st = krf_run(s.get(), &raw);
    ResultPtr res(raw);
    if (!res) return fail(st);
    if (!quiet) std::printf("%s", krf_result_json(res.get()));
    if (st != KRF_OK)
      std::fprintf(stderr, "krflab: %s: %s\n", krf_status_name(st), krf_last_error());
    return krf_result_exit_code(res.get());
  }
  if (sweep->parsed()) {
    st = krf_sweep(s.get(), jobs, &raw);
    ResultPtr res(raw);
    if (!res) return fail(st);
    std::printf("%s", krf_result_json(res.get()));
    return krf_result_exit_code(res.get());
  }
  return 0;
}
