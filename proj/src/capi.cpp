#include "krflab/krflab.h"

#include <exception>
#include <string>

#include "config.hpp"
#include "runner.hpp"

using namespace krf;

struct krf_scenario {
  ScenarioConfig cfg;
};

struct krf_result {
  std::string json;
  std::string text;
  int exit_code = 0;
};

namespace {

thread_local std::string g_last_error;

krf_status to_c(Status s) { return static_cast<krf_status>(static_cast<int>(s)); }

// Runs `fn`, translating exceptions into status codes + thread-local detail.
template <typename Fn>
krf_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    return fn();
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_c(e.status());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KRF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return KRF_ERR_INTERNAL;
  }
}

krf_status exit_code_status(int ec) {
  switch (ec) {
    case 0: return KRF_OK;
    case 1: return KRF_ERR_CONFIG;
    case 2: return KRF_ERR_KAEHLER;
    case 3: return KRF_ERR_VERDICT;
    default: return KRF_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* krf_version(void) { return "0.1.0"; }

const char* krf_status_name(krf_status s) {
  switch (s) {
    case KRF_OK: return "ok";
    case KRF_ERR_CONFIG: return "config-error";
    case KRF_ERR_KAEHLER: return "kaehler-violation";
    case KRF_ERR_VERDICT: return "verdict-inconsistency";
    case KRF_ERR_INVALID: return "invalid-argument";
    case KRF_ERR_IO: return "io-error";
    case KRF_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

const char* krf_last_error(void) { return g_last_error.c_str(); }

krf_status krf_scenario_load(const char* path, krf_scenario** out) {
  if (!path || !out) {
    g_last_error = "null argument";
    return KRF_ERR_INVALID;
  }
  *out = nullptr;
  return guarded([&]() {
    auto* s = new krf_scenario{parse_scenario_file(path)};
    *out = s;
    return KRF_OK;
  });
}

krf_status krf_scenario_parse(const char* text, const char* name_hint, krf_scenario** out) {
  if (!text || !out) {
    g_last_error = "null argument";
    return KRF_ERR_INVALID;
  }
  *out = nullptr;
  return guarded([&]() {
    auto* s = new krf_scenario{parse_scenario_text(text, name_hint ? name_hint : "scenario")};
    *out = s;
    return KRF_OK;
  });
}

int krf_scenario_count(void) { return static_cast<int>(builtin_scenario_names().size()); }

const char* krf_scenario_name(int index) {
  const auto& names = builtin_scenario_names();
  if (index < 0 || index >= static_cast<int>(names.size())) return nullptr;
  return names[static_cast<std::size_t>(index)].c_str();
}

krf_status krf_scenario_builtin(const char* name, krf_scenario** out) {
  if (!name || !out) {
    g_last_error = "null argument";
    return KRF_ERR_INVALID;
  }
  *out = nullptr;
  return guarded([&]() {
    auto* s = new krf_scenario{builtin_scenario(name)};
    *out = s;
    return KRF_OK;
  });
}

const char* krf_scenario_title(const krf_scenario* s) { return s ? s->cfg.name.c_str() : ""; }

krf_status krf_scenario_set_output_dir(krf_scenario* s, const char* dir) {
  if (!s || !dir) {
    g_last_error = "null argument";
    return KRF_ERR_INVALID;
  }
  s->cfg.out_dir = dir;
  g_last_error.clear();
  return KRF_OK;
}

void krf_scenario_release(krf_scenario* s) { delete s; }

krf_status krf_analyze(const krf_scenario* s, int write_outputs, krf_result** out) {
  if (!s || !out) {
    g_last_error = "null argument";
    return KRF_ERR_INVALID;
  }
  *out = nullptr;
  return guarded([&]() {
    AnalyzeResult a = analyze_scenario(s->cfg, write_outputs != 0);
    auto* r = new krf_result{a.json.dump(2) + "\n", a.text, 0};
    *out = r;
    return KRF_OK;
  });
}

krf_status krf_run(const krf_scenario* s, krf_result** out) {
  if (!s || !out) {
    g_last_error = "null argument";
    return KRF_ERR_INVALID;
  }
  *out = nullptr;
  return guarded([&]() {
    RunResult rr = run_scenario(s->cfg);
    auto* r = new krf_result{rr.summary.dump(2) + "\n", "", rr.exit_code};
    *out = r;
    if (rr.failure) g_last_error = rr.failure->what;
    else if (!rr.verdict.consistent) g_last_error = "verdict inconsistency";
    return exit_code_status(rr.exit_code);
  });
}

krf_status krf_sweep(const krf_scenario* s, int jobs, krf_result** out) {
  if (!s || !out) {
    g_last_error = "null argument";
    return KRF_ERR_INVALID;
  }
  *out = nullptr;
  return guarded([&]() {
    SweepResult sr = sweep_scenario(s->cfg, jobs);
    auto* r = new krf_result{sr.index.dump(2) + "\n", "", sr.exit_code};
    *out = r;
    return exit_code_status(sr.exit_code);
  });
}

krf_status krf_report(const char* const* paths, int count, const char* out_dir,
                      krf_result** out) {
  if (!paths || count < 1 || !out) {
    g_last_error = "null argument";
    return KRF_ERR_INVALID;
  }
  *out = nullptr;
  return guarded([&]() {
    std::vector<std::string> ps;
    for (int i = 0; i < count; ++i) {
      if (!paths[i]) throw InvalidArgument("null path entry");
      ps.emplace_back(paths[i]);
    }
    ReportResult rr = report_summaries(ps, out_dir ? out_dir : "");
    auto* r = new krf_result{rr.digest.dump(2) + "\n", rr.table, rr.exit_code};
    *out = r;
    return exit_code_status(rr.exit_code);
  });
}

const char* krf_result_json(const krf_result* r) { return r ? r->json.c_str() : ""; }

const char* krf_result_text(const krf_result* r) { return r ? r->text.c_str() : ""; }

int krf_result_exit_code(const krf_result* r) { return r ? r->exit_code : KRF_ERR_INVALID; }

void krf_result_release(krf_result* r) { delete r; }

}  // extern "C"
