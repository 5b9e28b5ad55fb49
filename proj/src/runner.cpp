#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace krf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

std::string fmt_g(double v, int prec = 6) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
  return buf;
}

json json_time(double t) {
  if (t == kInf) return nullptr;
  return t;
}

json class_json(const CohClass& c) {
  json a = json::array();
  for (double x : c) a.push_back(x);
  return a;
}

json coh_json(const CohomologySummary& coh, const CohomologySetup& setup) {
  json j;
  j["T"] = json_time(coh.sing.T);
  j["finite_T"] = coh.sing.finite();
  j["S"] = json_time(coh.sing.finite() ? time_to_unnormalized(coh.sing.T) : kInf);
  j["active_facets"] = coh.sing.active_facets;
  json names = json::array();
  for (int f : coh.sing.active_facets)
    names.push_back(setup.cone.facet_names.empty() ? std::to_string(f)
                                                   : setup.cone.facet_names[static_cast<std::size_t>(f)]);
  j["active_facet_names"] = names;
  j["limit_class"] = class_json(coh.sing.limit);
  j["K"] = coh.collapse.K;
  j["mixed_intersections"] = coh.collapse.mixed;
  j["c1_top"] = coh.c1_top;
  j["omega0_plus_c1"] = {{"nef", coh.nef_omega0_plus_c1.nef},
                         {"margin", coh.nef_omega0_plus_c1.margin}};
  j["singular_at_infinity"] = coh.singular_at_infinity;
  j["regime"] = coh.regime;
  return j;
}

json fit_json(const FitReport& f) {
  json j;
  j["skipped"] = f.skipped;
  if (f.skipped) {
    j["skipped_reason"] = f.skipped_reason;
    return j;
  }
  j["K_fit"] = f.K_fit;
  j["K_fit_full_window"] = f.K_fit_full_window;
  if (!f.finite_T) j["efolding_slope"] = f.efolding_slope;
  j["beta_fit"] = f.beta_fit;
  j["voll_slope"] = f.voll_slope;
  json table = json::array();
  for (const auto& [delta, lam] : f.lambda_blowup)
    table.push_back({{"delta", delta}, {"lambda_min", lam}});
  j["lambda_blowup"] = table;
  j["blowup_declared"] = f.blowup_declared;
  j["window"] = {{"t_lo", f.window.t_lo},
                 {"t_hi", f.window.t_hi},
                 {"n", f.window.n},
                 {"kind", f.window.kind}};
  j["residual_rms"] = f.residual_rms;
  return j;
}

json verdict_json(const VerdictSet& v) {
  json j;
  j["d_threshold"] = v.d_threshold;
  j["observables"] = {{"finite_T", v.finite_T},
                      {"noncollapsed", v.noncollapsed},
                      {"ricci_bounded", v.ricci_bounded},
                      {"nef_restriction", v.nef_restriction},
                      {"c1_top_zero", v.c1_top_zero},
                      {"singular_at_infinity", v.singular_at_infinity},
                      {"lambda_min_overall", v.lambda_min_overall}};
  j["implications"] = {
      {"finite_noncollapsed_ricci_unbounded",
       {{"applicable", v.finite_noncollapsed_ricci_unbounded.applicable},
        {"holds", v.finite_noncollapsed_ricci_unbounded.holds}}},
      {"infinite_singular_unit_bound_topology",
       {{"applicable", v.infinite_singular_unit_bound_topology.applicable},
        {"holds", v.infinite_singular_unit_bound_topology.holds}}}};
  j["consistent"] = v.consistent;
  return j;
}

json model_json(const ScenarioConfig& cfg) {
  json j;
  if (cfg.is_product()) {
    j["type"] = "product";
    json f = json::array();
    for (const Factor& fa : cfg.product.factors)
      f.push_back({{"kind", factor_kind_name(fa.kind)}, {"kappa", fa.kappa()}, {"c0", fa.c0}});
    j["factors"] = f;
  } else {
    j["type"] = "calabi";
    j["a"] = cfg.calabi.a;
    j["b"] = cfg.calabi.b;
    j["grid_half_width"] = cfg.calabi.L;
    j["grid_points"] = cfg.calabi.N;
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Status::Io, "cannot write " + path);
  out << content;
  if (!out) throw Error(Status::Io, "short write to " + path);
}

}  // namespace

std::string format_alpha(double alpha) { return fmt_g(alpha); }

std::string timeseries_header(const ScenarioConfig& cfg) {
  const int m = cfg.is_product() ? cfg.product.dim() : 2;
  std::string h = "t,s";
  for (int i = 0; i < m; ++i) h += ",class_" + std::to_string(i);
  h += ",volume_coh,volume_num,lambda_min,lambda_max,trace_max,sup_u,inf_u,sup_udot_u,"
       "inf_udot_u,metric_ratio_min,metric_ratio_max";
  for (double a : cfg.alphas) h += ",alpha_integral_" + format_alpha(a);
  return h;
}

namespace {

std::string csv_row(const DiagnosticsRecord& r) {
  std::string row = fmt(r.t) + "," + fmt(r.s);
  for (double c : r.cls) row += "," + fmt(c);
  row += "," + fmt(r.volume_coh) + "," + fmt(r.volume_num) + "," + fmt(r.lambda_min) + "," +
         fmt(r.lambda_max) + "," + fmt(r.trace_max) + "," + fmt(r.sup_u) + "," + fmt(r.inf_u) +
         "," + fmt(r.sup_udot_u) + "," + fmt(r.inf_udot_u) + "," + fmt(r.metric_ratio_min) +
         "," + fmt(r.metric_ratio_max);
  for (const auto& [a, v] : r.alpha_integrals) row += "," + fmt(v);
  return row;
}

}  // namespace

std::vector<double> auto_sample_schedule(const ScenarioConfig& cfg, const SingularityTime& sing) {
  std::set<double> times;
  times.insert(0.0);
  if (sing.finite()) {
    const double T = sing.T;
    const double delta_stop = cfg.solver.delta_stop;
    if (!(delta_stop < T))
      throw ConfigError("solver.delta_stop",
                        "must be smaller than the singular time T=" + fmt_g(T));
    const double delta_hi = std::min(0.1, 0.9 * T);
    // coarse uniform part up to the fit window
    const double t_lo = T - delta_hi;
    for (int j = 0; j <= 12; ++j) times.insert(t_lo * j / 12.0);
    // log-spaced tail, 8 points per decade, endpoints included
    const double decades = std::log10(delta_hi / delta_stop);
    const int pts = std::max(2, static_cast<int>(std::lround(8.0 * decades)) + 1);
    for (int j = 0; j < pts; ++j) {
      const double frac = static_cast<double>(j) / (pts - 1);
      const double delta = delta_hi * std::pow(delta_stop / delta_hi, frac);
      times.insert(T - delta);
    }
    // exact offsets T - 10^{-j} used by the blow-up table
    for (int j = 1; j <= 8; ++j) {
      const double delta = std::pow(10.0, -j);
      if (delta < delta_stop * (1.0 - 1e-9)) break;
      if (delta <= delta_hi) times.insert(T - delta);
    }
    times.insert(T - delta_stop);
  } else {
    for (int j = 0; j <= 60; ++j) times.insert(cfg.solver.t_end * j / 60.0);
  }
  // drop near-duplicates
  std::vector<double> out;
  for (double t : times)
    if (out.empty() || t - out.back() > 1e-12) out.push_back(t);
  return out;
}

AnalyzeResult analyze_scenario(const ScenarioConfig& cfg, bool write_outputs) {
  AnalyzeResult res;
  res.scenario = cfg.name;
  const CohomologySetup setup = cfg.setup();
  res.coh = classify(setup);

  const double t_max = res.coh.sing.finite() ? res.coh.sing.T : cfg.solver.t_end;
  for (int j = 0; j <= 8; ++j) {
    const double t = t_max * j / 8.0;
    res.volume_samples.emplace_back(t, volume_poly(setup, t));
  }

  json j;
  j["version"] = 1;
  j["scenario"] = cfg.name;
  j["model"] = model_json(cfg);
  j["cohomology"] = coh_json(res.coh, setup);
  json vs = json::array();
  for (const auto& [t, v] : res.volume_samples) vs.push_back({{"t", t}, {"volume", v}});
  j["volume_samples"] = vs;
  res.json = j;

  std::ostringstream os;
  os << "scenario " << cfg.name << "\n";
  if (res.coh.sing.finite())
    os << "  T = " << fmt_g(res.coh.sing.T, 15) << "  (S = "
       << fmt_g(time_to_unnormalized(res.coh.sing.T), 15) << ")\n";
  else
    os << "  T = inf\n";
  os << "  limit class = [";
  for (std::size_t i = 0; i < res.coh.sing.limit.size(); ++i)
    os << (i ? ", " : "") << fmt_g(res.coh.sing.limit[i], 12);
  os << "]\n";
  os << "  K = " << res.coh.collapse.K << "\n";
  os << "  regime = " << res.coh.regime << "\n";
  os << "  c1^n = " << fmt_g(res.coh.c1_top, 12) << ", omega0+c1 nef = "
     << (res.coh.nef_omega0_plus_c1.nef ? "yes" : "no")
     << " (margin " << fmt_g(res.coh.nef_omega0_plus_c1.margin, 6) << ")\n";
  res.text = os.str();

  if (write_outputs && cfg.write_json) {
    const std::string dir = resolve_out_dir(cfg.out_dir);
    fs::create_directories(dir);
    write_text_file(dir + "/analyze.json", res.json.dump(2) + "\n");
  }
  return res;
}

namespace {

// Runs the exact product backend at the sample times.
void run_product(const ScenarioConfig& cfg, const CohomologySetup& setup,
                 const std::vector<double>& samples, RunResult& out) {
  out.backend = "product";
  for (double t : samples)
    out.records.push_back(record_product(cfg.product, setup, t, cfg.alphas));
  out.t_stop = samples.empty() ? 0.0 : samples.back();
  out.status = "ok";
}

void run_calabi(const ScenarioConfig& cfg, const CohomologySetup& setup,
                const std::vector<double>& samples, RunResult& out,
                std::vector<TrajectorySample>* keep_samples) {
  out.backend = "calabi";
  const CalabiModel& m = cfg.calabi;
  CalabiBackground bg(m);
  Trajectory traj = run_flow(bg, m.grid(), cfg.solver, samples);
  out.steps = traj.total_steps;
  out.newton_iters = traj.total_newton_iters;
  out.t_stop = traj.t_stop;
  for (const TrajectorySample& s : traj.samples) {
    CalabiProfile p{s.t, traj.grid, s.u};
    out.records.push_back(record_calabi(m, setup, p, cfg.alphas));
  }
  if (traj.failure) {
    out.failure = traj.failure;
    out.status = traj.failure->status == Status::Kaehler ? "kaehler-violation" : "solver-failure";
  } else {
    out.status = "ok";
  }
  if (keep_samples) *keep_samples = std::move(traj.samples);
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
  RunResult out;
  out.scenario = cfg.name;
  const CohomologySetup setup = cfg.setup();
  out.coh = classify(setup);

  std::vector<double> samples =
      cfg.samples ? *cfg.samples : auto_sample_schedule(cfg, out.coh.sing);
  if (out.coh.sing.finite()) {
    const double limit = out.coh.sing.T - cfg.solver.delta_stop;
    for (double t : samples)
      if (t > limit + 1e-12)
        throw ConfigError("diagnostics.samples",
                          "sample time " + fmt_g(t) + " exceeds T - delta_stop = " + fmt_g(limit));
  }

  std::vector<TrajectorySample> raw;
  if (cfg.is_product())
    run_product(cfg, setup, samples, out);
  else
    run_calabi(cfg, setup, samples, out, cfg.grid_dumps ? &raw : nullptr);

  const double T = out.coh.sing.T;
  out.fit = fit_exponents(out.records, T, cfg.solver.delta_stop, cfg.solver.t_end,
                          cfg.lambda_floor);

  // auto threshold: ten times the initial eigenvalue magnitude
  out.d_threshold =
      cfg.d_threshold ? *cfg.d_threshold
                      : (out.records.empty() ? 0.0 : 10.0 * std::abs(out.records.front().lambda_min));
  out.verdict = verdicts(out.records, out.coh, out.d_threshold, setup.tol);

  if (out.failure)
    out.exit_code = out.failure->status == Status::Kaehler ? 2 : 6;
  else if (!out.verdict.consistent)
    out.exit_code = 3;

  // ---- artifacts -------------------------------------------------------
  out.out_dir = resolve_out_dir(cfg.out_dir);
  fs::create_directories(out.out_dir);

  if (cfg.write_csv) {
    std::string csv = timeseries_header(cfg) + "\n";
    for (const DiagnosticsRecord& r : out.records) csv += csv_row(r) + "\n";
    out.timeseries_path = out.out_dir + "/timeseries.csv";
    write_text_file(out.timeseries_path, csv);
  }

  if (cfg.grid_dumps && !cfg.is_product()) {
    const std::string pdir = out.out_dir + "/profiles";
    fs::create_directories(pdir);
    const Grid g = cfg.calabi.grid();
    for (std::size_t si = 0; si < raw.size(); ++si) {
      std::string csv = "rho,u,Fp,Fpp\n";
      CalabiProfile p{raw[si].t, g, raw[si].u};
      std::vector<double> Fp, Fpp;
      calabi_metric_fields(cfg.calabi, p, Fp, Fpp);
      for (int i = 0; i < g.N; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        csv += fmt(g.rho(i)) + "," + fmt(p.u[k]) + "," + fmt(Fp[k]) + "," + fmt(Fpp[k]) + "\n";
      }
      char name[64];
      std::snprintf(name, sizeof(name), "profile_%04zu.csv", si);
      write_text_file(pdir + "/" + name, csv);
    }
  }

  json j;
  j["version"] = 1;
  j["scenario"] = cfg.name;
  j["model"] = model_json(cfg);
  j["cohomology"] = coh_json(out.coh, setup);
  j["run"] = {{"backend", out.backend},
              {"status", out.status},
              {"t_stop", out.t_stop},
              {"steps", out.steps},
              {"newton_iters", out.newton_iters},
              {"samples", out.records.size()}};
  if (out.failure)
    j["run"]["failure"] = {{"what", out.failure->what},
                           {"t", out.failure->t},
                           {"grid_index", out.failure->grid_index},
                           {"rho", out.failure->rho}};
  j["fit"] = fit_json(out.fit);
  j["verdicts"] = verdict_json(out.verdict);
  j["exit_code"] = out.exit_code;
  j["outputs"] = {{"timeseries_csv", out.timeseries_path.empty()
                                         ? json(nullptr)
                                         : json(fs::path(out.timeseries_path).filename().string())}};
  out.summary = j;

  if (cfg.write_json) {
    out.summary_path = out.out_dir + "/summary.json";
    write_text_file(out.summary_path, j.dump(2) + "\n");
  }
  return out;
}

namespace {

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '=' ||
            c == '_' || c == '+')
               ? c
               : '_';
  return out;
}

}  // namespace

SweepResult sweep_scenario(const ScenarioConfig& cfg, int jobs) {
  if (jobs < 1) jobs = 1;
  SweepResult res;
  res.scenario = cfg.name;

  // cross product over swept parameters, declaration order outermost-first;
  // no parameters or an empty values list both give an empty grid
  std::vector<std::vector<std::pair<std::string, double>>> points;
  points.emplace_back();
  for (const auto& [param, values] : cfg.sweep) {
    std::vector<std::vector<std::pair<std::string, double>>> next;
    for (const auto& base : points)
      for (double v : values) {
        auto p = base;
        p.emplace_back(param, v);
        next.push_back(std::move(p));
      }
    points.swap(next);
  }
  if (cfg.sweep.empty()) points.clear();

  const std::string base_dir = resolve_out_dir(cfg.out_dir);
  fs::create_directories(base_dir);

  res.points.resize(points.size());
  std::atomic<std::size_t> cursor{0};
  std::mutex mu;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= points.size()) return;
      SweepPoint pt;
      std::string pname = cfg.name;
      for (const auto& [param, v] : points[i]) pname += "_" + sanitize(param + "=" + fmt_g(v));
      pt.name = pname;
      pt.params.assign(points[i].begin(), points[i].end());
      pt.dir = base_dir + "/" + pname;
      try {
        // Re-parse the scenario text, apply the point overrides, and
        // serialize back (dropping the sweep section) for a plain run.
        ConfigMap mm = ConfigMap::parse(cfg.raw_text);
        for (const auto& [param, v] : points[i]) mm.set(param, fmt_g(v, 17));
        mm.set("output.directory", pt.dir);
        std::ostringstream os;
        os << "version = 1\n";
        os << "name = " << pname << "\n";
        for (const char* sec : {"model", "solver", "diagnostics", "output"}) {
          const auto keys = mm.keys_in_section(sec);
          if (keys.empty()) continue;
          os << "[" << sec << "]\n";
          const std::size_t plen = std::string(sec).size() + 1;
          for (const std::string& key : keys)
            os << key.substr(plen) << " = " << mm.require_string(key) << "\n";
        }
        ScenarioConfig point_cfg = parse_scenario_text(os.str(), pname);
        RunResult r = run_scenario(point_cfg);
        pt.exit_code = r.exit_code;
        pt.status = r.exit_code == 0 ? "ok" : r.status != "ok" ? r.status : "verdict-inconsistent";
        pt.summary_path = r.summary_path;
      } catch (const Error& e) {
        pt.status = std::string("failed: ") + e.what();
        pt.exit_code = static_cast<int>(e.status());
      } catch (const std::exception& e) {
        pt.status = std::string("failed: ") + e.what();
        pt.exit_code = static_cast<int>(Status::Internal);
      }
      std::lock_guard<std::mutex> lock(mu);
      res.points[i] = std::move(pt);
    }
  };
  std::vector<std::thread> pool;
  const std::size_t nthreads =
      std::min(static_cast<std::size_t>(jobs), std::max<std::size_t>(points.size(), 1));
  for (std::size_t k = 0; k < nthreads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  json idx;
  idx["version"] = 1;
  idx["scenario"] = cfg.name;
  json jpoints = json::array();
  for (const SweepPoint& pt : res.points) {
    json p;
    p["name"] = pt.name;
    json params;
    for (const auto& [k, v] : pt.params) params[k] = v;
    p["params"] = params;
    p["dir"] = pt.dir;
    p["summary"] = pt.summary_path.empty() ? json(nullptr) : json(pt.summary_path);
    p["status"] = pt.status;
    p["exit_code"] = pt.exit_code;
    jpoints.push_back(p);
    res.exit_code = std::max(res.exit_code, pt.exit_code);
  }
  idx["points"] = jpoints;
  res.index = idx;
  res.index_path = base_dir + "/index.json";
  write_text_file(res.index_path, idx.dump(2) + "\n");
  return res;
}

ReportResult report_summaries(const std::vector<std::string>& paths, const std::string& out_dir) {
  ReportResult res;
  if (paths.empty()) throw InvalidArgument("report: at least one summary required");

  struct Row {
    std::string scenario, T, K, regime, K_fit, lambda_min, verdict, note, path;
    bool verdict_fail = false;
    bool missing = false;
  };
  std::vector<Row> rows;

  std::vector<std::string> expanded;
  for (const std::string& p : paths) {
    std::ifstream in(p);
    if (!in) {
      Row r;
      r.scenario = fs::path(p).filename().string();
      r.note = "missing file";
      r.missing = true;
      r.path = p;
      rows.push_back(r);
      continue;
    }
    json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      Row r;
      r.scenario = fs::path(p).filename().string();
      r.note = std::string("unreadable: ") + e.what();
      r.missing = true;
      r.path = p;
      rows.push_back(r);
      continue;
    }
    if (j.contains("points")) {
      for (const auto& pt : j["points"]) {
        if (pt["summary"].is_null()) {
          Row r;
          r.scenario = pt.value("name", "?");
          r.note = "point failed: " + pt.value("status", "?");
          r.missing = true;
          rows.push_back(r);
        } else {
          expanded.push_back(pt["summary"].get<std::string>());
        }
      }
      continue;
    }
    expanded.push_back(p);
  }

  json digest_rows = json::array();
  for (const std::string& p : expanded) {
    std::ifstream in(p);
    Row r;
    r.path = p;
    if (!in) {
      r.scenario = fs::path(p).filename().string();
      r.note = "missing file";
      r.missing = true;
      rows.push_back(r);
      continue;
    }
    json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      r.scenario = fs::path(p).filename().string();
      r.note = std::string("unreadable: ") + e.what();
      r.missing = true;
      rows.push_back(r);
      continue;
    }
    const json& coh = j["cohomology"];
    r.scenario = j.value("scenario", "?");
    r.T = coh["T"].is_null() ? "inf" : fmt_g(coh["T"].get<double>(), 10);
    r.K = std::to_string(coh["K"].get<int>());
    r.regime = coh.value("regime", "?");
    if (j["fit"].value("skipped", false))
      r.K_fit = "-";
    else
      r.K_fit = fmt_g(j["fit"]["K_fit"].get<double>(), 4);
    r.lambda_min = fmt_g(j["verdicts"]["observables"]["lambda_min_overall"].get<double>(), 6);
    const bool consistent = j["verdicts"]["consistent"].get<bool>();
    const int ec = j.value("exit_code", 0);
    r.verdict = consistent ? "ok" : "FAIL";
    r.verdict_fail = !consistent;
    if (ec == 2) r.note = "kaehler violation";
    rows.push_back(r);

    json d;
    d["scenario"] = r.scenario;
    d["summary"] = p;
    d["T"] = coh["T"];
    d["K"] = coh["K"];
    d["regime"] = r.regime;
    d["fit"] = j["fit"];
    d["lambda_min_overall"] = j["verdicts"]["observables"]["lambda_min_overall"];
    d["verdicts_consistent"] = consistent;
    d["exit_code"] = ec;
    d["timeseries_csv"] = j["outputs"].value("timeseries_csv", json(nullptr));
    digest_rows.push_back(d);
  }

  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof(line), "%-28s %-12s %-3s %-20s %-9s %-13s %-8s %s\n", "scenario",
                "T", "K", "regime", "K_fit", "lambda_min", "verdict", "note");
  os << line;
  os << std::string(110, '-') << "\n";
  for (const Row& r : rows) {
    std::snprintf(line, sizeof(line), "%-28s %-12s %-3s %-20s %-9s %-13s %-8s %s\n",
                  r.scenario.c_str(), r.T.c_str(), r.K.c_str(), r.regime.c_str(), r.K_fit.c_str(),
                  r.lambda_min.c_str(), r.verdict.c_str(), r.note.c_str());
    os << line;
    if (r.missing) res.exit_code = std::max(res.exit_code, 1);
    if (r.verdict_fail) res.exit_code = std::max(res.exit_code, 3);
  }
  res.table = os.str();
  res.digest = {{"version", 1}, {"rows", digest_rows}};

  if (!out_dir.empty()) {
    const std::string dir = resolve_out_dir(out_dir);
    fs::create_directories(dir);
    std::string csv = "scenario,T,K,regime,K_fit,beta_fit,lambda_min_overall,"
                      "verdicts_consistent,exit_code,summary_path,timeseries_csv\n";
    for (const auto& d : digest_rows) {
      const json& fitj = d["fit"];
      const bool skipped = fitj.value("skipped", false);
      csv += d["scenario"].get<std::string>() + ",";
      csv += (d["T"].is_null() ? std::string("inf") : fmt(d["T"].get<double>())) + ",";
      csv += std::to_string(d["K"].get<int>()) + ",";
      csv += d["regime"].get<std::string>() + ",";
      csv += (skipped ? std::string("") : fmt(fitj["K_fit"].get<double>())) + ",";
      csv += (skipped ? std::string("") : fmt(fitj["beta_fit"].get<double>())) + ",";
      csv += fmt(d["lambda_min_overall"].get<double>()) + ",";
      csv += (d["verdicts_consistent"].get<bool>() ? std::string("true") : std::string("false")) + ",";
      csv += std::to_string(d["exit_code"].get<int>()) + ",";
      csv += d["summary"].get<std::string>() + ",";
      csv += (d["timeseries_csv"].is_null() ? std::string("")
                                            : d["timeseries_csv"].get<std::string>()) + "\n";
    }
    res.digest_path = dir + "/digest.csv";
    write_text_file(res.digest_path, csv);
  }
  return res;
}

}  // namespace krf
