#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace krf {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

}  // namespace

ConfigMap ConfigMap::parse(const std::string& text) {
  ConfigMap m;
  std::stringstream ss(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno), "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("line " + std::to_string(lineno), "empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");
    if (!section.empty()) key = section + "." + key;
    if (m.values_.count(key))
      throw ConfigError(key, "duplicate key");
    m.values_[key] = value;
    m.order_.push_back(key);
  }
  return m;
}

bool ConfigMap::has(const std::string& key) const { return values_.count(key) > 0; }

void ConfigMap::set(const std::string& key, const std::string& value) {
  if (!values_.count(key)) order_.push_back(key);
  values_[key] = value;
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
  consumed_[key] = true;
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string ConfigMap::require_string(const std::string& key) const {
  consumed_[key] = true;
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, "required key missing");
  return it->second;
}

double ConfigMap::parse_double(const std::string& key, const std::string& raw) const {
  try {
    std::size_t pos = 0;
    const double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + raw + "'");
  }
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  consumed_[key] = true;
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  return parse_double(key, it->second);
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
  consumed_[key] = true;
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + it->second + "'");
  }
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  consumed_[key] = true;
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::string v = it->second;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError(key, "expected a boolean, got '" + it->second + "'");
}

std::vector<double> ConfigMap::get_double_list(const std::string& key) const {
  consumed_[key] = true;
  auto it = values_.find(key);
  std::vector<double> out;
  if (it == values_.end()) return out;
  for (const std::string& tok : split_list(it->second)) out.push_back(parse_double(key, tok));
  return out;
}

std::vector<std::string> ConfigMap::keys_in_section(const std::string& section) const {
  std::vector<std::string> out;
  const std::string prefix = section + ".";
  for (const std::string& k : order_)
    if (k.rfind(prefix, 0) == 0) out.push_back(k);
  return out;
}

std::vector<std::string> ConfigMap::unconsumed() const {
  std::vector<std::string> out;
  for (const std::string& k : order_)
    if (!consumed_.count(k)) out.push_back(k);
  return out;
}

namespace {

ProductModel parse_factors(const std::string& key, const std::string& raw) {
  ProductModel m;
  for (const std::string& tok : split_list(raw)) {
    const std::size_t colon = tok.find(':');
    if (colon == std::string::npos)
      throw ConfigError(key, "factor '" + tok + "' must look like kind:coefficient");
    const std::string kind = trim(tok.substr(0, colon));
    const std::string coeff = trim(tok.substr(colon + 1));
    Factor f;
    if (kind == "p1")
      f.kind = FactorKind::P1;
    else if (kind == "torus")
      f.kind = FactorKind::Torus;
    else if (kind == "genus2")
      f.kind = FactorKind::Genus2;
    else
      throw ConfigError(key, "unknown factor kind '" + kind + "' (p1 | torus | genus2)");
    try {
      f.c0 = std::stod(coeff);
    } catch (const std::exception&) {
      throw ConfigError(key, "bad coefficient '" + coeff + "'");
    }
    m.factors.push_back(f);
  }
  return m;
}

}  // namespace

ScenarioConfig parse_scenario_text(const std::string& text, const std::string& name_hint) {
  ConfigMap m = ConfigMap::parse(text);
  ScenarioConfig cfg;
  cfg.raw_text = text;

  cfg.version = m.get_int("version", 1);
  if (cfg.version != 1) throw ConfigError("version", "unsupported schema version");
  cfg.name = m.get_string("name", name_hint);
  if (cfg.name.empty()) throw ConfigError("name", "scenario name required");

  const std::string type = m.require_string("model.type");
  if (type == "product") {
    cfg.model_type = ScenarioConfig::ModelType::Product;
    cfg.product = parse_factors("model.factors", m.require_string("model.factors"));
    cfg.product.validate();
  } else if (type == "calabi") {
    cfg.model_type = ScenarioConfig::ModelType::Calabi;
    cfg.calabi.a = m.get_double("model.a", cfg.calabi.a);
    cfg.calabi.b = m.get_double("model.b", cfg.calabi.b);
    cfg.calabi.L = m.get_double("model.grid_half_width", cfg.calabi.L);
    cfg.calabi.N = m.get_int("model.grid_points", cfg.calabi.N);
    cfg.calabi.validate();
  } else {
    throw ConfigError("model.type", "must be 'product' or 'calabi', got '" + type + "'");
  }

  // The product backend is exact, so it can run much closer to the singular
  // time than the PDE.
  cfg.solver.delta_stop = cfg.is_product() ? 1e-8 : 1e-3;
  cfg.solver.dt = m.get_double("solver.dt", cfg.solver.dt);
  cfg.solver.delta_stop = m.get_double("solver.delta_stop", cfg.solver.delta_stop);
  cfg.solver.t_end = m.get_double("solver.t_end", cfg.solver.t_end);
  cfg.solver.newton_tol = m.get_double("solver.newton_tol", cfg.solver.newton_tol);
  cfg.solver.newton_max_iters = m.get_int("solver.newton_max_iters", cfg.solver.newton_max_iters);
  cfg.solver.kaehler_floor = m.get_double("solver.kaehler_floor", cfg.solver.kaehler_floor);
  const std::string scheme = m.get_string("solver.scheme", "implicit");
  if (scheme == "implicit")
    cfg.solver.scheme = SolverConfig::Scheme::Implicit;
  else if (scheme == "explicit")
    cfg.solver.scheme = SolverConfig::Scheme::Explicit;
  else
    throw ConfigError("solver.scheme", "must be 'implicit' or 'explicit'");
  cfg.solver.validate();

  if (m.has("diagnostics.alphas")) {
    cfg.alphas = m.get_double_list("diagnostics.alphas");
    if (cfg.alphas.empty()) throw ConfigError("diagnostics.alphas", "list must be nonempty");
    for (double a : cfg.alphas)
      if (!(a > 0.0 && a <= 1.0)) throw ConfigError("diagnostics.alphas", "values must lie in (0, 1]");
  }
  const std::string dthr = m.get_string("diagnostics.d_threshold", "auto");
  if (dthr != "auto") {
    try {
      std::size_t pos = 0;
      cfg.d_threshold = std::stod(dthr, &pos);
      if (pos != dthr.size()) throw std::invalid_argument(dthr);
    } catch (const std::exception&) {
      throw ConfigError("diagnostics.d_threshold", "must be a number or 'auto'");
    }
    if (!(*cfg.d_threshold >= 0.0))
      throw ConfigError("diagnostics.d_threshold", "must be >= 0 or 'auto'");
  }
  cfg.lambda_floor = m.get_double("diagnostics.lambda_floor", cfg.lambda_floor);
  if (!(cfg.lambda_floor < 0.0))
    throw ConfigError("diagnostics.lambda_floor", "must be negative");
  const std::string samples = m.get_string("diagnostics.samples", "auto");
  if (samples != "auto") {
    std::vector<double> ts = m.get_double_list("diagnostics.samples");
    if (ts.empty()) throw ConfigError("diagnostics.samples", "list must be nonempty or 'auto'");
    for (std::size_t i = 0; i + 1 < ts.size(); ++i)
      if (!(ts[i] < ts[i + 1]))
        throw ConfigError("diagnostics.samples", "times must be strictly increasing");
    if (ts.front() < 0.0) throw ConfigError("diagnostics.samples", "times must be >= 0");
    cfg.samples = ts;
  }

  cfg.out_dir = m.get_string("output.directory", "out/" + cfg.name);
  if (m.has("output.formats")) {
    cfg.write_csv = cfg.write_json = false;
    for (const std::string& f : split_list(m.get_string("output.formats", ""))) {
      if (f == "csv")
        cfg.write_csv = true;
      else if (f == "json")
        cfg.write_json = true;
      else
        throw ConfigError("output.formats", "unknown format '" + f + "' (csv | json)");
    }
  }
  cfg.grid_dumps = m.get_bool("output.grid_dumps", false);

  for (const std::string& key : m.keys_in_section("sweep")) {
    const std::string param = key.substr(std::string("sweep.").size());
    std::vector<double> values = m.get_double_list(key);
    cfg.sweep.emplace_back(param, std::move(values));
  }

  const std::vector<std::string> unknown = m.unconsumed();
  if (!unknown.empty()) throw ConfigError(unknown.front(), "unknown key");
  return cfg;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open configuration file");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string hint = std::filesystem::path(path).stem().string();
  return parse_scenario_text(ss.str(), hint);
}

namespace {

struct Builtin {
  std::string name;
  std::string text;
};

const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> list = {
      {"p1p1-collapse",
       "version = 1\n"
       "name = p1p1-collapse\n"
       "[model]\n"
       "type = product\n"
       "factors = p1:1, p1:2\n"
       "[output]\n"
       "directory = out/p1p1-collapse\n"},
      {"p1p1-fano",
       "version = 1\n"
       "name = p1p1-fano\n"
       "[model]\n"
       "type = product\n"
       "factors = p1:1, p1:1\n"
       "[output]\n"
       "directory = out/p1p1-fano\n"},
      {"f1-contract",
       "version = 1\n"
       "name = f1-contract\n"
       "[model]\n"
       "type = calabi\n"
       "a = 1\n"
       "b = 4\n"
       "[output]\n"
       "directory = out/f1-contract\n"},
      {"f1-fiber",
       "version = 1\n"
       "name = f1-fiber\n"
       "[model]\n"
       "type = calabi\n"
       "a = 2\n"
       "b = 5\n"
       "[output]\n"
       "directory = out/f1-fiber\n"},
      {"sigma2xT2",
       "version = 1\n"
       "name = sigma2xT2\n"
       "[model]\n"
       "type = product\n"
       "factors = genus2:3, torus:1\n"
       "[output]\n"
       "directory = out/sigma2xT2\n"},
      {"torusxtorus",
       "version = 1\n"
       "name = torusxtorus\n"
       "[model]\n"
       "type = product\n"
       "factors = torus:1, torus:1\n"
       "[output]\n"
       "directory = out/torusxtorus\n"},
      {"sigma2xsigma2",
       "version = 1\n"
       "name = sigma2xsigma2\n"
       "[model]\n"
       "type = product\n"
       "factors = genus2:3, genus2:3\n"
       "[output]\n"
       "directory = out/sigma2xsigma2\n"},
  };
  return list;
}

}  // namespace

const std::vector<std::string>& builtin_scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const Builtin& b : builtins()) n.push_back(b.name);
    return n;
  }();
  return names;
}

const std::string& builtin_scenario_text(const std::string& name) {
  for (const Builtin& b : builtins())
    if (b.name == name) return b.text;
  throw ConfigError("scenario", "unknown bundled scenario '" + name + "'");
}

ScenarioConfig builtin_scenario(const std::string& name) {
  return parse_scenario_text(builtin_scenario_text(name), name);
}

std::string resolve_out_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  if (p.is_absolute()) return p.string();
  if (const char* root = std::getenv("KRFLAB_OUT_ROOT"); root && *root)
    return (std::filesystem::path(root) / p).string();
  return p.string();
}

}  // namespace krf
