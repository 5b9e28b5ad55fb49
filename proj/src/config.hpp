#pragma once

// Scenario configuration: a flat, sectioned key-value text format with
// explicit types (schema version 1, documented in the README), plus the
// bundled scenario catalog.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "models.hpp"
#include "solver.hpp"

namespace krf {

// Parsed key-value storage with dotted keys ("solver.dt").  Order of first
// appearance is preserved; access is tracked so unknown keys can be
// reported with their field path.
class ConfigMap {
 public:
  static ConfigMap parse(const std::string& text);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;

  std::vector<std::string> keys_in_section(const std::string& section) const;
  // Keys never touched by a getter (schema violations).
  std::vector<std::string> unconsumed() const;

 private:
  double parse_double(const std::string& key, const std::string& raw) const;

  std::map<std::string, std::string> values_;
  std::vector<std::string> order_;
  mutable std::map<std::string, bool> consumed_;
};

struct ScenarioConfig {
  std::string name;
  int version = 1;

  enum class ModelType { Product, Calabi } model_type = ModelType::Calabi;
  ProductModel product;
  CalabiModel calabi;

  SolverConfig solver;

  std::vector<double> alphas{0.25, 0.5, 1.0};
  std::optional<double> d_threshold;  // nullopt: auto, 10 |lambda_min(0)|
  double lambda_floor = -10.0;
  std::optional<std::vector<double>> samples;  // nullopt: auto schedule

  std::string out_dir;
  bool write_csv = true;
  bool write_json = true;
  bool grid_dumps = false;

  // Swept parameters (dotted path -> values); cross product over entries.
  std::vector<std::pair<std::string, std::vector<double>>> sweep;

  std::string raw_text;  // original text, used to derive sweep points

  bool is_product() const { return model_type == ModelType::Product; }
  CohomologySetup setup() const { return is_product() ? product.setup() : calabi.setup(); }
};

ScenarioConfig parse_scenario_text(const std::string& text, const std::string& name_hint);
ScenarioConfig parse_scenario_file(const std::string& path);

// Bundled catalog covering all singularity regimes.
const std::vector<std::string>& builtin_scenario_names();
const std::string& builtin_scenario_text(const std::string& name);
ScenarioConfig builtin_scenario(const std::string& name);

// Output directory resolution: absolute paths win; otherwise the
// KRFLAB_OUT_ROOT environment variable (when set) is the root.
std::string resolve_out_dir(const std::string& dir);

}  // namespace krf
