#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "collapseloc/scenarios.hpp"
#include "collapseloc/trials.hpp"

namespace collapseloc {

/// Invalid configuration text. `path()` is the offending key path ("" for
/// syntax errors, whose message carries line and column instead).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// A validated, fully expanded scenario/experiment description. All numbers
/// are bare SI values; key names carry the unit.
struct ConfigDocument {
  std::optional<ScenarioId> scenario;
  ScenarioParams scenario_params;
  ExperimentConfig experiment;
  std::vector<CollapseModel> models;
  Engine engine = Engine::CausalCollapse;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  CollapseSampling sampling = CollapseSampling::Exponential;
  AnalysisOptions analysis;

  bool operator==(const ConfigDocument&) const = default;
};

/// Parses UTF-8 JSON text. Throws ConfigError.
ConfigDocument parse_config(std::string_view text);
ConfigDocument parse_config_tree(const nlohmann::json& tree);

/// Syntax check only; throws ConfigError with line/column on failure.
nlohmann::json parse_json_text(std::string_view text);

/// Full-precision expanded form; parse_config(emit_config(d)) == d.
nlohmann::json config_to_json(const ConfigDocument& doc);
std::string emit_config(const ConfigDocument& doc);

ApparatusSpec parse_apparatus(const nlohmann::json& tree, const std::string& path = "apparatus");
nlohmann::json apparatus_to_json(const ApparatusSpec& spec);

CollapseModel parse_model(const nlohmann::json& tree, const std::string& path = "model");

std::string_view to_string(Engine e);

} // namespace collapseloc
