#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "collapseloc/config.hpp"
#include "collapseloc/design.hpp"

namespace collapseloc {

inline constexpr const char* kToolVersion = COLLAPSELOC_VERSION;

struct ModelReport {
  std::string model;
  std::optional<LoopholeVerdict> verdict; // empty when the model failed
  std::optional<double> margin_factor;    // only for closed essential verdicts
  std::optional<Discrimination> discrimination;
  std::string error;
};

struct Provenance {
  std::string input_hash; // FNV-1a 64 of the expanded config, hex
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
};

struct SimulationSummary {
  std::string model;
  Engine engine = Engine::CausalCollapse;
  ChshResult chsh;
  std::uint64_t spacelike_count = 0;
};

struct Report {
  std::string subject; // scenario name or "custom"
  std::vector<ModelReport> models;
  double max_collapse_window = 0; // s
  std::pair<double, double> sync_delays{0, 0};
  bool inputs_simultaneous = true;
  std::vector<std::string> notes;
  std::optional<SimulationSummary> simulation;
  Provenance provenance;

  bool any_model_failed() const;
};

std::string fnv1a_hex(std::string_view bytes);

/// Verdicts, margins and notes for every model in the document.
Report analyze(const ConfigDocument& doc);

nlohmann::json report_to_json(const Report& r);

/// Canonical JSON: sorted keys, floats as %.5e, newline-terminated.
std::string emit_report(const Report& r);
std::string canonical_json(const nlohmann::json& j);

} // namespace collapseloc
