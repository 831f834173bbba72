#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "collapseloc/experiment.hpp"

namespace collapseloc {

enum class ScenarioId { Salart2008, AntipodalTerrestrial, SpaceHuman };

/// Knobs for the parameterized library scenarios.
struct ScenarioParams {
  double observer_altitude = 2.0e7; // m, space_human only
  double perception_time = 0.1;     // s, space_human only

  bool operator==(const ScenarioParams&) const = default;
};

const std::array<ScenarioId, 3>& all_scenarios();
std::string_view scenario_name(ScenarioId id);
std::optional<ScenarioId> scenario_from_name(std::string_view name);
std::string_view scenario_description(ScenarioId id);

/// Model used when a scenario is requested without one.
std::string_view default_model(ScenarioId id);

/// Piezo-driven 2 mg mirror: 3 x 2 x 0.15 mm, displaced 12.6 nm across its
/// thickness within 6 us. The piezo mass is set so the full system holds the
/// nucleon count implied by a 2e-4 s GRW collapse time at lambda = 1e-16 /s,
/// a = 1e-7 m.
ApparatusSpec salart_apparatus(const PhysicalConstants& k = {});

/// Wing separation of the tabletop layout: 60 us of light travel.
double salart_separation(const PhysicalConstants& k = {});

ExperimentConfig build_scenario(ScenarioId id, const ScenarioParams& params = {},
                                const PhysicalConstants& k = {});

} // namespace collapseloc
