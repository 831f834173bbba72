#include "collapseloc/scenarios.hpp"

#include <numbers>
#include <stdexcept>

#include "collapseloc/design.hpp"

namespace collapseloc {

namespace {

constexpr double kGrwReferenceTau = 2e-4; // s

ExperimentConfig salart(const PhysicalConstants& k) {
  const double half = 0.5 * salart_separation(k);
  const Eigen::Vector3d centre(k.earth_radius(), 0, 0);
  const Eigen::Vector3d left = centre - Eigen::Vector3d(0, half, 0);
  const Eigen::Vector3d right = centre + Eigen::Vector3d(0, half, 0);
  // Photons reach both analyzers through fibre at ~2c/3.
  const double arrival = half / (2.0 * k.c / 3.0);

  ExperimentConfig c;
  c.constants = k;
  c.source_event = {0.0, centre};
  const DeviceObserver piezo{salart_apparatus(k)};
  c.wing_L = {{arrival, left}, 0.0, left, 0.0, piezo};
  c.wing_R = {{arrival, right}, 0.0, right, 0.0, piezo};
  return c;
}

ExperimentConfig antipodal(const PhysicalConstants& k) {
  const GeoPoint home{0.0, 0.0, 0.0};
  const GeoPoint antipode{0.0, std::numbers::pi, 0.0};
  const Eigen::Vector3d src = geo_to_position(home, k);
  const Eigen::Vector3d offset(0, 5.0, 0); // detectors 10 m apart

  ExperimentConfig c;
  c.constants = k;
  c.source_event = {0.0, src};
  const DeviceObserver piezo{salart_apparatus(k)};
  c.wing_L = {{1e-6, src - offset}, 0.060, home, 0.0, piezo};
  c.wing_R = {{1e-6, src + offset}, 0.060, antipode, 0.0, piezo};
  return apply_sync(c);
}

ExperimentConfig space_human(const ScenarioParams& p, const PhysicalConstants& k) {
  if (!(p.observer_altitude >= 0)) throw std::invalid_argument("observer altitude must be >= 0");
  if (!(p.perception_time > 0)) throw std::invalid_argument("perception time must be > 0");
  const GeoPoint ground{0.0, 0.0, 0.0};
  const GeoPoint orbit{0.0, std::numbers::pi, p.observer_altitude};
  const Eigen::Vector3d src = geo_to_position(ground, k);
  const Eigen::Vector3d offset(0, 5.0, 0);
  const HumanObserver human{p.perception_time};

  ExperimentConfig c;
  c.constants = k;
  c.source_event = {0.0, src};
  // Local fibre to the ground observer; radio uplink to the orbiting one.
  const double uplink = light_time(chord_distance(ground, orbit, k), k) + 0.01;
  c.wing_L = {{1e-6, src - offset}, 1e-3, ground, 0.0, human};
  c.wing_R = {{1e-6, src + offset}, uplink, orbit, 0.0, human};
  return apply_sync(c);
}

} // namespace

const std::array<ScenarioId, 3>& all_scenarios() {
  static const std::array<ScenarioId, 3> ids{ScenarioId::Salart2008, ScenarioId::AntipodalTerrestrial,
                                             ScenarioId::SpaceHuman};
  return ids;
}

std::string_view scenario_name(ScenarioId id) {
  switch (id) {
    case ScenarioId::Salart2008: return "salart2008";
    case ScenarioId::AntipodalTerrestrial: return "antipodal_terrestrial";
    case ScenarioId::SpaceHuman: return "space_human";
  }
  return "unknown";
}

std::optional<ScenarioId> scenario_from_name(std::string_view name) {
  for (ScenarioId id : all_scenarios()) {
    if (scenario_name(id) == name) return id;
  }
  return std::nullopt;
}

std::string_view scenario_description(ScenarioId id) {
  switch (id) {
    case ScenarioId::Salart2008:
      return "tabletop Bell test with piezo-driven mirrors at each analyzer, wings 60 us x c apart";
    case ScenarioId::AntipodalTerrestrial:
      return "adjacent detectors, outcomes sent by 60 ms links to synchronized piezo amplifiers at antipodes";
    case ScenarioId::SpaceHuman:
      return "adjacent detectors, outcomes shown to a ground observer and to an orbiting observer above the antipode";
  }
  return "";
}

std::string_view default_model(ScenarioId) { return "dp-diosi"; }

double salart_separation(const PhysicalConstants& k) { return 60e-6 * k.c; }

ApparatusSpec salart_apparatus(const PhysicalConstants& k) {
  ApparatusSpec s;
  s.mirror_mass = 2e-6;
  s.mirror_dims = Eigen::Vector3d(3e-3, 2e-3, 1.5e-4);
  s.displacement_d = 12.6e-9;
  s.displacement_axis = Axis::Thickness;
  s.actuation_time = 6e-6;
  const CollapseParams grw = model_preset("grw-standard").params;
  const double system_nucleons = 16 * grw.length_a * grw.length_a /
                                 (grw.rate_lambda * kGrwReferenceTau * s.displacement_d * s.displacement_d);
  s.attached_mass = system_nucleons * k.nucleon_mass - s.mirror_mass;
  return s;
}

ExperimentConfig build_scenario(ScenarioId id, const ScenarioParams& params, const PhysicalConstants& k) {
  validate(k);
  switch (id) {
    case ScenarioId::Salart2008: return salart(k);
    case ScenarioId::AntipodalTerrestrial: return antipodal(k);
    case ScenarioId::SpaceHuman: return space_human(params, k);
  }
  throw std::logic_error("unhandled scenario");
}

} // namespace collapseloc
