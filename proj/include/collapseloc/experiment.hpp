#pragma once

#include <variant>

#include <Eigen/Core>

#include "collapseloc/bell.hpp"
#include "collapseloc/collapse.hpp"
#include "collapseloc/spacetime.hpp"

namespace collapseloc {

/// Mass-displacing amplifier.
struct DeviceObserver {
  ApparatusSpec apparatus;
  bool operator==(const DeviceObserver&) const = default;
};

/// Human observer; collapse is complete by the end of perception.
struct HumanObserver {
  double perception_time = 0.1; // s
  bool operator==(const HumanObserver&) const = default;
};

using Observer = std::variant<DeviceObserver, HumanObserver>;
using Site = std::variant<Eigen::Vector3d, GeoPoint>;

/// One wing of the layout: detector D_X, channel C_X (a pure delay),
/// amplifier A_X and whatever observes it.
struct WingSpec {
  SpacetimeEvent detector_event;
  double channel_delay = 0;    // s
  Site amplifier_site = Eigen::Vector3d::Zero();
  double added_sync_delay = 0; // s
  Observer observer = DeviceObserver{};

  bool operator==(const WingSpec&) const = default;
};

struct ExperimentConfig {
  SpacetimeEvent source_event;
  WingSpec wing_L;
  WingSpec wing_R;
  SettingsSpec settings;
  PhysicalConstants constants;

  const WingSpec& wing(Wing w) const { return w == Wing::L ? wing_L : wing_R; }
  WingSpec& wing(Wing w) { return w == Wing::L ? wing_L : wing_R; }

  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws std::invalid_argument on negative delays, bad perception times, or
/// detector events outside the source's future light cone.
void validate(const ExperimentConfig& config);

struct AnalysisOptions {
  double safety_k = 1.0;
  GrwDisplacement grw = GrwDisplacement::Full;
  QuadratureOptions quadrature;
  double simultaneity_tolerance = 1e-6; // s

  bool operator==(const AnalysisOptions& o) const {
    return safety_k == o.safety_k && grw == o.grw && quadrature.order == o.quadrature.order &&
           quadrature.refinement == o.quadrature.refinement &&
           quadrature.grading_levels == o.quadrature.grading_levels &&
           simultaneity_tolerance == o.simultaneity_tolerance;
  }
};

Eigen::Vector3d site_position(const Site& site, const PhysicalConstants& k);

/// Detector time plus channel and sync delays, at the amplifier.
SpacetimeEvent amplifier_input_event(const WingSpec& w, const PhysicalConstants& k = {});

/// When and how a wing's collapse happens after its amplifier input: a fixed
/// lead (actuation) followed by a collapse time of mean `tau`.
struct WingCollapseProfile {
  SpacetimeEvent input;
  double lead = 0;           // s
  double tau = 0;            // s
  bool deterministic = false; // human observers collapse exactly at lead + tau
};

WingCollapseProfile wing_collapse_profile(const WingSpec& w, const CollapseModel& model,
                                          const PhysicalConstants& k,
                                          const AnalysisOptions& opts = {});

} // namespace collapseloc
