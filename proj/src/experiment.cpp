#include "collapseloc/experiment.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace collapseloc {

namespace {

void validate_wing(const WingSpec& w, const SpacetimeEvent& source, const PhysicalConstants& k,
                   const char* name) {
  const std::string prefix = std::string("wing ") + name + ": ";
  if (!(w.channel_delay >= 0) || !(w.added_sync_delay >= 0)) {
    throw std::invalid_argument(prefix + "delays must be >= 0");
  }
  if (!std::isfinite(w.detector_event.t) || !w.detector_event.pos.allFinite()) {
    throw std::invalid_argument(prefix + "detector event must be finite");
  }
  if (const auto* geo = std::get_if<GeoPoint>(&w.amplifier_site)) {
    validate(*geo);
  } else if (!std::get<Eigen::Vector3d>(w.amplifier_site).allFinite()) {
    throw std::invalid_argument(prefix + "amplifier position must be finite");
  }
  if (const auto* human = std::get_if<HumanObserver>(&w.observer)) {
    if (!(human->perception_time > 0) || !std::isfinite(human->perception_time)) {
      throw std::invalid_argument(prefix + "perception time must be > 0");
    }
  } else {
    validate(std::get<DeviceObserver>(w.observer).apparatus);
  }
  const CausalClass cls = causal_class(source, w.detector_event, k);
  const bool in_future = cls.separation != Separation::Spacelike &&
                         cls.ordering != Ordering::SecondEarlier;
  if (!in_future) {
    throw std::invalid_argument(prefix + "detector event is outside the source's future light cone");
  }
}

} // namespace

void validate(const ExperimentConfig& config) {
  validate(config.constants);
  validate(config.settings);
  validate_wing(config.wing_L, config.source_event, config.constants, "L");
  validate_wing(config.wing_R, config.source_event, config.constants, "R");
}

Eigen::Vector3d site_position(const Site& site, const PhysicalConstants& k) {
  if (const auto* geo = std::get_if<GeoPoint>(&site)) return geo_to_position(*geo, k);
  return std::get<Eigen::Vector3d>(site);
}

SpacetimeEvent amplifier_input_event(const WingSpec& w, const PhysicalConstants& k) {
  return {w.detector_event.t + w.channel_delay + w.added_sync_delay, site_position(w.amplifier_site, k)};
}

WingCollapseProfile wing_collapse_profile(const WingSpec& w, const CollapseModel& model,
                                          const PhysicalConstants& k, const AnalysisOptions& opts) {
  WingCollapseProfile p;
  p.input = amplifier_input_event(w, k);
  if (const auto* human = std::get_if<HumanObserver>(&w.observer)) {
    p.tau = human->perception_time;
    p.deterministic = true;
    return p;
  }
  const auto& apparatus = std::get<DeviceObserver>(w.observer).apparatus;
  const CollapseEstimate est = apparatus_tau(apparatus, model, k, opts.grw, opts.quadrature);
  if (!est.collapses()) throw ModelError("model predicts no collapse at this apparatus");
  p.lead = apparatus.actuation_time;
  p.tau = est.tau;
  return p;
}

} // namespace collapseloc
