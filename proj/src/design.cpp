#include "collapseloc/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace collapseloc {

namespace {

struct WindowPlan {
  SpacetimeEvent input;
  double length; // lead + k tau
  double tau;
};

WindowPlan plan(const WingSpec& w, const CollapseModel& model, const PhysicalConstants& k,
                const AnalysisOptions& opts) {
  if (!(opts.safety_k >= 0)) throw std::invalid_argument("safety_k must be >= 0");
  const auto profile = wing_collapse_profile(w, model, k, opts);
  return {profile.input, profile.lead + opts.safety_k * profile.tau, profile.tau};
}

StationWindow window_of(const WindowPlan& p) {
  return make_window(p.input.pos, p.input.t, p.input.t + p.length);
}

StationWindow instant(const SpacetimeEvent& e) { return make_window(e.pos, e.t, e.t); }

} // namespace

StationWindow collapse_window(const WingSpec& w, const CollapseModel& model,
                              const PhysicalConstants& k, const AnalysisOptions& opts) {
  return window_of(plan(w, model, k, opts));
}

LoopholeVerdict verdict(const ExperimentConfig& config, const CollapseModel& model,
                        const AnalysisOptions& opts) {
  const auto& k = config.constants;
  const WindowPlan pl = plan(config.wing_L, model, k, opts);
  const WindowPlan pr = plan(config.wing_R, model, k, opts);

  LoopholeVerdict v;
  v.model = model.name;
  v.collapse_windows = {window_of(pl), window_of(pr)};
  v.tau_values = {pl.tau, pr.tau};

  const auto essential = windows_spacelike(v.collapse_windows.first, v.collapse_windows.second, k);
  v.essential_closed = essential.spacelike;
  v.essential_margin = essential.margin;

  const StationWindow dl = instant(config.wing_L.detector_event);
  const StationWindow dr = instant(config.wing_R.detector_event);
  const std::pair<const StationWindow*, const StationWindow*> pairs[] = {
      {&dl, &dr}, {&dl, &v.collapse_windows.second}, {&v.collapse_windows.first, &dr},
      {&v.collapse_windows.first, &v.collapse_windows.second}};
  v.extended_closed = true;
  v.extended_margin = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : pairs) {
    const auto sep = windows_spacelike(*a, *b, k);
    v.extended_closed = v.extended_closed && sep.spacelike;
    v.extended_margin = std::min(v.extended_margin, sep.margin);
  }
  return v;
}

double max_collapse_window(const ExperimentConfig& config) {
  const auto& k = config.constants;
  const auto l = amplifier_input_event(config.wing_L, k);
  const auto r = amplifier_input_event(config.wing_R, k);
  return std::max(0.0, (l.pos - r.pos).norm() / k.c - std::abs(l.t - r.t));
}

std::pair<double, double> sync_delays(const ExperimentConfig& config) {
  const double tl = amplifier_input_event(config.wing_L, config.constants).t;
  const double tr = amplifier_input_event(config.wing_R, config.constants).t;
  if (tl < tr) return {tr - tl, 0.0};
  return {0.0, tl - tr};
}

ExperimentConfig apply_sync(ExperimentConfig config) {
  const auto [dl, dr] = sync_delays(config);
  config.wing_L.added_sync_delay += dl;
  config.wing_R.added_sync_delay += dr;
  return config;
}

bool inputs_simultaneous(const ExperimentConfig& config, double tolerance) {
  const auto [dl, dr] = sync_delays(config);
  return std::max(dl, dr) <= tolerance;
}

double margin_factor(const ExperimentConfig& config, const CollapseModel& model,
                     const AnalysisOptions& opts) {
  const auto& k = config.constants;
  const WindowPlan pl = plan(config.wing_L, model, k, opts);
  const WindowPlan pr = plan(config.wing_R, model, k, opts);
  if (!windows_spacelike(window_of(pl), window_of(pr), k).spacelike) {
    throw std::domain_error("essential verdict is open; no margin to report");
  }
  const double reach = (pl.input.pos - pr.input.pos).norm() / k.c;
  const double lead = pl.input.t - pr.input.t;
  const double inf = std::numeric_limits<double>::infinity();
  const double ml = pl.length > 0 ? (reach - lead) / pl.length : inf;
  const double mr = pr.length > 0 ? (reach + lead) / pr.length : inf;
  return std::min(ml, mr);
}

double improvement_factor(const ExperimentConfig& a, const ExperimentConfig& b) {
  const double denom = max_collapse_window(b);
  if (denom <= 0) throw std::domain_error("improvement_factor: reference window is zero");
  return max_collapse_window(a) / denom;
}

double required_altitude(double perception_time, const PhysicalConstants& k) {
  if (!(perception_time > 0)) throw std::invalid_argument("perception time must be > 0");
  return std::max(0.0, k.c * perception_time - k.earth_diameter);
}

Discrimination discriminates(const ExperimentConfig& config, const CollapseModel& model,
                             const AnalysisOptions& opts) {
  Discrimination d;
  d.essential_closed = verdict(config, model, opts).essential_closed;
  d.predicted_s_qm = chsh_closed_form(CorrelationModel::Qm, config.settings);
  d.predicted_s_causal = d.essential_closed
                             ? chsh_closed_form(CorrelationModel::LhvSpacelike, config.settings)
                             : d.predicted_s_qm;
  d.gap = d.predicted_s_qm - d.predicted_s_causal;
  return d;
}

} // namespace collapseloc
