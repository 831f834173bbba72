#pragma once

#include <string>
#include <utility>

#include "collapseloc/experiment.hpp"

namespace collapseloc {

struct LoopholeVerdict {
  std::string model;
  bool essential_closed = false;
  bool extended_closed = false;
  double essential_margin = 0; // s
  double extended_margin = 0;  // s
  std::pair<StationWindow, StationWindow> collapse_windows;
  std::pair<double, double> tau_values; // s
};

/// R_X: from the amplifier input to input + lead + safety_k * tau.
StationWindow collapse_window(const WingSpec& w, const CollapseModel& model,
                              const PhysicalConstants& k, const AnalysisOptions& opts = {});

/// Essential: R_L vs R_R. Extended: the hull {D_X} u R_X on each wing, checked
/// pairwise, so a detector event in the other wing's collapse past opens it.
LoopholeVerdict verdict(const ExperimentConfig& config, const CollapseModel& model,
                        const AnalysisOptions& opts = {});

/// Largest T such that windows of length T starting at both amplifier inputs
/// stay spacelike: D/c - |dt|, floored at 0.
double max_collapse_window(const ExperimentConfig& config);

/// Non-negative delays (L, R) that make the amplifier inputs simultaneous.
std::pair<double, double> sync_delays(const ExperimentConfig& config);
ExperimentConfig apply_sync(ExperimentConfig config);

bool inputs_simultaneous(const ExperimentConfig& config, double tolerance);

/// Largest factor on both collapse windows that keeps the essential verdict
/// closed. Throws std::domain_error when the verdict is already open.
double margin_factor(const ExperimentConfig& config, const CollapseModel& model,
                     const AnalysisOptions& opts = {});

/// max_collapse_window(a) / max_collapse_window(b)
double improvement_factor(const ExperimentConfig& a, const ExperimentConfig& b);

/// Altitude above the antipode of a ground observer at which the pair is
/// separated by c * perception_time.
double required_altitude(double perception_time, const PhysicalConstants& k = {});

struct Discrimination {
  bool essential_closed = false;
  double predicted_s_qm = 0;
  double predicted_s_causal = 0;
  double gap = 0;

  bool discriminates() const { return gap > 0; }
};

Discrimination discriminates(const ExperimentConfig& config, const CollapseModel& model,
                             const AnalysisOptions& opts = {});

} // namespace collapseloc
