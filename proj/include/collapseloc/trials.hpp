#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "collapseloc/experiment.hpp"

namespace collapseloc {

enum class Engine { StandardQm, CausalCollapse };

/// Exponential: collapse after lead + Exp(tau). Deterministic: exactly lead + tau.
enum class CollapseSampling { Exponential, Deterministic };

struct TrialOptions {
  CollapseSampling sampling = CollapseSampling::Exponential;
  AnalysisOptions analysis;
  unsigned threads = 0; // 0 picks hardware concurrency
};

struct TrialRecord {
  int setting_L = 1; // 1 or 2
  int setting_R = 1;
  double angle_L = 0;
  double angle_R = 0;
  int outcome_a = 1;
  int outcome_b = 1;
  SpacetimeEvent collapse_L;
  SpacetimeEvent collapse_R;
  CausalClass causal_class;

  bool operator==(const TrialRecord&) const = default;
};

struct ChshResult {
  double s_hat = 0;                                // E(1,1) - E(1,2) + E(2,1) + E(2,2)
  std::array<std::array<double, 2>, 2> correlations{};
  std::array<std::array<std::uint64_t, 2>, 2> counts{};
  std::uint64_t n = 0;
  double std_err = 0;
  double s_game = 0;  // 4 * mean per-trial score, oriented toward the quantum prediction
  double p_bound = 1; // azuma_p_bound(s_game, n)

  double magnitude() const { return std::abs(s_hat); }
};

std::vector<TrialRecord> run_trials(const ExperimentConfig& config, const CollapseModel& model,
                                    Engine engine, std::uint64_t n, std::uint64_t seed,
                                    const TrialOptions& opts = {});

/// Throws std::invalid_argument naming the first setting pair with no trials.
ChshResult chsh_estimate(std::span<const TrialRecord> records);

/// trial,setL,setR,a,b,tL,xL,yL,zL,tR,xR,yR,zR,class
void write_trial_csv(std::ostream& out, std::span<const TrialRecord> records);

} // namespace collapseloc
