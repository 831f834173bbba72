#pragma once

#include <array>
#include <numbers>
#include <span>

#include "collapseloc/spacetime.hpp"

namespace collapseloc {

/// Two analyzer angles per wing; each trial picks one per wing uniformly.
struct SettingsSpec {
  std::array<double, 2> angles_L{0.0, std::numbers::pi / 2};
  std::array<double, 2> angles_R{std::numbers::pi / 4, 3 * std::numbers::pi / 4};

  bool operator==(const SettingsSpec&) const = default;
};

void validate(const SettingsSpec& s);

enum class Wing { L, R };

struct HiddenVariable {
  double value = 0; // rad, uniform on [0, 2 pi)
};

/// Which correlation law a closed form refers to.
enum class CorrelationModel { Qm, LhvSpacelike };

/// |theta_a - theta_b| folded into [0, pi].
double fold_angle(double delta);

/// Singlet joint probability P(a, b) = (1 - a b cos delta) / 4.
double qm_joint_prob(double delta, int a, int b);

/// Sign model: L gives sign(cos(theta - lambda)), R the opposite; sign(0) = +1.
int lhv_outcome(HiddenVariable lambda, double theta, Wing wing);

/// E(delta) with delta folded into [0, pi]: -cos(delta) or 2 delta / pi - 1.
double correlation_closed_form(CorrelationModel model, double delta);

/// S = E(1,1) - E(1,2) + E(2,1) + E(2,2), signed.
double chsh_signed_closed_form(CorrelationModel model, const SettingsSpec& s);
/// |S|
double chsh_closed_form(CorrelationModel model, const SettingsSpec& s);

/// Chance that any local hidden variable model (memory included) scores a
/// CHSH game value of at least `s_hat` over n uniformly-set trials.
double azuma_p_bound(double s_hat, double n);

} // namespace collapseloc
