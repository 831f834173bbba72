#include "collapseloc/bell.hpp"

#include <cmath>
#include <stdexcept>

namespace collapseloc {

void validate(const SettingsSpec& s) {
  for (double a : {s.angles_L[0], s.angles_L[1], s.angles_R[0], s.angles_R[1]}) {
    if (!(a >= 0 && a < 2 * std::numbers::pi)) {
      throw std::invalid_argument("setting angles must lie in [0, 2 pi)");
    }
  }
}

double fold_angle(double delta) {
  double d = std::fmod(std::abs(delta), 2 * std::numbers::pi);
  return d > std::numbers::pi ? 2 * std::numbers::pi - d : d;
}

double qm_joint_prob(double delta, int a, int b) {
  if ((a != 1 && a != -1) || (b != 1 && b != -1)) throw std::invalid_argument("outcomes must be +1 or -1");
  return 0.25 * (1.0 - a * b * std::cos(delta));
}

int lhv_outcome(HiddenVariable lambda, double theta, Wing wing) {
  const int s = std::cos(theta - lambda.value) >= 0 ? 1 : -1;
  return wing == Wing::L ? s : -s;
}

double correlation_closed_form(CorrelationModel model, double delta) {
  const double d = fold_angle(delta);
  switch (model) {
    case CorrelationModel::Qm: return -std::cos(d);
    case CorrelationModel::LhvSpacelike: return 2 * d / std::numbers::pi - 1;
  }
  return 0;
}

double chsh_signed_closed_form(CorrelationModel model, const SettingsSpec& s) {
  auto e = [&](int i, int j) { return correlation_closed_form(model, s.angles_L[i] - s.angles_R[j]); };
  return e(0, 0) - e(0, 1) + e(1, 0) + e(1, 1);
}

double chsh_closed_form(CorrelationModel model, const SettingsSpec& s) {
  return std::abs(chsh_signed_closed_form(model, s));
}

double azuma_p_bound(double s_hat, double n) {
  if (!(s_hat > 2) || !(n > 0)) return 1.0;
  const double excess = s_hat - 2;
  return std::exp(-n * excess * excess / 32);
}

} // namespace collapseloc
