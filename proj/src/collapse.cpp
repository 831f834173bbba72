#include "collapseloc/collapse.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace collapseloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool positive_finite(double x) { return x > 0 && std::isfinite(x); }

// The mirror-pair quadrature is deterministic and comparatively slow, and the
// design layer asks for the same apparatus many times.
double cached_mirror_energy(const ApparatusSpec& spec, const PhysicalConstants& k,
                            const QuadratureOptions& q) {
  using Key = std::array<double, 9>;
  static std::mutex mu;
  static std::map<Key, double> cache;
  const Key key{spec.mirror_dims.x(), spec.mirror_dims.y(), spec.mirror_dims.z(), spec.mirror_mass,
                spec.displacement_d, static_cast<double>(spec.displacement_axis), k.G,
                static_cast<double>(q.order) + 1e3 * q.refinement, static_cast<double>(q.grading_levels)};
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const auto [rest, moved] = mirror_branches(spec);
  const double energy = dp_self_energy(rest, moved, k, q);
  std::lock_guard lock(mu);
  cache.emplace(key, energy);
  return energy;
}

} // namespace

void validate(const CollapseParams& p) {
  if (!positive_finite(p.rate_lambda) || !positive_finite(p.length_a)) {
    throw std::invalid_argument("collapse parameters lambda and a must be strictly positive");
  }
}

std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::Length: return "length";
    case Axis::Width: return "width";
    case Axis::Thickness: return "thickness";
  }
  return "unknown";
}

Axis axis_from_string(std::string_view s) {
  if (s == "length") return Axis::Length;
  if (s == "width") return Axis::Width;
  if (s == "thickness") return Axis::Thickness;
  throw std::invalid_argument("unknown displacement axis '" + std::string(s) + "'");
}

void validate(const ApparatusSpec& s) {
  if (!(s.mirror_mass >= 0 && s.attached_mass >= 0)) {
    throw std::invalid_argument("apparatus masses must be >= 0");
  }
  if (!(s.mirror_dims.array() > 0).all() || !s.mirror_dims.allFinite()) {
    throw std::invalid_argument("mirror dimensions must be > 0");
  }
  if (!(s.displacement_d >= 0) || !(s.actuation_time >= 0)) {
    throw std::invalid_argument("displacement and actuation time must be >= 0");
  }
}

void validate(const MassDistribution& m) {
  if (!positive_finite(m.total_mass)) throw std::invalid_argument("mass distribution needs total_mass > 0");
  if (!(m.dims.array() > 0).all() || !m.dims.allFinite()) {
    throw std::invalid_argument("mass distribution needs dims > 0");
  }
  if (!m.offset.allFinite()) throw std::invalid_argument("mass distribution offset must be finite");
}

std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Csl: return "CSL";
    case ModelKind::Grw: return "GRW";
    case ModelKind::DpDiosi: return "DP-Diosi";
    case ModelKind::DpPenrose: return "DP-Penrose";
  }
  return "unknown";
}

const std::array<std::string_view, 5>& model_preset_names() {
  static const std::array<std::string_view, 5> names{"csl-standard", "csl-low", "grw-standard",
                                                     "dp-diosi", "dp-penrose"};
  return names;
}

CollapseModel model_preset(std::string_view name) {
  if (name == "csl-standard") return {std::string(name), ModelKind::Csl, {1e-16, 1e-7}};
  if (name == "csl-low") return {std::string(name), ModelKind::Csl, {1e-19, 1e-7}};
  if (name == "grw-standard") return {std::string(name), ModelKind::Grw, {1e-16, 1e-7}};
  if (name == "dp-diosi") return {std::string(name), ModelKind::DpDiosi, {}};
  if (name == "dp-penrose") return {std::string(name), ModelKind::DpPenrose, {}};
  throw std::invalid_argument("unknown collapse model '" + std::string(name) + "'");
}

double nucleon_count(double mass, const PhysicalConstants& k) {
  if (!(mass >= 0)) throw std::invalid_argument("nucleon_count requires mass >= 0");
  return mass / k.nucleon_mass;
}

double sliver_nucleons(const ApparatusSpec& spec, const PhysicalConstants& k) {
  const double total = nucleon_count(spec.mirror_mass, k);
  const double dim = spec.axis_dim();
  if (spec.displacement_d >= dim) return total;
  return total * spec.displacement_d / dim;
}

CollapseEstimate csl_tau(const CollapseParams& p, double n_sliver, double area) {
  validate(p);
  if (!(n_sliver >= 0) || !positive_finite(area)) {
    throw std::invalid_argument("csl_tau requires N >= 0 and A > 0");
  }
  if (n_sliver == 0) return {kInf, ModelKind::Csl};
  const double a2 = p.length_a * p.length_a;
  return {area / (4 * std::numbers::pi * p.rate_lambda * a2 * n_sliver * n_sliver), ModelKind::Csl};
}

CollapseEstimate grw_tau(const CollapseParams& p, double n_total, double displacement_d) {
  validate(p);
  if (!(n_total >= 0) || !(displacement_d >= 0)) {
    throw std::invalid_argument("grw_tau requires N >= 0 and d >= 0");
  }
  if (n_total == 0 || displacement_d == 0) return {kInf, ModelKind::Grw};
  const double a2 = p.length_a * p.length_a;
  return {16 * a2 / (p.rate_lambda * n_total * displacement_d * displacement_d), ModelKind::Grw};
}

std::pair<double, double> grw_effective_displacement(const ApparatusSpec& spec) {
  return {spec.displacement_d, 0.5 * spec.displacement_d};
}

CollapseEstimate dp_tau(const MassDistribution& m1, const MassDistribution& m2, ModelKind variant,
                        const PhysicalConstants& k, const QuadratureOptions& q) {
  if (variant != ModelKind::DpDiosi && variant != ModelKind::DpPenrose) {
    throw std::invalid_argument("dp_tau variant must be DP-Diosi or DP-Penrose");
  }
  const double energy = dp_self_energy(m1, m2, k, q);
  if (energy <= 0) return {kInf, variant};
  const double tau = k.hbar / energy;
  return {variant == ModelKind::DpPenrose ? 0.5 * tau : tau, variant};
}

std::pair<MassDistribution, MassDistribution> mirror_branches(const ApparatusSpec& spec) {
  MassDistribution rest{spec.mirror_dims, spec.mirror_mass, Eigen::Vector3d::Zero()};
  MassDistribution moved = rest;
  moved.offset[static_cast<int>(spec.displacement_axis)] = spec.displacement_d;
  return {rest, moved};
}

CollapseEstimate apparatus_tau(const ApparatusSpec& spec, const CollapseModel& model,
                               const PhysicalConstants& k, GrwDisplacement grw,
                               const QuadratureOptions& q) {
  validate(spec);
  switch (model.kind) {
    case ModelKind::Csl:
      return csl_tau(model.params, sliver_nucleons(spec, k), spec.face_area());
    case ModelKind::Grw: {
      const auto [full, half] = grw_effective_displacement(spec);
      return grw_tau(model.params, nucleon_count(spec.mirror_mass + spec.attached_mass, k),
                     grw == GrwDisplacement::Full ? full : half);
    }
    case ModelKind::DpDiosi:
    case ModelKind::DpPenrose: {
      if (spec.mirror_mass <= 0 || spec.displacement_d <= 0) return {kInf, model.kind};
      const double energy = cached_mirror_energy(spec, k, q);
      if (energy <= 0) return {kInf, model.kind};
      const double tau = k.hbar / energy;
      return {model.kind == ModelKind::DpPenrose ? 0.5 * tau : tau, model.kind};
    }
  }
  throw std::logic_error("unhandled collapse model kind");
}

} // namespace collapseloc
