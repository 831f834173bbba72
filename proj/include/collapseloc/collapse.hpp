#pragma once

#include <array>
#include <limits>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Core>

#include "collapseloc/constants.hpp"

namespace collapseloc {

/// Rate and localization length shared by CSL and GRW.
struct CollapseParams {
  double rate_lambda = 1e-16; // 1/s
  double length_a = 1e-7;     // m

  bool operator==(const CollapseParams&) const = default;
};

void validate(const CollapseParams& p);

enum class Axis { Length = 0, Width = 1, Thickness = 2 };

std::string_view to_string(Axis a);
Axis axis_from_string(std::string_view s);

/// Mirror/piezo amplifier geometry. `attached_mass` is everything that moves
/// with the mirror (the piezocrystal); `actuation_time` is how long the
/// apparatus takes to complete the displacement after its input.
struct ApparatusSpec {
  double mirror_mass = 0;                 // kg
  Eigen::Vector3d mirror_dims = Eigen::Vector3d::Ones(); // (length, width, thickness), m
  double displacement_d = 0;              // m
  Axis displacement_axis = Axis::Thickness;
  double attached_mass = 0;               // kg
  double actuation_time = 0;              // s

  double density() const { return mirror_mass / mirror_dims.prod(); }
  double axis_dim() const { return mirror_dims[static_cast<int>(displacement_axis)]; }
  /// Area of the mirror face perpendicular to the displacement.
  double face_area() const { return mirror_dims.prod() / axis_dim(); }

  bool operator==(const ApparatusSpec&) const = default;
};

void validate(const ApparatusSpec& s);

/// Uniform rectangular box of mass `total_mass` centered at `offset`.
struct MassDistribution {
  Eigen::Vector3d dims = Eigen::Vector3d::Ones();
  double total_mass = 1;
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();

  double density() const { return total_mass / dims.prod(); }
  Eigen::Vector3d lo() const { return offset - 0.5 * dims; }
  Eigen::Vector3d hi() const { return offset + 0.5 * dims; }
};

void validate(const MassDistribution& m);

enum class ModelKind { Csl, Grw, DpDiosi, DpPenrose };

std::string_view to_string(ModelKind k);

struct CollapseEstimate {
  double tau = std::numeric_limits<double>::infinity(); // s
  ModelKind model = ModelKind::Csl;

  bool collapses() const { return tau < std::numeric_limits<double>::infinity(); }
};

/// A named collapse hypothesis. `params` is unused by the DP variants.
struct CollapseModel {
  std::string name;
  ModelKind kind = ModelKind::Csl;
  CollapseParams params;

  bool operator==(const CollapseModel&) const = default;
};

/// csl-standard, csl-low, grw-standard, dp-diosi, dp-penrose.
CollapseModel model_preset(std::string_view name);
const std::array<std::string_view, 5>& model_preset_names();

/// Which displacement enters the GRW estimate: the full d or the mean d/2.
enum class GrwDisplacement { Full, Half };

double nucleon_count(double mass, const PhysicalConstants& k = {});

/// Nucleons in the part of the mirror that the two branches do not share.
double sliver_nucleons(const ApparatusSpec& spec, const PhysicalConstants& k = {});

/// tau = A / (4 pi lambda a^2 N^2)
CollapseEstimate csl_tau(const CollapseParams& p, double n_sliver, double area);

/// tau = 16 a^2 / (lambda N d^2)
CollapseEstimate grw_tau(const CollapseParams& p, double n_total, double displacement_d);

/// (d, d/2)
std::pair<double, double> grw_effective_displacement(const ApparatusSpec& spec);

struct QuadratureOptions {
  int order = 8;          // Gauss-Legendre points per panel
  int refinement = 1;     // each panel split into this many equal sub-panels
  int grading_levels = 12; // geometric panels below the smallest feature size
};

/// Gravitational self-energy of the difference of two uniform boxes,
/// G * integral (rho1 - rho2)(r) (rho1 - rho2)(r') / |r - r'|.
/// Requires equal total masses. Exactly zero for identical inputs.
double dp_self_energy(const MassDistribution& m1, const MassDistribution& m2,
                      const PhysicalConstants& k = {}, const QuadratureOptions& q = {});

/// hbar / E for Diosi, half of that for Penrose.
CollapseEstimate dp_tau(const MassDistribution& m1, const MassDistribution& m2, ModelKind variant,
                        const PhysicalConstants& k = {}, const QuadratureOptions& q = {});

/// Mirror at rest and mirror displaced by d along the displacement axis.
std::pair<MassDistribution, MassDistribution> mirror_branches(const ApparatusSpec& spec);

/// Expected collapse time of `model` for a device apparatus.
CollapseEstimate apparatus_tau(const ApparatusSpec& spec, const CollapseModel& model,
                               const PhysicalConstants& k = {},
                               GrwDisplacement grw = GrwDisplacement::Full,
                               const QuadratureOptions& q = {});

} // namespace collapseloc
