#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string_view>

#include <Eigen/Core>

#include "collapseloc/constants.hpp"

namespace collapseloc {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

/// A point in the fixed Earth-centered inertial frame.
template <typename Scalar>
struct Event {
  Scalar t{0};
  Vector3<Scalar> pos = Vector3<Scalar>::Zero();

  bool operator==(const Event& o) const { return t == o.t && pos == o.pos; }
};

using SpacetimeEvent = Event<double>;

enum class Separation { Timelike, Lightlike, Spacelike };
enum class Ordering { None, FirstEarlier, SecondEarlier, Simultaneous };

struct CausalClass {
  Separation separation = Separation::Spacelike;
  Ordering ordering = Ordering::None; // None iff Spacelike

  bool causally_ordered() const { return separation != Separation::Spacelike; }
  bool operator==(const CausalClass&) const = default;
};

std::string_view to_string(Separation s);
std::string_view to_string(Ordering o);

/// A fixed spatial location occupied during [t_start, t_end].
template <typename Scalar>
struct Window {
  Vector3<Scalar> pos = Vector3<Scalar>::Zero();
  Scalar t_start{0};
  Scalar t_end{0};

  Scalar duration() const { return t_end - t_start; }
};

using StationWindow = Window<double>;

template <typename Scalar>
Window<Scalar> make_window(const Vector3<Scalar>& pos, Scalar t_start, Scalar t_end) {
  if (!(t_start <= t_end)) throw std::invalid_argument("window requires t_start <= t_end");
  return {pos, t_start, t_end};
}

struct GeoPoint {
  double latitude = 0;  // rad
  double longitude = 0; // rad
  double altitude = 0;  // m above the spherical surface

  bool operator==(const GeoPoint&) const = default;
};

void validate(const GeoPoint& g);

/// Relative tolerance under which an interval counts as lightlike.
inline constexpr double kLightlikeTolerance = 1e-12;

/// s^2 = c^2 dt^2 - |dx|^2 (positive for timelike pairs).
template <typename Scalar>
Scalar squared_interval(const Event<Scalar>& a, const Event<Scalar>& b,
                        const PhysicalConstants& k = {}) {
  const Scalar c = static_cast<Scalar>(k.c);
  const Scalar ct = c * (b.t - a.t);
  return ct * ct - (b.pos - a.pos).squaredNorm();
}

template <typename Scalar>
CausalClass causal_class(const Event<Scalar>& a, const Event<Scalar>& b,
                         const PhysicalConstants& k = {}) {
  const Scalar c = static_cast<Scalar>(k.c);
  const Scalar ct = c * (b.t - a.t);
  const Scalar space2 = (b.pos - a.pos).squaredNorm();
  const Scalar s2 = ct * ct - space2;
  const Scalar scale = ct * ct + space2;

  CausalClass out;
  if (std::abs(s2) <= static_cast<Scalar>(kLightlikeTolerance) * scale) {
    out.separation = Separation::Lightlike;
  } else if (s2 > 0) {
    out.separation = Separation::Timelike;
  } else {
    return out;
  }
  if (a.t < b.t) {
    out.ordering = Ordering::FirstEarlier;
  } else if (b.t < a.t) {
    out.ordering = Ordering::SecondEarlier;
  } else {
    out.ordering = Ordering::Simultaneous;
  }
  return out;
}

template <typename Scalar>
struct WindowSeparation {
  bool spacelike = false;
  Scalar margin{0}; // D/c - worst |dt|, seconds
};

/// Whether every event of `w1` is spacelike to every event of `w2`.
/// The worst pair is the one with the largest |dt|; it is classified with the
/// same lightlike tolerance as causal_class, so lightlike boundaries fail.
template <typename Scalar>
WindowSeparation<Scalar> windows_spacelike(const Window<Scalar>& w1, const Window<Scalar>& w2,
                                           const PhysicalConstants& k = {}) {
  const Scalar c = static_cast<Scalar>(k.c);
  const Scalar d = (w1.pos - w2.pos).norm();
  const Scalar dt12 = std::abs(w1.t_end - w2.t_start);
  const Scalar dt21 = std::abs(w2.t_end - w1.t_start);
  const Scalar worst = std::max(dt12, dt21);

  WindowSeparation<Scalar> out;
  out.margin = d / c - worst;
  if (d == Scalar(0)) return out;

  const Event<Scalar> a{Scalar(0), w1.pos};
  const Event<Scalar> b{worst, w2.pos};
  out.spacelike = causal_class(a, b, k).separation == Separation::Spacelike;
  return out;
}

template <typename Scalar = double>
Vector3<Scalar> geo_to_position(const GeoPoint& g, const PhysicalConstants& k = {}) {
  const double r = k.earth_radius() + g.altitude;
  const double cl = std::cos(g.latitude);
  return Vector3<Scalar>(static_cast<Scalar>(r * cl * std::cos(g.longitude)),
                         static_cast<Scalar>(r * cl * std::sin(g.longitude)),
                         static_cast<Scalar>(r * std::sin(g.latitude)));
}

inline SpacetimeEvent geo_to_event(const GeoPoint& g, double t, const PhysicalConstants& k = {}) {
  return {t, geo_to_position(g, k)};
}

/// Straight-line (through-Earth) distance.
inline double chord_distance(const GeoPoint& a, const GeoPoint& b, const PhysicalConstants& k = {}) {
  return (geo_to_position(a, k) - geo_to_position(b, k)).norm();
}

inline double light_time(double distance, const PhysicalConstants& k = {}) {
  if (!(distance >= 0)) throw std::invalid_argument("light_time requires distance >= 0");
  return distance / k.c;
}

} // namespace collapseloc
