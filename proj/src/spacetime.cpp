#include "collapseloc/spacetime.hpp"

namespace collapseloc {

std::string_view to_string(Separation s) {
  switch (s) {
    case Separation::Timelike: return "timelike";
    case Separation::Lightlike: return "lightlike";
    case Separation::Spacelike: return "spacelike";
  }
  return "unknown";
}

std::string_view to_string(Ordering o) {
  switch (o) {
    case Ordering::None: return "none";
    case Ordering::FirstEarlier: return "first_earlier";
    case Ordering::SecondEarlier: return "second_earlier";
    case Ordering::Simultaneous: return "simultaneous";
  }
  return "unknown";
}

void validate(const GeoPoint& g) {
  if (!(std::abs(g.latitude) <= std::numbers::pi / 2)) {
    throw std::invalid_argument("latitude must lie in [-pi/2, pi/2]");
  }
  if (!(g.altitude >= 0)) throw std::invalid_argument("altitude must be >= 0");
  if (!std::isfinite(g.longitude)) throw std::invalid_argument("longitude must be finite");
}

} // namespace collapseloc
