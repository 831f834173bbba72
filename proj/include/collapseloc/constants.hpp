#pragma once

#include <stdexcept>

namespace collapseloc {

/// SI constants shared by every module. Earth is modeled as a sphere of
/// diameter `earth_diameter`.
struct PhysicalConstants {
  double c = 2.99792458e8;           // m/s
  double hbar = 1.054572e-34;        // J s
  double G = 6.674e-11;              // m^3 kg^-1 s^-2
  double nucleon_mass = 1.66054e-27; // kg
  double earth_diameter = 1.24e7;    // m

  double earth_radius() const { return 0.5 * earth_diameter; }

  bool operator==(const PhysicalConstants&) const = default;
};

inline void validate(const PhysicalConstants& k) {
  if (!(k.c > 0 && k.hbar > 0 && k.G > 0 && k.nucleon_mass > 0 && k.earth_diameter > 0)) {
    throw std::invalid_argument("physical constants must be strictly positive");
  }
}

/// Raised when a collapse model cannot produce a usable collapse time
/// (e.g. it predicts no collapse for the given apparatus).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

} // namespace collapseloc
