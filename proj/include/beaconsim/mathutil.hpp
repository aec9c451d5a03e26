#pragma once

#include <cmath>
#include <numbers>

namespace beaconsim {

inline constexpr double kPi = std::numbers::pi;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Normalize an angle in degrees to (-180, 180]. In-range values pass through
// bit-exactly.
inline double wrap_deg(double deg) {
    if (deg > -180.0 && deg <= 180.0) return deg;
    double r = std::fmod(deg + 180.0, 360.0);
    if (r <= 0.0) r += 360.0;
    return r - 180.0;
}

// Smallest signed difference a - b in degrees, in (-180, 180].
inline double angle_diff_deg(double a, double b) { return wrap_deg(a - b); }

}  // namespace beaconsim
