#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace exokin {

/// Angular quantity stored in radians. Degrees appear only at I/O
/// boundaries (configs, CLI flags); everything internal is radians.
struct Angle {
  double rad = 0.0;

  constexpr Angle() = default;
  static constexpr Angle radians(double r) { return Angle{r}; }
  static constexpr Angle degrees(double d) {
    return Angle{d * std::numbers::pi / 180.0};
  }

  constexpr double deg() const { return rad * 180.0 / std::numbers::pi; }

  /// Wrap into (-pi, pi].
  Angle normalized() const {
    double r = std::remainder(rad, 2.0 * std::numbers::pi);
    if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
    return Angle{r};
  }

  bool finite() const { return std::isfinite(rad); }

  constexpr auto operator<=>(const Angle&) const = default;
  constexpr Angle operator-() const { return Angle{-rad}; }
  constexpr Angle operator+(Angle o) const { return Angle{rad + o.rad}; }
  constexpr Angle operator-(Angle o) const { return Angle{rad - o.rad}; }

 private:
  explicit constexpr Angle(double r) : rad(r) {}
};

inline double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

}  // namespace exokin
