#pragma once

#include <array>
#include <string>
#include <vector>

#include "exokin/pose.hpp"
#include "exokin/chain.hpp"

namespace exokin {

/// Inner-shoulder concept: the mechanism that displaces the GH joint
/// center. Fixed pins it; SingleRevolute sweeps it on a circle; Polar
/// combines a revolute with a radial slide; Cartesian translates along
/// three orthogonal directions; AxisLinkage couples arm elevation to a
/// vertical slide of the GH center along the first shoulder axis.
struct GirdleConcept {
  enum class Kind { Fixed, SingleRevolute, Polar, Cartesian, AxisLinkage };

  Kind kind = Kind::Fixed;
  UnitVec3 axis{1.0, 0.0, 0.0};                 // SingleRevolute / Polar / AxisLinkage axis
  Eigen::Vector3d anchor = Eigen::Vector3d::Zero();
  UnitVec3 prismatic{0.0, 0.0, 1.0};            // Polar radial direction
  std::array<UnitVec3, 3> cartesian{UnitVec3(1, 0, 0), UnitVec3(0, 1, 0), UnitVec3(0, 0, 1)};
  /// AxisLinkage coupling: sorted (elevation rad -> vertical displacement m)
  /// breakpoints, interpolated linearly and clamped at the ends.
  std::vector<std::pair<double, double>> coupling;

  int dof() const {
    switch (kind) {
      case Kind::Fixed: return 0;
      case Kind::SingleRevolute: return 1;
      case Kind::Polar: return 2;
      case Kind::Cartesian: return 3;
      case Kind::AxisLinkage: return 1;
    }
    return 0;
  }

  void validate() const {
    if (kind == Kind::Cartesian) {
      for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
          if (std::abs(cartesian[i].vec().dot(cartesian[j].vec())) > 1e-9) {
            throw std::invalid_argument("GirdleConcept: Cartesian directions not orthogonal");
          }
        }
      }
    }
    if (kind == Kind::AxisLinkage) {
      if (coupling.size() < 2) {
        throw std::invalid_argument("GirdleConcept: AxisLinkage needs >= 2 coupling points");
      }
      for (std::size_t i = 1; i < coupling.size(); ++i) {
        if (coupling[i].first <= coupling[i - 1].first) {
          throw std::invalid_argument("GirdleConcept: coupling breakpoints must increase");
        }
        if (coupling[i].second < coupling[i - 1].second) {
          throw std::invalid_argument("GirdleConcept: coupling map must be monotone");
        }
      }
    }
  }

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::Fixed: return "Fixed";
      case Kind::SingleRevolute: return "SingleRevolute";
      case Kind::Polar: return "Polar";
      case Kind::Cartesian: return "Cartesian";
      case Kind::AxisLinkage: return "AxisLinkage";
    }
    return "?";
  }
};

inline double interpolate_coupling(const std::vector<std::pair<double, double>>& map,
                                   double x) {
  if (map.empty()) return 0.0;
  if (x <= map.front().first) return map.front().second;
  if (x >= map.back().first) return map.back().second;
  for (std::size_t i = 1; i < map.size(); ++i) {
    if (x <= map[i].first) {
      const auto [x0, y0] = map[i - 1];
      const auto [x1, y1] = map[i];
      return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
  }
  return map.back().second;
}

/// Displacement of the GH joint center under the girdle drivers,
/// relative to its rest position.
inline Eigen::Vector3d gh_center_path(const GirdleConcept& girdle_concept, const JointConfig& driver,
                                      const Eigen::Vector3d& rest_gh = Eigen::Vector3d::Zero()) {
  girdle_concept.validate();
  if (static_cast<int>(driver.size()) != girdle_concept.dof()) {
    throw std::invalid_argument("gh_center_path: driver length " +
                                std::to_string(driver.size()) + " != concept DOF " +
                                std::to_string(girdle_concept.dof()));
  }
  switch (girdle_concept.kind) {
    case GirdleConcept::Kind::Fixed:
      return Eigen::Vector3d::Zero();
    case GirdleConcept::Kind::SingleRevolute:
      return rotation_about_axis(girdle_concept.axis, girdle_concept.anchor, Angle::radians(driver[0]))
                 .apply(rest_gh) -
             rest_gh;
    case GirdleConcept::Kind::Polar: {
      const Eigen::Vector3d slid = rest_gh + driver[1] * girdle_concept.prismatic.vec();
      return rotation_about_axis(girdle_concept.axis, girdle_concept.anchor, Angle::radians(driver[0]))
                 .apply(slid) -
             rest_gh;
    }
    case GirdleConcept::Kind::Cartesian:
      return driver[0] * girdle_concept.cartesian[0].vec() + driver[1] * girdle_concept.cartesian[1].vec() +
             driver[2] * girdle_concept.cartesian[2].vec();
    case GirdleConcept::Kind::AxisLinkage:
      return interpolate_coupling(girdle_concept.coupling, driver[0]) * girdle_concept.axis.vec();
  }
  return Eigen::Vector3d::Zero();
}

}  // namespace exokin
