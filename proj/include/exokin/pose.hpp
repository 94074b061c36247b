#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "exokin/angle.hpp"

namespace exokin {

/// Unit-norm direction. Construction enforces |v| == 1 within 1e-9;
/// use normalized() when the input is not already unit length.
class UnitVec3 {
 public:
  UnitVec3(double x, double y, double z) : UnitVec3(Eigen::Vector3d(x, y, z)) {}

  explicit UnitVec3(const Eigen::Vector3d& v) : v_(v) {
    if (std::abs(v.norm() - 1.0) > 1e-9) {
      throw std::invalid_argument("UnitVec3: vector is not unit norm");
    }
  }

  static UnitVec3 normalized(const Eigen::Vector3d& v) {
    const double n = v.norm();
    if (n < 1e-12) {
      throw std::invalid_argument("UnitVec3: cannot normalize near-zero vector");
    }
    return UnitVec3(Eigen::Vector3d(v / n));
  }

  const Eigen::Vector3d& vec() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }

 private:
  Eigen::Vector3d v_;
};

/// Rigid-body transform: p_world = rotation * p_local + translation.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static Pose identity() { return Pose{}; }

  Pose operator*(const Pose& rhs) const {
    return Pose{rotation * rhs.rotation, rotation * rhs.translation + translation};
  }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return rotation * p + translation;
  }

  Eigen::Vector3d rotate(const Eigen::Vector3d& d) const { return rotation * d; }

  Pose inverse() const {
    Eigen::Matrix3d rt = rotation.transpose();
    return Pose{rt, -(rt * translation)};
  }

  /// Orthonormal with det +1 within tol.
  bool is_valid(double tol = 1e-9) const {
    if (!translation.allFinite() || !rotation.allFinite()) return false;
    Eigen::Matrix3d err = rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
    if (err.cwiseAbs().maxCoeff() > tol) return false;
    return std::abs(rotation.determinant() - 1.0) <= tol;
  }
};

/// Rodrigues rotation by `angle` about the line through `anchor` with
/// direction `axis`.
inline Pose rotation_about_axis(const UnitVec3& axis, const Eigen::Vector3d& anchor,
                                Angle angle) {
  const Eigen::Vector3d& k = axis.vec();
  const double c = std::cos(angle.rad);
  const double s = std::sin(angle.rad);

  Eigen::Matrix3d kx;
  kx << 0, -k.z(), k.y(),
        k.z(), 0, -k.x(),
        -k.y(), k.x(), 0;

  Eigen::Matrix3d r = c * Eigen::Matrix3d::Identity() + s * kx +
                      (1.0 - c) * (k * k.transpose());
  return Pose{r, anchor - r * anchor};
}

inline Pose translation_along(const UnitVec3& axis, double distance) {
  return Pose{Eigen::Matrix3d::Identity(), distance * axis.vec()};
}

/// Smallest rotation taking `from` onto `to` (identity when parallel,
/// a half-turn about any perpendicular when anti-parallel).
inline Eigen::Matrix3d rotation_between(const UnitVec3& from, const UnitVec3& to) {
  const Eigen::Vector3d& a = from.vec();
  const Eigen::Vector3d& b = to.vec();
  const double d = a.dot(b);
  Eigen::Vector3d w = a.cross(b);
  const double wn = w.norm();
  if (wn < 1e-14) {
    if (d > 0.0) return Eigen::Matrix3d::Identity();
    // anti-parallel: pick a stable perpendicular
    Eigen::Vector3d p = std::abs(a.x()) < 0.9 ? Eigen::Vector3d::UnitX()
                                              : Eigen::Vector3d::UnitY();
    Eigen::Vector3d n = (p - p.dot(a) * a).normalized();
    return rotation_about_axis(UnitVec3(n), Eigen::Vector3d::Zero(),
                               Angle::radians(std::numbers::pi))
        .rotation;
  }
  const double ang = std::atan2(wn, d);
  return rotation_about_axis(UnitVec3(Eigen::Vector3d(w / wn)),
                             Eigen::Vector3d::Zero(), Angle::radians(ang))
      .rotation;
}

/// Angle in [0, pi] between two directions.
inline double angle_between(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double d = a.normalized().dot(b.normalized());
  return std::acos(std::clamp(d, -1.0, 1.0));
}

}  // namespace exokin
