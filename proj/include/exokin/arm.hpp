#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exokin/chain.hpp"

namespace exokin {

/// The arm's rotational degrees of freedom. A canonical arm pose uses
/// seven of them: one of {ABD, HABD} plus FE and IE for the shoulder,
/// then ElbowFE, PS, WFE, UD.
enum class ArmDOF { ABD, FE, IE, HABD, ElbowFE, PS, WFE, UD };

inline const char* to_string(ArmDOF d) {
  switch (d) {
    case ArmDOF::ABD: return "ABD";
    case ArmDOF::FE: return "FE";
    case ArmDOF::IE: return "IE";
    case ArmDOF::HABD: return "HABD";
    case ArmDOF::ElbowFE: return "ElbowFE";
    case ArmDOF::PS: return "PS";
    case ArmDOF::WFE: return "WFE";
    case ArmDOF::UD: return "UD";
  }
  return "?";
}

inline std::optional<ArmDOF> arm_dof_from_string(const std::string& s) {
  static const std::map<std::string, ArmDOF> table = {
      {"ABD", ArmDOF::ABD},         {"FE", ArmDOF::FE},   {"IE", ArmDOF::IE},
      {"HABD", ArmDOF::HABD},       {"ElbowFE", ArmDOF::ElbowFE},
      {"PS", ArmDOF::PS},           {"WFE", ArmDOF::WFE}, {"UD", ArmDOF::UD}};
  auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

/// Loose-hinge elbow geometry: the instantaneous flexion axis migrates
/// over a double quasi-conic frustum with an elliptical cross section.
/// All deviation parameters zero degenerates to a fixed hinge.
struct FrustumParams {
  double ellipse_semi_major = 0.0;  // m
  double ellipse_semi_minor = 0.0;  // m
  Angle proximal_half_angle;        // [0, pi/4]
  Angle distal_half_angle;          // [0, pi/4]
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  UnitVec3 nominal_axis{0.0, 1.0, 0.0};

  void validate() const {
    if (ellipse_semi_major < 0.0 || ellipse_semi_minor < 0.0) {
      throw std::invalid_argument("FrustumParams: negative semi-axis");
    }
    for (const Angle a : {proximal_half_angle, distal_half_angle}) {
      if (a.rad < 0.0 || a.rad > std::numbers::pi / 4.0 + 1e-12) {
        throw std::invalid_argument("FrustumParams: half-angle outside [0, pi/4]");
      }
    }
  }

  bool degenerate() const {
    return ellipse_semi_major == 0.0 && ellipse_semi_minor == 0.0 &&
           proximal_half_angle.rad == 0.0 && distal_half_angle.rad == 0.0;
  }
};

struct ValidationError : std::runtime_error {
  std::vector<std::string> violations;
  explicit ValidationError(std::vector<std::string> v)
      : std::runtime_error(join(v)), violations(std::move(v)) {}

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "arm config invalid:";
    for (const auto& m : v) s += "\n  - " + m;
    return s;
  }
};

/// Input to build_arm. Defaults are editable fixtures, not anatomical
/// ground truth; see data/arm_default.json for the documented values.
struct ArmConfig {
  double upper_arm_length = 0.30;  // m
  double forearm_length = 0.25;    // m
  double hand_length = 0.08;       // m
  Eigen::Vector3d gh_center = Eigen::Vector3d::Zero();
  std::array<ArmDOF, 3> gh_sequence{ArmDOF::HABD, ArmDOF::FE, ArmDOF::IE};
  std::map<ArmDOF, std::pair<Angle, Angle>> rom;  // missing entries get defaults
  FrustumParams frustum;                          // center/axis placed at the elbow when unset
  bool frustum_placed = false;                    // set when frustum center/axis were supplied
  Angle load_angle = Angle::degrees(10.0);
  double ud_axis_offset = 0.01;  // m, UD axis proximal of the wrist center
  /// Optional biologic-axis overrides (direction, anchor). The three
  /// GH axes must stay concurrent at gh_center.
  std::map<ArmDOF, std::pair<Eigen::Vector3d, Eigen::Vector3d>> axis_overrides;
};

inline std::map<ArmDOF, std::pair<Angle, Angle>> default_rom() {
  using A = Angle;
  return {
      {ArmDOF::HABD, {A::degrees(-45), A::degrees(135)}},
      {ArmDOF::ABD, {A::degrees(0), A::degrees(160)}},
      {ArmDOF::FE, {A::degrees(-50), A::degrees(170)}},
      {ArmDOF::IE, {A::degrees(-70), A::degrees(90)}},
      {ArmDOF::ElbowFE, {A::degrees(0), A::degrees(145)}},
      {ArmDOF::PS, {A::degrees(-85), A::degrees(75)}},
      {ArmDOF::WFE, {A::degrees(-70), A::degrees(75)}},
      {ArmDOF::UD, {A::degrees(-35), A::degrees(20)}},
  };
}

/// Parametric reference arm. Frame convention: x anterior, y lateral,
/// z up; the rest arm hangs along -z from the GH center. The forearm
/// axial direction is the rest direction tilted laterally by the load
/// angle (rotation about +x), and the PS axis lies along it.
struct ArmModel {
  Eigen::Vector3d gh_center = Eigen::Vector3d::Zero();
  double upper_arm_length = 0.0;
  double forearm_length = 0.0;
  double hand_length = 0.0;
  std::array<ArmDOF, 3> gh_sequence{ArmDOF::HABD, ArmDOF::FE, ArmDOF::IE};
  std::map<ArmDOF, std::pair<UnitVec3, Eigen::Vector3d>> biologic_axes;
  std::map<ArmDOF, std::pair<Angle, Angle>> rom;
  FrustumParams elbow_frustum;
  Angle load_angle;
  double ud_axis_offset = 0.0;
  UnitVec3 rest_direction{0.0, 0.0, -1.0};

  std::array<ArmDOF, 7> canonical_dofs() const {
    return {gh_sequence[0], gh_sequence[1], gh_sequence[2],
            ArmDOF::ElbowFE, ArmDOF::PS,    ArmDOF::WFE,     ArmDOF::UD};
  }

  Eigen::Vector3d elbow_center_rest() const {
    return gh_center + upper_arm_length * rest_direction.vec();
  }

  UnitVec3 forearm_axis_rest() const {
    return UnitVec3::normalized(
        rotation_about_axis(UnitVec3(1, 0, 0), Eigen::Vector3d::Zero(), load_angle)
            .rotate(rest_direction.vec()));
  }

  Eigen::Vector3d wrist_center_rest() const {
    return elbow_center_rest() + forearm_length * forearm_axis_rest().vec();
  }

  std::pair<Angle, Angle> rom_of(ArmDOF d) const {
    auto it = rom.find(d);
    if (it == rom.end()) throw std::invalid_argument(std::string("no ROM for ") + to_string(d));
    return it->second;
  }
};

inline ArmModel build_arm(const ArmConfig& cfg) {
  std::vector<std::string> bad;
  if (!(cfg.upper_arm_length > 0)) bad.push_back("lengths.upper_arm must be > 0");
  if (!(cfg.forearm_length > 0)) bad.push_back("lengths.forearm must be > 0");
  if (!(cfg.hand_length > 0)) bad.push_back("lengths.hand must be > 0");

  ArmModel arm;
  arm.gh_center = cfg.gh_center;
  arm.upper_arm_length = cfg.upper_arm_length;
  arm.forearm_length = cfg.forearm_length;
  arm.hand_length = cfg.hand_length;
  arm.gh_sequence = cfg.gh_sequence;
  arm.load_angle = cfg.load_angle;
  arm.ud_axis_offset = cfg.ud_axis_offset;

  arm.rom = default_rom();
  for (const auto& [dof, interval] : cfg.rom) arm.rom[dof] = interval;
  for (const auto& [dof, interval] : arm.rom) {
    if (interval.first.rad > interval.second.rad) {
      bad.push_back(std::string("rom.") + to_string(dof) + " interval is empty");
    }
  }

  try {
    cfg.frustum.validate();
  } catch (const std::invalid_argument& e) {
    bad.push_back(e.what());
  }

  const Eigen::Vector3d down = arm.rest_direction.vec();
  const Eigen::Vector3d elbow = cfg.gh_center + cfg.upper_arm_length * down;
  const Eigen::Vector3d forearm_dir =
      rotation_about_axis(UnitVec3(1, 0, 0), Eigen::Vector3d::Zero(), cfg.load_angle)
          .rotate(down);
  const Eigen::Vector3d wrist = elbow + cfg.forearm_length * forearm_dir;

  arm.biologic_axes = {
      {ArmDOF::HABD, {UnitVec3(0, 0, 1), cfg.gh_center}},
      {ArmDOF::ABD, {UnitVec3(1, 0, 0), cfg.gh_center}},
      {ArmDOF::FE, {UnitVec3(0, 1, 0), cfg.gh_center}},
      {ArmDOF::IE, {UnitVec3::normalized(down), cfg.gh_center}},
      {ArmDOF::ElbowFE, {UnitVec3(0, 1, 0), elbow}},
      {ArmDOF::PS, {UnitVec3::normalized(forearm_dir), elbow}},
      {ArmDOF::WFE, {UnitVec3(0, 1, 0), wrist}},
      {ArmDOF::UD, {UnitVec3(1, 0, 0), wrist - cfg.ud_axis_offset * forearm_dir}},
  };
  for (const auto& [dof, axis] : cfg.axis_overrides) {
    try {
      arm.biologic_axes[dof] = {UnitVec3::normalized(axis.first), axis.second};
    } catch (const std::invalid_argument&) {
      bad.push_back(std::string("axes.") + to_string(dof) + " direction is degenerate");
    }
  }

  // The three GH pose axes must pass through the GH center.
  for (const ArmDOF dof : arm.gh_sequence) {
    const auto& [dir, anchor] = arm.biologic_axes.at(dof);
    const Eigen::Vector3d rel = cfg.gh_center - anchor;
    const double dist = (rel - dir.vec().dot(rel) * dir.vec()).norm();
    if (dist > 1e-9) {
      bad.push_back(std::string("axes.") + to_string(dof) +
                    " does not pass through gh_center (distance " + std::to_string(dist) + " m)");
    }
  }

  arm.elbow_frustum = cfg.frustum;
  if (!cfg.frustum_placed) {
    arm.elbow_frustum.center = elbow;
    arm.elbow_frustum.nominal_axis = UnitVec3(0, 1, 0);
  }

  if (!bad.empty()) throw ValidationError(std::move(bad));
  return arm;
}

/// Segment frames produced by arm_fk.
struct ArmFrames {
  Pose humerus;
  Pose forearm;
  Pose hand;
  Eigen::Vector3d elbow_center = Eigen::Vector3d::Zero();
  Eigen::Vector3d wrist_center = Eigen::Vector3d::Zero();
  Eigen::Vector3d hand_tip = Eigen::Vector3d::Zero();
};

/// Forward kinematics of the 7-DOF reference arm. `pose7` is ordered
/// (gh_sequence[0..2], ElbowFE, PS, WFE, UD). Each rotation composes on
/// the right about the model axis carried along by the frames built so
/// far.
inline ArmFrames arm_fk(const ArmModel& arm, const JointConfig& pose7,
                        bool enforce_rom = false) {
  const auto dofs = arm.canonical_dofs();
  if (pose7.size() != dofs.size()) {
    throw std::invalid_argument("arm_fk: pose must have 7 values");
  }
  if (enforce_rom) {
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      const auto [lo, hi] = arm.rom_of(dofs[i]);
      if (pose7[i] < lo.rad || pose7[i] > hi.rad) {
        throw std::out_of_range(std::string("arm_fk: ") + to_string(dofs[i]) +
                                " outside its range of motion");
      }
    }
  }

  auto rot = [&](ArmDOF dof, double q) {
    const auto& [dir, anchor] = arm.biologic_axes.at(dof);
    return rotation_about_axis(dir, anchor, Angle::radians(q));
  };

  ArmFrames out;
  Pose g = rot(dofs[0], pose7[0]) * rot(dofs[1], pose7[1]) * rot(dofs[2], pose7[2]);
  out.humerus = g;

  Pose e = g * rot(ArmDOF::ElbowFE, pose7[3]);
  Pose f = e * rot(ArmDOF::PS, pose7[4]);
  out.forearm = f;

  Pose w = f * rot(ArmDOF::WFE, pose7[5]) * rot(ArmDOF::UD, pose7[6]);
  out.hand = w;

  const Eigen::Vector3d elbow0 = arm.elbow_center_rest();
  const Eigen::Vector3d wrist0 = arm.wrist_center_rest();
  out.elbow_center = g.apply(elbow0);
  out.wrist_center = f.apply(wrist0);
  out.hand_tip = w.apply(wrist0 + arm.hand_length * arm.forearm_axis_rest().vec());
  return out;
}

/// Instantaneous elbow axis of a loose hinge. The anchor travels the
/// elliptical cross section and the direction tilts away from the
/// nominal axis by a half-angle blended linearly from proximal to
/// distal across the flexion range.
inline JointSpec elbow_axis(const FrustumParams& frustum, Angle flexion,
                            Angle flexion_lo = Angle::degrees(0),
                            Angle flexion_hi = Angle::degrees(145)) {
  frustum.validate();
  JointSpec spec;
  spec.kind = JointKind::revolute;
  spec.label = "ElbowFE";
  if (frustum.degenerate()) {
    spec.axis = frustum.nominal_axis;
    spec.anchor = frustum.center;
    return spec;
  }

  const double span = flexion_hi.rad - flexion_lo.rad;
  const double s = span > 0.0 ? (flexion.rad - flexion_lo.rad) / span : 0.0;

  // Local frame around the nominal axis; e1/e2 derived deterministically.
  const Eigen::Vector3d n = frustum.nominal_axis.vec();
  const Eigen::Vector3d ref =
      std::abs(n.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d e1 = (ref - ref.dot(n) * n).normalized();
  const Eigen::Vector3d e2 = n.cross(e1);

  const double phi = -std::numbers::pi / 2.0 + std::numbers::pi * s;
  spec.anchor = frustum.center + frustum.ellipse_semi_major * std::cos(phi) * e1 +
                frustum.ellipse_semi_minor * std::sin(phi) * e2;

  const double alpha =
      (1.0 - s) * frustum.proximal_half_angle.rad + s * frustum.distal_half_angle.rad;
  const Eigen::Vector3d radial = std::cos(phi) * e1 + std::sin(phi) * e2;
  spec.axis = UnitVec3::normalized(std::cos(alpha) * n + std::sin(alpha) * radial);
  return spec;
}

}  // namespace exokin
