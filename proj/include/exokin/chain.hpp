#pragma once

#include <string>
#include <vector>

#include "exokin/pose.hpp"

namespace exokin {

enum class JointKind { revolute, prismatic };

/// One-DOF joint given by an axis direction and a point on the axis,
/// both expressed in the parent frame. Limits are radians for revolute
/// joints and meters for prismatic ones.
struct JointSpec {
  JointKind kind = JointKind::revolute;
  UnitVec3 axis{0.0, 0.0, 1.0};
  Eigen::Vector3d anchor = Eigen::Vector3d::Zero();
  double lower = -std::numbers::pi;
  double upper = std::numbers::pi;
  std::string label;

  void validate() const {
    if (lower > upper) throw std::invalid_argument("JointSpec: lower > upper");
  }
};

struct JointStage {
  Pose fixed;  // transform applied before the joint motion
  JointSpec joint;
};

/// Open kinematic chain: base frame, a sequence of (fixed transform,
/// joint) stages, and a tool transform after the last joint.
struct SerialChain {
  Pose base_pose;
  std::vector<JointStage> joints;
  Pose tool_transform;

  std::size_t dof() const { return joints.size(); }

  void validate() const {
    if (joints.empty()) throw std::invalid_argument("SerialChain: no joints");
    for (const auto& s : joints) s.joint.validate();
  }
};

/// Joint values, one per joint, radians or meters by joint kind.
using JointConfig = std::vector<double>;

inline Pose joint_motion(const JointSpec& j, double q) {
  if (j.kind == JointKind::revolute) {
    return rotation_about_axis(j.axis, j.anchor, Angle::radians(q));
  }
  return translation_along(j.axis, q);
}

/// World frames after each joint, plus the tool frame last.
/// Frame i is base * (fixed_1 * motion_1) * ... * (fixed_i * motion_i).
inline std::vector<Pose> forward_kinematics(const SerialChain& chain,
                                            const JointConfig& q) {
  if (q.size() != chain.joints.size()) {
    throw std::invalid_argument("forward_kinematics: config length " +
                                std::to_string(q.size()) + " != joint count " +
                                std::to_string(chain.joints.size()));
  }
  std::vector<Pose> frames;
  frames.reserve(chain.joints.size() + 1);
  Pose acc = chain.base_pose;
  for (std::size_t i = 0; i < chain.joints.size(); ++i) {
    acc = acc * chain.joints[i].fixed * joint_motion(chain.joints[i].joint, q[i]);
    frames.push_back(acc);
  }
  frames.push_back(acc * chain.tool_transform);
  return frames;
}

inline Pose tool_pose(const SerialChain& chain, const JointConfig& q) {
  return forward_kinematics(chain, q).back();
}

inline bool within_limits(const SerialChain& chain, const JointConfig& q) {
  if (q.size() != chain.joints.size()) return false;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto& j = chain.joints[i].joint;
    if (q[i] < j.lower || q[i] > j.upper) return false;
  }
  return true;
}

/// World-frame joint axes and anchors at configuration q.
inline std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> world_axes(
    const SerialChain& chain, const JointConfig& q) {
  if (q.size() != chain.joints.size()) {
    throw std::invalid_argument("world_axes: config length mismatch");
  }
  std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> out;
  out.reserve(chain.joints.size());
  Pose acc = chain.base_pose;
  for (std::size_t i = 0; i < chain.joints.size(); ++i) {
    Pose parent = acc * chain.joints[i].fixed;
    out.emplace_back(parent.rotate(chain.joints[i].joint.axis.vec()),
                     parent.apply(chain.joints[i].joint.anchor));
    acc = parent * joint_motion(chain.joints[i].joint, q[i]);
  }
  return out;
}

}  // namespace exokin
