#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "exokin/chain.hpp"

namespace exokin {

enum class JacobianRows { angular_only, full };

/// Extract the rotation-rate vector of a small relative rotation:
/// vee((R+ R-^T - (R+ R-^T)^T) / 2). Exact direction for single-axis
/// motion, O(theta^2) magnitude error otherwise -- negligible at
/// finite-difference step sizes.
inline Eigen::Vector3d small_rotation_vector(const Eigen::Matrix3d& r_plus,
                                             const Eigen::Matrix3d& r_minus) {
  Eigen::Matrix3d d = r_plus * r_minus.transpose();
  return Eigen::Vector3d(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)) * 0.5;
}

/// Central-difference geometric Jacobian of the tool frame.
/// Rows 0-2: angular velocity; rows 3-5: linear velocity.
inline Eigen::MatrixXd numeric_jacobian(const SerialChain& chain, const JointConfig& q,
                                        double step = 1e-6) {
  const std::size_t n = chain.joints.size();
  if (q.size() != n) {
    throw std::invalid_argument("numeric_jacobian: config length mismatch");
  }
  Eigen::MatrixXd jac(6, static_cast<int>(n));
  JointConfig qp = q, qm = q;
  for (std::size_t j = 0; j < n; ++j) {
    qp[j] = q[j] + step;
    qm[j] = q[j] - step;
    const Pose tp = tool_pose(chain, qp);
    const Pose tm = tool_pose(chain, qm);
    qp[j] = q[j];
    qm[j] = q[j];

    const Eigen::Vector3d w = small_rotation_vector(tp.rotation, tm.rotation) / (2.0 * step);
    const Eigen::Vector3d v = (tp.translation - tm.translation) / (2.0 * step);
    jac.block<3, 1>(0, static_cast<int>(j)) = w;
    jac.block<3, 1>(3, static_cast<int>(j)) = v;
  }
  return jac;
}

/// Smallest singular value of the selected row block; 0 at an exact
/// singularity.
inline double conditioning_metric(const Eigen::MatrixXd& jac, JacobianRows rows) {
  if (jac.cols() < 1) throw std::invalid_argument("conditioning_metric: empty Jacobian");
  Eigen::MatrixXd block;
  if (rows == JacobianRows::angular_only) {
    block = jac.topRows(3);
  } else {
    block = jac;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(block);
  return svd.singularValues().tail(1)(0);
}

}  // namespace exokin
