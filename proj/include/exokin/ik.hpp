#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "exokin/chain.hpp"
#include "exokin/jacobian.hpp"

namespace exokin {

/// One rigid target for a chain frame: the frame must carry
/// `local_point` to `target_position` with orientation `target_rotation`.
struct FrameTarget {
  int frame = 0;  // chain frame index; -1 addresses the base frame
  Eigen::Vector3d local_point = Eigen::Vector3d::Zero();
  Eigen::Matrix3d target_rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d target_position = Eigen::Vector3d::Zero();
};

struct IkOptions {
  double damping = 1e-3;
  int max_iterations = 200;
  double position_tol = 1e-3;    // m
  double orientation_tol = 1e-2; // rad
  double fd_step = 1e-6;
};

struct IkResult {
  JointConfig q;
  bool converged = false;
  double position_error = 0.0;
  double orientation_error = 0.0;
  int iterations = 0;
};

namespace detail {

inline Pose frame_at(const std::vector<Pose>& frames, const SerialChain& chain, int idx) {
  if (idx < 0) return chain.base_pose;
  return frames[static_cast<std::size_t>(idx)];
}

inline Eigen::Vector3d rotation_log(const Eigen::Matrix3d& r) {
  const double c = std::clamp((r.trace() - 1.0) * 0.5, -1.0, 1.0);
  const double theta = std::acos(c);
  Eigen::Vector3d w(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  const double s = w.norm() * 0.5;
  if (theta < 1e-9) return 0.5 * w;
  if (s < 1e-9) {
    // near pi: extract the axis from the symmetric part
    Eigen::Vector3d axis;
    const Eigen::Matrix3d m = 0.5 * (r + Eigen::Matrix3d::Identity());
    int k = 0;
    m.diagonal().maxCoeff(&k);
    axis = m.col(k).normalized();
    return theta * axis;
  }
  return (theta / (2.0 * s)) * w;
}

}  // namespace detail

/// Stacked error (orientation log; position) of all targets at q.
inline Eigen::VectorXd frame_target_error(const SerialChain& chain, const JointConfig& q,
                                          const std::vector<FrameTarget>& targets) {
  const auto frames = forward_kinematics(chain, q);
  Eigen::VectorXd err(6 * static_cast<int>(targets.size()));
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const Pose f = detail::frame_at(frames, chain, targets[t].frame);
    err.segment<3>(static_cast<int>(6 * t)) =
        detail::rotation_log(targets[t].target_rotation * f.rotation.transpose());
    err.segment<3>(static_cast<int>(6 * t + 3)) =
        targets[t].target_position - f.apply(targets[t].local_point);
  }
  return err;
}

/// Damped least squares over all chain joints, driving the stacked
/// frame errors to zero. Numeric Jacobian, steps clamped to joint
/// limits, deterministic for a given seed.
inline IkResult solve_frames_dls(const SerialChain& chain, const std::vector<FrameTarget>& targets,
                                 const JointConfig& seed, const IkOptions& opt = {}) {
  const int n = static_cast<int>(chain.joints.size());
  const int m = 6 * static_cast<int>(targets.size());
  IkResult res;
  res.q = seed;

  auto error_norms = [&](const Eigen::VectorXd& e) {
    double pos = 0.0, ori = 0.0;
    for (int t = 0; t < static_cast<int>(targets.size()); ++t) {
      ori = std::max(ori, e.segment<3>(6 * t).norm());
      pos = std::max(pos, e.segment<3>(6 * t + 3).norm());
    }
    return std::pair{pos, ori};
  };

  for (int it = 0; it < opt.max_iterations; ++it) {
    const Eigen::VectorXd err = frame_target_error(chain, res.q, targets);
    auto [pos, ori] = error_norms(err);
    res.position_error = pos;
    res.orientation_error = ori;
    res.iterations = it;
    if (pos < opt.position_tol && ori < opt.orientation_tol) {
      res.converged = true;
      return res;
    }

    // Numeric Jacobian of the stacked error by central differences.
    Eigen::MatrixXd jac(m, n);
    JointConfig qp = res.q, qm = res.q;
    for (int j = 0; j < n; ++j) {
      qp[static_cast<std::size_t>(j)] += opt.fd_step;
      qm[static_cast<std::size_t>(j)] -= opt.fd_step;
      const Eigen::VectorXd ep = frame_target_error(chain, qp, targets);
      const Eigen::VectorXd em = frame_target_error(chain, qm, targets);
      jac.col(j) = -(ep - em) / (2.0 * opt.fd_step);  // d(err)/dq = -d(frame)/dq
      qp[static_cast<std::size_t>(j)] = res.q[static_cast<std::size_t>(j)];
      qm[static_cast<std::size_t>(j)] = res.q[static_cast<std::size_t>(j)];
    }

    const Eigen::MatrixXd jjt = jac * jac.transpose() +
                                opt.damping * opt.damping *
                                    Eigen::MatrixXd::Identity(m, m);
    const Eigen::VectorXd dq = jac.transpose() * jjt.ldlt().solve(err);
    for (int j = 0; j < n; ++j) {
      const auto& spec = chain.joints[static_cast<std::size_t>(j)].joint;
      res.q[static_cast<std::size_t>(j)] =
          std::clamp(res.q[static_cast<std::size_t>(j)] + dq(j), spec.lower, spec.upper);
    }
  }

  const Eigen::VectorXd err = frame_target_error(chain, res.q, targets);
  auto [pos, ori] = error_norms(err);
  res.position_error = pos;
  res.orientation_error = ori;
  res.iterations = opt.max_iterations;
  res.converged = pos < opt.position_tol && ori < opt.orientation_tol;
  return res;
}

}  // namespace exokin
