#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exokin/chain.hpp"
#include "exokin/jacobian.hpp"
#include "exokin/parallel.hpp"
#include "exokin/sphere_grid.hpp"

namespace exokin {

/// Inter-axis angles of a 3R concurrent-axis shoulder concept:
///   theta1 = angle(axis1, axis2)
///   theta2 = angle(axis2, axis3)
///   theta3 = angle(axis3, distal pointing direction)
/// with axis1 the most proximal joint. Each angle lies in [0, pi/2].
struct AxisTriplet {
  Angle theta1;
  Angle theta2;
  Angle theta3;

  static AxisTriplet from_degrees(double t1, double t2, double t3) {
    AxisTriplet t{Angle::degrees(t1), Angle::degrees(t2), Angle::degrees(t3)};
    t.validate();
    return t;
  }

  void validate() const {
    constexpr double half_pi = std::numbers::pi / 2.0;
    for (const Angle a : {theta1, theta2, theta3}) {
      if (!a.finite() || a.rad < 0.0 || a.rad > half_pi + 1e-12) {
        throw std::invalid_argument("AxisTriplet: angles must lie in [0, pi/2]");
      }
    }
  }
};

/// Closed-inequality test for a 3R concurrent-axis joint sweeping the
/// full sphere of pointing directions:
///   pi/2 - theta3 <= theta2 <= pi/2 + theta3
///   pi - theta2 - theta3 <= theta1 <= theta2 + theta3
/// Inequalities are inclusive: boundary triples count as full-sphere.
inline bool full_sphere_condition(const AxisTriplet& t) {
  t.validate();
  constexpr double half_pi = std::numbers::pi / 2.0;
  const double t1 = t.theta1.rad, t2 = t.theta2.rad, t3 = t.theta3.rad;
  const double eps = 1e-12;  // absorb degree->radian rounding on exact boundaries
  const bool second_axis_ok = (half_pi - t3 - eps <= t2) && (t2 <= half_pi + t3 + eps);
  const bool first_axis_ok =
      (std::numbers::pi - t2 - t3 - eps <= t1) && (t1 <= t2 + t3 + eps);
  return second_axis_ok && first_axis_ok;
}

/// Canonical realization of a triplet: three revolute axes through the
/// origin, laid out in the x-z plane at cumulative polar angles
/// (0, theta1, theta1+theta2), tool z-axis pointing at polar angle
/// theta1+theta2+theta3. Successive axes sit in the plane spanned by
/// their predecessor and the x reference, so azimuth is canonical; with
/// full-circle joint ranges that choice does not change the reachable
/// pointing set.
inline SerialChain canonical_3r_chain(const AxisTriplet& t) {
  t.validate();
  auto polar_dir = [](double polar) {
    return Eigen::Vector3d(std::sin(polar), 0.0, std::cos(polar));
  };
  const double p1 = 0.0;
  const double p2 = t.theta1.rad;
  const double p3 = t.theta1.rad + t.theta2.rad;
  const double pd = t.theta1.rad + t.theta2.rad + t.theta3.rad;

  SerialChain chain;
  for (double polar : {p1, p2, p3}) {
    JointStage stage;
    stage.joint.kind = JointKind::revolute;
    stage.joint.axis = UnitVec3::normalized(polar_dir(polar));
    stage.joint.anchor = Eigen::Vector3d::Zero();
    chain.joints.push_back(stage);
  }
  chain.joints[0].joint.label = "gh1";
  chain.joints[1].joint.label = "gh2";
  chain.joints[2].joint.label = "gh3";
  chain.tool_transform.rotation =
      rotation_between(UnitVec3(0, 0, 1), UnitVec3::normalized(polar_dir(pd)));
  return chain;
}

/// Pointing direction of a chain's tool frame: its z-axis.
inline Eigen::Vector3d pointing_direction(const Pose& tool) {
  return tool.rotation.col(2);
}

struct CoverageOptions {
  int samples_per_axis = 64;
  int bins = 1000;
  int threads = 1;
  /// Joint ranges; unset means full circles [0, 2*pi) sampled without
  /// the duplicate endpoint. Bounded ranges sample endpoints inclusive.
  std::optional<std::array<std::pair<double, double>, 3>> joint_ranges;
};

struct CoverageResult {
  double fraction = 0.0;
  int bin_count = 0;
  std::vector<std::uint8_t> covered;
};

namespace detail {

inline std::vector<double> coverage_samples(int n,
                                            const std::optional<std::pair<double, double>>& range) {
  std::vector<double> qs(static_cast<std::size_t>(n));
  if (!range) {
    for (int i = 0; i < n; ++i) qs[i] = 2.0 * std::numbers::pi * i / n;
  } else {
    const auto [lo, hi] = *range;
    if (n == 1) {
      qs[0] = 0.5 * (lo + hi);
    } else {
      for (int i = 0; i < n; ++i) qs[i] = lo + (hi - lo) * i / (n - 1.0);
    }
  }
  return qs;
}

}  // namespace detail

/// Brute-force full-sphere oracle: sample the joint grid of
/// canonical_3r_chain(t), bin the tool pointing directions into
/// equal-area bins, return covered bins / total bins.
///
/// The pointing direction factors as R1(q1) R2(q2) R3(q3) d with all
/// axes through the origin, which is what forward_kinematics computes
/// for this chain; the nested evaluation below just reuses the two
/// inner levels across the grid. Per-thread bin masks are OR-reduced,
/// so the result is independent of the worker count.
inline CoverageResult sphere_coverage_map(const AxisTriplet& t, const CoverageOptions& opt) {
  if (opt.samples_per_axis < 8) {
    throw std::invalid_argument("sphere_coverage: need >= 8 samples per axis");
  }
  if (opt.bins < 100) {
    throw std::invalid_argument("sphere_coverage: need >= 100 bins");
  }
  const SerialChain chain = canonical_3r_chain(t);
  const SphereBinning binning(opt.bins);
  const int n = opt.samples_per_axis;

  std::array<std::optional<std::pair<double, double>>, 3> ranges{};
  if (opt.joint_ranges) {
    for (int a = 0; a < 3; ++a) ranges[a] = (*opt.joint_ranges)[a];
  }

  std::array<std::vector<Eigen::Matrix3d>, 3> rots;
  for (int a = 0; a < 3; ++a) {
    const auto qs = detail::coverage_samples(n, ranges[a]);
    rots[a].reserve(qs.size());
    for (double q : qs) {
      rots[a].push_back(joint_motion(chain.joints[a].joint, q).rotation);
    }
  }
  const Eigen::Vector3d d0 = pointing_direction(chain.tool_transform);

  // Innermost level first: w3[k] = R3_k * d0, then w23 = R2_j * w3[k].
  std::vector<Eigen::Vector3d> w3(rots[2].size());
  for (std::size_t k = 0; k < rots[2].size(); ++k) w3[k] = rots[2][k] * d0;
  std::vector<Eigen::Vector3d> w23(rots[1].size() * w3.size());
  for (std::size_t j = 0; j < rots[1].size(); ++j) {
    for (std::size_t k = 0; k < w3.size(); ++k) {
      w23[j * w3.size() + k] = rots[1][j] * w3[k];
    }
  }

  const int threads = resolve_threads(opt.threads);
  std::vector<std::vector<std::uint8_t>> masks(
      static_cast<std::size_t>(threads),
      std::vector<std::uint8_t>(static_cast<std::size_t>(binning.bin_count()), 0));
  std::atomic<int> next_slot{0};
  parallel_chunks(static_cast<long>(rots[0].size()), threads, [&](long b, long e) {
    auto& mask = masks[static_cast<std::size_t>(next_slot.fetch_add(1))];
    for (long i = b; i < e; ++i) {
      const Eigen::Matrix3d& r1 = rots[0][static_cast<std::size_t>(i)];
      for (const Eigen::Vector3d& w : w23) {
        mask[static_cast<std::size_t>(binning.bin_index(r1 * w))] = 1;
      }
    }
  });

  CoverageResult res;
  res.bin_count = binning.bin_count();
  res.covered.assign(static_cast<std::size_t>(res.bin_count), 0);
  for (const auto& mask : masks) {
    for (std::size_t i = 0; i < mask.size(); ++i) res.covered[i] |= mask[i];
  }
  long hit = 0;
  for (auto c : res.covered) hit += c;
  res.fraction = static_cast<double>(hit) / res.bin_count;
  return res;
}

inline double sphere_coverage(const AxisTriplet& t, int samples_per_axis, int bins,
                              int threads = 1) {
  CoverageOptions opt;
  opt.samples_per_axis = samples_per_axis;
  opt.bins = bins;
  opt.threads = threads;
  return sphere_coverage_map(t, opt).fraction;
}

/// Least-squares common point of all revolute axes at the zero
/// configuration. Returned only when the farthest axis is within tol
/// meters of that point.
inline std::optional<Eigen::Vector3d> axes_concurrency(const SerialChain& chain, double tol) {
  const JointConfig zero(chain.joints.size(), 0.0);
  const auto axes = world_axes(chain, zero);

  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  int revolute_count = 0;
  for (std::size_t i = 0; i < chain.joints.size(); ++i) {
    if (chain.joints[i].joint.kind != JointKind::revolute) continue;
    ++revolute_count;
    const Eigen::Vector3d& d = axes[i].first;
    const Eigen::Matrix3d proj = Eigen::Matrix3d::Identity() - d * d.transpose();
    a += proj;
    b += proj * axes[i].second;
  }
  if (revolute_count < 2) {
    throw std::invalid_argument("axes_concurrency: need >= 2 revolute joints");
  }

  // Pseudoinverse solve: parallel-axis bundles leave the along-axis
  // component undetermined; the minimal-norm point still works for the
  // distance test below.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(a);
  Eigen::Vector3d inv = Eigen::Vector3d::Zero();
  const double scale = eig.eigenvalues().cwiseAbs().maxCoeff();
  for (int i = 0; i < 3; ++i) {
    if (eig.eigenvalues()(i) > 1e-12 * std::max(1.0, scale)) {
      inv(i) = 1.0 / eig.eigenvalues()(i);
    }
  }
  const Eigen::Vector3d point =
      eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose() * b;

  for (std::size_t i = 0; i < chain.joints.size(); ++i) {
    if (chain.joints[i].joint.kind != JointKind::revolute) continue;
    const Eigen::Vector3d& d = axes[i].first;
    const Eigen::Vector3d rel = point - axes[i].second;
    if ((rel - d.dot(rel) * d).norm() > tol) return std::nullopt;
  }
  return point;
}

/// A 3R shoulder concept: triplet geometry plus the axis-role labels.
/// Labels are biologic axis names (HABD, FE, IE, ABD); a trailing '*'
/// marks a tilted, non-biologic substitute.
struct GHConcept {
  AxisTriplet triplet;
  std::array<std::string, 3> sequence{"HABD", "FE", "IE"};
  bool biologic = true;
  std::array<std::pair<double, double>, 3> joint_limits{
      std::pair{-std::numbers::pi, std::numbers::pi},
      std::pair{-std::numbers::pi, std::numbers::pi},
      std::pair{-std::numbers::pi, std::numbers::pi}};

  void validate() const {
    triplet.validate();
    if (sequence[0] == sequence[1] || sequence[1] == sequence[2] ||
        sequence[0] == sequence[2]) {
      throw std::invalid_argument("GHConcept: sequence labels must be distinct");
    }
    for (const auto& [lo, hi] : joint_limits) {
      if (lo > hi) throw std::invalid_argument("GHConcept: empty joint limit interval");
    }
  }
};

struct GimbalHit {
  JointConfig q;
  double metric = 0.0;
};

/// Grid scan for gimbal proximity: configurations inside the joint
/// limits where the 3x3 angular Jacobian's smallest singular value
/// drops below the threshold. Sorted ascending by metric.
inline std::vector<GimbalHit> gimbal_scan(const GHConcept& gh_concept, int grid,
                                          double threshold = 0.05, double fd_step = 1e-6) {
  gh_concept.validate();
  if (grid < 16) throw std::invalid_argument("gimbal_scan: need >= 16 samples per joint");

  SerialChain chain = canonical_3r_chain(gh_concept.triplet);
  for (int a = 0; a < 3; ++a) {
    chain.joints[a].joint.lower = gh_concept.joint_limits[a].first;
    chain.joints[a].joint.upper = gh_concept.joint_limits[a].second;
  }

  std::array<std::vector<double>, 3> samples;
  for (int a = 0; a < 3; ++a) {
    const auto [lo, hi] = gh_concept.joint_limits[a];
    const bool full_circle = (hi - lo) >= 2.0 * std::numbers::pi - 1e-12;
    std::optional<std::pair<double, double>> range;
    if (!full_circle) range = gh_concept.joint_limits[a];
    samples[a] = detail::coverage_samples(grid, range);
    if (full_circle) {
      for (double& q : samples[a]) q += lo;  // shift [0,2pi) grid into the limit window
    }
  }

  std::vector<GimbalHit> hits;
  JointConfig q(3, 0.0);
  for (double q1 : samples[0]) {
    for (double q2 : samples[1]) {
      for (double q3 : samples[2]) {
        q[0] = q1;
        q[1] = q2;
        q[2] = q3;
        const double m =
            conditioning_metric(numeric_jacobian(chain, q, fd_step), JacobianRows::angular_only);
        if (m < threshold) hits.push_back(GimbalHit{q, m});
      }
    }
  }
  std::sort(hits.begin(), hits.end(), [](const GimbalHit& a, const GimbalHit& b) {
    if (a.metric != b.metric) return a.metric < b.metric;
    return a.q < b.q;
  });
  return hits;
}

}  // namespace exokin
