#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "exokin/arm.hpp"
#include "exokin/design.hpp"
#include "exokin/gh.hpp"
#include "exokin/ik.hpp"

namespace exokin {

// ---------------------------------------------------------------------------
// Mobility of the coupled human+exoskeleton loop
// ---------------------------------------------------------------------------

struct CoupledJoint {
  int body_a = 0;
  int body_b = 0;
  int dof = 1;  // 1..6
};

/// Body-and-joint incidence of the coupled system. Body 0 is ground;
/// rigid cuffs merge bodies instead of appearing as 0-DOF joints.
struct CoupledModel {
  int bodies = 0;  // including ground
  std::vector<CoupledJoint> joints;

  void validate() const {
    if (bodies < 2) throw std::invalid_argument("CoupledModel: need >= 2 bodies");
    for (const auto& j : joints) {
      if (j.dof < 1 || j.dof > 6) {
        throw std::invalid_argument("CoupledModel: joint DOF must lie in [1, 6]");
      }
      if (j.body_a < 0 || j.body_a >= bodies || j.body_b < 0 || j.body_b >= bodies ||
          j.body_a == j.body_b) {
        throw std::invalid_argument("CoupledModel: joint connects invalid bodies");
      }
    }
  }
};

/// Spatial Gruebler-Kutzbach count M = 6(N - 1 - J) + sum(f_i), and the
/// hyperstaticity flag M < expected task mobility. The count is purely
/// structural; special geometries that move despite M < 0 are outside
/// its reach.
inline std::pair<int, bool> mobility_count(const CoupledModel& m, int expected_task_mobility) {
  m.validate();
  int sum_f = 0;
  for (const auto& j : m.joints) sum_f += j.dof;
  const int mobility =
      6 * (m.bodies - 1 - static_cast<int>(m.joints.size())) + sum_f;
  return {mobility, mobility < expected_task_mobility};
}

/// Assemble the body-joint incidence of a reference arm (7 single-DOF
/// joints off ground) coupled to a realized exoskeleton chain by its
/// cuffs. Every cuff is a rigid merge -- self-aligning freedom already
/// lives in the chain's passive joints -- so each cuff deletes one body.
inline CoupledModel couple_arm_and_exo(const RealizedChain& realized) {
  const int arm_joints = 7;
  const int exo_joints = static_cast<int>(realized.chain.joints.size());

  // Arm bodies 1..7 chained off ground; exo bodies arm_joints+1 .. +exo_joints.
  CoupledModel m;
  std::vector<int> arm_body(arm_joints + 1);
  for (int i = 0; i <= arm_joints; ++i) arm_body[i] = i;  // arm_body[0] = ground
  std::vector<int> exo_body(exo_joints + 1);
  exo_body[0] = 0;
  for (int i = 1; i <= exo_joints; ++i) exo_body[i] = arm_joints + i;
  int body_count = 1 + arm_joints + exo_joints;

  // Rigid cuffs merge the arm segment body with the exo link body.
  // Arm segment bodies: upper arm after its 3 GH joints (body 3),
  // forearm after elbow+PS (body 5), hand after the wrist pair (body 7).
  auto arm_segment_body = [&](AttachmentCuff::Segment s) {
    switch (s) {
      case AttachmentCuff::Segment::upper_arm: return arm_body[3];
      case AttachmentCuff::Segment::forearm: return arm_body[5];
      case AttachmentCuff::Segment::hand: return arm_body[7];
    }
    return arm_body[3];
  };

  std::vector<int> remap(static_cast<std::size_t>(body_count));
  for (int i = 0; i < body_count; ++i) remap[static_cast<std::size_t>(i)] = i;
  auto root = [&](int b) {
    while (remap[static_cast<std::size_t>(b)] != b) b = remap[static_cast<std::size_t>(b)];
    return b;
  };
  for (const auto& cuff : realized.cuffs) {
    const int a = root(arm_segment_body(cuff.cuff.segment));
    const int e = root(exo_body[static_cast<std::size_t>(cuff.link_frame + 1)]);
    if (a != e) remap[static_cast<std::size_t>(std::max(a, e))] = std::min(a, e);
  }

  std::map<int, int> compact;
  for (int i = 0; i < body_count; ++i) {
    const int r = root(i);
    if (!compact.count(r)) {
      const int next = static_cast<int>(compact.size());
      compact[r] = next;
    }
  }
  m.bodies = static_cast<int>(compact.size());

  for (int i = 1; i <= arm_joints; ++i) {
    m.joints.push_back(CoupledJoint{compact[root(arm_body[i - 1])],
                                    compact[root(arm_body[i])], 1});
  }
  for (int i = 1; i <= exo_joints; ++i) {
    m.joints.push_back(CoupledJoint{compact[root(exo_body[i - 1])],
                                    compact[root(exo_body[i])], 1});
  }
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------
// Arm ROM coverage
// ---------------------------------------------------------------------------

struct RomOptions {
  IkOptions ik;
  bool force_ik = false;  // use the IK route even for biologic designs
};

namespace detail {

inline std::vector<double> rom_grid(const ArmModel& arm, ArmDOF dof, int n) {
  const auto [lo, hi] = arm.rom_of(dof);
  std::vector<double> qs(static_cast<std::size_t>(n));
  if (n == 1) {
    qs[0] = 0.5 * (lo.rad + hi.rad);
    return qs;
  }
  for (int i = 0; i < n; ++i) qs[static_cast<std::size_t>(i)] = lo.rad + (hi.rad - lo.rad) * i / (n - 1.0);
  return qs;
}

template <class Fn>
void for_each_grid_pose(const ArmModel& arm, int samples_per_dof, Fn&& fn) {
  const auto dofs = arm.canonical_dofs();
  std::array<std::vector<double>, 7> grids;
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    grids[i] = rom_grid(arm, dofs[i], samples_per_dof);
  }
  const std::size_t n = static_cast<std::size_t>(samples_per_dof);
  std::size_t total = 1;
  for (int k = 0; k < 7; ++k) total *= n;

  JointConfig pose(7, 0.0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int k = 6; k >= 0; --k) {
      pose[static_cast<std::size_t>(k)] = grids[static_cast<std::size_t>(k)][rem % n];
      rem /= n;
    }
    fn(pose);
  }
}

}  // namespace detail

/// Fraction of a uniform arm-ROM grid the design can follow. Biologic
/// designs map arm DOF straight onto chain joints and check the chain's
/// joint limits (a missing DOF is covered only at its rest value);
/// otherwise damped-least-squares IK must place every cuff frame within
/// 1e-3 m and 1e-2 rad.
inline double rom_coverage(const RealizedChain& realized, const ArmModel& arm,
                           int samples_per_dof, const RomOptions& opt = {}) {
  if (samples_per_dof < 2) throw std::invalid_argument("rom_coverage: need >= 2 samples per DOF");
  const auto dofs = arm.canonical_dofs();

  long covered = 0, total = 0;
  const bool direct = realized.biologic_direct && !opt.force_ik;

  if (direct) {
    detail::for_each_grid_pose(arm, samples_per_dof, [&](const JointConfig& pose) {
      ++total;
      for (std::size_t k = 0; k < dofs.size(); ++k) {
        const auto it = realized.dof_joint.find(dofs[k]);
        if (it == realized.dof_joint.end()) {
          // Arm DOF with no chain joint: only its rest value conforms.
          if (std::abs(pose[k]) > 1e-9) return;
          continue;
        }
        const auto& j = realized.chain.joints[static_cast<std::size_t>(it->second)].joint;
        if (pose[k] < j.lower || pose[k] > j.upper) return;
      }
      ++covered;
    });
    return static_cast<double>(covered) / static_cast<double>(total);
  }

  JointConfig seed(realized.chain.joints.size(), 0.0);
  detail::for_each_grid_pose(arm, samples_per_dof, [&](const JointConfig& pose) {
    ++total;
    const ArmFrames frames = arm_fk(arm, pose);
    std::vector<FrameTarget> targets;
    targets.reserve(realized.cuffs.size());
    for (const auto& cuff : realized.cuffs) {
      FrameTarget t;
      t.frame = cuff.link_frame;
      t.local_point = cuff.rest_anchor;
      const Pose* seg = &frames.humerus;
      if (cuff.cuff.segment == AttachmentCuff::Segment::forearm) seg = &frames.forearm;
      if (cuff.cuff.segment == AttachmentCuff::Segment::hand) seg = &frames.hand;
      t.target_rotation = seg->rotation;
      t.target_position = seg->apply(cuff.rest_anchor);
      targets.push_back(t);
    }
    const IkResult r = solve_frames_dls(realized.chain, targets, seed, opt.ik);
    if (r.converged) {
      ++covered;
      seed = r.q;  // warm-start the neighboring grid sample
    }
  });
  return static_cast<double>(covered) / static_cast<double>(total);
}

// ---------------------------------------------------------------------------
// Singularity scan over the chain's own joint space
// ---------------------------------------------------------------------------

struct ScanResult {
  double min_metric = std::numeric_limits<double>::infinity();
  std::vector<GimbalHit> singular;
  long evaluated = 0;
};

/// Grid scan of conditioning_metric over the in-limits joint space.
/// When the full grid exceeds the budget, the per-joint sample count is
/// reduced uniformly (deterministically) to fit.
inline ScanResult singularity_scan(const SerialChain& chain, int grid, double threshold,
                                   JacobianRows rows = JacobianRows::full, long budget = 200000,
                                   double fd_step = 1e-6) {
  if (grid < 8) throw std::invalid_argument("singularity_scan: need >= 8 samples per joint");
  const int n = static_cast<int>(chain.joints.size());

  int per_joint = grid;
  auto total_of = [&](int g) {
    double t = 1.0;
    for (int i = 0; i < n; ++i) t *= g;
    return t;
  };
  while (per_joint > 1 && total_of(per_joint) > static_cast<double>(budget)) --per_joint;
  per_joint = std::max(per_joint, 1);

  std::vector<std::vector<double>> samples(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& j = chain.joints[static_cast<std::size_t>(i)].joint;
    const int g = (j.upper - j.lower) < 1e-12 ? 1 : per_joint;
    samples[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(g));
    for (int k = 0; k < g; ++k) {
      samples[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
          g == 1 ? j.lower : j.lower + (j.upper - j.lower) * k / (g - 1.0);
    }
  }

  ScanResult res;
  JointConfig q(static_cast<std::size_t>(n), 0.0);
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  bool done = false;
  while (!done) {
    for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i)] = samples[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
    const double m = conditioning_metric(numeric_jacobian(chain, q, fd_step), rows);
    ++res.evaluated;
    res.min_metric = std::min(res.min_metric, m);
    if (m < threshold) res.singular.push_back(GimbalHit{q, m});

    int k = n - 1;
    while (k >= 0) {
      if (++idx[static_cast<std::size_t>(k)] < samples[static_cast<std::size_t>(k)].size()) break;
      idx[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) done = true;
  }
  std::sort(res.singular.begin(), res.singular.end(), [](const GimbalHit& a, const GimbalHit& b) {
    if (a.metric != b.metric) return a.metric < b.metric;
    return a.q < b.q;
  });
  return res;
}

// ---------------------------------------------------------------------------
// Whole-design report
// ---------------------------------------------------------------------------

struct ValidationReport {
  std::string design_id;
  double rom_coverage = 0.0;
  double min_conditioning = 0.0;
  std::vector<GimbalHit> singular_configs;
  int mobility = 0;
  bool hyperstatic = false;
  std::set<ArmDOF> dof_gaps;
  bool realized = false;
  std::string error;
};

struct ValidateOptions {
  int rom_samples_per_dof = 3;
  int singularity_grid = 8;
  long singularity_budget = 20000;
  double singularity_threshold = 0.05;
  int expected_task_mobility = 7;
  RomOptions rom;
};

inline ValidationReport validate_design(const ExoDesign& design, const ArmModel& arm,
                                        const std::string& id, const ValidateOptions& opt) {
  ValidationReport rep;
  rep.design_id = id;
  rep.dof_gaps = dof_gaps(design);
  try {
    const RealizedChain realized = realize_chain(design, arm);
    rep.realized = true;
    rep.rom_coverage = rom_coverage(realized, arm, opt.rom_samples_per_dof, opt.rom);
    const ScanResult scan =
        singularity_scan(realized.chain, opt.singularity_grid, opt.singularity_threshold,
                         JacobianRows::full, opt.singularity_budget);
    rep.min_conditioning = scan.min_metric;
    rep.singular_configs = scan.singular;
    const CoupledModel coupled = couple_arm_and_exo(realized);
    const auto [mob, hyper] = mobility_count(coupled, opt.expected_task_mobility);
    rep.mobility = mob;
    rep.hyperstatic = hyper;
  } catch (const std::exception& e) {
    rep.error = e.what();
  }
  return rep;
}

}  // namespace exokin
