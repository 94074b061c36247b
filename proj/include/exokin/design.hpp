#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "exokin/arm.hpp"
#include "exokin/gh.hpp"
#include "exokin/girdle.hpp"

namespace exokin {

struct AttachmentCuff {
  enum class Segment { upper_arm, forearm, hand };
  enum class Rigidity { rigid, compliant };
  Segment segment = Segment::upper_arm;
  Rigidity rigidity = Rigidity::rigid;
  int passive_dof = 0;

  static const char* segment_name(Segment s) {
    switch (s) {
      case Segment::upper_arm: return "upper_arm";
      case Segment::forearm: return "forearm";
      case Segment::hand: return "hand";
    }
    return "?";
  }
};

/// Physical human-robot interfaces. An exoskeleton proper needs more
/// than one; single-cuff specs are flagged by is_exoskeleton(), not
/// rejected.
struct AttachmentSpec {
  std::vector<AttachmentCuff> cuffs;

  bool is_exoskeleton() const { return cuffs.size() > 1; }
  int total_passive_dof() const {
    int n = 0;
    for (const auto& c : cuffs) n += c.passive_dof;
    return n;
  }
  void validate() const {
    if (cuffs.empty()) throw std::invalid_argument("AttachmentSpec: need >= 1 cuff");
    for (const auto& c : cuffs) {
      if (c.passive_dof < 0) throw std::invalid_argument("AttachmentSpec: negative passive DOF");
    }
  }
};

enum class ElbowKind { IdealHinge, LooseHinge };

struct ElbowConcept {
  ElbowKind kind = ElbowKind::IdealHinge;
  FrustumParams frustum;  // used by LooseHinge
};

enum class ForearmKind { None, AxialPS };

struct ForearmConcept {
  ForearmKind kind = ForearmKind::None;
  Angle load_angle = Angle::degrees(10.0);
};

enum class WristKind { None, WFEOnly, UDOnly, WFEAndUD };

struct WristConcept {
  WristKind kind = WristKind::None;
  double ud_axis_offset = 0.01;  // m
};

/// A point in the design grammar: one concept per functional block.
struct ExoDesign {
  std::optional<GHConcept> gh;
  GirdleConcept girdle;
  std::optional<ElbowConcept> elbow;
  ForearmConcept forearm;
  WristConcept wrist;
  AttachmentSpec attachment;

  void validate() const {
    const bool has_wrist = wrist.kind != WristKind::None;
    if (!gh && !elbow && !has_wrist) {
      throw std::invalid_argument("ExoDesign: needs at least one of gh/elbow/wrist");
    }
    if (gh) gh->validate();
    girdle.validate();
    attachment.validate();
  }
};

/// Finite option sets, one per design dimension. Enumeration walks
/// their Cartesian product.
struct GrammarOptions {
  std::vector<GHConcept> gh;
  std::vector<GirdleConcept> girdle;
  std::vector<ElbowConcept> elbow;
  std::vector<ForearmConcept> forearm;
  std::vector<WristConcept> wrist;
  std::vector<AttachmentSpec> attachment;

  void validate() const {
    if (gh.empty() || girdle.empty() || elbow.empty() || forearm.empty() ||
        wrist.empty() || attachment.empty()) {
      throw std::invalid_argument("GrammarOptions: every option set must be nonempty");
    }
  }

  unsigned long long combination_count() const {
    return static_cast<unsigned long long>(gh.size()) * girdle.size() * elbow.size() *
           forearm.size() * wrist.size() * attachment.size();
  }
};

using DesignFilter = std::function<bool(const ExoDesign&)>;

/// Streamed Cartesian-product enumeration in lexicographic dimension
/// order (gh, girdle, elbow, forearm, wrist, attachment). The sink
/// receives each surviving design together with its index in the
/// filtered sequence. Deterministic by construction.
inline unsigned long long enumerate_designs(
    const GrammarOptions& opts, const std::vector<DesignFilter>& filters,
    const std::function<void(const ExoDesign&, unsigned long long)>& sink) {
  opts.validate();
  unsigned long long emitted = 0;
  for (const auto& gh : opts.gh) {
    for (const auto& girdle : opts.girdle) {
      for (const auto& elbow : opts.elbow) {
        for (const auto& forearm : opts.forearm) {
          for (const auto& wrist : opts.wrist) {
            for (const auto& attachment : opts.attachment) {
              ExoDesign d;
              d.gh = gh;
              d.girdle = girdle;
              d.elbow = elbow;
              d.forearm = forearm;
              d.wrist = wrist;
              d.attachment = attachment;
              bool keep = true;
              for (const auto& f : filters) {
                if (!f(d)) {
                  keep = false;
                  break;
                }
              }
              if (!keep) continue;
              if (sink) sink(d, emitted);
              ++emitted;
            }
          }
        }
      }
    }
  }
  return emitted;
}

inline std::vector<ExoDesign> enumerate_designs(const GrammarOptions& opts,
                                                const std::vector<DesignFilter>& filters = {}) {
  std::vector<ExoDesign> out;
  enumerate_designs(opts, filters,
                    [&out](const ExoDesign& d, unsigned long long) { out.push_back(d); });
  return out;
}

/// Arm DOF the design has a dedicated mobility for. Biologic GH blocks
/// support exactly their labeled axes; a tilted (non-biologic) block
/// that sweeps the full sphere functionally supports all shoulder
/// rotations; a tilted block that does not gets no shoulder credit.
inline std::set<ArmDOF> dof_support(const ExoDesign& d) {
  std::set<ArmDOF> s;
  if (d.gh) {
    if (d.gh->biologic) {
      for (const auto& label : d.gh->sequence) {
        if (auto dof = arm_dof_from_string(label)) s.insert(*dof);
      }
    } else if (full_sphere_condition(d.gh->triplet)) {
      s.insert(ArmDOF::HABD);
      s.insert(ArmDOF::ABD);
      s.insert(ArmDOF::FE);
      s.insert(ArmDOF::IE);
    }
  }
  if (d.elbow) s.insert(ArmDOF::ElbowFE);
  if (d.forearm.kind == ForearmKind::AxialPS) s.insert(ArmDOF::PS);
  if (d.wrist.kind == WristKind::WFEOnly || d.wrist.kind == WristKind::WFEAndUD) {
    s.insert(ArmDOF::WFE);
  }
  if (d.wrist.kind == WristKind::UDOnly || d.wrist.kind == WristKind::WFEAndUD) {
    s.insert(ArmDOF::UD);
  }
  return s;
}

inline std::array<ArmDOF, 7> default_canonical_dofs() {
  return {ArmDOF::HABD, ArmDOF::FE, ArmDOF::IE, ArmDOF::ElbowFE,
          ArmDOF::PS,   ArmDOF::WFE, ArmDOF::UD};
}

/// Canonical arm DOF with no corresponding design mobility. ABD and
/// HABD are interchangeable fillings of the abduction slot.
inline std::set<ArmDOF> dof_gaps(const ExoDesign& d,
                                 const std::array<ArmDOF, 7>& canonical = default_canonical_dofs()) {
  const std::set<ArmDOF> s = dof_support(d);
  auto supported = [&](ArmDOF dof) {
    if (dof == ArmDOF::ABD || dof == ArmDOF::HABD) {
      return s.count(ArmDOF::ABD) > 0 || s.count(ArmDOF::HABD) > 0;
    }
    return s.count(dof) > 0;
  };
  std::set<ArmDOF> gaps;
  for (ArmDOF dof : canonical) {
    if (!supported(dof)) gaps.insert(dof);
  }
  return gaps;
}

struct ConstructionError : std::runtime_error {
  std::string fragment;
  ConstructionError(std::string frag, const std::string& what)
      : std::runtime_error(frag + ": " + what), fragment(std::move(frag)) {}
};

namespace detail {

/// Unit vector at angle `alpha` from pole u and angle `beta` from w.
/// Returns nullopt when the two cones do not intersect.
inline std::optional<Eigen::Vector3d> cone_intersection(const Eigen::Vector3d& u, double alpha,
                                                        const Eigen::Vector3d& w, double beta) {
  const double gamma = angle_between(u, w);
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const double sg = std::sin(gamma), cg = std::cos(gamma);

  Eigen::Vector3d p;  // unit, perpendicular to u, in the u-w plane when possible
  if (sg > 1e-12) {
    p = (w - cg * u).normalized();
  } else {
    const Eigen::Vector3d ref =
        std::abs(u.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    p = (ref - ref.dot(u) * u).normalized();
  }

  if (sa < 1e-12 || sg < 1e-12) {
    // Degenerate cone or poles (anti)parallel: the candidate is fully
    // determined up to azimuth; verify the second constraint directly.
    const Eigen::Vector3d x = (ca * u + sa * p).normalized();
    if (std::abs(angle_between(x, w) - beta) > 1e-9) return std::nullopt;
    return x;
  }

  const double cpsi = (std::cos(beta) - ca * cg) / (sa * sg);
  if (cpsi < -1.0 - 1e-9 || cpsi > 1.0 + 1e-9) return std::nullopt;
  const double psi = std::acos(std::clamp(cpsi, -1.0, 1.0));
  const Eigen::Vector3d q = u.cross(p);
  return (ca * u + sa * (std::cos(psi) * p + std::sin(psi) * q)).normalized();
}

inline std::string strip_tilt(const std::string& label) {
  if (!label.empty() && label.back() == '*') return label.substr(0, label.size() - 1);
  return label;
}

}  // namespace detail

/// World axes of a GH concept anchored at gh_center with the distal
/// pointing direction `rest`. Biologic concepts use the arm's own
/// axes; tilted concepts are constructed from the triplet so the zero
/// configuration points along `rest` whenever the triplet geometry
/// allows it, falling back to the canonical layout otherwise.
inline std::array<UnitVec3, 3> gh_axes_for(const GHConcept& gh_concept, const ArmModel& arm) {
  gh_concept.validate();
  const Eigen::Vector3d rest = arm.rest_direction.vec();

  if (gh_concept.biologic) {
    std::array<std::optional<UnitVec3>, 3> axes;
    for (int i = 0; i < 3; ++i) {
      const auto dof = arm_dof_from_string(gh_concept.sequence[i]);
      if (!dof) {
        throw ConstructionError("gh", "unknown biologic axis label '" + gh_concept.sequence[i] + "'");
      }
      axes[i] = arm.biologic_axes.at(*dof).first;
    }
    // Triplet consistency: inter-axis line angles must match.
    auto line_angle = [](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
      const double t = angle_between(a, b);
      return std::min(t, std::numbers::pi - t);
    };
    const double m1 = line_angle(axes[0]->vec(), axes[1]->vec());
    const double m2 = line_angle(axes[1]->vec(), axes[2]->vec());
    const double m3 = line_angle(axes[2]->vec(), rest);
    if (std::abs(m1 - gh_concept.triplet.theta1.rad) > 1e-9 ||
        std::abs(m2 - gh_concept.triplet.theta2.rad) > 1e-9 ||
        std::abs(m3 - gh_concept.triplet.theta3.rad) > 1e-9) {
      throw ConstructionError("gh", "triplet does not match the biologic axes of the sequence");
    }
    return {*axes[0], *axes[1], *axes[2]};
  }

  // Tilted axes: root the chain on the first label's biologic axis and
  // aim the zero configuration along the rest direction if reachable.
  const auto base_dof = arm_dof_from_string(detail::strip_tilt(gh_concept.sequence[0]));
  const Eigen::Vector3d a1 =
      base_dof ? arm.biologic_axes.at(*base_dof).first.vec() : Eigen::Vector3d(0, 0, 1);
  const double t1 = gh_concept.triplet.theta1.rad;
  const double t2 = gh_concept.triplet.theta2.rad;
  const double t3 = gh_concept.triplet.theta3.rad;
  const double gamma = angle_between(a1, rest);

  const double lo = std::max(std::abs(t2 - t3), std::abs(gamma - t1));
  const double hi = std::min(t2 + t3, gamma + t1);
  if (lo <= hi + 1e-12) {
    const double delta = std::clamp(t2, lo, hi);
    const auto a2 = detail::cone_intersection(a1, t1, rest, delta);
    if (a2) {
      const auto a3 = detail::cone_intersection(*a2, t2, rest, t3);
      if (a3) return {UnitVec3::normalized(a1), UnitVec3::normalized(*a2), UnitVec3::normalized(*a3)};
    }
  }

  // Canonical fallback, rotated so axis1 lies along a1.
  const SerialChain canon = canonical_3r_chain(gh_concept.triplet);
  const Eigen::Matrix3d r = rotation_between(UnitVec3(0, 0, 1), UnitVec3::normalized(a1));
  return {UnitVec3::normalized(r * canon.joints[0].joint.axis.vec()),
          UnitVec3::normalized(r * canon.joints[1].joint.axis.vec()),
          UnitVec3::normalized(r * canon.joints[2].joint.axis.vec())};
}

struct RealizedCuff {
  AttachmentCuff cuff;
  int link_frame = -1;  // chain frame index the cuff shell attaches to
  Eigen::Vector3d rest_anchor = Eigen::Vector3d::Zero();
};

struct RealizedChain {
  SerialChain chain;
  std::map<ArmDOF, int> dof_joint;  // arm DOF -> chain joint, biologic designs
  bool biologic_direct = false;
  std::vector<RealizedCuff> cuffs;
  int gh_first = -1;
};

struct RealizeOptions {
  /// Joint-limit overrides by joint label (radians or meters).
  std::map<std::string, std::pair<double, double>> limit_overrides;
};

/// Realize a design against a reference arm as a serial chain, joint
/// order: girdle, GH, elbow, forearm PS, wrist, with passive cuff DOF
/// appended after the fragment of the segment they attach to.
inline RealizedChain realize_chain(const ExoDesign& design, const ArmModel& arm,
                                   const RealizeOptions& opt = {}) {
  design.validate();
  RealizedChain out;
  SerialChain& chain = out.chain;

  auto push = [&](JointKind kind, const UnitVec3& axis, const Eigen::Vector3d& anchor,
                  std::pair<double, double> limits, const std::string& label) {
    JointStage stage;
    stage.joint.kind = kind;
    stage.joint.axis = axis;
    stage.joint.anchor = anchor;
    if (auto it = opt.limit_overrides.find(label); it != opt.limit_overrides.end()) {
      limits = it->second;
    }
    stage.joint.lower = limits.first;
    stage.joint.upper = limits.second;
    stage.joint.label = label;
    chain.joints.push_back(stage);
    return static_cast<int>(chain.joints.size()) - 1;
  };
  auto rom_limits = [&](ArmDOF dof) {
    const auto [lo, hi] = arm.rom_of(dof);
    return std::pair{lo.rad, hi.rad};
  };

  constexpr std::pair<double, double> girdle_rev_limits{-std::numbers::pi / 4.0,
                                                        std::numbers::pi / 4.0};
  constexpr std::pair<double, double> girdle_slide_limits{-0.15, 0.15};

  switch (design.girdle.kind) {
    case GirdleConcept::Kind::Fixed:
      break;
    case GirdleConcept::Kind::SingleRevolute:
      push(JointKind::revolute, design.girdle.axis, design.girdle.anchor, girdle_rev_limits,
           "girdle_rev");
      break;
    case GirdleConcept::Kind::Polar:
      push(JointKind::revolute, design.girdle.axis, design.girdle.anchor, girdle_rev_limits,
           "girdle_rev");
      push(JointKind::prismatic, design.girdle.prismatic, design.girdle.anchor,
           girdle_slide_limits, "girdle_slide");
      break;
    case GirdleConcept::Kind::Cartesian:
      for (int i = 0; i < 3; ++i) {
        push(JointKind::prismatic, design.girdle.cartesian[i], design.girdle.anchor,
             girdle_slide_limits, "girdle_slide" + std::to_string(i));
      }
      break;
    case GirdleConcept::Kind::AxisLinkage: {
      design.girdle.validate();
      const double lo = design.girdle.coupling.front().second;
      const double hi = design.girdle.coupling.back().second;
      push(JointKind::prismatic, design.girdle.axis, design.girdle.anchor, {lo, hi},
           "girdle_linkage");
      break;
    }
  }

  bool all_biologic = true;
  if (design.gh) {
    const auto axes = gh_axes_for(*design.gh, arm);
    out.gh_first = static_cast<int>(chain.joints.size());
    for (int i = 0; i < 3; ++i) {
      const std::string label = design.gh->sequence[i];
      const int idx = push(JointKind::revolute, axes[i], arm.gh_center,
                           design.gh->joint_limits[i], label);
      if (design.gh->biologic) {
        if (auto dof = arm_dof_from_string(label)) out.dof_joint[*dof] = idx;
      }
    }
    if (!design.gh->biologic) all_biologic = false;
  }

  const Eigen::Vector3d elbow0 = arm.elbow_center_rest();
  const Eigen::Vector3d fdir = arm.forearm_axis_rest().vec();
  const Eigen::Vector3d wrist0 = arm.wrist_center_rest();

  // Cuff passive DOF go right after the fragment of their segment, so
  // they are emitted inline as the chain grows.
  static const std::array<UnitVec3, 3> passive_axes{UnitVec3(1, 0, 0), UnitVec3(0, 1, 0),
                                                    UnitVec3(0, 0, 1)};
  auto emit_cuffs = [&](AttachmentCuff::Segment segment, const Eigen::Vector3d& anchor) {
    int cuff_idx = 0;
    for (const auto& cuff : design.attachment.cuffs) {
      if (cuff.segment != segment) {
        ++cuff_idx;
        continue;
      }
      for (int k = 0; k < cuff.passive_dof; ++k) {
        push(JointKind::revolute, passive_axes[static_cast<std::size_t>(k) % 3], anchor,
             {-std::numbers::pi / 6.0, std::numbers::pi / 6.0},
             std::string("passive_") + AttachmentCuff::segment_name(segment) + "_" +
                 std::to_string(cuff_idx) + "_" + std::to_string(k));
      }
      RealizedCuff rc;
      rc.cuff = cuff;
      rc.link_frame = static_cast<int>(chain.joints.size()) - 1;  // -1 when chain still empty
      rc.rest_anchor = anchor;
      out.cuffs.push_back(rc);
      ++cuff_idx;
    }
  };

  // Upper-arm cuffs ride the link between the GH block and the elbow.
  emit_cuffs(AttachmentCuff::Segment::upper_arm,
             arm.gh_center + 0.5 * arm.upper_arm_length * arm.rest_direction.vec());

  if (design.elbow) {
    // A loose hinge realizes as its nominal axis -- chains carry fixed
    // axes -- with the frustum deviation parameters kept on the design
    // for conformity analyses. Placement always comes from the arm.
    if (design.elbow->kind == ElbowKind::LooseHinge) design.elbow->frustum.validate();
    out.dof_joint[ArmDOF::ElbowFE] =
        push(JointKind::revolute, arm.biologic_axes.at(ArmDOF::ElbowFE).first, elbow0,
             rom_limits(ArmDOF::ElbowFE), "ElbowFE");
  }

  if (design.forearm.kind == ForearmKind::AxialPS) {
    out.dof_joint[ArmDOF::PS] =
        push(JointKind::revolute, UnitVec3::normalized(fdir), elbow0, rom_limits(ArmDOF::PS),
             "PS");
  }
  emit_cuffs(AttachmentCuff::Segment::forearm, elbow0 + 0.5 * arm.forearm_length * fdir);

  if (design.wrist.kind == WristKind::WFEOnly || design.wrist.kind == WristKind::WFEAndUD) {
    out.dof_joint[ArmDOF::WFE] =
        push(JointKind::revolute, arm.biologic_axes.at(ArmDOF::WFE).first, wrist0,
             rom_limits(ArmDOF::WFE), "WFE");
  }
  if (design.wrist.kind == WristKind::UDOnly || design.wrist.kind == WristKind::WFEAndUD) {
    out.dof_joint[ArmDOF::UD] =
        push(JointKind::revolute, arm.biologic_axes.at(ArmDOF::UD).first,
             wrist0 - design.wrist.ud_axis_offset * fdir, rom_limits(ArmDOF::UD), "UD");
  }
  emit_cuffs(AttachmentCuff::Segment::hand, wrist0 + 0.5 * arm.hand_length * fdir);

  if (chain.joints.empty()) {
    throw ConstructionError("design", "realizes to an empty chain");
  }

  out.biologic_direct = all_biologic;
  chain.validate();
  return out;
}

}  // namespace exokin
