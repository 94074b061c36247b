#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "exokin/design.hpp"

namespace exokin {

/// A stated fact with its provenance. Facts the source literature does
/// not state stay unset and are filled with declared defaults during
/// classification, marked as assumed.
template <class T>
struct Fact {
  std::optional<T> value;
  std::string provenance;

  bool stated() const { return value.has_value(); }
};

/// Published-device record: only what the literature states, one
/// provenance string per fact.
struct CatalogEntry {
  std::string name;
  Fact<bool> biologic;
  Fact<std::array<std::string, 3>> sequence;
  Fact<std::array<double, 3>> triplet_deg;
  Fact<GirdleConcept::Kind> girdle;
  Fact<ElbowKind> elbow;
  Fact<bool> self_aligning;
  Fact<std::set<ArmDOF>> missing_dofs;
  Fact<bool> gh_axes_concurrent;  // synthetic entries may claim non-concurrent axes

  void validate() const {
    if (name.empty()) throw std::invalid_argument("CatalogEntry: name must be nonempty");
    auto need_prov = [&](bool stated, const std::string& prov, const char* fact) {
      if (stated && prov.empty()) {
        throw std::invalid_argument("CatalogEntry " + name + ": fact '" + fact +
                                    "' has no provenance");
      }
    };
    need_prov(biologic.stated(), biologic.provenance, "biologic");
    need_prov(sequence.stated(), sequence.provenance, "sequence");
    need_prov(triplet_deg.stated(), triplet_deg.provenance, "triplet");
    need_prov(girdle.stated(), girdle.provenance, "girdle");
    need_prov(elbow.stated(), elbow.provenance, "elbow");
    need_prov(self_aligning.stated(), self_aligning.provenance, "self_aligning");
    need_prov(missing_dofs.stated(), missing_dofs.provenance, "missing_dofs");
    need_prov(gh_axes_concurrent.stated(), gh_axes_concurrent.provenance, "gh_axes_concurrent");
  }
};

struct ClassificationResult {
  std::optional<ExoDesign> design;
  std::vector<std::string> assumed_fields;
  std::string reason;  // first conflicting fact when not representable

  bool representable() const { return design.has_value(); }

  static ClassificationResult not_representable(std::string why) {
    ClassificationResult r;
    r.reason = std::move(why);
    return r;
  }
};

namespace detail {

inline bool has_tilt_marker(const std::array<std::string, 3>& seq) {
  for (const auto& s : seq) {
    if (!s.empty() && s.back() == '*') return true;
  }
  return false;
}

/// Line angles of the canonical biologic axis directions, measured as
/// a triplet against the rest (distal) direction.
inline std::optional<std::array<double, 3>> biologic_triplet_deg(
    const std::array<std::string, 3>& seq) {
  auto dir = [](const std::string& label) -> std::optional<Eigen::Vector3d> {
    const auto dof = arm_dof_from_string(label);
    if (!dof) return std::nullopt;
    switch (*dof) {
      case ArmDOF::HABD: return Eigen::Vector3d(0, 0, 1);
      case ArmDOF::ABD: return Eigen::Vector3d(1, 0, 0);
      case ArmDOF::FE: return Eigen::Vector3d(0, 1, 0);
      case ArmDOF::IE: return Eigen::Vector3d(0, 0, -1);
      default: return std::nullopt;
    }
  };
  const auto a1 = dir(seq[0]), a2 = dir(seq[1]), a3 = dir(seq[2]);
  if (!a1 || !a2 || !a3) return std::nullopt;
  const Eigen::Vector3d rest(0, 0, -1);
  auto line_deg = [](const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
    const double t = angle_between(u, v);
    return rad2deg(std::min(t, std::numbers::pi - t));
  };
  return std::array<double, 3>{line_deg(*a1, *a2), line_deg(*a2, *a3), line_deg(*a3, rest)};
}

}  // namespace detail

/// Fixture parameters used when a classified entry states a girdle
/// kind but the literature gives no geometry.
inline GirdleConcept default_girdle(GirdleConcept::Kind kind) {
  GirdleConcept g;
  g.kind = kind;
  switch (kind) {
    case GirdleConcept::Kind::Fixed:
      break;
    case GirdleConcept::Kind::SingleRevolute:
      g.axis = UnitVec3(1, 0, 0);  // frontal-plane circle
      g.anchor = Eigen::Vector3d(0.0, -0.20, -0.10);
      break;
    case GirdleConcept::Kind::Polar:
      g.axis = UnitVec3(1, 0, 0);
      g.anchor = Eigen::Vector3d(0.0, -0.20, -0.10);
      g.prismatic = UnitVec3(0, 0, 1);
      break;
    case GirdleConcept::Kind::Cartesian:
      g.cartesian = {UnitVec3(1, 0, 0), UnitVec3(0, 1, 0), UnitVec3(0, 0, 1)};
      break;
    case GirdleConcept::Kind::AxisLinkage:
      g.axis = UnitVec3(0, 0, 1);  // GH center slides along the vertical first axis
      g.coupling = {{0.0, 0.0}, {deg2rad(90.0), 0.10}};
      break;
  }
  return g;
}

/// Map a catalog entry onto a grammar instance consistent with every
/// stated fact. Unknown fields get the least-committal defaults (Fixed
/// girdle, ideal hinge, no forearm PS, no wrist) and are reported in
/// assumed_fields; entries that state their DOF gaps instead get
/// fragments filled so the realized gaps match exactly. Conflicting
/// facts yield NotRepresentable with the first conflict named.
inline ClassificationResult classify_catalog_entry(const CatalogEntry& entry,
                                                   const GrammarOptions& opts) {
  entry.validate();
  opts.validate();

  if (entry.gh_axes_concurrent.stated() && !*entry.gh_axes_concurrent.value) {
    return ClassificationResult::not_representable("GH axes must intersect at a single point");
  }

  ClassificationResult res;
  std::vector<std::string>& assumed = res.assumed_fields;
  ExoDesign d;

  const bool has_missing = entry.missing_dofs.stated();
  const std::set<ArmDOF> missing =
      has_missing ? *entry.missing_dofs.value : std::set<ArmDOF>{};
  auto is_missing = [&](ArmDOF dof) { return missing.count(dof) > 0; };

  // --- biologic flag and axis sequence ---
  bool biologic = true;
  if (entry.biologic.stated()) {
    biologic = *entry.biologic.value;
  } else {
    assumed.push_back("biologic");
  }

  std::array<std::string, 3> sequence;
  if (entry.sequence.stated()) {
    sequence = *entry.sequence.value;
    if (biologic && detail::has_tilt_marker(sequence)) {
      return ClassificationResult::not_representable(
          "sequence: tilt-marked axes contradict the stated biologic flag");
    }
    if (biologic && is_missing(ArmDOF::IE)) {
      for (const auto& s : sequence) {
        if (s == "IE") {
          return ClassificationResult::not_representable(
              "sequence: contains IE but missing_dofs states the device lacks IE");
        }
      }
    }
  } else {
    assumed.push_back("sequence");
    if (biologic) {
      const bool abd_gap = is_missing(ArmDOF::ABD) || is_missing(ArmDOF::HABD);
      const bool fe_gap = is_missing(ArmDOF::FE);
      const bool ie_gap = is_missing(ArmDOF::IE);
      if (abd_gap + fe_gap + ie_gap >= 2) {
        return ClassificationResult::not_representable(
            "missing_dofs: a 3R shoulder block cannot drop two of its three rotations");
      }
      if (ie_gap) {
        sequence = {"HABD", "ABD", "FE"};
      } else if (fe_gap) {
        sequence = {"HABD", "ABD", "IE"};
      } else {
        sequence = {"HABD", "FE", "IE"};
      }
    } else {
      sequence = {"HABD*", "ABD*", "FE*"};
    }
  }

  // --- inter-axis angles ---
  std::array<double, 3> triplet_deg{};
  if (entry.triplet_deg.stated()) {
    triplet_deg = *entry.triplet_deg.value;
    for (double t : triplet_deg) {
      if (t < 0.0 || t > 90.0) {
        return ClassificationResult::not_representable(
            "triplet: inter-axis angles must lie in [0, 90] degrees");
      }
    }
  } else if (biologic) {
    const auto derived = detail::biologic_triplet_deg(sequence);
    if (!derived) {
      return ClassificationResult::not_representable(
          "sequence: labels are not shoulder axes, cannot derive inter-axis angles");
    }
    triplet_deg = *derived;
    assumed.push_back("triplet");
  } else {
    triplet_deg = {90.0, 90.0, 45.0};
    assumed.push_back("triplet");
  }

  if (biologic && entry.triplet_deg.stated() && entry.sequence.stated()) {
    const auto derived = detail::biologic_triplet_deg(sequence);
    if (derived) {
      for (int i = 0; i < 3; ++i) {
        if (std::abs((*derived)[i] - triplet_deg[i]) > 1e-9) {
          return ClassificationResult::not_representable(
              "triplet: stated angles contradict the stated biologic sequence");
        }
      }
    }
  }

  GHConcept gh;
  gh.biologic = biologic;
  gh.sequence = sequence;
  try {
    gh.triplet = AxisTriplet::from_degrees(triplet_deg[0], triplet_deg[1], triplet_deg[2]);
    gh.validate();
  } catch (const std::invalid_argument& e) {
    return ClassificationResult::not_representable(std::string("gh: ") + e.what());
  }
  d.gh = gh;

  // --- girdle ---
  if (entry.girdle.stated()) {
    d.girdle = default_girdle(*entry.girdle.value);
    if (*entry.girdle.value != GirdleConcept::Kind::Fixed) {
      assumed.push_back("girdle geometry");
    }
  } else {
    d.girdle = default_girdle(GirdleConcept::Kind::Fixed);
    assumed.push_back("girdle");
  }

  // --- elbow ---
  ElbowConcept elbow;
  if (entry.elbow.stated()) {
    elbow.kind = *entry.elbow.value;
    if (elbow.kind == ElbowKind::LooseHinge) {
      elbow.frustum.ellipse_semi_major = 0.010;
      elbow.frustum.ellipse_semi_minor = 0.005;
      elbow.frustum.proximal_half_angle = Angle::degrees(2.0);
      elbow.frustum.distal_half_angle = Angle::degrees(4.0);
      assumed.push_back("frustum geometry");
    }
  } else {
    elbow.kind = ElbowKind::IdealHinge;
    assumed.push_back("elbow");
  }
  if (has_missing && is_missing(ArmDOF::ElbowFE)) {
    d.elbow = std::nullopt;
  } else {
    d.elbow = elbow;
  }

  // --- forearm and wrist ---
  if (has_missing) {
    d.forearm.kind = is_missing(ArmDOF::PS) ? ForearmKind::None : ForearmKind::AxialPS;
    const bool wfe = !is_missing(ArmDOF::WFE);
    const bool ud = !is_missing(ArmDOF::UD);
    d.wrist.kind = wfe ? (ud ? WristKind::WFEAndUD : WristKind::WFEOnly)
                       : (ud ? WristKind::UDOnly : WristKind::None);
    assumed.push_back("fragments completed from stated DOF gaps");
  } else {
    d.forearm.kind = ForearmKind::None;
    d.wrist.kind = WristKind::None;
    assumed.push_back("forearm");
    assumed.push_back("wrist");
  }

  // --- attachment ---
  AttachmentCuff upper;
  upper.segment = AttachmentCuff::Segment::upper_arm;
  AttachmentCuff fore;
  fore.segment = AttachmentCuff::Segment::forearm;
  if (entry.self_aligning.stated() && *entry.self_aligning.value) {
    fore.passive_dof = 1;
    assumed.push_back("passive DOF placement");
  } else if (!entry.self_aligning.stated()) {
    assumed.push_back("self_aligning");
  }
  d.attachment.cuffs = {upper, fore};

  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    return ClassificationResult::not_representable(e.what());
  }
  res.design = d;
  return res;
}

}  // namespace exokin
