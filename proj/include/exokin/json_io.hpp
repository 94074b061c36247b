#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "exokin/arm.hpp"
#include "exokin/canonical_json.hpp"
#include "exokin/catalog.hpp"
#include "exokin/design.hpp"
#include "exokin/validators.hpp"

namespace exokin {

using nlohmann::json;

/// Schema violation with the offending key path.
struct SchemaError : std::runtime_error {
  std::string path;
  SchemaError(std::string p, const std::string& what)
      : std::runtime_error(p + ": " + what), path(std::move(p)) {}
};

/// Syntax error with 1-based line/column.
struct JsonSyntaxError : std::runtime_error {
  int line = 0;
  int column = 0;
  JsonSyntaxError(int l, int c, const std::string& what)
      : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) +
                           ": " + what),
        line(l),
        column(c) {}
};

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1, col = 1;
    const std::size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw JsonSyntaxError(line, col, e.what());
  }
}

inline json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path.string(), "cannot open file");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_json_text(text);
}

namespace detail {

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                                const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) {
      throw SchemaError(path + "." + it.key(), "unknown key");
    }
  }
}

inline double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  return v.get<double>();
}

inline Eigen::Vector3d get_vec3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) throw SchemaError(path, "expected [x, y, z]");
  return Eigen::Vector3d(get_number(v[0], path), get_number(v[1], path),
                         get_number(v[2], path));
}

inline std::pair<Angle, Angle> get_interval_deg(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw SchemaError(path, "expected [lo_deg, hi_deg]");
  return {Angle::degrees(get_number(v[0], path)), Angle::degrees(get_number(v[1], path))};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Arm config
// ---------------------------------------------------------------------------

inline FrustumParams parse_frustum(const json& v, const std::string& path) {
  detail::reject_unknown_keys(v, {"ellipse_semi_major", "ellipse_semi_minor",
                                  "proximal_half_angle_deg", "distal_half_angle_deg"},
                              path);
  FrustumParams f;
  if (v.contains("ellipse_semi_major"))
    f.ellipse_semi_major = detail::get_number(v["ellipse_semi_major"], path + ".ellipse_semi_major");
  if (v.contains("ellipse_semi_minor"))
    f.ellipse_semi_minor = detail::get_number(v["ellipse_semi_minor"], path + ".ellipse_semi_minor");
  if (v.contains("proximal_half_angle_deg"))
    f.proximal_half_angle =
        Angle::degrees(detail::get_number(v["proximal_half_angle_deg"], path + ".proximal_half_angle_deg"));
  if (v.contains("distal_half_angle_deg"))
    f.distal_half_angle =
        Angle::degrees(detail::get_number(v["distal_half_angle_deg"], path + ".distal_half_angle_deg"));
  return f;
}

inline ArmConfig parse_arm_config(const json& v) {
  detail::reject_unknown_keys(v, {"lengths", "rom", "frustum", "load_angle_deg",
                                  "ud_axis_offset", "gh_center", "gh_sequence", "notes"},
                              "arm");
  ArmConfig cfg;
  if (v.contains("lengths")) {
    const json& l = v["lengths"];
    detail::reject_unknown_keys(l, {"upper_arm", "forearm", "hand"}, "arm.lengths");
    if (l.contains("upper_arm")) cfg.upper_arm_length = detail::get_number(l["upper_arm"], "arm.lengths.upper_arm");
    if (l.contains("forearm")) cfg.forearm_length = detail::get_number(l["forearm"], "arm.lengths.forearm");
    if (l.contains("hand")) cfg.hand_length = detail::get_number(l["hand"], "arm.lengths.hand");
  }
  if (v.contains("rom")) {
    if (!v["rom"].is_object()) throw SchemaError("arm.rom", "expected an object");
    for (auto it = v["rom"].begin(); it != v["rom"].end(); ++it) {
      const auto dof = arm_dof_from_string(it.key());
      if (!dof) throw SchemaError("arm.rom." + it.key(), "unknown arm DOF");
      cfg.rom[*dof] = detail::get_interval_deg(it.value(), "arm.rom." + it.key());
    }
  }
  if (v.contains("frustum")) cfg.frustum = parse_frustum(v["frustum"], "arm.frustum");
  if (v.contains("load_angle_deg"))
    cfg.load_angle = Angle::degrees(detail::get_number(v["load_angle_deg"], "arm.load_angle_deg"));
  if (v.contains("ud_axis_offset"))
    cfg.ud_axis_offset = detail::get_number(v["ud_axis_offset"], "arm.ud_axis_offset");
  if (v.contains("gh_center")) cfg.gh_center = detail::get_vec3(v["gh_center"], "arm.gh_center");
  if (v.contains("gh_sequence")) {
    const json& s = v["gh_sequence"];
    if (!s.is_array() || s.size() != 3) throw SchemaError("arm.gh_sequence", "expected 3 labels");
    for (int i = 0; i < 3; ++i) {
      const auto dof = arm_dof_from_string(s[i].get<std::string>());
      if (!dof) throw SchemaError("arm.gh_sequence", "unknown arm DOF label");
      cfg.gh_sequence[static_cast<std::size_t>(i)] = *dof;
    }
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Grammar options
// ---------------------------------------------------------------------------

inline GHConcept parse_gh_concept(const json& v, const std::string& path) {
  detail::reject_unknown_keys(v, {"sequence", "triplet_deg", "biologic", "limits_deg"}, path);
  GHConcept c;
  if (!v.contains("sequence") || !v.contains("triplet_deg")) {
    throw SchemaError(path, "needs 'sequence' and 'triplet_deg'");
  }
  const json& s = v["sequence"];
  if (!s.is_array() || s.size() != 3) throw SchemaError(path + ".sequence", "expected 3 labels");
  for (int i = 0; i < 3; ++i) c.sequence[static_cast<std::size_t>(i)] = s[i].get<std::string>();
  const json& t = v["triplet_deg"];
  if (!t.is_array() || t.size() != 3) throw SchemaError(path + ".triplet_deg", "expected 3 angles");
  c.triplet = AxisTriplet::from_degrees(detail::get_number(t[0], path), detail::get_number(t[1], path),
                                        detail::get_number(t[2], path));
  if (v.contains("biologic")) c.biologic = v["biologic"].get<bool>();
  if (v.contains("limits_deg")) {
    const json& lim = v["limits_deg"];
    if (!lim.is_array() || lim.size() != 3) throw SchemaError(path + ".limits_deg", "expected 3 intervals");
    for (int i = 0; i < 3; ++i) {
      const auto [lo, hi] = detail::get_interval_deg(lim[i], path + ".limits_deg");
      c.joint_limits[static_cast<std::size_t>(i)] = {lo.rad, hi.rad};
    }
  }
  c.validate();
  return c;
}

inline GirdleConcept parse_girdle(const json& v, const std::string& path) {
  detail::reject_unknown_keys(v, {"kind", "axis", "anchor", "prismatic", "cartesian", "coupling"},
                              path);
  if (!v.contains("kind")) throw SchemaError(path, "needs 'kind'");
  const std::string kind = v["kind"].get<std::string>();
  GirdleConcept g;
  if (kind == "Fixed") g.kind = GirdleConcept::Kind::Fixed;
  else if (kind == "SingleRevolute") g.kind = GirdleConcept::Kind::SingleRevolute;
  else if (kind == "Polar") g.kind = GirdleConcept::Kind::Polar;
  else if (kind == "Cartesian") g.kind = GirdleConcept::Kind::Cartesian;
  else if (kind == "AxisLinkage") g.kind = GirdleConcept::Kind::AxisLinkage;
  else throw SchemaError(path + ".kind", "unknown girdle kind '" + kind + "'");

  if (v.contains("axis")) g.axis = UnitVec3::normalized(detail::get_vec3(v["axis"], path + ".axis"));
  if (v.contains("anchor")) g.anchor = detail::get_vec3(v["anchor"], path + ".anchor");
  if (v.contains("prismatic"))
    g.prismatic = UnitVec3::normalized(detail::get_vec3(v["prismatic"], path + ".prismatic"));
  if (v.contains("cartesian")) {
    const json& c = v["cartesian"];
    if (!c.is_array() || c.size() != 3) throw SchemaError(path + ".cartesian", "expected 3 directions");
    for (int i = 0; i < 3; ++i) {
      g.cartesian[static_cast<std::size_t>(i)] =
          UnitVec3::normalized(detail::get_vec3(c[i], path + ".cartesian"));
    }
  }
  if (v.contains("coupling")) {
    const json& c = v["coupling"];
    if (!c.is_array()) throw SchemaError(path + ".coupling", "expected [[elev_deg, disp_m], ...]");
    for (const auto& pair : c) {
      if (!pair.is_array() || pair.size() != 2) {
        throw SchemaError(path + ".coupling", "expected [elev_deg, disp_m] pairs");
      }
      g.coupling.emplace_back(deg2rad(detail::get_number(pair[0], path)),
                              detail::get_number(pair[1], path));
    }
  } else if (g.kind == GirdleConcept::Kind::AxisLinkage) {
    g.coupling = {{0.0, 0.0}, {deg2rad(90.0), 0.10}};
  }
  g.validate();
  return g;
}

inline AttachmentSpec parse_attachment(const json& v, const std::string& path) {
  detail::reject_unknown_keys(v, {"cuffs"}, path);
  if (!v.contains("cuffs") || !v["cuffs"].is_array()) throw SchemaError(path, "needs 'cuffs' array");
  AttachmentSpec spec;
  int i = 0;
  for (const auto& c : v["cuffs"]) {
    const std::string cpath = path + ".cuffs[" + std::to_string(i++) + "]";
    detail::reject_unknown_keys(c, {"segment", "rigidity", "passive_dof"}, cpath);
    AttachmentCuff cuff;
    const std::string seg = c.value("segment", "upper_arm");
    if (seg == "upper_arm") cuff.segment = AttachmentCuff::Segment::upper_arm;
    else if (seg == "forearm") cuff.segment = AttachmentCuff::Segment::forearm;
    else if (seg == "hand") cuff.segment = AttachmentCuff::Segment::hand;
    else throw SchemaError(cpath + ".segment", "unknown segment '" + seg + "'");
    const std::string rig = c.value("rigidity", "rigid");
    if (rig == "rigid") cuff.rigidity = AttachmentCuff::Rigidity::rigid;
    else if (rig == "compliant") cuff.rigidity = AttachmentCuff::Rigidity::compliant;
    else throw SchemaError(cpath + ".rigidity", "unknown rigidity '" + rig + "'");
    cuff.passive_dof = c.value("passive_dof", 0);
    spec.cuffs.push_back(cuff);
  }
  spec.validate();
  return spec;
}

inline GrammarOptions parse_grammar_options(const json& v) {
  detail::reject_unknown_keys(v, {"gh", "girdle", "elbow", "forearm", "wrist", "attachment", "notes"},
                              "grammar");
  GrammarOptions opts;
  if (v.contains("gh")) {
    int i = 0;
    for (const auto& g : v["gh"]) opts.gh.push_back(parse_gh_concept(g, "grammar.gh[" + std::to_string(i++) + "]"));
  }
  if (v.contains("girdle")) {
    int i = 0;
    for (const auto& g : v["girdle"]) opts.girdle.push_back(parse_girdle(g, "grammar.girdle[" + std::to_string(i++) + "]"));
  }
  if (v.contains("elbow")) {
    int i = 0;
    for (const auto& e : v["elbow"]) {
      const std::string path = "grammar.elbow[" + std::to_string(i++) + "]";
      detail::reject_unknown_keys(e, {"kind", "frustum"}, path);
      ElbowConcept c;
      const std::string kind = e.value("kind", "IdealHinge");
      if (kind == "IdealHinge") c.kind = ElbowKind::IdealHinge;
      else if (kind == "LooseHinge") c.kind = ElbowKind::LooseHinge;
      else throw SchemaError(path + ".kind", "unknown elbow kind '" + kind + "'");
      if (e.contains("frustum")) c.frustum = parse_frustum(e["frustum"], path + ".frustum");
      opts.elbow.push_back(c);
    }
  }
  if (v.contains("forearm")) {
    int i = 0;
    for (const auto& f : v["forearm"]) {
      const std::string path = "grammar.forearm[" + std::to_string(i++) + "]";
      detail::reject_unknown_keys(f, {"kind", "load_angle_deg"}, path);
      ForearmConcept c;
      const std::string kind = f.value("kind", "None");
      if (kind == "None") c.kind = ForearmKind::None;
      else if (kind == "AxialPS") c.kind = ForearmKind::AxialPS;
      else throw SchemaError(path + ".kind", "unknown forearm kind '" + kind + "'");
      if (f.contains("load_angle_deg"))
        c.load_angle = Angle::degrees(detail::get_number(f["load_angle_deg"], path));
      opts.forearm.push_back(c);
    }
  }
  if (v.contains("wrist")) {
    int i = 0;
    for (const auto& w : v["wrist"]) {
      const std::string path = "grammar.wrist[" + std::to_string(i++) + "]";
      detail::reject_unknown_keys(w, {"kind", "ud_axis_offset"}, path);
      WristConcept c;
      const std::string kind = w.value("kind", "None");
      if (kind == "None") c.kind = WristKind::None;
      else if (kind == "WFEOnly") c.kind = WristKind::WFEOnly;
      else if (kind == "UDOnly") c.kind = WristKind::UDOnly;
      else if (kind == "WFEAndUD") c.kind = WristKind::WFEAndUD;
      else throw SchemaError(path + ".kind", "unknown wrist kind '" + kind + "'");
      if (w.contains("ud_axis_offset"))
        c.ud_axis_offset = detail::get_number(w["ud_axis_offset"], path);
      opts.wrist.push_back(c);
    }
  }
  if (v.contains("attachment")) {
    int i = 0;
    for (const auto& a : v["attachment"]) {
      opts.attachment.push_back(parse_attachment(a, "grammar.attachment[" + std::to_string(i++) + "]"));
    }
  }
  opts.validate();
  return opts;
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

inline std::vector<CatalogEntry> parse_catalog(const json& v) {
  if (!v.is_array()) throw SchemaError("catalog", "expected an array of entries");
  std::vector<CatalogEntry> entries;
  int idx = 0;
  for (const auto& e : v) {
    const std::string path = "catalog[" + std::to_string(idx++) + "]";
    detail::reject_unknown_keys(e, {"name", "facts"}, path);
    CatalogEntry entry;
    entry.name = e.value("name", "");

    if (e.contains("facts")) {
      const json& facts = e["facts"];
      detail::reject_unknown_keys(facts,
                                  {"biologic", "sequence", "triplet_deg", "girdle", "elbow",
                                   "self_aligning", "missing_dofs", "gh_axes_concurrent"},
                                  path + ".facts");
      auto fact_parts = [&](const char* key) -> std::pair<const json*, std::string> {
        const json& f = facts.at(key);
        detail::reject_unknown_keys(f, {"value", "provenance"}, path + ".facts." + key);
        if (!f.contains("value")) throw SchemaError(path + ".facts." + key, "needs 'value'");
        return {&f["value"], f.value("provenance", "")};
      };
      if (facts.contains("biologic")) {
        auto [val, prov] = fact_parts("biologic");
        entry.biologic = {val->get<bool>(), prov};
      }
      if (facts.contains("sequence")) {
        auto [val, prov] = fact_parts("sequence");
        if (!val->is_array() || val->size() != 3)
          throw SchemaError(path + ".facts.sequence", "expected 3 labels");
        std::array<std::string, 3> seq;
        for (int i = 0; i < 3; ++i) seq[static_cast<std::size_t>(i)] = (*val)[i].get<std::string>();
        entry.sequence = {seq, prov};
      }
      if (facts.contains("triplet_deg")) {
        auto [val, prov] = fact_parts("triplet_deg");
        if (!val->is_array() || val->size() != 3)
          throw SchemaError(path + ".facts.triplet_deg", "expected 3 angles");
        entry.triplet_deg = {std::array<double, 3>{(*val)[0].get<double>(), (*val)[1].get<double>(),
                                                   (*val)[2].get<double>()},
                             prov};
      }
      if (facts.contains("girdle")) {
        auto [val, prov] = fact_parts("girdle");
        const std::string kind = val->get<std::string>();
        GirdleConcept::Kind k;
        if (kind == "Fixed") k = GirdleConcept::Kind::Fixed;
        else if (kind == "SingleRevolute") k = GirdleConcept::Kind::SingleRevolute;
        else if (kind == "Polar") k = GirdleConcept::Kind::Polar;
        else if (kind == "Cartesian") k = GirdleConcept::Kind::Cartesian;
        else if (kind == "AxisLinkage") k = GirdleConcept::Kind::AxisLinkage;
        else throw SchemaError(path + ".facts.girdle", "unknown girdle kind '" + kind + "'");
        entry.girdle = {k, prov};
      }
      if (facts.contains("elbow")) {
        auto [val, prov] = fact_parts("elbow");
        const std::string kind = val->get<std::string>();
        if (kind == "IdealHinge") entry.elbow = {ElbowKind::IdealHinge, prov};
        else if (kind == "LooseHinge") entry.elbow = {ElbowKind::LooseHinge, prov};
        else throw SchemaError(path + ".facts.elbow", "unknown elbow kind '" + kind + "'");
      }
      if (facts.contains("self_aligning")) {
        auto [val, prov] = fact_parts("self_aligning");
        entry.self_aligning = {val->get<bool>(), prov};
      }
      if (facts.contains("missing_dofs")) {
        auto [val, prov] = fact_parts("missing_dofs");
        if (!val->is_array()) throw SchemaError(path + ".facts.missing_dofs", "expected a list");
        std::set<ArmDOF> missing;
        for (const auto& m : *val) {
          const auto dof = arm_dof_from_string(m.get<std::string>());
          if (!dof) throw SchemaError(path + ".facts.missing_dofs", "unknown arm DOF");
          missing.insert(*dof);
        }
        entry.missing_dofs = {missing, prov};
      }
      if (facts.contains("gh_axes_concurrent")) {
        auto [val, prov] = fact_parts("gh_axes_concurrent");
        entry.gh_axes_concurrent = {val->get<bool>(), prov};
      }
    }
    entry.validate();
    entries.push_back(entry);
  }
  return entries;
}

// ---------------------------------------------------------------------------
// Design serialization (canonical)
// ---------------------------------------------------------------------------

inline json frustum_to_json(const FrustumParams& f) {
  return json{{"ellipse_semi_major", f.ellipse_semi_major},
              {"ellipse_semi_minor", f.ellipse_semi_minor},
              {"proximal_half_angle_deg", f.proximal_half_angle.deg()},
              {"distal_half_angle_deg", f.distal_half_angle.deg()}};
}

inline json vec3_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

inline json design_to_json(const ExoDesign& d) {
  json out;
  if (d.gh) {
    json lim = json::array();
    for (const auto& [lo, hi] : d.gh->joint_limits) {
      lim.push_back(json::array({rad2deg(lo), rad2deg(hi)}));
    }
    out["gh"] = json{{"sequence", d.gh->sequence},
                     {"triplet_deg", json::array({d.gh->triplet.theta1.deg(),
                                                  d.gh->triplet.theta2.deg(),
                                                  d.gh->triplet.theta3.deg()})},
                     {"biologic", d.gh->biologic},
                     {"limits_deg", lim}};
  } else {
    out["gh"] = nullptr;
  }

  json girdle{{"kind", GirdleConcept::kind_name(d.girdle.kind)}};
  switch (d.girdle.kind) {
    case GirdleConcept::Kind::Fixed:
      break;
    case GirdleConcept::Kind::SingleRevolute:
      girdle["axis"] = vec3_to_json(d.girdle.axis.vec());
      girdle["anchor"] = vec3_to_json(d.girdle.anchor);
      break;
    case GirdleConcept::Kind::Polar:
      girdle["axis"] = vec3_to_json(d.girdle.axis.vec());
      girdle["anchor"] = vec3_to_json(d.girdle.anchor);
      girdle["prismatic"] = vec3_to_json(d.girdle.prismatic.vec());
      break;
    case GirdleConcept::Kind::Cartesian: {
      json dirs = json::array();
      for (const auto& u : d.girdle.cartesian) dirs.push_back(vec3_to_json(u.vec()));
      girdle["cartesian"] = dirs;
      break;
    }
    case GirdleConcept::Kind::AxisLinkage: {
      girdle["axis"] = vec3_to_json(d.girdle.axis.vec());
      json pairs = json::array();
      for (const auto& [elev, disp] : d.girdle.coupling) {
        pairs.push_back(json::array({rad2deg(elev), disp}));
      }
      girdle["coupling"] = pairs;
      break;
    }
  }
  out["girdle"] = girdle;

  if (d.elbow) {
    json e{{"kind", d.elbow->kind == ElbowKind::IdealHinge ? "IdealHinge" : "LooseHinge"}};
    if (d.elbow->kind == ElbowKind::LooseHinge) e["frustum"] = frustum_to_json(d.elbow->frustum);
    out["elbow"] = e;
  } else {
    out["elbow"] = nullptr;
  }

  switch (d.forearm.kind) {
    case ForearmKind::None:
      out["forearm"] = json{{"kind", "None"}};
      break;
    case ForearmKind::AxialPS:
      out["forearm"] = json{{"kind", "AxialPS"}, {"load_angle_deg", d.forearm.load_angle.deg()}};
      break;
  }

  switch (d.wrist.kind) {
    case WristKind::None:
      out["wrist"] = json{{"kind", "None"}};
      break;
    case WristKind::WFEOnly:
      out["wrist"] = json{{"kind", "WFEOnly"}};
      break;
    case WristKind::UDOnly:
      out["wrist"] = json{{"kind", "UDOnly"}, {"ud_axis_offset", d.wrist.ud_axis_offset}};
      break;
    case WristKind::WFEAndUD:
      out["wrist"] = json{{"kind", "WFEAndUD"}, {"ud_axis_offset", d.wrist.ud_axis_offset}};
      break;
  }

  json cuffs = json::array();
  for (const auto& c : d.attachment.cuffs) {
    cuffs.push_back(json{{"segment", AttachmentCuff::segment_name(c.segment)},
                         {"rigidity", c.rigidity == AttachmentCuff::Rigidity::rigid ? "rigid"
                                                                                    : "compliant"},
                         {"passive_dof", c.passive_dof}});
  }
  out["attachment"] = json{{"cuffs", cuffs}};
  return out;
}

inline json report_to_json(const ValidationReport& rep) {
  json gaps = json::array();
  for (const ArmDOF d : rep.dof_gaps) gaps.push_back(to_string(d));
  json singular = json::array();
  for (const auto& hit : rep.singular_configs) {
    singular.push_back(json{{"q", hit.q}, {"metric", hit.metric}});
  }
  return json{{"design_id", rep.design_id},
              {"realized", rep.realized},
              {"error", rep.error},
              {"rom_coverage", rep.rom_coverage},
              {"min_conditioning", rep.min_conditioning},
              {"singular_configs", singular},
              {"mobility", rep.mobility},
              {"hyperstatic", rep.hyperstatic},
              {"dof_gaps", gaps}};
}

}  // namespace exokin
