#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "exokin/json_io.hpp"

namespace exokin {

struct NamedFilter {
  std::string name;
  json params = json::object();
};

/// Batch run configuration. Parsed strictly: unknown keys are rejected
/// by key path, referenced input paths must exist, and resolutions must
/// meet the documented minima.
struct RunConfig {
  std::filesystem::path arm;
  std::filesystem::path grammar;
  std::filesystem::path catalog;
  std::filesystem::path out = "out";
  int threads = 0;  // 0 = hardware concurrency
  std::vector<NamedFilter> filters;

  int coverage_samples_per_axis = 64;
  int coverage_bins = 1000;
  int rom_samples_per_dof = 3;
  int singularity_grid = 8;
  long singularity_budget = 20000;
  double gimbal_threshold = 0.05;

  int expected_task_mobility = 7;
  double min_rom_coverage = 0.0;
  bool forbid_hyperstatic = false;
  long max_designs = 0;  // 0 = unlimited
};

inline RunConfig parse_run_config(const json& v, const std::filesystem::path& base_dir) {
  detail::reject_unknown_keys(
      v, {"arm", "grammar", "catalog", "out", "threads", "filters", "sampling", "validation"},
      "config");
  RunConfig cfg;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  if (v.contains("arm")) cfg.arm = resolve(v["arm"].get<std::string>());
  if (v.contains("grammar")) cfg.grammar = resolve(v["grammar"].get<std::string>());
  if (v.contains("catalog")) cfg.catalog = resolve(v["catalog"].get<std::string>());
  if (v.contains("out")) cfg.out = resolve(v["out"].get<std::string>());
  if (v.contains("threads")) cfg.threads = v["threads"].get<int>();

  if (v.contains("filters")) {
    if (!v["filters"].is_array()) throw SchemaError("config.filters", "expected an array");
    int i = 0;
    for (const auto& f : v["filters"]) {
      const std::string path = "config.filters[" + std::to_string(i++) + "]";
      detail::reject_unknown_keys(f, {"name", "params"}, path);
      if (!f.contains("name")) throw SchemaError(path, "needs 'name'");
      NamedFilter nf;
      nf.name = f["name"].get<std::string>();
      if (f.contains("params")) nf.params = f["params"];
      cfg.filters.push_back(nf);
    }
  }

  if (v.contains("sampling")) {
    const json& s = v["sampling"];
    detail::reject_unknown_keys(s,
                                {"coverage_samples_per_axis", "coverage_bins", "rom_samples_per_dof",
                                 "singularity_grid", "singularity_budget", "gimbal_threshold"},
                                "config.sampling");
    if (s.contains("coverage_samples_per_axis"))
      cfg.coverage_samples_per_axis = s["coverage_samples_per_axis"].get<int>();
    if (s.contains("coverage_bins")) cfg.coverage_bins = s["coverage_bins"].get<int>();
    if (s.contains("rom_samples_per_dof")) cfg.rom_samples_per_dof = s["rom_samples_per_dof"].get<int>();
    if (s.contains("singularity_grid")) cfg.singularity_grid = s["singularity_grid"].get<int>();
    if (s.contains("singularity_budget")) cfg.singularity_budget = s["singularity_budget"].get<long>();
    if (s.contains("gimbal_threshold")) cfg.gimbal_threshold = s["gimbal_threshold"].get<double>();
  }

  if (v.contains("validation")) {
    const json& val = v["validation"];
    detail::reject_unknown_keys(
        val, {"expected_task_mobility", "min_rom_coverage", "forbid_hyperstatic", "max_designs"},
        "config.validation");
    if (val.contains("expected_task_mobility"))
      cfg.expected_task_mobility = val["expected_task_mobility"].get<int>();
    if (val.contains("min_rom_coverage")) cfg.min_rom_coverage = val["min_rom_coverage"].get<double>();
    if (val.contains("forbid_hyperstatic")) cfg.forbid_hyperstatic = val["forbid_hyperstatic"].get<bool>();
    if (val.contains("max_designs")) cfg.max_designs = val["max_designs"].get<long>();
  }

  // Documented minima.
  if (cfg.coverage_samples_per_axis < 8)
    throw SchemaError("config.sampling.coverage_samples_per_axis", "minimum is 8");
  if (cfg.coverage_bins < 100) throw SchemaError("config.sampling.coverage_bins", "minimum is 100");
  if (cfg.rom_samples_per_dof < 2) throw SchemaError("config.sampling.rom_samples_per_dof", "minimum is 2");
  if (cfg.singularity_grid < 8) throw SchemaError("config.sampling.singularity_grid", "minimum is 8");
  if (cfg.threads < 0) throw SchemaError("config.threads", "must be >= 0");

  for (const auto& [key, path] : {std::pair{"arm", cfg.arm}, {"grammar", cfg.grammar},
                                  {"catalog", cfg.catalog}}) {
    if (!path.empty() && !std::filesystem::exists(path)) {
      throw SchemaError(std::string("config.") + key, "referenced path does not exist: " + path.string());
    }
  }
  return cfg;
}

inline json run_config_to_json(const RunConfig& cfg) {
  json filters = json::array();
  for (const auto& f : cfg.filters) {
    filters.push_back(json{{"name", f.name}, {"params", f.params}});
  }
  return json{
      {"arm", cfg.arm.string()},
      {"grammar", cfg.grammar.string()},
      {"catalog", cfg.catalog.string()},
      {"out", cfg.out.string()},
      {"threads", cfg.threads},
      {"filters", filters},
      {"sampling",
       json{{"coverage_samples_per_axis", cfg.coverage_samples_per_axis},
            {"coverage_bins", cfg.coverage_bins},
            {"rom_samples_per_dof", cfg.rom_samples_per_dof},
            {"singularity_grid", cfg.singularity_grid},
            {"singularity_budget", cfg.singularity_budget},
            {"gimbal_threshold", cfg.gimbal_threshold}}},
      {"validation", json{{"expected_task_mobility", cfg.expected_task_mobility},
                          {"min_rom_coverage", cfg.min_rom_coverage},
                          {"forbid_hyperstatic", cfg.forbid_hyperstatic},
                          {"max_designs", cfg.max_designs}}}};
}

/// Named design predicates available to configs; see the README for
/// the registry.
inline DesignFilter make_filter(const NamedFilter& f) {
  if (f.name == "full_sphere") {
    return [](const ExoDesign& d) { return d.gh && full_sphere_condition(d.gh->triplet); };
  }
  if (f.name == "supports_all_7") {
    return [](const ExoDesign& d) { return dof_gaps(d).empty(); };
  }
  if (f.name == "biologic_only") {
    return [](const ExoDesign& d) { return d.gh && d.gh->biologic; };
  }
  if (f.name == "self_aligning") {
    return [](const ExoDesign& d) { return d.attachment.total_passive_dof() > 0; };
  }
  if (f.name == "girdle_kind") {
    const std::string kind = f.params.value("kind", "Fixed");
    return [kind](const ExoDesign& d) {
      return GirdleConcept::kind_name(d.girdle.kind) == kind;
    };
  }
  if (f.name == "max_total_joints") {
    const int n = f.params.value("n", 7);
    return [n](const ExoDesign& d) {
      int joints = d.girdle.dof();
      if (d.gh) joints += 3;
      if (d.elbow) joints += 1;
      if (d.forearm.kind == ForearmKind::AxialPS) joints += 1;
      if (d.wrist.kind == WristKind::WFEOnly || d.wrist.kind == WristKind::UDOnly) joints += 1;
      if (d.wrist.kind == WristKind::WFEAndUD) joints += 2;
      joints += d.attachment.total_passive_dof();
      return joints <= n;
    };
  }
  throw SchemaError("config.filters", "unknown filter '" + f.name + "'");
}

}  // namespace exokin
