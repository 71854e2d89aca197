#pragma once

// JSON configs and networks, CSV tables, atomic file writes.

#include "barron/core.hpp"
#include "barron/experiments.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace barron {

inline constexpr int kSchemaVersion = 1;

struct NetworkFile {
  Network net;
  Domain domain;
};

/// {"s": 1, "domain": {...}, "atoms": [[a, [w...], b], ...]} where domain is
/// {"type": "box", "halfwidths": [...]}, {"type": "ball", "radius": r, "dim": d}
/// or {"type": "polytope", "vertices": [[...], ...]} (one vertex per entry).
NetworkFile network_from_json(const nlohmann::json& j);
nlohmann::json network_to_json(const Network& net, const Domain& domain);
NetworkFile load_network(const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);

/// default_config(suite) overlaid with the keys of `j`. Unknown keys throw.
ExperimentConfig config_from_json(const nlohmann::json& j, std::string_view suite);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// key=value override. Lists are comma separated. Besides the field names,
/// accepts s, b, delta, d, m (single-entry lists) and Rmin/Rmax (decades).
void apply_override(ExperimentConfig& cfg, std::string_view assignment);

FitConfig fit_config_from_json(const nlohmann::json& j);
void apply_override(FitConfig& cfg, std::string_view assignment);

/// Header line plus one row per line, 17 significant digits.
std::string to_csv(const Table& table);
std::string format_double(double v);

nlohmann::json report_to_json(const SuiteReport& report, const nlohmann::json& config);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace barron
