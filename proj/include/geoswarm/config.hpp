#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "geoswarm/analysis.hpp"
#include "geoswarm/geodesic.hpp"
#include "geoswarm/manifold.hpp"

namespace geoswarm {

struct HeadConfig {
    double x0 = 0.0;
    double y0 = 0.0;
    double vx0 = 1.0;
    double vy0 = 0.0;

    GeodesicState state() const { return make_state(Vec2(x0, y0), Vec2(vx0, vy0)); }
};

struct SwarmConfig {
    std::size_t n_followers = 100;
    double d = 0.1;
    double t_s = 0.1;
};

struct SimConfig {
    double t_end = 10.0;
    double step = kDefaultStep;
};

struct ControlConfig {
    bool enabled = false;
    std::size_t window = 3;
    double dt = 0.1;
    double correction_weight = 1.0;
};

struct OutputConfig {
    std::string directory = "geoswarm_out";
    std::string prefix;
};

/// One experiment. `sweep` maps a dotted numeric key (e.g. "potential.a")
/// to the values it takes; the scenario expands to the cartesian product.
struct ScenarioConfig {
    std::string description;
    PotentialField potential{PotentialKind::flat, 20.0};
    HeadConfig head;
    SwarmConfig swarm;
    SimConfig sim;
    EstimatorMode mode = EstimatorMode::oracle;
    ControlConfig control;
    OutputConfig output;
    std::map<std::string, std::vector<double>> sweep;

    /// Re-checks every numeric constraint; throws ValidationError naming the field.
    void validate() const;
};

/// Parses and validates a scenario. Unknown keys and malformed text raise
/// ParseError; constraint violations raise ValidationError.
ScenarioConfig parse_config(std::string_view text, std::string_view origin = "<string>");
ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical JSON with every default filled in (stable key order).
std::string canonical_json(const ScenarioConfig& cfg);

/// FNV-1a 64 of canonical_json with the output section reset, as 16 hex digits.
std::string scenario_hash(const ScenarioConfig& cfg);

/// Sets a dotted numeric key such as "swarm.d" or "potential.a".
void set_numeric(ScenarioConfig& cfg, std::string_view key, double value);

struct SweepVariant {
    std::string label;
    std::vector<std::pair<std::string, double>> settings;
    ScenarioConfig config;
};

/// Cartesian product of cfg.sweep in key order; a single unlabeled variant
/// when there is no sweep.
std::vector<SweepVariant> expand_sweep(const ScenarioConfig& cfg);

}  // namespace geoswarm
