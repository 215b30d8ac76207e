#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geoswarm/analysis.hpp"
#include "geoswarm/config.hpp"

namespace geoswarm {

enum class Command { simulate, analyze, control, oracle };

std::string_view to_string(Command cmd);
/// Throws ValidationError for unknown names.
Command command_from_string(std::string_view name);

struct ControlSummary {
    bool fallback_engaged = false;
    std::vector<std::string> notes;
    /// First follower, original start-up data, |predicted - corrected| per row.
    std::vector<double> residual_trace;
    double max_rel_error = 0.0;
    double mean_rel_error = 0.0;
    double max_rel_error_approx = 0.0;
    double mean_rel_error_approx = 0.0;
};

struct RunReport {
    std::string command;
    std::string scenario_hash;
    std::string variant;
    std::size_t rungs = 0;
    std::size_t agents = 0;
    std::optional<ErrorStats> stats;
    std::size_t conjugate_pairs = 0;
    std::vector<double> conjugate_tau;
    std::optional<ControlSummary> control;
    std::vector<std::filesystem::path> files;
    double wall_clock_s = 0.0;
};

/// Runs one (already expanded) scenario and writes its CSV files and a
/// <prefix>report.json under cfg.output.directory.
RunReport run_single(Command cmd, const ScenarioConfig& cfg);

/// Expands cfg.sweep, runs the variants on the worker pool and, for
/// `analyze`, writes <prefix>sweep_summary.csv. Reports come back in
/// variant order.
std::vector<RunReport> run(Command cmd, const ScenarioConfig& cfg);

/// Report as JSON text.
std::string report_json(const RunReport& report);

}  // namespace geoswarm
