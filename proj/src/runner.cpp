#include "geoswarm/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "geoswarm/control.hpp"
#include "geoswarm/csv.hpp"
#include "geoswarm/error.hpp"
#include "geoswarm/formation.hpp"
#include "geoswarm/parallel.hpp"

namespace geoswarm {

std::string_view to_string(Command cmd) {
    switch (cmd) {
        case Command::simulate: return "simulate";
        case Command::analyze: return "analyze";
        case Command::control: return "control";
        case Command::oracle: return "oracle";
    }
    return "unknown";
}

Command command_from_string(std::string_view name) {
    for (auto cmd : {Command::simulate, Command::analyze, Command::control, Command::oracle}) {
        if (to_string(cmd) == name) return cmd;
    }
    throw ValidationError("unknown command '" + std::string(name) + "'");
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    return out;
}

template <typename Writer>
std::filesystem::path write_file(const ScenarioConfig& cfg, const std::string& name, Writer&& writer) {
    const std::filesystem::path path = std::filesystem::path(cfg.output.directory) / (cfg.output.prefix + name);
    std::ofstream out = open_output(path);
    writer(out);
    return path;
}

double mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

ControlSummary run_control_pair(const ScenarioConfig& cfg, RunReport& report) {
    ControlOptions opts;
    opts.dt = cfg.control.dt;
    opts.window = cfg.control.window;
    opts.correction_weight = cfg.control.correction_weight;
    opts.n_followers = std::max<std::size_t>(cfg.swarm.n_followers, 1);
    opts.d = cfg.swarm.d;
    opts.t_end = cfg.sim.t_end;
    opts.step = cfg.sim.step;

    const GeodesicState head0 = cfg.head.state();
    const ControlRun original = run_control(cfg.potential, head0, opts, StartupData::original);
    const ControlRun approx = run_control(cfg.potential, head0, opts, StartupData::euclidean);

    ControlSummary summary;
    summary.fallback_engaged = original.fallback_engaged() || approx.fallback_engaged();
    const FollowerTrace& first = original.traces.front();
    const FollowerTrace& first_approx = approx.traces.front();
    for (const auto& note : first.notes) summary.notes.push_back("original/follower 1: " + note);
    for (const auto& note : first_approx.notes) summary.notes.push_back("euclidean/follower 1: " + note);
    if (summary.fallback_engaged) summary.notes.push_back("linear-dynamics fallback engaged");
    summary.residual_trace = first.residual;
    const auto err = relative_errors(first, opts.window);
    const auto err_approx = relative_errors(first_approx, opts.window);
    summary.max_rel_error = max_of(err);
    summary.mean_rel_error = mean(err);
    summary.max_rel_error_approx = max_of(err_approx);
    summary.mean_rel_error_approx = mean(err_approx);

    report.files.push_back(write_file(cfg, "control.csv", [&](std::ostream& os) {
        const std::size_t rows = csv::write_control(os, first, first_approx);
        if (rows != rung_count(cfg.sim.t_end, cfg.control.dt) - 1) throw NumericalBreakdown("control row count mismatch");
    }));
    return summary;
}

}  // namespace

RunReport run_single(Command cmd, const ScenarioConfig& cfg) {
    cfg.validate();
    const auto started = std::chrono::steady_clock::now();
    std::filesystem::create_directories(cfg.output.directory);

    RunReport report;
    report.command = std::string(to_string(cmd));
    report.scenario_hash = scenario_hash(cfg);

    const FormationTopology topo{cfg.swarm.n_followers, cfg.swarm.d, cfg.swarm.t_s};
    if (cmd == Command::simulate || cmd == Command::analyze) {
        if (cmd == Command::analyze && topo.n_followers < 3) {
            throw TooFewAgents("analyze needs swarm.n_followers >= 3");
        }
        const SwarmTrajectory traj = build_formation(cfg.potential, cfg.head.state(), topo, cfg.sim.t_end, cfg.sim.step);
        report.rungs = traj.rung_count();
        report.agents = traj.agent_count();
        report.files.push_back(write_file(cfg, "trajectory.csv", [&](std::ostream& os) { csv::write_trajectory(os, traj); }));
        if (cmd == Command::analyze) {
            const AnalysisResult result = analyze(traj, cfg.mode);
            report.stats = result.stats;
            report.conjugate_pairs = result.conjugate_pairs();
            for (const auto& tau : result.conjugate_tau) {
                report.conjugate_tau.push_back(tau ? *tau : std::nan(""));
            }
            report.files.push_back(write_file(cfg, "curvature.csv", [&](std::ostream& os) {
                const std::size_t rows = csv::write_curvature(os, result);
                if (rows != (traj.rung_count() - 1) * (topo.n_followers - 1)) {
                    throw NumericalBreakdown("curvature row count mismatch");
                }
            }));
        }
    }
    if (cmd == Command::control || (cfg.control.enabled && cmd != Command::oracle)) {
        report.control = run_control_pair(cfg, report);
    }
    if (cmd == Command::oracle) {
        const double speed = std::hypot(cfg.head.vx0, cfg.head.vy0);
        csv::OracleGrid grid;
        grid.center = Vec2(cfg.head.x0, cfg.head.y0);
        grid.half_width = static_cast<double>(cfg.swarm.n_followers) * cfg.swarm.d + cfg.sim.t_end * speed;
        report.files.push_back(write_file(cfg, "oracle.csv", [&](std::ostream& os) { csv::write_oracle(os, cfg.potential, grid); }));
    }

    report.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    report.files.push_back(write_file(cfg, "report.json", [&](std::ostream& os) { os << report_json(report) << '\n'; }));
    return report;
}

std::vector<RunReport> run(Command cmd, const ScenarioConfig& cfg) {
    cfg.validate();
    const std::vector<SweepVariant> variants = expand_sweep(cfg);
    std::vector<RunReport> reports(variants.size());
    parallel_for(variants.size(), [&](std::size_t v) {
        reports[v] = run_single(cmd, variants[v].config);
        reports[v].variant = variants[v].label;
    });
    if (cmd == Command::analyze && !cfg.sweep.empty()) {
        std::filesystem::create_directories(cfg.output.directory);
        const auto path = std::filesystem::path(cfg.output.directory) / (cfg.output.prefix + "sweep_summary.csv");
        std::ofstream out = open_output(path);
        out << "variant";
        for (const auto& [key, _] : cfg.sweep) out << ',' << key;
        out << ",mean_pct,min_pct,max_pct,samples,excluded,conjugate_pairs\n";
        for (std::size_t v = 0; v < variants.size(); ++v) {
            out << variants[v].label;
            for (const auto& [_, value] : variants[v].settings) out << ',' << csv::format(value);
            const ErrorStats& s = *reports[v].stats;
            out << ',' << csv::format(s.mean_pct) << ',' << csv::format(s.min_pct) << ',' << csv::format(s.max_pct)
                << ',' << s.samples << ',' << s.excluded << ',' << reports[v].conjugate_pairs << '\n';
        }
    }
    return reports;
}

std::string report_json(const RunReport& r) {
    using nlohmann::json;
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json j;
    j["command"] = r.command;
    j["scenario_hash"] = r.scenario_hash;
    j["variant"] = r.variant;
    j["rungs"] = r.rungs;
    j["agents"] = r.agents;
    j["estimate_point"] = "midpoint of an agent's positions on consecutive rungs";
    if (r.stats) {
        j["error_stats"] = {{"mean_pct", num(r.stats->mean_pct)},
                            {"min_pct", num(r.stats->min_pct)},
                            {"max_pct", num(r.stats->max_pct)},
                            {"samples", r.stats->samples},
                            {"excluded", r.stats->excluded}};
        j["conjugate_pairs"] = r.conjugate_pairs;
        json taus = json::array();
        for (double t : r.conjugate_tau) taus.push_back(num(t));
        j["conjugate_tau"] = taus;
    }
    if (r.control) {
        const ControlSummary& c = *r.control;
        json trace = json::array();
        for (double v : c.residual_trace) trace.push_back(num(v));
        j["control"] = {{"fallback_engaged", c.fallback_engaged},
                        {"notes", c.notes},
                        {"residual_trace", trace},
                        {"max_rel_error", num(c.max_rel_error)},
                        {"mean_rel_error", num(c.mean_rel_error)},
                        {"max_rel_error_approx", num(c.max_rel_error_approx)},
                        {"mean_rel_error_approx", num(c.mean_rel_error_approx)}};
    }
    json files = json::array();
    for (const auto& f : r.files) files.push_back(f.filename().string());
    j["files"] = files;
    j["wall_clock_s"] = r.wall_clock_s;
    return j.dump(2);
}

}  // namespace geoswarm
