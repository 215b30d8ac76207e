#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geoswarm/config.hpp"
#include "geoswarm/csv.hpp"
#include "geoswarm/error.hpp"
#include "geoswarm/runner.hpp"

namespace {

void print_report(const geoswarm::RunReport& r) {
    std::cout << r.command << (r.variant.empty() ? "" : " [" + r.variant + "]") << " hash=" << r.scenario_hash;
    if (r.stats) {
        std::cout << " mean_pct=" << geoswarm::csv::format(r.stats->mean_pct) << " samples=" << r.stats->samples
                  << " excluded=" << r.stats->excluded << " conjugate_pairs=" << r.conjugate_pairs;
    }
    if (r.control) {
        std::cout << " max_rel_error=" << r.control->max_rel_error
                  << " max_rel_error_approx=" << r.control->max_rel_error_approx;
        if (r.control->fallback_engaged) std::cout << " (linear-dynamics fallback engaged)";
    }
    std::cout << '\n';
    for (const auto& f : r.files) std::cout << "  wrote " << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geodesic lattice swarm formations: simulation, curvature analysis and online-DMD control"};
    app.require_subcommand(1);

    std::vector<std::string> configs;
    std::string out_dir;
    bool quiet = false;
    for (const char* name : {"simulate", "analyze", "control", "oracle"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", configs, "Scenario file (JSON); may be repeated")->required();
        sub->add_option("--out", out_dir, "Override output.directory");
        sub->add_flag("--quiet", quiet, "Suppress the run summary");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const geoswarm::Command cmd = geoswarm::command_from_string(app.get_subcommands().front()->get_name());
        for (const auto& path : configs) {
            geoswarm::ScenarioConfig cfg = geoswarm::load_config(path);
            if (!out_dir.empty()) cfg.output.directory = out_dir;
            const auto reports = geoswarm::run(cmd, cfg);
            if (!quiet) {
                for (const auto& r : reports) print_report(r);
            }
        }
    } catch (const geoswarm::Error& e) {
        std::cerr << "geoswarm: " << e.what() << '\n';
        return e.numerical() ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "geoswarm: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
