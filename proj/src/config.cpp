#include "geoswarm/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "geoswarm/error.hpp"

namespace geoswarm {

using nlohmann::json;

namespace {

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

[[noreturn]] void unknown_key(const std::string& path, const std::string& key, const std::vector<std::string>& allowed) {
    std::string msg = "unknown key '" + key + "' at " + path + "/" + key;
    const auto best = std::min_element(allowed.begin(), allowed.end(), [&](const auto& x, const auto& y) {
        return edit_distance(key, x) < edit_distance(key, y);
    });
    if (best != allowed.end() && edit_distance(key, *best) <= 3) msg += "; did you mean '" + *best + "'?";
    throw ParseError(msg);
}

void check_keys(const json& obj, const std::string& path, const std::vector<std::string>& allowed) {
    if (!obj.is_object()) throw ParseError("expected an object at " + (path.empty() ? "/" : path));
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) unknown_key(path, key, allowed);
    }
}

double number(const json& obj, const std::string& path, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ParseError("expected a number at " + path + "/" + key);
    return v.get<double>();
}

std::size_t count(const json& obj, const std::string& path, const char* key, std::size_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
        throw ParseError("expected a non-negative integer at " + path + "/" + key);
    }
    const auto raw = v.get<std::int64_t>();
    if (raw < 0) throw ValidationError(path.substr(1) + "." + key + " must be >= 0");
    return static_cast<std::size_t>(raw);
}

std::string text(const json& obj, const std::string& path, const char* key, std::string fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) throw ParseError("expected a string at " + path + "/" + key);
    return v.get<std::string>();
}

bool flag(const json& obj, const std::string& path, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) throw ParseError("expected true/false at " + path + "/" + key);
    return v.get<bool>();
}

const std::vector<std::string> kSweepable = {"potential.a", "head.x0",  "head.y0",   "head.vx0",  "head.vy0",
                                             "swarm.n_followers", "swarm.d", "swarm.t_s", "sim.t_end", "sim.step",
                                             "control.dt", "control.correction_weight"};

void require(bool ok, const char* field, const std::string& constraint) {
    if (!ok) throw ValidationError(std::string(field) + " " + constraint);
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

void ScenarioConfig::validate() const {
    require(std::isfinite(potential.a) && potential.a > 0.0, "potential.a", "must be finite and > 0");
    require(std::isfinite(head.x0) && std::isfinite(head.y0), "head.x0/y0", "must be finite");
    require(std::isfinite(head.vx0) && std::isfinite(head.vy0), "head.vx0/vy0", "must be finite");
    require(head.vx0 != 0.0 || head.vy0 != 0.0, "head.vx0/vy0", "must not both be zero");
    require(std::isfinite(swarm.d) && swarm.d > 0.0, "swarm.d", "must be finite and > 0");
    require(std::isfinite(swarm.t_s) && swarm.t_s > 0.0, "swarm.t_s", "must be finite and > 0");
    require(std::isfinite(sim.t_end) && sim.t_end > 0.0, "sim.t_end", "must be finite and > 0");
    require(sim.t_end >= swarm.t_s * (1.0 - 1e-12), "sim.t_end", "must be >= swarm.t_s");
    require(std::isfinite(sim.step) && sim.step > 0.0 && sim.step <= sim.t_end, "sim.step",
            "must be > 0 and <= sim.t_end");
    require(sim.step <= swarm.d, "sim.step", "must be <= swarm.d");
    require(control.window >= 2, "control.window", "must be >= 2");
    require(std::isfinite(control.dt) && control.dt > 0.0, "control.dt", "must be finite and > 0");
    require(control.correction_weight >= 0.0 && control.correction_weight <= 1.0, "control.correction_weight",
            "must lie in [0, 1]");
    require(!output.directory.empty(), "output.directory", "must not be empty");
    for (const auto& [key, values] : sweep) {
        if (std::find(kSweepable.begin(), kSweepable.end(), key) == kSweepable.end()) {
            throw ValidationError("sweep key '" + key + "' is not a sweepable numeric field");
        }
        require(!values.empty(), "sweep", "lists must not be empty");
        for (double v : values) {
            ScenarioConfig probe = *this;
            probe.sweep.clear();
            set_numeric(probe, key, v);
            probe.validate();
        }
    }
}

ScenarioConfig parse_config(std::string_view source, std::string_view origin) {
    json root;
    try {
        root = json::parse(source.begin(), source.end(), nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(origin) + ": byte " + std::to_string(e.byte) + ": " + e.what());
    }
    check_keys(root, "", {"description", "potential", "head", "swarm", "sim", "analysis", "control", "output", "sweep"});

    ScenarioConfig cfg;
    cfg.description = text(root, "", "description", "");

    if (root.contains("potential")) {
        const json& p = root.at("potential");
        if (p.is_string()) {
            cfg.potential.kind = potential_kind_from_string(p.get<std::string>());
        } else {
            check_keys(p, "/potential", {"kind", "a"});
            cfg.potential.kind = potential_kind_from_string(text(p, "/potential", "kind", "flat"));
            cfg.potential.a = number(p, "/potential", "a", cfg.potential.a);
        }
    }
    if (root.contains("head")) {
        const json& h = root.at("head");
        check_keys(h, "/head", {"x0", "y0", "vx0", "vy0"});
        cfg.head.x0 = number(h, "/head", "x0", cfg.head.x0);
        cfg.head.y0 = number(h, "/head", "y0", cfg.head.y0);
        cfg.head.vx0 = number(h, "/head", "vx0", cfg.head.vx0);
        cfg.head.vy0 = number(h, "/head", "vy0", cfg.head.vy0);
    }
    if (root.contains("swarm")) {
        const json& s = root.at("swarm");
        check_keys(s, "/swarm", {"n_followers", "d", "t_s"});
        cfg.swarm.n_followers = count(s, "/swarm", "n_followers", cfg.swarm.n_followers);
        cfg.swarm.d = number(s, "/swarm", "d", cfg.swarm.d);
        cfg.swarm.t_s = number(s, "/swarm", "t_s", cfg.swarm.t_s);
    }
    if (root.contains("sim")) {
        const json& s = root.at("sim");
        check_keys(s, "/sim", {"t_end", "step"});
        cfg.sim.t_end = number(s, "/sim", "t_end", cfg.sim.t_end);
        cfg.sim.step = number(s, "/sim", "step", cfg.sim.step);
    }
    if (root.contains("analysis")) {
        const json& a = root.at("analysis");
        check_keys(a, "/analysis", {"mode"});
        cfg.mode = estimator_mode_from_string(text(a, "/analysis", "mode", "oracle"));
    }
    if (root.contains("control")) {
        const json& c = root.at("control");
        check_keys(c, "/control", {"enabled", "window", "dt", "correction_weight"});
        cfg.control.enabled = flag(c, "/control", "enabled", cfg.control.enabled);
        cfg.control.window = count(c, "/control", "window", cfg.control.window);
        cfg.control.dt = number(c, "/control", "dt", cfg.control.dt);
        cfg.control.correction_weight = number(c, "/control", "correction_weight", cfg.control.correction_weight);
    }
    if (root.contains("output")) {
        const json& o = root.at("output");
        check_keys(o, "/output", {"directory", "prefix"});
        cfg.output.directory = text(o, "/output", "directory", cfg.output.directory);
        cfg.output.prefix = text(o, "/output", "prefix", cfg.output.prefix);
    }
    if (root.contains("sweep")) {
        const json& s = root.at("sweep");
        if (!s.is_object()) throw ParseError("expected an object at /sweep");
        for (const auto& [key, values] : s.items()) {
            if (std::find(kSweepable.begin(), kSweepable.end(), key) == kSweepable.end()) {
                unknown_key("/sweep", key, kSweepable);
            }
            if (!values.is_array()) throw ParseError("expected an array at /sweep/" + key);
            auto& list = cfg.sweep[key];
            for (const auto& v : values) {
                if (!v.is_number()) throw ParseError("expected numbers in /sweep/" + key);
                list.push_back(v.get<double>());
            }
        }
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

std::string canonical_json(const ScenarioConfig& cfg) {
    json j;
    j["description"] = cfg.description;
    j["potential"] = {{"kind", std::string(to_string(cfg.potential.kind))}, {"a", cfg.potential.a}};
    j["head"] = {{"x0", cfg.head.x0}, {"y0", cfg.head.y0}, {"vx0", cfg.head.vx0}, {"vy0", cfg.head.vy0}};
    j["swarm"] = {{"n_followers", cfg.swarm.n_followers}, {"d", cfg.swarm.d}, {"t_s", cfg.swarm.t_s}};
    j["sim"] = {{"t_end", cfg.sim.t_end}, {"step", cfg.sim.step}};
    j["analysis"] = {{"mode", std::string(to_string(cfg.mode))}};
    j["control"] = {{"enabled", cfg.control.enabled},
                    {"window", cfg.control.window},
                    {"dt", cfg.control.dt},
                    {"correction_weight", cfg.control.correction_weight}};
    j["output"] = {{"directory", cfg.output.directory}, {"prefix", cfg.output.prefix}};
    j["sweep"] = json::object();
    for (const auto& [key, values] : cfg.sweep) j["sweep"][key] = values;
    return j.dump();
}

std::string scenario_hash(const ScenarioConfig& cfg) {
    // Where the results land is not part of the experiment.
    ScenarioConfig keyed = cfg;
    keyed.output = OutputConfig{};
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : canonical_json(keyed)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void set_numeric(ScenarioConfig& cfg, std::string_view key, double value) {
    if (key == "potential.a") cfg.potential.a = value;
    else if (key == "head.x0") cfg.head.x0 = value;
    else if (key == "head.y0") cfg.head.y0 = value;
    else if (key == "head.vx0") cfg.head.vx0 = value;
    else if (key == "head.vy0") cfg.head.vy0 = value;
    else if (key == "swarm.n_followers") {
        if (!(value >= 0.0) || value != std::floor(value)) throw ValidationError("swarm.n_followers must be a non-negative integer");
        cfg.swarm.n_followers = static_cast<std::size_t>(value);
    } else if (key == "swarm.d") cfg.swarm.d = value;
    else if (key == "swarm.t_s") cfg.swarm.t_s = value;
    else if (key == "sim.t_end") cfg.sim.t_end = value;
    else if (key == "sim.step") cfg.sim.step = value;
    else if (key == "control.dt") cfg.control.dt = value;
    else if (key == "control.correction_weight") cfg.control.correction_weight = value;
    else throw ValidationError("'" + std::string(key) + "' is not a numeric config field");
}

std::vector<SweepVariant> expand_sweep(const ScenarioConfig& cfg) {
    ScenarioConfig base = cfg;
    base.sweep.clear();
    std::vector<SweepVariant> out{{"", {}, base}};
    for (const auto& [key, values] : cfg.sweep) {
        std::vector<SweepVariant> next;
        for (const auto& variant : out) {
            for (double v : values) {
                SweepVariant child = variant;
                set_numeric(child.config, key, v);
                child.settings.emplace_back(key, v);
                const std::string leaf = key.substr(key.find('.') + 1);
                child.label += (child.label.empty() ? "" : "_") + leaf + "-" + format_value(v);
                next.push_back(std::move(child));
            }
        }
        out = std::move(next);
    }
    for (auto& variant : out) {
        if (!variant.label.empty()) variant.config.output.prefix += variant.label + "_";
    }
    return out;
}

}  // namespace geoswarm
