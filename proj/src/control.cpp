#include "geoswarm/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "geoswarm/error.hpp"
#include "geoswarm/formation.hpp"

namespace geoswarm {

Vec2 measured_velocity(const MeasurementFrame& frame) {
    const Vec2 delta = frame.neighbor_next_position - frame.neighbor_position;
    const double a = delta.squaredNorm();
    if (a == 0.0) return Vec2::Zero();
    // |r + lambda * delta| = spacing with r measured from the neighbour's next position.
    const Vec2 r = frame.follower_position - frame.neighbor_next_position;
    const double b = r.dot(delta);
    const double c = r.squaredNorm() - frame.spacing * frame.spacing;
    const double disc = b * b - a * c;
    double lambda = -b / a;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        const double hi = (-b + root) / a;
        const double lo = (-b - root) / a;
        lambda = std::abs(hi - 1.0) <= std::abs(lo - 1.0) ? hi : lo;
    }
    return lambda * delta / frame.dt;
}

Vec2 correct(const Vec2& predicted, const MeasurementFrame& frame, double weight) {
    return (1.0 - weight) * predicted + weight * measured_velocity(frame);
}

ControlStep control_step(OdmdModel& model, const Vec2& source, const MeasurementFrame& frame, double weight) {
    ControlStep out;
    out.predicted = predict(model, source);
    out.corrected = correct(out.predicted, frame, weight);
    update_in_place(model, {source, out.corrected});
    return out;
}

bool ControlRun::fallback_engaged() const {
    return std::any_of(traces.begin(), traces.end(), [](const FollowerTrace& t) {
        return std::find(t.fallback.begin(), t.fallback.end(), true) != t.fallback.end();
    });
}

namespace {

std::string at_time(const char* what, double t) {
    std::ostringstream os;
    os << what << " at t=" << t;
    return os.str();
}

std::optional<OdmdModel> try_init(const std::vector<Vec2>& rows, std::size_t last, std::size_t window) {
    std::vector<SnapshotPair> pairs;
    pairs.reserve(window);
    for (std::size_t m = last - window; m < last; ++m) pairs.push_back({rows[m], rows[m + 1]});
    try {
        return init_batch(pairs);
    } catch (const RankDeficient&) {
        return std::nullopt;
    }
}

}  // namespace

ControlRun run_control(const PotentialField& field, const GeodesicState& head0, const ControlOptions& opts,
                       StartupData startup) {
    if (opts.window < 2) throw ValidationError("control.window must be >= 2");
    if (!(opts.dt > 0.0)) throw ValidationError("control.dt must be > 0");
    if (opts.n_followers < 1) throw ValidationError("control needs at least one follower");
    if (!(opts.correction_weight >= 0.0 && opts.correction_weight <= 1.0)) {
        throw ValidationError("control.correction_weight must lie in [0, 1]");
    }

    const FormationTopology topo{opts.n_followers, opts.d, opts.dt};
    const SwarmTrajectory ideal = build_formation(field, head0, topo, opts.t_end, opts.step);
    const std::size_t steps = ideal.rung_count();
    const std::size_t k = opts.window;
    if (steps < k + 3) throw ValidationError("sim.t_end too short for the control start-up window");
    const std::size_t rows = steps - 1;
    const std::size_t n = opts.n_followers;
    const double dt = opts.dt;

    // pos[i][j]: agent i (0 = head) at t_j.
    std::vector<std::vector<Vec2>> pos(n + 1, std::vector<Vec2>(steps, Vec2::Zero()));
    for (std::size_t j = 0; j < steps; ++j) pos[0][j] = ideal.positions[j][0];
    for (std::size_t j = 0; j <= k + 1; ++j) {
        const Vec2 head_v = velocity(state_at(field, ideal.head, ideal.emission_times[j]));
        const Vec2 normal = Vec2(-head_v.y(), head_v.x()).normalized();
        for (std::size_t i = 1; i <= n; ++i) {
            pos[i][j] = startup == StartupData::original
                            ? ideal.positions[j][i]
                            : Vec2(pos[0][j] + static_cast<double>(i) * opts.d * normal);
        }
    }

    ControlRun run;
    run.startup = startup;
    run.traces.resize(n);
    std::vector<std::optional<OdmdModel>> models(n);
    std::vector<double> spacing(n);
    for (std::size_t f = 0; f < n; ++f) {
        const std::size_t i = f + 1;
        FollowerTrace& tr = run.traces[f];
        tr.t.resize(rows);
        tr.ideal.resize(rows);
        tr.controlled.assign(rows, Vec2::Zero());
        tr.predicted.assign(rows, Vec2::Constant(std::numeric_limits<double>::quiet_NaN()));
        tr.residual.assign(rows, std::numeric_limits<double>::quiet_NaN());
        tr.fallback.assign(rows, false);
        for (std::size_t j = 0; j < rows; ++j) {
            tr.t[j] = ideal.emission_times[j];
            tr.ideal[j] = (ideal.positions[j + 1][i] - ideal.positions[j][i]) / dt;
        }
        for (std::size_t j = 0; j <= k; ++j) tr.controlled[j] = (pos[i][j + 1] - pos[i][j]) / dt;
        spacing[f] = (pos[i][k + 1] - pos[i - 1][k + 1]).norm();
        models[f] = try_init(tr.controlled, k, k);
        if (!models[f]) tr.notes.push_back(at_time("RankDeficient at init; linear-dynamics fallback engaged", tr.t[k]));
    }

    for (std::size_t j = k + 1; j < rows; ++j) {
        for (std::size_t f = 0; f < n; ++f) {
            const std::size_t i = f + 1;
            FollowerTrace& tr = run.traces[f];
            const MeasurementFrame frame{pos[i][j], pos[i - 1][j], pos[i - 1][j + 1], spacing[f], dt};
            const Vec2 source = tr.controlled[j - 1];
            auto& model = models[f];
            bool held = !model.has_value();
            if (model) {
                try {
                    const ControlStep step = control_step(*model, source, frame, opts.correction_weight);
                    tr.predicted[j] = step.predicted;
                    tr.controlled[j] = step.corrected;
                    tr.residual[j] = (step.predicted - step.corrected).norm();
                } catch (const NumericalBreakdown&) {
                    model.reset();
                    held = true;
                    tr.notes.push_back(at_time("NumericalBreakdown in update; linear-dynamics fallback engaged", tr.t[j]));
                }
            }
            if (held) {
                tr.controlled[j] = measured_velocity(frame);
                tr.fallback[j] = true;
                model = try_init(tr.controlled, j, k);
                if (model) tr.notes.push_back(at_time("model re-initialised", tr.t[j]));
            }
            pos[i][j + 1] = pos[i][j] + dt * tr.controlled[j];
        }
    }
    return run;
}

std::vector<double> relative_errors(const FollowerTrace& trace, std::size_t skip) {
    std::vector<double> out;
    for (std::size_t j = skip; j < trace.t.size(); ++j) {
        out.push_back((trace.controlled[j] - trace.ideal[j]).norm() / trace.ideal[j].norm());
    }
    return out;
}

}  // namespace geoswarm
