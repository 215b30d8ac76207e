#include "geoswarm/formation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geoswarm/error.hpp"
#include "geoswarm/parallel.hpp"

namespace geoswarm {

void FormationTopology::validate() const {
    if (!(std::isfinite(d) && d > 0.0)) throw ValidationError("swarm.d must be > 0");
    if (!(std::isfinite(t_s) && t_s > 0.0)) throw ValidationError("swarm.t_s must be > 0");
}

std::size_t rung_count(double t_end, double t_s) {
    return static_cast<std::size_t>(std::floor(t_end / t_s + 1e-9)) + 1;
}

SwarmTrajectory build_formation(const PotentialField& field, const GeodesicState& head0,
                                const FormationTopology& topo, double t_end, double step) {
    topo.validate();
    if (!(t_end >= topo.t_s * (1.0 - 1e-12))) throw ValidationError("sim.t_end must be >= swarm.t_s");
    if (!(velocity(head0).squaredNorm() > 0.0)) throw DegenerateVelocity("head velocity is zero");

    SwarmTrajectory traj;
    traj.field = field;
    traj.topology = topo;
    traj.head = integrate(field, head0, t_end, step);

    const std::size_t count = rung_count(t_end, topo.t_s);
    const std::size_t n = topo.n_followers;
    traj.emission_times.resize(count);
    for (std::size_t j = 0; j < count; ++j) traj.emission_times[j] = static_cast<double>(j) * topo.t_s;
    traj.rungs.resize(count);
    traj.positions.assign(count, {});
    traj.tangents.assign(count, {});

    // Rung step divides d so every agent lands on a grid sample.
    const auto per_edge = static_cast<std::size_t>(std::ceil(topo.d / step - 1e-9));
    const double rung_step = topo.d / static_cast<double>(per_edge);

    parallel_for(count, [&](std::size_t j) {
        const GeodesicState head_state = state_at(field, traj.head, traj.emission_times[j]);
        const GeodesicState launch = orthonormal_launch(field, position(head_state), velocity(head_state));
        auto& pos = traj.positions[j];
        auto& tan = traj.tangents[j];
        pos.resize(n + 1);
        tan.resize(n + 1);
        if (n == 0) {
            GeodesicPath& rung = traj.rungs[j];
            rung.states = {launch};
            rung.step = rung_step;
            rung.t_end = 0.0;
            pos[0] = position(launch);
            tan[0] = velocity(launch);
            return;
        }
        GeodesicPath rung = integrate(field, launch, static_cast<double>(n) * topo.d, rung_step);
        for (std::size_t i = 0; i <= n; ++i) {
            const GeodesicState& s = rung.states[std::min(i * per_edge, rung.states.size() - 1)];
            pos[i] = position(s);
            tan[i] = velocity(s);
        }
        traj.rungs[j] = std::move(rung);
    });
    return traj;
}

std::vector<Vec2> separations(const SwarmTrajectory& traj, std::size_t j) {
    if (j >= traj.rung_count()) {
        throw IndexOutOfRange("rung " + std::to_string(j) + " of " + std::to_string(traj.rung_count()));
    }
    const auto& q = traj.positions[j];
    std::vector<Vec2> out;
    out.reserve(q.size() > 0 ? q.size() - 1 : 0);
    for (std::size_t i = 0; i + 1 < q.size(); ++i) out.push_back(q[i + 1] - q[i]);
    return out;
}

std::vector<Vec2> deviation_vectors(const SwarmTrajectory& traj, std::size_t j) {
    if (j + 1 >= traj.rung_count()) {
        throw IndexOutOfRange("rung pair (" + std::to_string(j) + ", " + std::to_string(j + 1) + ") of " +
                              std::to_string(traj.rung_count()));
    }
    const auto& now = traj.positions[j];
    const auto& next = traj.positions[j + 1];
    std::vector<Vec2> out(now.size());
    for (std::size_t i = 0; i < now.size(); ++i) out[i] = next[i] - now[i];
    return out;
}

}  // namespace geoswarm
