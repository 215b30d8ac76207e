#pragma once

#include <cstddef>
#include <vector>

#include "geoswarm/geodesic.hpp"
#include "geoswarm/manifold.hpp"

namespace geoswarm {

/// Path graph head -> follower 1 -> ... -> follower n with geodesic edge
/// length d. A new rung of the formation is emitted every t_s.
struct FormationTopology {
    std::size_t n_followers = 100;
    double d = 0.1;
    double t_s = 0.1;

    /// Throws ValidationError on d <= 0 or t_s <= 0.
    void validate() const;
};

/// Lattice formation. rungs[j] is the unit-speed geodesic launched from the
/// head at emission_times[j], g-orthogonally to the head velocity; agent i of
/// rung j sits at arc length i * d along it (agent 0 is the head).
struct SwarmTrajectory {
    PotentialField field;
    FormationTopology topology;
    GeodesicPath head;
    std::vector<double> emission_times;
    std::vector<GeodesicPath> rungs;
    /// positions[j][i] and tangents[j][i]: chart position and unit rung
    /// tangent of agent i at emission time j.
    std::vector<std::vector<Vec2>> positions;
    std::vector<std::vector<Vec2>> tangents;

    std::size_t rung_count() const { return positions.size(); }
    std::size_t agent_count() const { return topology.n_followers + 1; }
};

/// Number of rungs emitted on [0, t_end], j = 0 included.
std::size_t rung_count(double t_end, double t_s);

/// Integrates the head on [0, t_end], then one rung per emission time.
/// Rungs are integrated in parallel; the result does not depend on the
/// worker count.
SwarmTrajectory build_formation(const PotentialField& field, const GeodesicState& head0,
                                const FormationTopology& topo, double t_end, double step = kDefaultStep);

/// Edge vectors along rung j: q_{i+1} - q_i for i = 0 .. n_followers - 1.
std::vector<Vec2> separations(const SwarmTrajectory& traj, std::size_t j);

/// Deviation between rung j and rung j + 1 at equal arc length:
/// q_i(t_{j+1}) - q_i(t_j) for i = 0 .. n_followers. This is the chart form
/// of the Jacobi field along the rung family.
std::vector<Vec2> deviation_vectors(const SwarmTrajectory& traj, std::size_t j);

}  // namespace geoswarm
