#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "geoswarm/geodesic.hpp"
#include "geoswarm/manifold.hpp"
#include "geoswarm/odmd.hpp"

namespace geoswarm {

/// What a follower can sense about its right-hand neighbour (the agent one
/// step closer to the head), all in Euclidean chart terms.
struct MeasurementFrame {
    Vec2 follower_position = Vec2::Zero();
    Vec2 neighbor_position = Vec2::Zero();
    Vec2 neighbor_next_position = Vec2::Zero();
    /// Euclidean distance the follower keeps to its neighbour.
    double spacing = 0.0;
    double dt = 0.1;
};

/// Velocity that moves the follower parallel to the neighbour's last
/// displacement and puts it back at `spacing` from the neighbour's next
/// position (the root nearest the neighbour's own pace is taken).
Vec2 measured_velocity(const MeasurementFrame& frame);

/// (1 - weight) * predicted + weight * measured_velocity(frame).
Vec2 correct(const Vec2& predicted, const MeasurementFrame& frame, double weight);

struct ControlStep {
    Vec2 predicted = Vec2::Zero();
    Vec2 corrected = Vec2::Zero();
};

/// One predict / correct / update round on a velocity observable. The model
/// is updated in place with the pair (source, corrected).
ControlStep control_step(OdmdModel& model, const Vec2& source, const MeasurementFrame& frame, double weight);

struct ControlOptions {
    double dt = 0.1;
    std::size_t window = 3;
    double correction_weight = 1.0;
    std::size_t n_followers = 1;
    double d = 0.1;
    double t_end = 10.0;
    double step = kDefaultStep;
};

/// Where the start-up window data comes from.
enum class StartupData {
    /// exact lattice positions (geodesic spacing along the rungs)
    original,
    /// Euclidean stand-in: followers on the Euclidean normal of the head
    /// velocity at Euclidean spacing d
    euclidean,
};

struct FollowerTrace {
    /// Row j covers [t_j, t_j + dt]; all velocities are secant velocities.
    std::vector<double> t;
    std::vector<Vec2> ideal;
    std::vector<Vec2> controlled;
    std::vector<Vec2> predicted;
    /// |predicted - corrected| per row after start-up, NaN otherwise.
    std::vector<double> residual;
    /// Rows produced without a usable model (linear-dynamics fallback).
    std::vector<bool> fallback;
    std::vector<std::string> notes;
};

struct ControlRun {
    StartupData startup = StartupData::original;
    /// traces[i] is follower i + 1.
    std::vector<FollowerTrace> traces;
    bool fallback_engaged() const;
};

/// Runs the predict-correct loop for every follower against the ideal
/// lattice built with rung period dt. The first `window` rows of each trace
/// are the start-up data.
ControlRun run_control(const PotentialField& field, const GeodesicState& head0, const ControlOptions& opts,
                       StartupData startup);

/// Per-row |controlled - ideal| / |ideal| from row `skip` on.
std::vector<double> relative_errors(const FollowerTrace& trace, std::size_t skip);

}  // namespace geoswarm
