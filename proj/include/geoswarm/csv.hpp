#pragma once

#include <cstddef>
#include <ostream>
#include <string>

#include "geoswarm/analysis.hpp"
#include "geoswarm/control.hpp"
#include "geoswarm/formation.hpp"

namespace geoswarm::csv {

/// Round-trip formatting: 17 significant digits, "nan" for NaN.
std::string format(double v);

/// t, agent_id, x1, x2, x3 -- one row per (rung, agent); agent 0 is the head.
std::size_t write_trajectory(std::ostream& os, const SwarmTrajectory& traj);

/// rung_t, x1, x2, kappa_hat, kappa_true, pct_error, mode, flag
std::size_t write_curvature(std::ostream& os, const AnalysisResult& result);

/// t, vx_ideal, vy_ideal, vx_pred, vy_pred, vx_pred_approx, vy_pred_approx
std::size_t write_control(std::ostream& os, const FollowerTrace& original, const FollowerTrace& approx);

struct OracleGrid {
    Vec2 center = Vec2::Zero();
    double half_width = 1.0;
    std::size_t points_per_side = 101;
};

/// x1, x2, x3, kappa over a square grid of analytic Gaussian curvature.
std::size_t write_oracle(std::ostream& os, const PotentialField& field, const OracleGrid& grid);

}  // namespace geoswarm::csv
