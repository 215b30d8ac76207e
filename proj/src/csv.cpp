#include "geoswarm/csv.hpp"

#include <cmath>
#include <cstdio>

#include "geoswarm/error.hpp"

namespace geoswarm::csv {

std::string format(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void check_rows(std::size_t written, std::size_t expected, const char* what) {
    if (written != expected) {
        throw NumericalBreakdown(std::string(what) + " CSV wrote " + std::to_string(written) + " rows, expected " +
                                 std::to_string(expected));
    }
}

}  // namespace

std::size_t write_trajectory(std::ostream& os, const SwarmTrajectory& traj) {
    os << "t,agent_id,x1,x2,x3\n";
    std::size_t rows = 0;
    for (std::size_t j = 0; j < traj.rung_count(); ++j) {
        for (std::size_t i = 0; i < traj.positions[j].size(); ++i) {
            const Vec2& q = traj.positions[j][i];
            os << format(traj.emission_times[j]) << ',' << i << ',' << format(q.x()) << ',' << format(q.y()) << ','
               << format(eval(traj.field, q).value) << '\n';
            ++rows;
        }
    }
    check_rows(rows, traj.rung_count() * traj.agent_count(), "trajectory");
    return rows;
}

std::size_t write_curvature(std::ostream& os, const AnalysisResult& result) {
    os << "rung_t,x1,x2,kappa_hat,kappa_true,pct_error,mode,flag\n";
    const std::string mode(to_string(result.mode));
    for (const auto& e : result.estimates) {
        os << format(e.rung_t) << ',' << format(e.point.x()) << ',' << format(e.point.y()) << ','
           << format(e.kappa_hat) << ',' << format(e.kappa_true) << ',' << format(e.pct_error) << ',' << mode << ','
           << to_string(e.flag) << '\n';
    }
    return result.estimates.size();
}

std::size_t write_control(std::ostream& os, const FollowerTrace& original, const FollowerTrace& approx) {
    if (original.t.size() != approx.t.size()) throw DimensionMismatch("control traces differ in length");
    os << "t,vx_ideal,vy_ideal,vx_pred,vy_pred,vx_pred_approx,vy_pred_approx\n";
    for (std::size_t j = 0; j < original.t.size(); ++j) {
        os << format(original.t[j]) << ',' << format(original.ideal[j].x()) << ',' << format(original.ideal[j].y())
           << ',' << format(original.controlled[j].x()) << ',' << format(original.controlled[j].y()) << ','
           << format(approx.controlled[j].x()) << ',' << format(approx.controlled[j].y()) << '\n';
    }
    return original.t.size();
}

std::size_t write_oracle(std::ostream& os, const PotentialField& field, const OracleGrid& grid) {
    os << "x1,x2,x3,kappa\n";
    const std::size_t n = grid.points_per_side;
    const double span = 2.0 * grid.half_width;
    std::size_t rows = 0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const double fx = n > 1 ? static_cast<double>(a) / static_cast<double>(n - 1) : 0.5;
            const double fy = n > 1 ? static_cast<double>(b) / static_cast<double>(n - 1) : 0.5;
            const Vec2 p = grid.center + Vec2(fx * span - grid.half_width, fy * span - grid.half_width);
            os << format(p.x()) << ',' << format(p.y()) << ',' << format(eval(field, p).value) << ','
               << format(gaussian_curvature_oracle(field, p)) << '\n';
            ++rows;
        }
    }
    check_rows(rows, n * n, "oracle");
    return rows;
}

}  // namespace geoswarm::csv
