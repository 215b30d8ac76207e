#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "geoswarm/manifold.hpp"

namespace geoswarm {

/// (x1, x2, dx1/dt, dx2/dt) of a particle on the manifold, in chart coordinates.
using GeodesicState = Eigen::Vector4d;

inline Vec2 position(const GeodesicState& s) { return s.head<2>(); }
inline Vec2 velocity(const GeodesicState& s) { return s.tail<2>(); }
inline GeodesicState make_state(const Vec2& p, const Vec2& v) {
    GeodesicState s;
    s << p, v;
    return s;
}

inline constexpr double kDefaultStep = 1e-3;

/// Samples of an integrated geodesic. states[k] sits at t0 + k * step except
/// the last one, which sits exactly at t_end (the final step may be shorter).
struct GeodesicPath {
    std::vector<GeodesicState> states;
    double t0 = 0.0;
    double step = kDefaultStep;
    double t_end = 0.0;

    double time_at(std::size_t k) const;
    const GeodesicState& back() const { return states.back(); }
};

/// Right-hand side of the geodesic system
///   x'' + Gamma^x_xx x'^2 + 2 Gamma^x_xy x' y' + Gamma^x_yy y'^2 = 0 (and the y row).
GeodesicState geodesic_rhs(const PotentialField& field, const GeodesicState& s);

/// One classical RK4 step.
GeodesicState rk4_step(const PotentialField& field, const GeodesicState& s, double h);

/// Fixed-step RK4 from t = 0 to t_end. Throws NonFiniteState on blow-up and
/// InvalidArgument on a bad step/t_end.
GeodesicPath integrate(const PotentialField& field, const GeodesicState& s0, double t_end,
                       double step = kDefaultStep);

/// State at an arbitrary time inside the path: the grid sample at or before t
/// advanced by a single RK4 step of the remaining fraction.
GeodesicState state_at(const PotentialField& field, const GeodesicPath& path, double t);

/// g-speed sqrt(g(v, v)) at the state's position.
double g_speed(const PotentialField& field, const GeodesicState& s);

/// Unit-g-norm velocity w at p with g(w, v) = 0 and v x w > 0 (w points to the
/// left of v). Throws DegenerateVelocity when |v|_g < 1e-12.
GeodesicState orthonormal_launch(const PotentialField& field, const Vec2& p, const Vec2& v);

/// Separation collapse threshold as a fraction of the lattice spacing.
inline constexpr double kConjugateFraction = 0.1;

/// Earliest tau whose separation norm drops below kConjugateFraction * d.
std::optional<double> detect_conjugate(std::span<const std::pair<double, double>> separations, double d);

}  // namespace geoswarm
