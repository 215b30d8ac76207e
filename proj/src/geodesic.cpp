#include "geoswarm/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geoswarm/error.hpp"

namespace geoswarm {

namespace {

void require_finite(const GeodesicState& s, double t) {
    if (!s.allFinite()) throw NonFiniteState("geodesic state became non-finite at t=" + std::to_string(t));
}

}  // namespace

double GeodesicPath::time_at(std::size_t k) const {
    if (k + 1 >= states.size()) return t_end;
    return t0 + static_cast<double>(k) * step;
}

GeodesicState geodesic_rhs(const PotentialField& field, const GeodesicState& s) {
    const Vec2 v = velocity(s);
    GeodesicState out;
    if (field.kind == PotentialKind::flat) {
        out << v, 0.0, 0.0;
        return out;
    }
    const Tensor3 gamma = christoffel_at(field, position(s));
    out << v, -v.dot(gamma[0] * v), -v.dot(gamma[1] * v);
    return out;
}

GeodesicState rk4_step(const PotentialField& field, const GeodesicState& s, double h) {
    const GeodesicState k1 = geodesic_rhs(field, s);
    const GeodesicState k2 = geodesic_rhs(field, s + 0.5 * h * k1);
    const GeodesicState k3 = geodesic_rhs(field, s + 0.5 * h * k2);
    const GeodesicState k4 = geodesic_rhs(field, s + h * k3);
    return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

GeodesicPath integrate(const PotentialField& field, const GeodesicState& s0, double t_end, double step) {
    if (!(t_end > 0.0 && step > 0.0 && step <= t_end * (1.0 + 1e-12))) {
        throw InvalidArgument("integrate needs 0 < step <= t_end (step=" + std::to_string(step) +
                              ", t_end=" + std::to_string(t_end) + ")");
    }
    require_finite(s0, 0.0);

    // Treat a remainder below 1e-9 steps as landing on the grid.
    const auto full = static_cast<std::size_t>(std::floor(t_end / step + 1e-9));
    const double remainder = t_end - static_cast<double>(full) * step;
    const bool partial = remainder > 1e-9 * step;

    GeodesicPath path;
    path.step = step;
    path.t_end = t_end;
    path.states.reserve(full + 2);
    path.states.push_back(s0);
    GeodesicState s = s0;
    for (std::size_t k = 0; k < full; ++k) {
        s = rk4_step(field, s, step);
        require_finite(s, static_cast<double>(k + 1) * step);
        path.states.push_back(s);
    }
    if (partial) {
        s = rk4_step(field, s, remainder);
        require_finite(s, t_end);
        path.states.push_back(s);
    }
    return path;
}

GeodesicState state_at(const PotentialField& field, const GeodesicPath& path, double t) {
    if (path.states.empty()) throw EmptyInput("state_at on an empty path");
    const double rel = t - path.t0;
    if (rel < -1e-12 || t > path.t_end + 1e-12) {
        throw IndexOutOfRange("time " + std::to_string(t) + " outside the integrated interval");
    }
    const double raw = std::floor(rel / path.step + 1e-9);
    const auto k = std::min(static_cast<std::size_t>(std::max(raw, 0.0)), path.states.size() - 1);
    const double residual = t - path.time_at(k);
    if (residual <= 1e-9 * path.step) return path.states[k];
    return rk4_step(field, path.states[k], residual);
}

double g_speed(const PotentialField& field, const GeodesicState& s) {
    const Mat2 g = metric_tensor(field, position(s));
    return std::sqrt(inner(g, velocity(s), velocity(s)));
}

GeodesicState orthonormal_launch(const PotentialField& field, const Vec2& p, const Vec2& v) {
    const Mat2 g = metric_tensor(field, p);
    const double norm_v = std::sqrt(inner(g, v, v));
    if (!(norm_v >= 1e-12)) throw DegenerateVelocity("cannot launch orthogonally to a zero velocity");
    // w = rot90(g v) satisfies v^T g w = 0 and v x w = v^T g v > 0.
    const Vec2 covector = g * v;
    Vec2 w(-covector.y(), covector.x());
    w /= std::sqrt(inner(g, w, w));
    return make_state(p, w);
}

std::optional<double> detect_conjugate(std::span<const std::pair<double, double>> separations, double d) {
    const double threshold = kConjugateFraction * d;
    for (const auto& [tau, norm] : separations) {
        if (norm < threshold) return tau;
    }
    return std::nullopt;
}

}  // namespace geoswarm
