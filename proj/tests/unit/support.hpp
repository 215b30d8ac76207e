#pragma once

#include <cmath>
#include <random>

#include "geoswarm/manifold.hpp"

namespace geoswarm::test {

inline double rel_diff(double a, double b, double floor = 1e-12) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

inline const PotentialField kFields[] = {
    {PotentialKind::elliptic_paraboloid, 2.0},  {PotentialKind::elliptic_paraboloid, 20.0},
    {PotentialKind::hyperbolic_paraboloid, 2.0}, {PotentialKind::hyperbolic_paraboloid, 20.0},
    {PotentialKind::sincos, 2.0},                {PotentialKind::sincos, 20.0},
};

inline Vec2 random_point(std::mt19937_64& rng, double half_width) {
    std::uniform_real_distribution<double> u(-half_width, half_width);
    const double x = u(rng);
    return Vec2(x, u(rng));
}

}  // namespace geoswarm::test
