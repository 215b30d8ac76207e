#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geoswarm/error.hpp"
#include "geoswarm/formation.hpp"

using namespace geoswarm;

TEST_CASE("flat formation is a rectangular lattice") {
    const SwarmTrajectory t = build_formation(PotentialField{}, GeodesicState(0, 0, 1, 0), {3, 0.1, 0.5}, 1.0);
    REQUIRE(t.rung_count() == 3);
    REQUIRE(t.agent_count() == 4);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(t.emission_times[j] == doctest::Approx(0.5 * j));
        for (std::size_t i = 0; i < 4; ++i) CHECK((t.positions[j][i] - Vec2(0.5 * j, 0.1 * i)).norm() <= 1e-9);
        for (const Vec2& s : separations(t, j)) CHECK((s - Vec2(0, 0.1)).norm() <= 1e-9);
    }
}

TEST_CASE("larger flat lattice stays exact") {
    const SwarmTrajectory t = build_formation(PotentialField{}, GeodesicState(1, 2, 0.6, 0.8), {100, 0.1, 0.1}, 10.0);
    const Vec2 along(0.6, 0.8);
    const Vec2 left(-0.8, 0.6);
    double worst = 0.0;
    for (std::size_t j = 0; j < t.rung_count(); ++j) {
        for (std::size_t i = 0; i < t.agent_count(); ++i) {
            const Vec2 expected = Vec2(1, 2) + t.emission_times[j] * along + 0.1 * static_cast<double>(i) * left;
            worst = std::max(worst, (t.positions[j][i] - expected).norm());
        }
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("rung count") {
    CHECK(rung_count(10.0, 0.1) == 101);
    CHECK(rung_count(10.0, 0.5) == 21);
    CHECK(rung_count(1.0, 0.3) == 4);
    CHECK(rung_count(0.3, 0.3) == 2);
    const SwarmTrajectory t = build_formation({PotentialKind::sincos, 2.0}, GeodesicState(0, 0, 1, 0), {5, 0.1, 0.3}, 1.0);
    CHECK(t.rung_count() == 4);
}

TEST_CASE("rungs launch g-orthogonal with unit speed") {
    const PotentialField f{PotentialKind::sincos, 2.0};
    const SwarmTrajectory t =
        build_formation(f, GeodesicState(0, 0, std::cos(std::numbers::pi / 18), std::sin(std::numbers::pi / 18)),
                        {10, 0.1, 0.1}, 10.0);
    for (std::size_t j = 0; j < t.rung_count(); ++j) {
        const GeodesicState& launch = t.rungs[j].states.front();
        const GeodesicState head = state_at(f, t.head, t.emission_times[j]);
        const Mat2 g = metric_tensor(f, position(launch));
        CHECK((position(launch) - position(head)).norm() == 0.0);
        CHECK(std::abs(inner(g, velocity(launch), velocity(head))) <= 1e-9);
        CHECK(std::abs(inner(g, velocity(launch), velocity(launch)) - 1.0) <= 1e-9);
    }
}

TEST_CASE("head is independent of the topology") {
    const PotentialField f{PotentialKind::hyperbolic_paraboloid, 2.0};
    const GeodesicState h0(0.3, -0.2, 0.9, 0.1);
    const SwarmTrajectory a = build_formation(f, h0, {100, 0.1, 0.1}, 5.0);
    const SwarmTrajectory b = build_formation(f, h0, {7, 0.3, 0.5}, 5.0);
    const SwarmTrajectory c = build_formation(f, h0, {0, 0.05, 1.0}, 5.0);
    REQUIRE(a.head.states.size() == b.head.states.size());
    REQUIRE(a.head.states.size() == c.head.states.size());
    for (std::size_t k = 0; k < a.head.states.size(); ++k) {
        CHECK(a.head.states[k] == b.head.states[k]);
        CHECK(a.head.states[k] == c.head.states[k]);
    }
}

TEST_CASE("a swarm without followers is just the head") {
    const PotentialField f{PotentialKind::elliptic_paraboloid, 20.0};
    const SwarmTrajectory t = build_formation(f, GeodesicState(0, 0, 1, 0), {0, 0.1, 0.5}, 2.0);
    CHECK(t.agent_count() == 1);
    for (std::size_t j = 0; j < t.rung_count(); ++j) {
        REQUIRE(t.positions[j].size() == 1);
        CHECK(t.positions[j][0] == position(state_at(f, t.head, t.emission_times[j])));
    }
    CHECK(separations(t, 0).empty());
}

TEST_CASE("separations") {
    const PotentialField f{PotentialKind::elliptic_paraboloid, 20.0};
    SUBCASE("minimal edge") {
        const SwarmTrajectory t = build_formation(f, GeodesicState(0, 0, 1, 0), {1, 0.1, 0.5}, 1.0);
        CHECK(separations(t, 1).size() == 1);
    }
    SUBCASE("arc spacing near launch") {
        const SwarmTrajectory t = build_formation(f, GeodesicState(0, 0, 1, 0), {20, 0.1, 0.5}, 2.0);
        for (std::size_t j = 0; j < t.rung_count(); ++j) {
            const auto s = separations(t, j);
            for (std::size_t i = 0; i < 3; ++i) {
                const Vec2 mid = 0.5 * (t.positions[j][i] + t.positions[j][i + 1]);
                CHECK(std::abs(std::sqrt(inner(metric_tensor(f, mid), s[i], s[i])) - 0.1) <= 1e-4);
            }
        }
    }
    SUBCASE("index checks") {
        const SwarmTrajectory t = build_formation(f, GeodesicState(0, 0, 1, 0), {4, 0.1, 0.5}, 1.0);
        CHECK_THROWS_AS(separations(t, 3), IndexOutOfRange);
        CHECK(deviation_vectors(t, 1).size() == 5);
        CHECK_THROWS_AS(deviation_vectors(t, 2), IndexOutOfRange);
    }
}

TEST_CASE("deviation vectors on flat space are the head displacement") {
    const SwarmTrajectory t = build_formation(PotentialField{}, GeodesicState(0, 0, 1, 0), {5, 0.1, 0.25}, 1.0);
    for (const Vec2& s : deviation_vectors(t, 2)) CHECK((s - Vec2(0.25, 0)).norm() <= 1e-12);
}

TEST_CASE("formation rejects bad topology") {
    CHECK_THROWS_AS(build_formation(PotentialField{}, GeodesicState(0, 0, 1, 0), {3, 0.0, 0.5}, 1.0), ValidationError);
    CHECK_THROWS_AS(build_formation(PotentialField{}, GeodesicState(0, 0, 1, 0), {3, 0.1, -1.0}, 1.0), ValidationError);
    CHECK_THROWS_AS(build_formation(PotentialField{}, GeodesicState(0, 0, 0, 0), {3, 0.1, 0.5}, 1.0),
                    DegenerateVelocity);
}
