#include <doctest.h>

#include <cmath>
#include <vector>

#include "geoswarm/analysis.hpp"
#include "geoswarm/error.hpp"

using namespace geoswarm;

namespace {

double mean_pct(const SwarmTrajectory& traj, EstimatorMode mode) { return analyze(traj, mode).stats.mean_pct; }

// Jacobi equation D^2 J / dtau^2 + R(J, u) u = 0 in chart components, with
// P = DJ/dtau:  J' = P - G(u, J),  P' = -R^r_{s m n} u^s J^m u^n - G(u, P).
struct JacobiState {
    Vec2 j;
    Vec2 p;
};

JacobiState jacobi_rhs(const PotentialField& f, const GeodesicState& along, const JacobiState& s) {
    const Vec2 u = velocity(along);
    const MetricData m = metric_at(f, position(along));
    const CurvatureTensor c = riemann_from_metric(m);
    auto gamma = [&](const Vec2& a, const Vec2& b) {
        return Vec2(a.dot(m.gamma[0] * b), a.dot(m.gamma[1] * b));
    };
    Vec2 r = Vec2::Zero();
    for (int rho = 0; rho < 2; ++rho) {
        for (int sigma = 0; sigma < 2; ++sigma) r(rho) += u(sigma) * s.j.dot(c.riemann[rho][sigma] * u);
    }
    return {s.p - gamma(u, s.j), -r - gamma(u, s.p)};
}

// Integrates J along rung `path` from arc length tau0 over `span`.
Vec2 propagate_jacobi(const PotentialField& f, const GeodesicPath& path, double tau0, double span, Vec2 j0, Vec2 p0) {
    const int n = 50;
    const double h = span / n;
    JacobiState s{j0, p0};
    auto add = [](const JacobiState& a, const JacobiState& b, double k) { return JacobiState{a.j + k * b.j, a.p + k * b.p}; };
    for (int k = 0; k < n; ++k) {
        const double t = tau0 + k * h;
        const GeodesicState g0 = state_at(f, path, t);
        const GeodesicState gm = state_at(f, path, t + 0.5 * h);
        const GeodesicState g1 = state_at(f, path, t + h);
        const JacobiState k1 = jacobi_rhs(f, g0, s);
        const JacobiState k2 = jacobi_rhs(f, gm, add(s, k1, 0.5 * h));
        const JacobiState k3 = jacobi_rhs(f, gm, add(s, k2, 0.5 * h));
        const JacobiState k4 = jacobi_rhs(f, g1, add(s, k3, h));
        s.j += h / 6.0 * (k1.j + 2 * k2.j + 2 * k3.j + k4.j);
        s.p += h / 6.0 * (k1.p + 2 * k2.p + 2 * k3.p + k4.p);
    }
    return s.j;
}

}  // namespace

TEST_CASE("flat formation has no deviation acceleration") {
    const SwarmTrajectory t = build_formation(PotentialField{}, GeodesicState(0, 0, 1, 0.5), {20, 0.1, 0.1}, 3.0);
    for (auto mode : {EstimatorMode::oracle, EstimatorMode::blind}) {
        for (const DeviationSample& s : deviation_fields(t, mode)) {
            CHECK(s.v.norm() <= 1e-9);
            CHECK(s.w.norm() <= 1e-9);
            const CurvatureEstimate e = estimate_kappa(s, t.field);
            CHECK(std::abs(e.kappa_hat) <= 1e-9);
            CHECK(e.flag == EstimateFlag::undefined);
        }
    }
}

TEST_CASE("elliptic paraboloid deviation obeys w = -kappa s") {
    const PotentialField f{PotentialKind::elliptic_paraboloid, 20.0};
    const SwarmTrajectory t = build_formation(f, GeodesicState(0, 0, 1, 0), {30, 0.1, 0.1}, 3.0);
    for (const DeviationSample& s : deviation_fields(t, EstimatorMode::oracle)) {
        const double kappa = gaussian_curvature_oracle(f, s.point);
        CHECK((s.w + kappa * s.s).norm() <= 0.1 * kappa * s.s.norm());
    }
}

TEST_CASE("sample layout") {
    const PotentialField f{PotentialKind::sincos, 4.0};
    const SwarmTrajectory t = build_formation(f, GeodesicState(0, 0, 1, 0), {6, 0.1, 0.5}, 2.0);
    const auto samples = deviation_fields(t, EstimatorMode::oracle);
    CHECK(samples.size() == (t.rung_count() - 1) * 5);
    CHECK(samples.front().rung_index == 0);
    CHECK(samples.front().agent_index == 1);
    CHECK(samples.back().agent_index == 5);
    CHECK(samples.front().point.isApprox(0.5 * (t.positions[0][1] + t.positions[1][1])));
    CHECK(samples.front().conjugate_threshold == doctest::Approx(0.01));
    CHECK_THROWS_AS(deviation_fields(build_formation(f, GeodesicState(0, 0, 1, 0), {2, 0.1, 0.5}, 1.0),
                                     EstimatorMode::oracle),
                    TooFewAgents);
}

TEST_CASE("kappa estimate from a sample") {
    DeviationSample s;
    s.s = Vec2(0.3, -0.2);
    s.scaled_norm = 0.1;
    s.conjugate_threshold = 0.01;
    s.w = Vec2::Zero();
    CHECK(estimate_kappa(s, PotentialField{}).kappa_hat == 0.0);
    s.w = -0.01 * s.s;
    const CurvatureEstimate e = estimate_kappa(s, PotentialField{});
    CHECK(e.kappa_hat == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(e.kappa_true == 0.0);
    CHECK(e.flag == EstimateFlag::undefined);
    CHECK(std::isnan(e.pct_error));

    const PotentialField f{PotentialKind::elliptic_paraboloid, 20.0};
    s.point = Vec2::Zero();
    s.w = -0.0105 * s.s;
    const CurvatureEstimate k = estimate_kappa(s, f);
    CHECK(k.kappa_true == doctest::Approx(0.01));
    CHECK(k.pct_error == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(k.flag == EstimateFlag::ok);

    s.scaled_norm = 0.005;
    CHECK_THROWS_AS(estimate_kappa(s, f), ConjugatePointFlag);
    s.scaled_norm = 0.1;
    s.past_conjugate = true;
    CHECK_THROWS_AS(estimate_kappa(s, f), ConjugatePointFlag);
}

TEST_CASE("error statistics") {
    auto est = [](double pct, EstimateFlag flag = EstimateFlag::ok) {
        CurvatureEstimate e;
        e.pct_error = pct;
        e.flag = flag;
        return e;
    };
    const std::vector<CurvatureEstimate> one{est(5)};
    const ErrorStats a = error_stats(one);
    CHECK(a.mean_pct == 5);
    CHECK(a.min_pct == 5);
    CHECK(a.max_pct == 5);
    CHECK(a.samples == 1);

    const std::vector<CurvatureEstimate> three{est(2), est(4), est(6), est(std::nan(""), EstimateFlag::conjugate)};
    const ErrorStats b = error_stats(three);
    CHECK(b.mean_pct == 4);
    CHECK(b.min_pct == 2);
    CHECK(b.max_pct == 6);
    CHECK(b.samples == 3);
    CHECK(b.excluded == 1);
    CHECK(b.half_range() == 2);

    const std::vector<CurvatureEstimate> none{est(1, EstimateFlag::undefined)};
    CHECK(std::isnan(error_stats(none).mean_pct));
    CHECK_THROWS_AS(error_stats(std::vector<CurvatureEstimate>{}), EmptyInput);
}

TEST_CASE("oracle estimator converges as the spacing shrinks") {
    const PotentialField fields[] = {{PotentialKind::elliptic_paraboloid, 20.0},
                                     {PotentialKind::hyperbolic_paraboloid, 20.0}};
    for (const auto& f : fields) {
        double previous = INFINITY;
        for (double d : {0.2, 0.1, 0.05}) {
            const double err = mean_pct(build_formation(f, GeodesicState(0, 0, 1, 0), {100, d, 0.1}, 10.0),
                                        EstimatorMode::oracle);
            INFO(to_string(f.kind) << " d=" << d << " mean_pct=" << err);
            CHECK(err < previous);
            previous = err;
        }
    }
}

TEST_CASE("deviation follows the Jacobi equation") {
    const PotentialField fields[] = {{PotentialKind::elliptic_paraboloid, 20.0},
                                     {PotentialKind::hyperbolic_paraboloid, 4.0},
                                     {PotentialKind::sincos, 2.0}};
    for (const auto& f : fields) {
        for (double d : {0.1, 0.05}) {
            const SwarmTrajectory t = build_formation(f, GeodesicState(0.2, -0.1, 1, 0.2), {40, d, 0.1}, 1.0);
            const auto samples = deviation_fields(t, EstimatorMode::oracle);
            double worst = 0.0;
            for (const DeviationSample& s : samples) {
                if (s.rung_index != 4 || s.agent_index + 2 > t.topology.n_followers) continue;
                const std::size_t j = s.rung_index;
                const std::size_t i = s.agent_index;
                const double tau = static_cast<double>(i) * d;
                const Vec2 predicted = propagate_jacobi(f, t.rungs[j], tau, d, s.s, s.v);
                const Vec2 observed = deviation_vectors(t, j)[i + 1];
                worst = std::max(worst, (predicted - observed).norm() / s.s.norm());
            }
            INFO(to_string(f.kind) << " d=" << d << " worst relative gap " << worst);
            CHECK(worst <= d * d);
        }
    }
}

TEST_CASE("blind and oracle estimates agree where the potential is shallow") {
    const PotentialField fields[] = {{PotentialKind::elliptic_paraboloid, 20.0},
                                     {PotentialKind::hyperbolic_paraboloid, 20.0},
                                     {PotentialKind::sincos, 20.0}};
    for (const auto& f : fields) {
        const SwarmTrajectory t = build_formation(f, GeodesicState(0, -0.75, 1, 0), {30, 0.05, 0.1}, 2.0);
        const AnalysisResult oracle = analyze(t, EstimatorMode::oracle);
        const AnalysisResult blind = analyze(t, EstimatorMode::blind);
        std::size_t compared = 0;
        for (std::size_t k = 0; k < oracle.estimates.size(); ++k) {
            const CurvatureEstimate& o = oracle.estimates[k];
            const CurvatureEstimate& b = blind.estimates[k];
            if (o.flag != EstimateFlag::ok || b.flag != EstimateFlag::ok) continue;
            if (eval(f, o.point).grad.norm() >= 0.2) continue;
            ++compared;
            const double ratio = b.kappa_hat / o.kappa_hat;
            CHECK(ratio >= 0.5);
            CHECK(ratio <= 2.0);
        }
        CHECK(compared > 100);
    }
}

TEST_CASE("striction line on the hyperbolic paraboloid") {
    const PotentialField f{PotentialKind::hyperbolic_paraboloid, 20.0};
    const double c = std::sqrt(0.5);
    const SwarmTrajectory t = build_formation(f, GeodesicState(-5, -5, c, c), {100, 0.1, 0.1}, 10.0);
    const AnalysisResult blind = analyze(t, EstimatorMode::blind);
    CHECK(gaussian_curvature_oracle(f, Vec2::Zero()) == doctest::Approx(-0.01));
    double worst = 0.0;
    for (const auto& e : blind.estimates) {
        CHECK(std::abs(e.kappa_hat) < 0.1 * std::abs(e.kappa_true));
        worst = std::max(worst, std::abs(e.kappa_hat));
    }
    CHECK(worst < 1e-3);
    // The covariant estimator still sees the curvature there.
    CHECK(analyze(t, EstimatorMode::oracle).stats.mean_pct < 1.0);
}

TEST_CASE("collapsing separations are flagged and excluded") {
    const PotentialField f{PotentialKind::elliptic_paraboloid, 20.0};
    const SwarmTrajectory t = build_formation(f, GeodesicState(0, 0, 1, 0), {100, 0.2, 0.1}, 10.0);
    const AnalysisResult r = analyze(t, EstimatorMode::oracle);
    REQUIRE(r.conjugate_pairs() > 0);
    std::size_t flagged = 0;
    for (const auto& e : r.estimates) {
        if (e.flag != EstimateFlag::conjugate) continue;
        ++flagged;
        CHECK(std::isnan(e.pct_error));
        const auto& tau = r.conjugate_tau[e.rung_index];
        REQUIRE(tau.has_value());
        CHECK(static_cast<double>(e.agent_index + 1) * 0.2 >= *tau - 1e-9);
    }
    CHECK(flagged == r.stats.excluded);
    CHECK(r.stats.samples + r.stats.excluded == r.estimates.size());
}
