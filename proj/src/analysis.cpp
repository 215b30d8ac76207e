#include "geoswarm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "geoswarm/error.hpp"
#include "geoswarm/geodesic.hpp"
#include "geoswarm/parallel.hpp"

namespace geoswarm {

std::string_view to_string(EstimatorMode mode) { return mode == EstimatorMode::oracle ? "oracle" : "blind"; }

EstimatorMode estimator_mode_from_string(std::string_view name) {
    if (name == "oracle") return EstimatorMode::oracle;
    if (name == "blind") return EstimatorMode::blind;
    throw ValidationError("analysis.mode must be 'oracle' or 'blind', got '" + std::string(name) + "'");
}

std::string_view to_string(EstimateFlag flag) {
    switch (flag) {
        case EstimateFlag::ok: return "ok";
        case EstimateFlag::conjugate: return "conjugate";
        case EstimateFlag::undefined: return "undefined";
    }
    return "unknown";
}

namespace {

/// Gamma^rho_{mu nu} a^mu b^nu
Vec2 contract(const Tensor3& gamma, const Vec2& a, const Vec2& b) {
    return Vec2(a.dot(gamma[0] * b), a.dot(gamma[1] * b));
}

/// Covariant separation velocity and acceleration along the rung:
///   V = S' + G(u, S)
///   W = S'' + 2 G(u, S') + (dG . u)(u, S) + G(u_dot, S) + G(u, G(u, S))
/// with u the rung tangent and u_dot = -G(u, u).
std::pair<Vec2, Vec2> covariant_derivatives(const MetricData& m, const Vec2& u, const Vec2& s, const Vec2& ds,
                                            const Vec2& dds) {
    const Vec2 v = ds + contract(m.gamma, u, s);
    const Vec2 accel = -contract(m.gamma, u, u);
    Tensor3 directional{Mat2::Zero(), Mat2::Zero()};
    for (int rho = 0; rho < 2; ++rho)
        for (int lam = 0; lam < 2; ++lam) directional[rho] += u(lam) * m.gamma_partials[lam][rho];
    const Vec2 w = dds + 2.0 * contract(m.gamma, u, ds) + contract(directional, u, s) + contract(m.gamma, accel, s) +
                   contract(m.gamma, u, contract(m.gamma, u, s));
    return {v, w};
}

}  // namespace

std::vector<DeviationSample> deviation_fields(const SwarmTrajectory& traj, EstimatorMode mode) {
    const std::size_t n = traj.topology.n_followers;
    if (n < 3) throw TooFewAgents("curvature analysis needs at least 3 followers, got " + std::to_string(n));
    const double d = traj.topology.d;
    const PotentialField& field = traj.field;
    const std::size_t pairs = traj.rung_count() > 0 ? traj.rung_count() - 1 : 0;
    const std::size_t interior = n - 1;

    std::vector<DeviationSample> out(pairs * interior);
    parallel_for(pairs, [&](std::size_t j) {
        const std::vector<Vec2> dev = deviation_vectors(traj, j);
        const auto& q0 = traj.positions[j];
        const auto& q1 = traj.positions[j + 1];
        const auto& t0 = traj.tangents[j];
        const auto& t1 = traj.tangents[j + 1];

        std::vector<Vec2> mid(n + 1);
        std::vector<double> norm(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            mid[i] = 0.5 * (q0[i] + q1[i]);
            norm[i] = std::sqrt(inner(metric_tensor(field, mid[i]), dev[i], dev[i]));
        }
        const double reference = norm[0];
        std::vector<std::pair<double, double>> profile(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            profile[i] = {static_cast<double>(i) * d, reference > 0.0 ? d * norm[i] / reference : 0.0};
        }
        const std::optional<double> collapse = detect_conjugate(profile, d);

        for (std::size_t i = 1; i < n; ++i) {
            DeviationSample& sample = out[j * interior + (i - 1)];
            sample.rung_index = j;
            sample.agent_index = i;
            sample.mode = mode;
            sample.point = mid[i];
            sample.tangent = 0.5 * (t0[i] + t1[i]);
            sample.s = dev[i];
            sample.scaled_norm = profile[i].second;
            sample.conjugate_threshold = kConjugateFraction * d;
            sample.past_conjugate = collapse && profile[i + 1].first >= *collapse;

            const Vec2 ds = (dev[i + 1] - dev[i - 1]) / (2.0 * d);
            const Vec2 dds = (dev[i + 1] - 2.0 * dev[i] + dev[i - 1]) / (d * d);
            if (mode == EstimatorMode::blind) {
                sample.v = ds;
                sample.w = dds;
            } else {
                std::tie(sample.v, sample.w) =
                    covariant_derivatives(metric_at(field, sample.point), sample.tangent, sample.s, ds, dds);
            }
        }
    });
    return out;
}

CurvatureEstimate estimate_kappa(const DeviationSample& sample, const PotentialField& field) {
    if (sample.past_conjugate || !(sample.scaled_norm > sample.conjugate_threshold)) {
        throw ConjugatePointFlag("separation collapsed near rung " + std::to_string(sample.rung_index) + ", agent " +
                                 std::to_string(sample.agent_index));
    }
    const Mat2 g = metric_tensor(field, sample.point);
    CurvatureEstimate est;
    est.rung_index = sample.rung_index;
    est.agent_index = sample.agent_index;
    est.point = sample.point;
    est.kappa_hat = -inner(g, sample.w, sample.s) / inner(g, sample.s, sample.s);
    est.kappa_true = gaussian_curvature_oracle(field, sample.point);
    if (est.kappa_true == 0.0) {
        est.flag = EstimateFlag::undefined;
        est.pct_error = std::numeric_limits<double>::quiet_NaN();
    } else {
        est.pct_error = 100.0 * std::abs(est.kappa_hat - est.kappa_true) / std::abs(est.kappa_true);
    }
    return est;
}

ErrorStats error_stats(std::span<const CurvatureEstimate> estimates) {
    if (estimates.empty()) throw EmptyInput("error_stats over no estimates");
    ErrorStats stats;
    double sum = 0.0;
    stats.min_pct = std::numeric_limits<double>::infinity();
    stats.max_pct = -std::numeric_limits<double>::infinity();
    for (const auto& e : estimates) {
        if (e.flag != EstimateFlag::ok) {
            ++stats.excluded;
            continue;
        }
        sum += e.pct_error;
        stats.min_pct = std::min(stats.min_pct, e.pct_error);
        stats.max_pct = std::max(stats.max_pct, e.pct_error);
        ++stats.samples;
    }
    if (stats.samples == 0) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        stats.mean_pct = stats.min_pct = stats.max_pct = nan;
    } else {
        stats.mean_pct = sum / static_cast<double>(stats.samples);
    }
    return stats;
}

std::size_t AnalysisResult::conjugate_pairs() const {
    return static_cast<std::size_t>(std::count_if(conjugate_tau.begin(), conjugate_tau.end(),
                                                  [](const auto& tau) { return tau.has_value(); }));
}

AnalysisResult analyze(const SwarmTrajectory& traj, EstimatorMode mode) {
    const std::vector<DeviationSample> samples = deviation_fields(traj, mode);
    AnalysisResult result;
    result.mode = mode;
    const std::size_t pairs = traj.rung_count() - 1;
    result.conjugate_tau.assign(pairs, std::nullopt);
    result.estimates.reserve(samples.size());
    const double d = traj.topology.d;
    for (const auto& sample : samples) {
        CurvatureEstimate est;
        try {
            est = estimate_kappa(sample, traj.field);
        } catch (const ConjugatePointFlag&) {
            est.rung_index = sample.rung_index;
            est.agent_index = sample.agent_index;
            est.point = sample.point;
            est.kappa_hat = std::numeric_limits<double>::quiet_NaN();
            est.kappa_true = gaussian_curvature_oracle(traj.field, sample.point);
            est.pct_error = std::numeric_limits<double>::quiet_NaN();
            est.flag = EstimateFlag::conjugate;
            auto& tau = result.conjugate_tau[sample.rung_index];
            const double here = static_cast<double>(sample.agent_index) * d;
            if (!tau || here < *tau) tau = here;
        }
        est.rung_t = traj.emission_times[sample.rung_index];
        result.estimates.push_back(est);
    }
    result.stats = error_stats(result.estimates);
    return result;
}

}  // namespace geoswarm
