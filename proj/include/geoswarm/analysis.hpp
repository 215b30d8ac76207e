#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "geoswarm/formation.hpp"
#include "geoswarm/manifold.hpp"

namespace geoswarm {

/// oracle: covariant V and W with Christoffel corrections (knows the metric).
/// blind: plain chart differences, as seen by an observer with no metric.
enum class EstimatorMode { oracle, blind };

std::string_view to_string(EstimatorMode mode);
EstimatorMode estimator_mode_from_string(std::string_view name);

/// Deviation field sampled at interior agent i between rungs j and j + 1.
struct DeviationSample {
    std::size_t rung_index = 0;
    std::size_t agent_index = 0;
    /// Midpoint of agent i's positions on rungs j and j + 1.
    Vec2 point = Vec2::Zero();
    /// Mean rung tangent at the point.
    Vec2 tangent = Vec2::Zero();
    Vec2 s = Vec2::Zero();
    Vec2 v = Vec2::Zero();
    Vec2 w = Vec2::Zero();
    EstimatorMode mode = EstimatorMode::oracle;
    /// |S|_g rescaled so the separation at the head equals d.
    double scaled_norm = 0.0;
    /// kConjugateFraction * d
    double conjugate_threshold = 0.0;
    /// The stencil reaches the first separation collapse of this rung pair.
    bool past_conjugate = false;
};

enum class EstimateFlag { ok, conjugate, undefined };
std::string_view to_string(EstimateFlag flag);

struct CurvatureEstimate {
    std::size_t rung_index = 0;
    std::size_t agent_index = 0;
    double rung_t = 0.0;
    Vec2 point = Vec2::Zero();
    double kappa_hat = 0.0;
    double kappa_true = 0.0;
    /// 100 |kappa_hat - kappa_true| / |kappa_true|; NaN unless flag == ok.
    double pct_error = 0.0;
    EstimateFlag flag = EstimateFlag::ok;
};

/// Centered differences of the inter-rung deviation across the agent chain
/// (step d in arc length). Samples at the chain ends are dropped. Throws
/// TooFewAgents when n_followers < 3.
std::vector<DeviationSample> deviation_fields(const SwarmTrajectory& traj, EstimatorMode mode);

/// kappa_hat = -<w, s>_g / <s, s>_g. Throws ConjugatePointFlag when the
/// separation has collapsed at (or the stencil is past) a conjugate point.
CurvatureEstimate estimate_kappa(const DeviationSample& sample, const PotentialField& field);

struct ErrorStats {
    double mean_pct = 0.0;
    double min_pct = 0.0;
    double max_pct = 0.0;
    std::size_t samples = 0;
    /// Entries with flag != ok.
    std::size_t excluded = 0;

    double half_range() const { return 0.5 * (max_pct - min_pct); }
};

/// Mean and range of pct_error over the ok entries. Throws EmptyInput on an
/// empty sequence; with no ok entries the statistics are NaN.
ErrorStats error_stats(std::span<const CurvatureEstimate> estimates);

struct AnalysisResult {
    EstimatorMode mode = EstimatorMode::oracle;
    std::vector<CurvatureEstimate> estimates;
    ErrorStats stats;
    /// First collapse arc length per rung pair, when one occurs.
    std::vector<std::optional<double>> conjugate_tau;

    std::size_t conjugate_pairs() const;
};

/// deviation_fields + estimate_kappa over every sample, conjugate samples
/// kept but flagged.
AnalysisResult analyze(const SwarmTrajectory& traj, EstimatorMode mode);

}  // namespace geoswarm
