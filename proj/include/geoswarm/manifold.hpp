#pragma once

#include <array>
#include <string_view>

#include <Eigen/Core>

namespace geoswarm {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Rank-3 array indexed [a](b, c): a leading index over a 2x2 matrix.
using Tensor3 = std::array<Mat2, 2>;
/// Rank-4 array indexed [a][b](c, d).
using Tensor4 = std::array<std::array<Mat2, 2>, 2>;

enum class PotentialKind { flat, elliptic_paraboloid, hyperbolic_paraboloid, sincos };

std::string_view to_string(PotentialKind kind);
/// Throws ValidationError for unknown names.
PotentialKind potential_kind_from_string(std::string_view name);

/// External potential F(x1, x2) whose graph is the sensed manifold.
///   elliptic_paraboloid:   (x1^2 + x2^2) / a
///   hyperbolic_paraboloid: (x1^2 - x2^2) / a
///   sincos:                sin(x1 / a) + cos(x2 / a)
struct PotentialField {
    PotentialKind kind = PotentialKind::flat;
    double a = 1.0;

    PotentialField() = default;
    /// Throws ValidationError unless a > 0 and finite.
    PotentialField(PotentialKind kind, double a);
};

struct PotentialEval {
    double value = 0.0;
    Vec2 grad = Vec2::Zero();
    Mat2 hess = Mat2::Zero();
    /// third[l](i, j) = d^3 F / dx_l dx_i dx_j
    Tensor3 third{Mat2::Zero(), Mat2::Zero()};
};

/// Closed-form F and its first three derivatives.
PotentialEval eval(const PotentialField& field, const Vec2& p);

struct MetricData {
    Mat2 g = Mat2::Identity();
    Mat2 g_inv = Mat2::Identity();
    /// gamma[k](i, j) = Christoffel symbol of the second kind, upper index k.
    Tensor3 gamma{Mat2::Zero(), Mat2::Zero()};
    /// gamma_partials[l][k](i, j) = d_l gamma[k](i, j).
    Tensor4 gamma_partials{};
    /// True when gamma_partials came from central differences of gamma.
    bool partials_by_fd = false;
};

/// Step used for central differences of the Christoffel symbols where no
/// analytic third-derivative path is used.
inline constexpr double kChristoffelFdStep = 1e-5;

/// Induced metric alone, g = I + grad F grad F^T.
Mat2 metric_tensor(const PotentialField& field, const Vec2& p);

/// Christoffel symbols only (no partials); the cheap path for integration.
Tensor3 christoffel_at(const PotentialField& field, const Vec2& p);

enum class PartialsMode {
    analytic,           ///< from the closed-form third derivatives of F
    finite_difference,  ///< central differences of gamma with kChristoffelFdStep
};

/// Induced metric g_ij = delta_ij + F_i F_j with its inverse, Christoffel
/// symbols from the metric partials, and their first partials.
MetricData metric_at(const PotentialField& field, const Vec2& p, PartialsMode mode = PartialsMode::analytic);

struct CurvatureTensor {
    /// riemann[rho][sigma](mu, nu) = R^rho_{sigma mu nu}
    Tensor4 riemann{};
    /// Sectional curvature of the coordinate plane span{e1, e2}.
    double sectional = 0.0;
};

/// R^rho_{sigma mu nu} = d_mu G^rho_{nu sigma} - d_nu G^rho_{mu sigma}
///                     + G^rho_{mu lam} G^lam_{nu sigma} - G^rho_{nu lam} G^lam_{mu sigma}
CurvatureTensor riemann_from_metric(const MetricData& metric);
CurvatureTensor riemann_at(const PotentialField& field, const Vec2& p);

/// <R(X, Y)X, Y> / (|X|^2 |Y|^2 - <X, Y>^2) for independent X, Y.
double sectional_curvature(const CurvatureTensor& curvature, const Mat2& g, const Vec2& x, const Vec2& y);

/// Gaussian curvature (F11 F22 - F12^2) / (1 + |grad F|^2)^2 straight from
/// the derivatives of F. Independent of the Christoffel machinery.
double gaussian_curvature_oracle(const PotentialField& field, const Vec2& p);

inline double inner(const Mat2& g, const Vec2& u, const Vec2& v) { return u.dot(g * v); }

}  // namespace geoswarm
