#include "geoswarm/manifold.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "geoswarm/error.hpp"

namespace geoswarm {

std::string_view to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::flat: return "flat";
        case PotentialKind::elliptic_paraboloid: return "elliptic_paraboloid";
        case PotentialKind::hyperbolic_paraboloid: return "hyperbolic_paraboloid";
        case PotentialKind::sincos: return "sincos";
    }
    return "unknown";
}

PotentialKind potential_kind_from_string(std::string_view name) {
    for (auto kind : {PotentialKind::flat, PotentialKind::elliptic_paraboloid,
                      PotentialKind::hyperbolic_paraboloid, PotentialKind::sincos}) {
        if (to_string(kind) == name) return kind;
    }
    throw ValidationError("unknown potential kind '" + std::string(name) +
                          "' (expected flat, elliptic_paraboloid, hyperbolic_paraboloid or sincos)");
}

PotentialField::PotentialField(PotentialKind k, double shape) : kind(k), a(shape) {
    if (!(std::isfinite(shape) && shape > 0.0)) {
        throw ValidationError("potential.a must be finite and > 0, got " + std::to_string(shape));
    }
}

PotentialEval eval(const PotentialField& field, const Vec2& p) {
    PotentialEval out;
    const double a = field.a;
    const double x = p.x();
    const double y = p.y();
    switch (field.kind) {
        case PotentialKind::flat:
            break;
        case PotentialKind::elliptic_paraboloid:
            out.value = (x * x + y * y) / a;
            out.grad = Vec2(2.0 * x / a, 2.0 * y / a);
            out.hess = Mat2::Identity() * (2.0 / a);
            break;
        case PotentialKind::hyperbolic_paraboloid:
            out.value = (x * x - y * y) / a;
            out.grad = Vec2(2.0 * x / a, -2.0 * y / a);
            out.hess << 2.0 / a, 0.0, 0.0, -2.0 / a;
            break;
        case PotentialKind::sincos: {
            const double s1 = std::sin(x / a);
            const double c1 = std::cos(x / a);
            const double s2 = std::sin(y / a);
            const double c2 = std::cos(y / a);
            out.value = s1 + c2;
            out.grad = Vec2(c1 / a, -s2 / a);
            out.hess << -s1 / (a * a), 0.0, 0.0, -c2 / (a * a);
            const double a3 = a * a * a;
            out.third[0](0, 0) = -c1 / a3;
            out.third[1](1, 1) = s2 / a3;
            break;
        }
    }
    return out;
}

namespace {

/// dg[c](a, b) = d_c g_ab = F_ac F_b + F_a F_bc
Tensor3 metric_partials(const PotentialEval& f) {
    Tensor3 dg;
    for (int c = 0; c < 2; ++c) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                dg[c](a, b) = f.hess(a, c) * f.grad(b) + f.grad(a) * f.hess(b, c);
            }
        }
    }
    return dg;
}

/// d_l d_c g_ab
double metric_second_partial(const PotentialEval& f, int l, int c, int a, int b) {
    return f.third[l](a, c) * f.grad(b) + f.hess(a, c) * f.hess(b, l) + f.hess(a, l) * f.hess(b, c) +
           f.grad(a) * f.third[l](b, c);
}

Mat2 induced_metric(const PotentialEval& f) { return Mat2::Identity() + f.grad * f.grad.transpose(); }

/// First-kind symbols T[d](b, c) = d_c g_db + d_b g_dc - d_d g_bc.
Tensor3 first_kind(const Tensor3& dg) {
    Tensor3 t;
    for (int d = 0; d < 2; ++d)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) t[d](b, c) = dg[c](d, b) + dg[b](d, c) - dg[d](b, c);
    return t;
}

Tensor3 raise(const Mat2& g_inv, const Tensor3& t) {
    Tensor3 gamma{Mat2::Zero(), Mat2::Zero()};
    for (int a = 0; a < 2; ++a)
        for (int d = 0; d < 2; ++d) gamma[a] += 0.5 * g_inv(a, d) * t[d];
    return gamma;
}

Tensor3 christoffel_from(const PotentialEval& f, const Mat2& g_inv) {
    return raise(g_inv, first_kind(metric_partials(f)));
}

Tensor4 analytic_partials(const PotentialEval& f, const Mat2& g_inv, const Tensor3& dg) {
    const Tensor3 t = first_kind(dg);
    Tensor4 out{};
    for (int l = 0; l < 2; ++l) {
        const Mat2 dginv = -g_inv * dg[l] * g_inv;
        Tensor3 dt;
        for (int d = 0; d < 2; ++d)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                    dt[d](b, c) = metric_second_partial(f, l, c, d, b) + metric_second_partial(f, l, b, d, c) -
                                  metric_second_partial(f, l, d, b, c);
        for (int a = 0; a < 2; ++a) {
            out[l][a] = Mat2::Zero();
            for (int d = 0; d < 2; ++d) out[l][a] += 0.5 * (dginv(a, d) * t[d] + g_inv(a, d) * dt[d]);
        }
    }
    return out;
}

}  // namespace

Mat2 metric_tensor(const PotentialField& field, const Vec2& p) { return induced_metric(eval(field, p)); }

Tensor3 christoffel_at(const PotentialField& field, const Vec2& p) {
    const PotentialEval f = eval(field, p);
    return christoffel_from(f, induced_metric(f).inverse());
}

MetricData metric_at(const PotentialField& field, const Vec2& p, PartialsMode mode) {
    const PotentialEval f = eval(field, p);
    MetricData m;
    m.g = induced_metric(f);
    m.g_inv = m.g.inverse();
    const Tensor3 dg = metric_partials(f);
    m.gamma = raise(m.g_inv, first_kind(dg));

    if (mode == PartialsMode::analytic) {
        m.gamma_partials = analytic_partials(f, m.g_inv, dg);
        return m;
    }
    m.partials_by_fd = true;
    const double h = kChristoffelFdStep;
    for (int l = 0; l < 2; ++l) {
        Vec2 step = Vec2::Zero();
        step(l) = h;
        const Tensor3 plus = christoffel_at(field, p + step);
        const Tensor3 minus = christoffel_at(field, p - step);
        for (int k = 0; k < 2; ++k) m.gamma_partials[l][k] = (plus[k] - minus[k]) / (2.0 * h);
    }
    return m;
}

CurvatureTensor riemann_from_metric(const MetricData& m) {
    const auto& G = m.gamma;
    const auto& dG = m.gamma_partials;
    CurvatureTensor out;
    for (int rho = 0; rho < 2; ++rho) {
        for (int sigma = 0; sigma < 2; ++sigma) {
            Mat2& r = out.riemann[rho][sigma];
            for (int mu = 0; mu < 2; ++mu) {
                for (int nu = 0; nu < 2; ++nu) {
                    double v = dG[mu][rho](nu, sigma) - dG[nu][rho](mu, sigma);
                    for (int lam = 0; lam < 2; ++lam) {
                        v += G[rho](mu, lam) * G[lam](nu, sigma) - G[rho](nu, lam) * G[lam](mu, sigma);
                    }
                    r(mu, nu) = v;
                }
            }
        }
    }
    out.sectional = sectional_curvature(out, m.g, Vec2::UnitX(), Vec2::UnitY());
    return out;
}

CurvatureTensor riemann_at(const PotentialField& field, const Vec2& p) {
    return riemann_from_metric(metric_at(field, p));
}

double sectional_curvature(const CurvatureTensor& c, const Mat2& g, const Vec2& x, const Vec2& y) {
    // g_{alpha rho} X^alpha R^rho_{sigma mu nu} Y^sigma X^mu Y^nu: the component
    // formula above carries the opposite operator sign to <R(X,Y)X,Y>.
    Vec2 rxy = Vec2::Zero();
    for (int rho = 0; rho < 2; ++rho)
        for (int sigma = 0; sigma < 2; ++sigma) rxy(rho) += y(sigma) * x.dot(c.riemann[rho][sigma] * y);
    const double numerator = inner(g, x, rxy);
    const double area = inner(g, x, x) * inner(g, y, y) - std::pow(inner(g, x, y), 2);
    if (!(area > 0.0)) throw DegenerateVelocity("sectional curvature needs two independent vectors");
    return numerator / area;
}

double gaussian_curvature_oracle(const PotentialField& field, const Vec2& p) {
    const PotentialEval f = eval(field, p);
    const double w = 1.0 + f.grad.squaredNorm();
    return (f.hess(0, 0) * f.hess(1, 1) - f.hess(0, 1) * f.hess(0, 1)) / (w * w);
}

}  // namespace geoswarm
