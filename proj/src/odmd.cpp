#include "geoswarm/odmd.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "geoswarm/error.hpp"

namespace geoswarm {

namespace {

void require_dims(const Eigen::VectorXd& v, Eigen::Index n, const char* what) {
    if (v.size() != n) {
        throw DimensionMismatch(std::string(what) + " has length " + std::to_string(v.size()) + ", expected " +
                                std::to_string(n));
    }
}

}  // namespace

OdmdModel init_batch(std::span<const SnapshotPair> pairs) {
    if (pairs.empty()) throw RankDeficient("no snapshot pairs");
    const Eigen::Index n = pairs.front().x.size();
    const auto m = static_cast<Eigen::Index>(pairs.size());
    if (m < n) {
        throw RankDeficient(std::to_string(m) + " pairs cannot determine a " + std::to_string(n) + "-dimensional operator");
    }
    Eigen::MatrixXd X(n, m);
    Eigen::MatrixXd Y(n, m);
    for (Eigen::Index c = 0; c < m; ++c) {
        const auto& pair = pairs[static_cast<std::size_t>(c)];
        require_dims(pair.x, n, "snapshot x");
        require_dims(pair.y, n, "snapshot y");
        if (!pair.x.allFinite() || !pair.y.allFinite()) throw NumericalBreakdown("non-finite snapshot");
        X.col(c) = pair.x;
        Y.col(c) = pair.y;
    }

    const Eigen::MatrixXd gram = X * X.transpose();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spectrum(gram, Eigen::EigenvaluesOnly);
    const double lo = spectrum.eigenvalues().minCoeff();
    const double hi = spectrum.eigenvalues().maxCoeff();
    if (!(hi > 0.0) || !(lo > 0.0) || hi / lo > kMaxInitCondition) {
        throw RankDeficient("X X^T is numerically singular (eigenvalues " + std::to_string(lo) + " .. " +
                            std::to_string(hi) + "); the observable lacks excitation");
    }

    OdmdModel model;
    model.P = gram.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
    model.P = 0.5 * (model.P + model.P.transpose()).eval();
    model.A = Y * X.transpose() * model.P;
    return model;
}

Eigen::VectorXd predict(const OdmdModel& model, const Eigen::VectorXd& x) {
    require_dims(x, model.A.cols(), "prediction source");
    return model.A * x;
}

void update_in_place(OdmdModel& model, const SnapshotPair& pair) {
    const Eigen::Index n = model.dim();
    require_dims(pair.x, n, "snapshot x");
    require_dims(pair.y, n, "snapshot y");
    const Eigen::VectorXd px = model.P * pair.x;
    const double denom = 1.0 + pair.x.dot(px);
    if (!(denom > 1e-12) || !std::isfinite(denom)) {
        throw NumericalBreakdown("Sherman-Morrison denominator " + std::to_string(denom));
    }
    const Eigen::VectorXd residual = pair.y - model.A * pair.x;
    model.A.noalias() += residual * px.transpose() / denom;
    model.P.noalias() -= px * px.transpose() / denom;
    model.P = 0.5 * (model.P + model.P.transpose()).eval();
    ++model.k;
}

OdmdModel update(OdmdModel model, const SnapshotPair& pair) {
    update_in_place(model, pair);
    return model;
}

Eigen::VectorXcd eigenvalues(const OdmdModel& model) { return Eigen::EigenSolver<Eigen::MatrixXd>(model.A).eigenvalues(); }

}  // namespace geoswarm
