#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Core>

namespace geoswarm {

/// Consecutive observable snapshots: y follows x by one step.
struct SnapshotPair {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
};

/// Streaming least-squares operator A (y ~ A x) with P = (X X^T)^{-1}.
struct OdmdModel {
    Eigen::MatrixXd A;
    Eigen::MatrixXd P;
    /// Rank-one updates applied since initialization.
    std::size_t k = 0;

    Eigen::Index dim() const { return A.rows(); }
};

/// Largest admissible condition number of X X^T at initialization.
inline constexpr double kMaxInitCondition = 1e12;

/// A = Y X^T (X X^T)^{-1}, P = (X X^T)^{-1}. Throws RankDeficient when there
/// are fewer pairs than dimensions or X X^T is numerically singular, and
/// DimensionMismatch on ragged input.
OdmdModel init_batch(std::span<const SnapshotPair> pairs);

/// A x. Throws DimensionMismatch.
Eigen::VectorXd predict(const OdmdModel& model, const Eigen::VectorXd& x);

/// Sherman-Morrison step:
///   A' = A + (y - A x) x^T P / (1 + x^T P x)
///   P' = P - P x x^T P / (1 + x^T P x)
/// Throws NumericalBreakdown when 1 + x^T P x <= 1e-12.
void update_in_place(OdmdModel& model, const SnapshotPair& pair);
OdmdModel update(OdmdModel model, const SnapshotPair& pair);

/// Eigenvalues of A, for diagnostics only.
Eigen::VectorXcd eigenvalues(const OdmdModel& model);

}  // namespace geoswarm
