#include <doctest.h>

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "geoswarm/error.hpp"
#include "geoswarm/odmd.hpp"

using namespace geoswarm;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd vec(std::initializer_list<double> v) {
    VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double x : v) out(k++) = x;
    return out;
}

// Least squares min |A X - Y|_F through a QR solve of X^T A^T = Y^T.
MatrixXd least_squares_operator(const std::vector<SnapshotPair>& pairs) {
    const Eigen::Index n = pairs.front().x.size();
    MatrixXd X(n, static_cast<Eigen::Index>(pairs.size()));
    MatrixXd Y(n, static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        X.col(static_cast<Eigen::Index>(k)) = pairs[k].x;
        Y.col(static_cast<Eigen::Index>(k)) = pairs[k].y;
    }
    return X.transpose().colPivHouseholderQr().solve(Y.transpose()).transpose();
}

MatrixXd gram(const std::vector<SnapshotPair>& pairs) {
    const Eigen::Index n = pairs.front().x.size();
    MatrixXd G = MatrixXd::Zero(n, n);
    for (const auto& p : pairs) G += p.x * p.x.transpose();
    return G;
}

MatrixXd random_stable(std::mt19937_64& rng, Eigen::Index n, double radius) {
    std::normal_distribution<double> gauss;
    MatrixXd A(n, n);
    for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = gauss(rng);
    const double rho = A.eigenvalues().cwiseAbs().maxCoeff();
    return A * (radius / rho);
}

VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> gauss;
    VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
    return v;
}

}  // namespace

TEST_CASE("batch initialization") {
    SUBCASE("identity dynamics") {
        const std::vector<SnapshotPair> pairs{{vec({1, 0}), vec({1, 0})}, {vec({0, 1}), vec({0, 1})}};
        const OdmdModel m = init_batch(pairs);
        CHECK(m.A.isApprox(MatrixXd::Identity(2, 2)));
        CHECK(m.P.isApprox(MatrixXd::Identity(2, 2)));
        CHECK(m.k == 0);
        CHECK(predict(m, vec({3, -1})).isApprox(vec({3, -1})));
        CHECK(predict(m, vec({0, 0})).isZero(0.0));
    }
    SUBCASE("scalar least squares") {
        const std::vector<SnapshotPair> pairs{{vec({1}), vec({2})}, {vec({2}), vec({4})}, {vec({4}), vec({8})}};
        const OdmdModel m = init_batch(pairs);
        CHECK(m.A(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(m.P(0, 0) == doctest::Approx(1.0 / 21.0).epsilon(1e-15));
        CHECK(predict(m, vec({5}))(0) == doctest::Approx(10.0).epsilon(1e-15));
    }
    SUBCASE("failure modes") {
        const std::vector<SnapshotPair> constant(3, {vec({1, 2}), vec({1, 2})});
        CHECK_THROWS_AS(init_batch(constant), RankDeficient);
        const std::vector<SnapshotPair> short_window{{vec({1, 0}), vec({1, 0})}};
        CHECK_THROWS_AS(init_batch(short_window), RankDeficient);
        const std::vector<SnapshotPair> ragged{{vec({1, 0}), vec({1, 0})}, {vec({0, 1}), vec({0, 1, 2})}};
        CHECK_THROWS_AS(init_batch(ragged), DimensionMismatch);
        CHECK_THROWS_AS(init_batch(std::vector<SnapshotPair>{}), RankDeficient);
        const OdmdModel m = init_batch(std::vector<SnapshotPair>{{vec({1, 0}), vec({1, 0})}, {vec({0, 1}), vec({0, 1})}});
        CHECK_THROWS_AS(predict(m, vec({1, 2, 3})), DimensionMismatch);
    }
}

TEST_CASE("rank-one update") {
    SUBCASE("scalar example") {
        OdmdModel m;
        m.A = MatrixXd::Constant(1, 1, 2.0);
        m.P = MatrixXd::Constant(1, 1, 1.0 / 21.0);
        const OdmdModel next = update(m, {vec({1}), vec({3})});
        CHECK(next.A(0, 0) == doctest::Approx(2.0 + 1.0 / 22.0).epsilon(1e-15));
        CHECK(next.P(0, 0) == doctest::Approx(1.0 / 22.0).epsilon(1e-15));
        CHECK(next.k == 1);
        CHECK(m.A(0, 0) == 2.0);
    }
    SUBCASE("zero residual leaves A unchanged") {
        std::mt19937_64 rng(3);
        const MatrixXd A = random_stable(rng, 3, 0.9);
        std::vector<SnapshotPair> pairs;
        for (int k = 0; k < 4; ++k) {
            const VectorXd x = random_vector(rng, 3);
            pairs.push_back({x, A * x});
        }
        OdmdModel m = init_batch(pairs);
        const VectorXd x = random_vector(rng, 3);
        const MatrixXd before = m.A;
        update_in_place(m, {x, m.A * x});
        CHECK((m.A - before).norm() <= 1e-12);
    }
    SUBCASE("breakdown on a non-positive denominator") {
        OdmdModel m;
        m.A = MatrixXd::Identity(1, 1);
        m.P = MatrixXd::Constant(1, 1, -1.0);
        CHECK_THROWS_AS(update_in_place(m, {vec({1}), vec({1})}), NumericalBreakdown);
        CHECK_THROWS_AS(update_in_place(m, {vec({1, 1}), vec({1})}), DimensionMismatch);
    }
}

TEST_CASE("online updates reproduce batch least squares") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> dim(1, 6);
    std::uniform_real_distribution<double> radius(0.3, 1.2);
    for (int system = 0; system < 50; ++system) {
        const Eigen::Index n = dim(rng);
        const MatrixXd A = random_stable(rng, n, radius(rng));
        std::vector<SnapshotPair> pairs;
        VectorXd x = random_vector(rng, n);
        // Small process noise keeps the stream exciting every direction.
        auto next_pair = [&] {
            const VectorXd y = A * x + 0.1 * random_vector(rng, n);
            SnapshotPair p{x, y};
            x = y;
            return p;
        };
        for (Eigen::Index k = 0; k < n + 1; ++k) pairs.push_back(next_pair());
        OdmdModel m = init_batch(pairs);
        for (int k = 0; k < 30; ++k) {
            const SnapshotPair p = next_pair();
            pairs.push_back(p);
            update_in_place(m, p);
            const MatrixXd batch = least_squares_operator(pairs);
            CHECK((m.A - batch).norm() <= 1e-8);
            const MatrixXd G = gram(pairs);
            Eigen::JacobiSVD<MatrixXd> svd(G);
            const double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
            if (cond <= 1e10) CHECK((m.P * G - MatrixXd::Identity(n, n)).norm() <= 1e-7);
            CHECK(Eigen::SelfAdjointEigenSolver<MatrixXd>(m.P).eigenvalues().minCoeff() > 0.0);
            const double denom = 1.0 + p.x.dot(m.P * p.x);
            CHECK(denom > 0.0);
        }
        CHECK(m.k == 30);
    }
}

TEST_CASE("exact operator recovery") {
    std::mt19937_64 rng(77);
    for (Eigen::Index n : {2, 3, 5}) {
        const MatrixXd A_star = random_stable(rng, n, 0.95);
        std::vector<SnapshotPair> pairs;
        for (Eigen::Index k = 0; k < n; ++k) {
            const VectorXd x = random_vector(rng, n);
            pairs.push_back({x, A_star * x});
        }
        const OdmdModel m = init_batch(pairs);
        CHECK((m.A - A_star).norm() <= 1e-8);
        const auto ev = eigenvalues(m);
        CHECK(ev.size() == n);
        CHECK(ev.cwiseAbs().maxCoeff() == doctest::Approx(0.95).epsilon(1e-8));
    }
}
