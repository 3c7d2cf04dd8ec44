// Copyright 2026 The mltt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mltt/dense/algebra.hpp"
#include "mltt/lyapunov.hpp"
#include "mltt/system.hpp"
#include "support.hpp"

using namespace mltt;
using mltt::test::random_gtt;
using mltt::test::random_matrix;
using mltt::test::random_stable_gtt;
using mltt::test::rel_diff;

namespace {

// Kronecker-lifted solve of (I - A (x) A) vec X = vec B.
Matrix kron_lyap(const Matrix& a, const Matrix& b) {
    const Eigen::Index n = a.rows();
    Matrix k = Matrix::Identity(n * n, n * n);
    for (Eigen::Index j2 = 0; j2 < n; ++j2)
        for (Eigen::Index i2 = 0; i2 < n; ++i2)
            for (Eigen::Index j1 = 0; j1 < n; ++j1)
                for (Eigen::Index i1 = 0; i1 < n; ++i1) k(j1 + n * j2, i1 + n * i2) -= a(j1, i1) * a(j2, i2);
    Vector x = k.partialPivLu().solve(Eigen::Map<const Vector>(b.data(), n * n));
    return Eigen::Map<Matrix>(x.data(), n, n);
}

// Truncated series sum_{t <= steps} A^t B (A^T)^t.
Matrix series_gramian(const Matrix& a, const Matrix& b, int steps) {
    Matrix w = Matrix::Zero(a.rows(), a.rows());
    Matrix p = b;
    for (int t = 0; t <= steps; ++t) {
        w += p * p.transpose();
        p = a * p;
    }
    return w;
}

PairedTensorTrain scalar_train(double v) { return gtt_decompose(PairedTensor::scalar(v), 0.0); }

MltiSystem scalar_system(double a, double b, double c) {
    return {PairedTensor::scalar(a), PairedTensor::scalar(b), PairedTensor::scalar(c)};
}

PairedTensorTrain spd_rhs(const Shape& j, std::mt19937_64& rng) {
    auto b = random_gtt(j, Shape::ones(j.order()), std::vector<std::size_t>(j.order() - 1, 2), rng);
    return tt_einstein(b, tt_transpose(b));
}

}  // namespace

TEST(LyapDense, ZeroOperatorReturnsRhs) {
    std::mt19937_64 rng(1);
    const Shape j{2, 3};
    auto b = test::random_paired(j, j, rng);
    auto x = lyap_dense(PairedTensor(j, j), b);
    EXPECT_LT(test::rel_err(x.data(), b.data()), 1e-14);
}

TEST(LyapDense, ScalarClosedForm) {
    auto x = lyap_dense(PairedTensor::scalar(0.5), PairedTensor::scalar(0.75));
    EXPECT_NEAR(x[0], 1.0, 1e-14);
}

TEST(LyapDense, MatchesKroneckerSolve) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const Shape j{2, 2};
        auto a = reconstruct(random_stable_gtt(j, {3}, 0.8, rng));
        auto b = test::random_paired(j, j, rng);
        auto x = lyap_dense(a, b);
        EXPECT_LT(lyap_residual(a, x, b), 1e-10);
        EXPECT_LT(rel_diff(psi_unfold(x), kron_lyap(psi_unfold(a), psi_unfold(b))), 1e-10);
    }
}

TEST(LyapDense, ComplexSpectrum) {
    // Rotation scaled inside the unit disc.
    Matrix a(2, 2);
    a << 0.0, -0.9, 0.9, 0.0;
    Matrix b = Matrix::Identity(2, 2);
    Matrix x = stein_solve(a, b);
    EXPECT_LT(lyap_residual(a, x, b), 1e-12);
    EXPECT_NEAR(x(0, 0), 1.0 / (1.0 - 0.81), 1e-12);
}

TEST(LyapDense, UnstableThrows) {
    EXPECT_THROW(lyap_dense(PairedTensor::scalar(1.0), PairedTensor::scalar(1.0)), StabilityError);
    EXPECT_THROW(lyap_dense(PairedTensor::scalar(-1.5), PairedTensor::scalar(1.0)), StabilityError);
    EXPECT_THROW(lyap_dense(PairedTensor(Shape{2}, Shape{3}), PairedTensor(Shape{2}, Shape{2})), DimensionError);
}

TEST(LyapOperator, ZeroGivesIdentity) {
    const Shape j{2, 3};
    auto zero = tt_scale(PairedTensorTrain::identity(j), 0.0);
    auto l = reconstruct(lyap_operator(zero));
    const Shape jj{2, 3, 2, 3};
    EXPECT_LT(test::rel_err(l.data(), PairedTensor::identity(jj).data()), 1e-15);
}

TEST(LyapOperator, RankOneOperatorRanks) {
    std::mt19937_64 rng(3);
    const Shape j{2, 2, 2};
    auto a = random_gtt(j, j, {1, 1}, rng);
    const PairedTensorTrain aa(TensorTrain([&] {
                                   auto c = a.train().cores();
                                   c.insert(c.end(), a.train().cores().begin(), a.train().cores().end());
                                   return c;
                               }()),
                               Shape{2, 2, 2, 2, 2, 2}, Shape{2, 2, 2, 2, 2, 2});
    for (auto r : aa.ranks()) EXPECT_EQ(r, 1u);
    auto l = lyap_operator(a);
    const std::vector<std::size_t> expect{1, 2, 2, 2, 2, 2, 1};
    EXPECT_EQ(l.ranks(), expect);
}

TEST(LyapOperator, MatchesKroneckerAssembly) {
    std::mt19937_64 rng(4);
    const Shape j{2, 3};
    auto a = random_gtt(j, j, {2}, rng);
    const Matrix pa = psi_unfold(reconstruct(a));
    const Eigen::Index n = pa.rows();
    Matrix oracle = Matrix::Identity(n * n, n * n);
    for (Eigen::Index j2 = 0; j2 < n; ++j2)
        for (Eigen::Index i2 = 0; i2 < n; ++i2)
            for (Eigen::Index j1 = 0; j1 < n; ++j1)
                for (Eigen::Index i1 = 0; i1 < n; ++i1) oracle(j1 + n * j2, i1 + n * i2) -= pa(j1, i1) * pa(j2, i2);
    auto l = lyap_operator(a);
    EXPECT_LT(rel_diff(psi_unfold(reconstruct(l)), oracle), 1e-13);
    const std::vector<std::size_t> expect{1, 3, 2, 3, 1};
    EXPECT_EQ(l.ranks(), expect);
}

TEST(LyapOperator, AppliedToNonPairedSolutionGivesRhs) {
    std::mt19937_64 rng(5);
    const Shape j{2, 2};
    auto a = random_stable_gtt(j, {2}, 0.7, rng);
    auto b = spd_rhs(j, rng);
    auto rep = lyap_tt_smith(a, b, 1e-12, 500, 1e-14);
    ASSERT_TRUE(rep.converged);
    // L applied to X in the non-paired layout reproduces B in that layout.
    auto lx = tt_apply(lyap_operator(a), rep.nptt());
    auto bn = tt_to_nptt(gtt_to_tt(b));
    EXPECT_LT(test::rel_err(reconstruct(lx).data(), reconstruct(bn).data()), 1e-10);
}

TEST(Smith, ZeroOperatorConvergesImmediately) {
    std::mt19937_64 rng(6);
    const Shape j{2, 2};
    auto b = spd_rhs(j, rng);
    auto zero = tt_scale(PairedTensorTrain::identity(j), 0.0);
    auto rep = lyap_tt_smith(zero, b, 1e-12, 50, 1e-14);
    EXPECT_TRUE(rep.converged);
    EXPECT_EQ(rep.iterations, 1u);
    EXPECT_LT(test::rel_err(reconstruct(rep.solution).data(), reconstruct(b).data()), 1e-13);
}

TEST(Smith, ScalarGeometricSeries) {
    auto rep = lyap_tt_smith(scalar_train(0.5), scalar_train(0.75), 1e-10, 40, 0.0);
    EXPECT_TRUE(rep.converged);
    EXPECT_LE(rep.iterations, 40u);
    EXPECT_NEAR(rep.dense()[0], 1.0, 1e-9);
}

TEST(Smith, MatchesDenseOnQttSystem) {
    std::mt19937_64 rng(7);
    const Shape j{2, 2, 2};
    for (int trial = 0; trial < 5; ++trial) {
        auto a = random_stable_gtt(j, {2, 2}, 0.6, rng);
        auto b = spd_rhs(j, rng);
        auto rep = lyap_tt_smith(a, b, 1e-10, 500, 1e-13);
        ASSERT_TRUE(rep.converged);
        auto ref = lyap_dense(reconstruct(a), reconstruct(b));
        EXPECT_LT(test::rel_err(rep.dense().data(), ref.data()), 1e-6);
        // Reported residual agrees with an independent recomputation.
        const double honest = lyap_residual(reconstruct(a), rep.dense(), reconstruct(b));
        EXPECT_NEAR(rep.residual, honest, 1e-12);
    }
}

TEST(Smith, ResidualHistoryIsNonIncreasing) {
    std::mt19937_64 rng(8);
    const Shape j{2, 2, 2};
    auto a = random_stable_gtt(j, {3, 3}, 0.8, rng);
    auto b = spd_rhs(j, rng);
    auto rep = lyap_tt_smith(a, b, 1e-10, 500, 1e-13);
    ASSERT_TRUE(rep.converged);
    // The residual shrinks in norm only asymptotically for non-normal A, so
    // compare against the running maximum of the tail.
    for (std::size_t k = 8; k < rep.history.size(); ++k)
        EXPECT_LE(rep.history[k], rep.history[k - 8] + 1e-12) << "at " << k;
}

TEST(Smith, NonConvergenceIsReported) {
    auto rep = lyap_tt_smith(scalar_train(0.9), scalar_train(1.0), 1e-12, 3, 0.0);
    EXPECT_FALSE(rep.converged);
    EXPECT_EQ(rep.iterations, 3u);
    const double x = rep.dense()[0];
    EXPECT_NEAR(rep.residual, std::abs(x - 0.81 * x - 1.0), 1e-14);
}

TEST(Smith, SymmetricRhsGivesSymmetricSolution) {
    std::mt19937_64 rng(9);
    const Shape j{2, 2, 2};
    auto a = random_stable_gtt(j, {2, 2}, 0.7, rng);
    auto rep = lyap_tt_smith(a, spd_rhs(j, rng), 1e-10, 500, 1e-10);
    const auto x = rep.solution;
    EXPECT_LE(tt_norm(tt_sub(x, tt_transpose(x))), 1e-8 * tt_norm(x));
}

TEST(SquaredSmith, ScalarDoublings) {
    auto rep = lyap_tt_squared_smith(scalar_train(0.5), scalar_train(0.75), 1e-10, 20, 0.0);
    EXPECT_TRUE(rep.converged);
    EXPECT_LE(rep.iterations, 6u);
    EXPECT_NEAR(rep.dense()[0], 1.0, 1e-10);
}

TEST(SquaredSmith, ZeroOperator) {
    auto rep = lyap_tt_squared_smith(scalar_train(0.0), scalar_train(2.0), 1e-12, 20, 0.0);
    EXPECT_TRUE(rep.converged);
    EXPECT_EQ(rep.iterations, 1u);
    EXPECT_DOUBLE_EQ(rep.dense()[0], 2.0);
}

TEST(SquaredSmith, AgreesWithSmith) {
    std::mt19937_64 rng(10);
    const Shape j{2, 2, 2};
    for (int trial = 0; trial < 5; ++trial) {
        auto a = random_stable_gtt(j, {2, 3}, 0.7, rng);
        auto b = spd_rhs(j, rng);
        auto s = lyap_tt_smith(a, b, 1e-12, 1000, 1e-14);
        auto q = lyap_tt_squared_smith(a, b, 1e-12, 50, 1e-14);
        ASSERT_TRUE(s.converged && q.converged);
        EXPECT_LT(q.iterations, s.iterations);
        EXPECT_LT(test::rel_err(q.dense().data(), s.dense().data()), 1e-8);
    }
}

TEST(SpectralRadius, RankOneIsProductOfCoreRadii) {
    std::mt19937_64 rng(11);
    const Shape j{2, 3, 2};
    auto a = random_gtt(j, j, {1, 1}, rng);
    const double dense = test::dense_radius(psi_unfold(reconstruct(a)));
    EXPECT_NEAR(spectral_radius(a), dense, 1e-10 * dense);
}

TEST(SpectralRadius, PowerIterationEstimate) {
    std::mt19937_64 rng(12);
    const Shape j{2, 2, 2, 2};
    // Symmetric operator so the dominant eigenvalue is real.
    auto g = random_gtt(j, j, {2, 2, 2}, rng);
    auto a = tt_add(g, tt_transpose(g));
    const double dense = test::dense_radius(psi_unfold(reconstruct(a)));
    EXPECT_NEAR(spectral_radius(a, 0), dense, 0.05 * dense);
    EXPECT_NEAR(spectral_radius(a), dense, 1e-10 * dense);
}

TEST(SpectralRadius, GateRejectsUnstableOperator) {
    SolverConfig cfg;
    cfg.solver = LyapSolver::smith;
    EXPECT_THROW(lyap_solve(scalar_train(1.2), scalar_train(1.0), cfg), StabilityError);
    cfg.solver = LyapSolver::dense;
    EXPECT_THROW(lyap_solve(scalar_train(1.0), scalar_train(1.0), cfg), StabilityError);
}

TEST(Gramian, ScalarClosedForms) {
    auto sys = scalar_system(0.5, 1.0, 1.0);
    for (auto solver : {LyapSolver::dense, LyapSolver::smith, LyapSolver::squared_smith}) {
        SolverConfig cfg;
        cfg.solver = solver;
        EXPECT_NEAR(reachability_gramian(sys, cfg).dense()[0], 4.0 / 3.0, 1e-9);
        EXPECT_NEAR(observability_gramian(sys, cfg).dense()[0], 4.0 / 3.0, 1e-9);
    }
}

TEST(Gramian, MatchesTruncatedSeries) {
    std::mt19937_64 rng(13);
    const Shape j{2, 2, 2}, k{1, 1, 2};
    auto a = random_stable_gtt(j, {2, 2}, 0.6, rng);
    auto b = random_gtt(j, k, {2, 2}, rng);
    auto c = random_gtt(Shape{1, 1, 1}, j, {1, 1}, rng);
    MltiSystem sys(a, b, c);
    SolverConfig cfg;
    cfg.tol = 1e-13;
    cfg.round_tol = 1e-15;
    auto w = psi_unfold(reachability_gramian(sys, cfg).dense());
    auto m = sys.unfolded();
    EXPECT_LT(rel_diff(w, series_gramian(m.a, m.b, 50)), 1e-8);
}

TEST(Gramian, DualityIsExact) {
    std::mt19937_64 rng(14);
    const Shape j{2, 2};
    MltiSystem sys(random_stable_gtt(j, {2}, 0.5, rng), random_gtt(j, Shape{1, 1}, {1}, rng),
                   random_gtt(Shape{1, 2}, j, {2}, rng));
    auto wo = observability_gramian(sys);
    auto wr = reachability_gramian(sys.dual());
    EXPECT_EQ(wo.solution, wr.solution);
}

TEST(Gramian, MatchesDenseOracle) {
    std::mt19937_64 rng(15);
    const Shape j{2, 2};
    auto a = random_stable_gtt(j, {3}, 0.75, rng);
    auto b = random_gtt(j, Shape{1, 2}, {2}, rng);
    auto c = random_gtt(Shape{2, 1}, j, {2}, rng);
    MltiSystem sys(a, b, c);
    auto m = sys.unfolded();
    SolverConfig cfg;
    cfg.tol = 1e-12;
    cfg.round_tol = 1e-14;
    auto wr = psi_unfold(reachability_gramian(sys, cfg).dense());
    auto wo = psi_unfold(observability_gramian(sys, cfg).dense());
    EXPECT_LT(rel_diff(wr, kron_lyap(m.a, m.b * m.b.transpose())), 1e-8);
    EXPECT_LT(rel_diff(wo, kron_lyap(m.a.transpose(), m.c.transpose() * m.c)), 1e-8);
}

TEST(Reachability, Cases) {
    EXPECT_TRUE(is_reachable(scalar_system(0.5, 1.0, 1.0), 1e-12));
    EXPECT_FALSE(is_reachable(scalar_system(0.5, 0.0, 1.0), 1e-12));
    // Diagonal A with B on one eigenvector: the other mode is never excited.
    PairedTensor a(Shape{2}, Shape{2}, {0.5, 0.0, 0.0, 0.3});
    PairedTensor b(Shape{2}, Shape{1}, {1.0, 0.0});
    PairedTensor c(Shape{1}, Shape{2}, {1.0, 1.0});
    EXPECT_FALSE(is_reachable(MltiSystem(a, b, c), 1e-12));
    PairedTensor b2(Shape{2}, Shape{1}, {1.0, 1.0});
    EXPECT_TRUE(is_reachable(MltiSystem(a, b2, c), 1e-12));
}
