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
#include "mltt/dense/blocks.hpp"
#include "mltt/tt/algebra.hpp"
#include "mltt/tt/blocks.hpp"
#include "mltt/tt/decompose.hpp"
#include "mltt/tt/etsvd.hpp"
#include "mltt/tt/nptt.hpp"
#include "support.hpp"

using namespace mltt;
using mltt::test::indices;
using mltt::test::random_dense;
using mltt::test::random_gtt;
using mltt::test::random_matrix;
using mltt::test::random_paired;
using mltt::test::random_train;
using mltt::test::rel_err;

namespace {

double zeta_err(const PairedTensorTrain& t, const PairedTensor& dense) {
    auto z = reconstruct(t);
    EXPECT_EQ(z.row_shape(), dense.row_shape());
    EXPECT_EQ(z.col_shape(), dense.col_shape());
    return rel_err(z.data(), dense.data());
}

// Naive sum over all rank multi-indices of products of core entries.
DenseTensor direct_sum(const TensorTrain& t) {
    DenseTensor x(t.shape());
    const auto ranks = t.ranks();
    std::vector<std::size_t> inner(ranks.begin() + 1, ranks.end() - 1);
    Shape rs = inner.empty() ? Shape{1} : Shape(inner);
    for (std::size_t flat = 0; flat < x.size(); ++flat) {
        auto j = unravel(flat, t.shape().values());
        double s = 0;
        for (const auto& r : indices(rs)) {
            double p = 1;
            for (std::size_t n = 0; n < t.order(); ++n) {
                const std::size_t a = n == 0 ? 0 : r[n - 1];
                const std::size_t b = n + 1 == t.order() ? 0 : r[n];
                p *= t.core(n)(a, j[n], b);
            }
            s += p;
        }
        x[flat] = s;
    }
    return x;
}

Matrix gram_left(const TrainCore& c) { return c.left().transpose() * c.left(); }
Matrix gram_right(const TrainCore& c) { return c.right() * c.right().transpose(); }

PairedTensor dirichlet_laplacian(std::size_t n) {
    Matrix l = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        l(k, k) = 2;
        if (k + 1 < n) l(k, k + 1) = l(k + 1, k) = -1;
    }
    return psi_fold(l, Shape{n}, Shape{n});
}

}  // namespace

TEST(Decompose, RankOneAndMatrix) {
    std::mt19937_64 rng(1);
    Vector u = random_matrix(3, 1, rng), v = random_matrix(4, 1, rng), w = random_matrix(2, 1, rng);
    DenseTensor x({3, 4, 2});
    for (std::size_t f = 0; f < x.size(); ++f) {
        auto d = unravel(f, x.shape().values());
        x[f] = u[d[0]] * v[d[1]] * w[d[2]];
    }
    auto t = tt_decompose(x, 0.0);
    EXPECT_EQ(t.ranks(), (std::vector<std::size_t>{1, 1, 1, 1}));
    Matrix m = random_matrix(6, 3, rng) * random_matrix(3, 5, rng);
    DenseTensor mx({6, 5}, std::vector<double>(m.data(), m.data() + m.size()));
    EXPECT_EQ(tt_decompose(mx, 0.0).ranks()[1], 3u);
}

TEST(Decompose, RoundTripExact) {
    std::mt19937_64 rng(2);
    auto x = random_dense({2, 3, 4}, rng);
    auto t = tt_decompose(x, 0.0);
    EXPECT_LE(rel_err(reconstruct(t).data(), x.data()), 1e-12);
    EXPECT_EQ(t.ranks(), (std::vector<std::size_t>{1, 2, 4, 1}));
    EXPECT_THROW(tt_decompose(x, -1.0), ConfigError);
}

TEST(Decompose, TruncationBound) {
    std::mt19937_64 rng(3);
    auto x = random_dense({4, 4, 4, 4}, rng);
    for (double tol : {0.3, 0.1, 0.01}) {
        auto t = tt_decompose(x, tol);
        EXPECT_LE(rel_err(reconstruct(t).data(), x.data()), tol * (1 + 1e-12));
    }
}

TEST(Gtt, IdentityAndOrderOneAndRoundTrip) {
    auto id = gtt_decompose(PairedTensor::identity({2, 3, 2}), 0.0);
    EXPECT_EQ(id.ranks(), (std::vector<std::size_t>{1, 1, 1, 1}));
    std::mt19937_64 rng(4);
    auto m = random_paired({3}, {4}, rng);
    auto g = gtt_decompose(m, 0.0);
    EXPECT_EQ(g.order(), 1u);
    EXPECT_LE(zeta_err(g, m), 1e-15);
    auto a = random_paired({2, 2}, {2, 2}, rng);
    EXPECT_LE(zeta_err(gtt_decompose(a, 0.0), a), 1e-12);
    EXPECT_LE(zeta_err(PairedTensorTrain::identity({2, 3}), PairedTensor::identity({2, 3})), 0.0);
}

TEST(Quantize, TrivialPlanAndExactRoundTrip) {
    std::mt19937_64 rng(5);
    auto a = random_paired({2, 3}, {3, 2}, rng);
    QuantizationPlan trivial{{{2}, {3}}, {{3}, {2}}};
    EXPECT_LE(rel_err(reconstruct(quantize(a, trivial, 0.0)).data(), reconstruct(gtt_decompose(a, 0.0)).data()), 1e-14);
    auto m = random_paired({4}, {4}, rng);
    auto q = quantize(m, QuantizationPlan::prime({4}, {4}), 0.0);
    EXPECT_EQ(q.row_shape(), Shape({2, 2}));
    EXPECT_LE((psi_unfold(reconstruct(q)) - psi_unfold(m)).norm(), 1e-13 * psi_unfold(m).norm());
    EXPECT_THROW(quantize(m, QuantizationPlan{{{2, 3}}, {{4}}}, 0.0), ConfigError);
}

TEST(Quantize, LaplacianHasSmallBoundedRanks) {
    std::size_t prev = 0;
    for (std::size_t levels : {4u, 5u, 6u}) {
        const std::size_t n = std::size_t{1} << levels;
        auto q = quantize(dirichlet_laplacian(n), QuantizationPlan::prime({n}, {n}), 0.0);
        EXPECT_EQ(q.order(), levels);
        EXPECT_LE(q.max_rank(), 5u);
        if (prev) {
            EXPECT_EQ(q.max_rank(), prev);
        }
        prev = q.max_rank();
        EXPECT_LE((psi_unfold(reconstruct(q)) - psi_unfold(dirichlet_laplacian(n))).norm(), 1e-12 * n);
    }
}

TEST(Quantize, TrainMatchesDenseAndNonBinary) {
    std::mt19937_64 rng(6);
    auto a = random_gtt({4, 6}, {4, 3}, {3}, rng);
    auto dense = reconstruct(a);
    QuantizationPlan plan{{{2, 2}, {2, 3}}, {{2, 2}, {3}}};
    auto q = quantize(a, plan, 0.0);
    EXPECT_EQ(q.row_shape(), Shape({2, 2, 2, 3}));
    EXPECT_EQ(q.col_shape(), Shape({2, 2, 3, 1}));
    EXPECT_LE((psi_unfold(reconstruct(q)) - psi_unfold(dense)).norm(), 1e-12 * psi_unfold(dense).norm());
    EXPECT_EQ(QuantizationPlan::prime_factors(63), (std::vector<std::size_t>{3, 3, 7}));
}

TEST(Reconstruct, DirectSumAndBudget) {
    std::mt19937_64 rng(7);
    auto t = random_train({2, 3, 2}, {2, 3}, rng);
    EXPECT_EQ(t.ranks(), (std::vector<std::size_t>{1, 2, 3, 1}));
    EXPECT_LE(rel_err(reconstruct(t).data(), direct_sum(t).data()), 1e-14);
    auto r1 = random_train({3, 2}, {1}, rng);
    auto z = reconstruct(r1);
    for (std::size_t f = 0; f < z.size(); ++f) {
        auto d = unravel(f, z.shape().values());
        EXPECT_NEAR(z[f], r1.core(0)(0, d[0], 0) * r1.core(1)(0, d[1], 0), 1e-15);
    }
    EXPECT_THROW(reconstruct(t, 5), CapacityError);
}

TEST(Add, RanksAndValues) {
    std::mt19937_64 rng(8);
    auto a = random_gtt({2, 2}, {2, 2}, {2}, rng);
    auto b = random_gtt({2, 2}, {2, 2}, {3}, rng);
    auto s = tt_add(a, b);
    EXPECT_EQ(s.ranks(), (std::vector<std::size_t>{1, 5, 1}));
    EXPECT_LE(zeta_err(s, reconstruct(a) + reconstruct(b)), 1e-13);
    auto z = tt_add(a, tt_scale(a, 0.0));
    EXPECT_LE(zeta_err(z, reconstruct(a)), 1e-15);
    EXPECT_THROW(tt_add(a, random_gtt({2, 2}, {2, 1}, {2}, rng)), DimensionError);
}

TEST(Einstein, RanksAndValues) {
    std::mt19937_64 rng(9);
    auto a = random_gtt({2, 3}, {2, 2}, {2}, rng);
    auto b = random_gtt({2, 2}, {3, 2}, {3}, rng);
    auto e = tt_einstein(a, b);
    EXPECT_EQ(e.ranks(), (std::vector<std::size_t>{1, 6, 1}));
    EXPECT_LE(zeta_err(e, einstein_product(reconstruct(a), reconstruct(b))), 1e-12);
    EXPECT_LE(zeta_err(tt_einstein(PairedTensorTrain::identity({2, 3}), a), reconstruct(a)), 1e-15);
    EXPECT_THROW(tt_einstein(a, a), DimensionError);
    Matrix d = einstein_to_dense(a, b);
    EXPECT_LE((d - psi_unfold(reconstruct(e))).norm(), 1e-12 * d.norm());
}

TEST(Transpose, Cases) {
    std::mt19937_64 rng(10);
    auto a = random_gtt({2, 3}, {3, 1}, {2}, rng);
    EXPECT_EQ(tt_transpose(tt_transpose(a)), a);
    EXPECT_LE(zeta_err(tt_transpose(a), u_transpose(reconstruct(a))), 0.0);
    EXPECT_EQ(tt_transpose(a).ranks(), a.ranks());
    auto id = PairedTensorTrain::identity({2, 2});
    EXPECT_EQ(tt_transpose(id), id);
}

TEST(Round, RedundancyRemovalAndBound) {
    std::mt19937_64 rng(11);
    auto a = random_gtt({2, 2, 2}, {2, 2, 2}, {3, 3}, rng);
    auto aa = tt_add(a, a);
    EXPECT_EQ(aa.ranks(), (std::vector<std::size_t>{1, 6, 6, 1}));
    auto r = tt_round(aa, 0.0);
    EXPECT_EQ(r.ranks(), a.ranks());
    EXPECT_LE(zeta_err(r, reconstruct(aa)), 1e-12);

    auto one = random_gtt({2, 2}, {2, 2}, {1}, rng);
    auto three = tt_add(tt_add(one, tt_scale(one, 0.5)), tt_scale(one, -0.25));
    EXPECT_EQ(tt_round(three, 0.0).ranks(), (std::vector<std::size_t>{1, 1, 1}));

    auto big = random_gtt({3, 3, 3}, {2, 2, 2}, {4, 4}, rng);
    auto rb = tt_round(big, 1e-8);
    EXPECT_LE(zeta_err(rb, reconstruct(big)), 1e-8);
    for (double tol : {0.5, 0.2}) {
        auto t = tt_round(big, tol);
        EXPECT_LE(zeta_err(t, reconstruct(big)), tol);
        for (std::size_t k = 0; k < t.ranks().size(); ++k) EXPECT_LE(t.ranks()[k], big.ranks()[k]);
    }
}

// On a train with a clear spectral gap the second rounding keeps every rank.
TEST(Round, IdempotentOnGappedSpectrum) {
    std::mt19937_64 rng(12);
    auto a = random_gtt({2, 2, 2}, {2, 2, 2}, {2, 2}, rng);
    auto noise = tt_scale(random_gtt({2, 2, 2}, {2, 2, 2}, {2, 2}, rng), 1e-9);
    auto x = tt_add(a, noise);
    auto r1 = tt_round(x, 1e-6);
    auto r2 = tt_round(r1, 1e-6);
    EXPECT_EQ(r1.ranks(), a.ranks());
    EXPECT_EQ(r2.ranks(), r1.ranks());
    EXPECT_LE(zeta_err(r2, reconstruct(r1)), 1e-12);
}

TEST(Orthonormalize, GramIdentitiesAndValues) {
    std::mt19937_64 rng(13);
    auto t = random_train({3, 4, 2, 3}, {2, 4, 3}, rng);
    auto ref = reconstruct(t);
    auto l = t;
    left_orthonormalize(l, 3);
    for (std::size_t n = 0; n < 3; ++n) {
        Matrix g = gram_left(l.core(n));
        EXPECT_LE((g - Matrix::Identity(g.rows(), g.cols())).norm(), 1e-12);
    }
    EXPECT_LE(rel_err(reconstruct(l).data(), ref.data()), 1e-12);
    auto r = t;
    right_orthonormalize(r, 0);
    for (std::size_t n = 1; n < 4; ++n) {
        Matrix g = gram_right(r.core(n));
        EXPECT_LE((g - Matrix::Identity(g.rows(), g.cols())).norm(), 1e-12);
    }
    EXPECT_LE(rel_err(reconstruct(r).data(), ref.data()), 1e-12);
    // Already orthonormal: a second sweep changes nothing.
    auto l2 = l;
    left_orthonormalize(l2, 3);
    for (std::size_t n = 0; n < 4; ++n)
        EXPECT_LE(rel_err(l2.core(n).data(), l.core(n).data()), 1e-12);
    EXPECT_THROW(left_orthonormalize(l2, 4), DimensionError);
}

TEST(DotNorm, MatchDense) {
    std::mt19937_64 rng(14);
    auto x = random_train({2, 3, 4}, {2, 3}, rng), y = random_train({2, 3, 4}, {3, 2}, rng);
    EXPECT_NEAR(tt_dot(x, y), inner_product(reconstruct(x), reconstruct(y)), 1e-12 * tt_norm(x) * tt_norm(y));
    EXPECT_NEAR(tt_norm(x), frobenius_norm(reconstruct(x)), 1e-12 * tt_norm(x));
}

TEST(BlockTt, RowN) {
    std::mt19937_64 rng(15);
    auto a = random_gtt({3}, {2}, {}, rng), b = random_gtt({3}, {2}, {}, rng);
    Matrix cat(3, 4);
    cat << psi_unfold(reconstruct(a)), psi_unfold(reconstruct(b));
    EXPECT_LE((psi_unfold(reconstruct(block_tt_row_n(a, b, 0))) - cat).norm(), 1e-15);

    auto p = random_gtt({2, 3, 2}, {2, 2, 3}, {2, 3}, rng), q = random_gtt({2, 3, 2}, {2, 2, 3}, {3, 2}, rng);
    auto y = block_tt_row_n(p, q, 1);
    EXPECT_LE(zeta_err(y, block_row_n(reconstruct(p), reconstruct(q), 1)), 1e-14);
    EXPECT_LE(zeta_err(block_tt_extract(y, 1, 0, 2), reconstruct(p)), 1e-14);
    EXPECT_LE(zeta_err(block_tt_extract(y, 1, 1, 2), reconstruct(q)), 1e-14);
    EXPECT_EQ(block_tt_extract(p, 0, 0, 1), p);
    EXPECT_THROW(block_tt_extract(y, 1, 2, 2), DimensionError);
    EXPECT_THROW(block_tt_extract(y, 1, 0, 3), DimensionError);
}

TEST(BlockTt, ModeRowMatchesDense) {
    std::mt19937_64 rng(16);
    auto a = random_gtt({2, 2, 2}, {2, 1, 2}, {2, 2}, rng), b = random_gtt({2, 2, 2}, {2, 1, 2}, {2, 2}, rng);
    EXPECT_LE(zeta_err(block_tt_row({a, b}, {2, 1, 1}, 0.0), reconstruct(block_tt_row_n(a, b, 0))), 1e-13);

    std::vector<PairedTensorTrain> same(4, a);
    std::vector<PairedTensor> dsame(4, reconstruct(a));
    EXPECT_LE(zeta_err(block_tt_row(same, {2, 2, 1}, 1e-12), block_row(dsame, {2, 2, 1})), 1e-10);

    std::vector<PairedTensorTrain> eight;
    std::vector<PairedTensor> dense;
    for (int k = 0; k < 8; ++k) {
        eight.push_back(random_gtt({2, 2, 2}, {2, 1, 2}, {2, 2}, rng));
        dense.push_back(reconstruct(eight.back()));
    }
    auto y = block_tt_row(eight, {2, 2, 2}, 1e-12);
    EXPECT_LE(zeta_err(y, block_row(dense, {2, 2, 2})), 1e-10);
    for (std::size_t k = 0; k < 8; ++k) EXPECT_LE(zeta_err(block_tt_extract(y, k, {2, 2, 2}), dense[k]), 1e-10);
    EXPECT_THROW(block_tt_row(eight, {2, 2, 1}, 0.0), DimensionError);
}

TEST(BlockTt, ThreeWaySplitAndColumnDual) {
    std::mt19937_64 rng(17);
    auto y = random_gtt({2, 3}, {6, 2}, {3}, rng);
    auto dy = reconstruct(y);
    for (std::size_t w = 0; w < 3; ++w)
        EXPECT_LE(zeta_err(block_tt_extract(y, 0, w, 3), extract_block(dy, w, {3, 1}, {2, 2})), 1e-14);
    auto a = random_gtt({2, 3}, {3, 2}, {2}, rng), b = random_gtt({2, 3}, {3, 2}, {2}, rng);
    EXPECT_LE(zeta_err(block_tt_col_n(a, b, 1), block_col_n(reconstruct(a), reconstruct(b), 1)), 1e-14);
}

TEST(Nptt, GttToTt) {
    std::mt19937_64 rng(18);
    auto id = gtt_to_tt(PairedTensorTrain::identity({2, 3}));
    EXPECT_EQ(id.order(), 4u);
    for (auto r : id.ranks()) EXPECT_LE(r, 3u);
    auto m = random_gtt({3}, {4}, {}, rng);
    auto t = gtt_to_tt(m);
    EXPECT_EQ(t.order(), 2u);
    EXPECT_EQ(t.ranks()[1], 3u);
    auto a = random_gtt({2, 3, 2}, {3, 2, 2}, {3, 2}, rng);
    EXPECT_LE(rel_err(reconstruct(gtt_to_tt(a)).data(), reconstruct(a).data()), 1e-12);
}

TEST(Nptt, ExactModePermutation) {
    std::mt19937_64 rng(19);
    auto m = random_gtt({3}, {2}, {}, rng);
    auto t1 = gtt_to_tt(m);
    EXPECT_EQ(tt_to_nptt(t1), t1);

    for (auto [row, col] : {std::pair<Shape, Shape>{{2, 2}, {2, 2}}, {{2, 3, 2}, {3, 2, 2}}, {{2, 2, 2, 2}, {2, 1, 2, 1}}}) {
        auto a = random_gtt(row, col, std::vector<std::size_t>(row.order() - 1, 3), rng);
        auto dense = reconstruct(a);
        auto np = tt_to_nptt(gtt_to_tt(a), 0.0);
        const std::size_t n = row.order();
        std::vector<std::size_t> expect;
        for (auto j : row) expect.push_back(j);
        for (auto i : col) expect.push_back(i);
        ASSERT_EQ(np.shape().values(), expect);
        auto z = reconstruct(np);
        double err = 0;
        for (std::size_t f = 0; f < z.size(); ++f) {
            auto d = unravel(f, expect);
            std::vector<std::size_t> j(d.begin(), d.begin() + n), i(d.begin() + n, d.end());
            err = std::max(err, std::abs(z[f] - dense.at(j, i)));
        }
        EXPECT_LE(err, 1e-12 * frobenius_norm(dense));
    }
    EXPECT_THROW(tt_to_nptt(random_train({2, 2, 2}, {2, 2}, rng)), DimensionError);
}

TEST(Nptt, SingletonColumnsKeepValues) {
    std::mt19937_64 rng(20);
    auto a = random_gtt({2, 3, 2}, {1, 1, 1}, {2, 2}, rng);
    auto np = tt_to_nptt(gtt_to_tt(a));
    EXPECT_LE(rel_err(reconstruct(np).data(), reconstruct(a).data()), 1e-12);
}

TEST(Etsvd, IdentityAndRankOne) {
    auto s = etsvd(PairedTensorTrain::identity({2, 2}));
    ASSERT_EQ(s.rank(), 4u);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(s.sigma[k], 1.0, 1e-12);

    std::mt19937_64 rng(21);
    auto x = random_train({2, 3}, {1}, rng), y = random_train({3, 2}, {1}, rng);
    const double nx = tt_norm(x), ny = tt_norm(y);
    auto op = tt_scale(tt_einstein(PairedTensorTrain::column(x), tt_transpose(PairedTensorTrain::column(y))), 5.0);
    auto r = etsvd(op);
    ASSERT_EQ(r.rank(), 1u);
    EXPECT_NEAR(r.sigma[0], 5.0 * nx * ny, 1e-12 * r.sigma[0]);
    auto t = r.triple(0);
    EXPECT_NEAR(std::abs(tt_dot(t.left, x)), nx, 1e-12);
    EXPECT_NEAR(std::abs(tt_dot(t.right, y)), ny, 1e-12);
}

TEST(Etsvd, MatchesDenseSvdAndReconstructs) {
    std::mt19937_64 rng(22);
    for (auto [row, col] : {std::pair<Shape, Shape>{{2, 3}, {3, 2}}, {{2, 2, 2}, {2, 3, 1}}, {{3}, {2}}}) {
        auto a = random_gtt(row, col, std::vector<std::size_t>(row.order() - 1, 3), rng);
        Matrix pa = psi_unfold(reconstruct(a));
        Vector sv = Eigen::JacobiSVD<Matrix>(pa).singularValues();
        auto s = etsvd(a, 0.0);
        ASSERT_EQ(s.rank(), static_cast<std::size_t>(sv.size()));
        EXPECT_LE((s.sigma - sv).norm(), 1e-10 * sv.norm());
        auto triples = s.triples();
        Matrix rebuilt = Matrix::Zero(pa.rows(), pa.cols());
        for (std::size_t p = 0; p < triples.size(); ++p) {
            auto xp = reconstruct(triples[p].left), yp = reconstruct(triples[p].right);
            rebuilt += triples[p].sigma * xp.vec() * yp.vec().transpose();
            for (std::size_t q = 0; q < triples.size(); ++q) {
                const double dl = tt_dot(triples[p].left, triples[q].left);
                const double dr = tt_dot(triples[p].right, triples[q].right);
                EXPECT_NEAR(dl, p == q ? 1.0 : 0.0, 1e-10);
                EXPECT_NEAR(dr, p == q ? 1.0 : 0.0, 1e-10);
            }
        }
        EXPECT_LE((rebuilt - pa).norm(), 1e-10 * pa.norm());
        // U and V as mode row block trains.
        Matrix pu = psi_unfold(reconstruct(s.u));
        EXPECT_LE((pu.transpose() * pu - Matrix::Identity(s.rank(), s.rank())).norm(), 1e-10);
    }
}

TEST(Etsvd, TruncationAndMaxRank) {
    std::mt19937_64 rng(23);
    auto a = random_gtt({2, 2, 2}, {2, 2, 2}, {4, 4}, rng);
    Matrix pa = psi_unfold(reconstruct(a));
    Vector sv = Eigen::JacobiSVD<Matrix>(pa).singularValues();
    auto s = etsvd(a, 0.0, 3);
    ASSERT_EQ(s.rank(), 3u);
    EXPECT_LE((s.sigma - sv.head(3)).norm(), 1e-10 * sv.norm());
    auto t = etsvd(a, 0.2);
    double tail = 0;
    for (Eigen::Index k = static_cast<Eigen::Index>(t.rank()); k < sv.size(); ++k) tail += sv[k] * sv[k];
    EXPECT_LE(std::sqrt(tail), 0.2 * sv.norm() * 1.01);
}

TEST(UEigen, Cases) {
    auto id = u_eigendecompose_psd(PairedTensorTrain::identity({2, 2}));
    ASSERT_EQ(id.values.size(), 4);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(id.values[k], 1.0, 1e-12);

    PairedTensor d({2}, {2}, {4, 0, 0, 1});
    auto e = u_eigendecompose_psd(gtt_decompose(d, 0.0));
    ASSERT_EQ(e.values.size(), 2);
    EXPECT_NEAR(e.values[0], 4.0, 1e-12);
    EXPECT_NEAR(e.values[1], 1.0, 1e-12);

    std::mt19937_64 rng(24);
    auto z = random_gtt({2, 3}, {2, 1}, {2}, rng);
    auto w = tt_einstein(z, tt_transpose(z));
    Vector sz = Eigen::JacobiSVD<Matrix>(psi_unfold(reconstruct(z))).singularValues();
    auto ew = u_eigendecompose_psd(w);
    ASSERT_EQ(ew.values.size(), sz.size());
    EXPECT_LE((ew.values - sz.cwiseProduct(sz)).norm(), 1e-10 * sz.squaredNorm());
    // Eigentensors: W * X = lambda X.
    Matrix pw = psi_unfold(reconstruct(w));
    Matrix px = psi_unfold(reconstruct(ew.vectors));
    EXPECT_LE((pw * px - px * ew.values.asDiagonal()).norm(), 1e-10 * pw.norm());

    auto ns = random_gtt({2, 2}, {2, 2}, {2}, rng);
    EXPECT_THROW(u_eigendecompose_psd(ns), ConfigError);
}
