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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mltt/dense/tensor.hpp"
#include "mltt/errors.hpp"
#include "mltt/lyapunov.hpp"
#include "mltt/system.hpp"
#include "mltt/tt/decompose.hpp"
#include "mltt/tt/train.hpp"

namespace mltt {

/// Explicit-Euler 2D heat equation on [-pi, pi]^2 with Dirichlet boundaries.
struct HeatConfig {
    std::size_t grid = 7;  // interior points per axis
    double c = 1.0;        // diffusivity
    double dt = 0.01;

    double h() const { return 2.0 * std::numbers::pi / static_cast<double>(grid + 1); }
    double ratio() const { return c * c * dt / (h() * h()); }
};

/// Grid points at or below this count also carry the dense operators.
inline constexpr std::size_t kHeatDenseStates = 1024;

namespace detail {

/// Index of the node closest to 0 on -pi + h (k + 1); ties go to the negative side.
inline std::size_t nearest_origin(std::size_t n, double h) {
    std::size_t best = 0;
    double dist = std::abs(-std::numbers::pi + h);
    for (std::size_t k = 1; k < n; ++k) {
        const double d = std::abs(-std::numbers::pi + h * static_cast<double>(k + 1));
        if (d < dist - 1e-12 * h) {
            dist = d;
            best = k;
        }
    }
    return best;
}

/// n x n matrix stored column-major in slot s of a core (r0, n*n, r1).
inline void put_slice(TrainCore& core, std::size_t a, std::size_t b, const Matrix& m) {
    const auto n = static_cast<std::size_t>(m.rows());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            core(a, j + n * i, b) = m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
}

/// Rank-1 GTT of the outer product of per-mode matrices.
inline PairedTensorTrain rank_one(const std::vector<Matrix>& mats) {
    std::vector<TrainCore> cores;
    std::vector<std::size_t> rows, cols;
    for (const auto& m : mats) {
        TrainCore c(1, static_cast<std::size_t>(m.size()), 1, m);
        cores.push_back(std::move(c));
        rows.push_back(static_cast<std::size_t>(m.rows()));
        cols.push_back(static_cast<std::size_t>(m.cols()));
    }
    return {TensorTrain(std::move(cores)), Shape(rows), Shape(cols)};
}

}  // namespace detail

/// Unscaled 1D Dirichlet second-difference matrix tridiag(1, -2, 1).
inline Matrix second_difference(std::size_t n) {
    const auto m = static_cast<Eigen::Index>(n);
    Matrix t = Matrix::Zero(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        t(k, k) = -2.0;
        if (k + 1 < m) t(k, k + 1) = t(k + 1, k) = 1.0;
    }
    return t;
}

/// Unscaled 2D Dirichlet Laplacian on an n x n grid, first axis fastest.
inline Matrix laplacian_2d(std::size_t n) {
    const Matrix t = second_difference(n);
    const auto m = static_cast<Eigen::Index>(n);
    Matrix l = Matrix::Zero(m * m, m * m);
    for (Eigen::Index y = 0; y < m; ++y)
        for (Eigen::Index x = 0; x < m; ++x)
            for (Eigen::Index k = 0; k < m; ++k) {
                l(x + m * y, k + m * y) += t(x, k);
                l(x + m * y, x + m * k) += t(y, k);
            }
    return l;
}

/// Spectral radius of I + r (T (x) I + I (x) T), from the closed-form spectrum.
inline double heat_radius(std::size_t n, double r) {
    auto mu = [&](std::size_t k) {
        const double s = std::sin(static_cast<double>(k) * std::numbers::pi / (2.0 * static_cast<double>(n + 1)));
        return -4.0 * s * s;
    };
    return std::max(std::abs(1.0 + 2.0 * r * mu(1)), std::abs(1.0 + 2.0 * r * mu(n)));
}

/// A = I + (c^2 dt / h^2) Laplacian, B = delta / h^2 at the node nearest the
/// origin, C = point measurement at the same node. Shapes {n, n}; the GTT
/// form has rank 2 and is exact.
inline MltiSystem heat_system(const HeatConfig& cfg) {
    if (cfg.grid == 0) throw ConfigError("heat grid needs at least one interior point");
    if (!(cfg.c > 0) || !(cfg.dt > 0)) throw ConfigError("diffusivity and time step must be positive");
    const double r = cfg.ratio();
    if (!(r < 1.0)) throw ConfigError("CFL condition violated: c^2 dt / h^2 = " + std::to_string(r) + " >= 1");
    const std::size_t n = cfg.grid;
    const double rho = heat_radius(n, r);
    if (!(rho < 1.0))
        throw StabilityError("explicit step is unstable: spectral radius " + std::to_string(rho) +
                             " (c^2 dt / h^2 = " + std::to_string(r) + ")");

    const Matrix t = second_difference(n);
    const Matrix id = Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    TrainCore a0(1, n * n, 2), a1(2, n * n, 1);
    detail::put_slice(a0, 0, 0, Matrix(id + r * t));
    detail::put_slice(a0, 0, 1, id);
    detail::put_slice(a1, 0, 0, id);
    detail::put_slice(a1, 1, 0, Matrix(r * t));
    const Shape grid{n, n};
    PairedTensorTrain a(TensorTrain({std::move(a0), std::move(a1)}), grid, grid);

    const std::size_t k = detail::nearest_origin(n, cfg.h());
    const double h2 = cfg.h() * cfg.h();
    Matrix e = Matrix::Zero(static_cast<Eigen::Index>(n), 1);
    e(static_cast<Eigen::Index>(k), 0) = 1.0;
    auto b = detail::rank_one({Matrix(e / h2), e});
    auto c = detail::rank_one({Matrix(e.transpose()), Matrix(e.transpose())});
    TrainForm tf{std::move(a), std::move(b), std::move(c)};
    if (n * n > kHeatDenseStates) return {tf.a, tf.b, tf.c};
    DenseForm df{reconstruct(tf.a), reconstruct(tf.b), reconstruct(tf.c)};
    return {std::move(df), std::move(tf)};
}

/// QTT form of a system: every operator train is split by the prime plan.
inline MltiSystem quantize_system(const MltiSystem& sys, double tol) {
    const auto t = sys.train();
    auto q = [&](const PairedTensorTrain& x) {
        return quantize(x, QuantizationPlan::prime(x.row_shape(), x.col_shape()), tol);
    };
    return {q(t.a), q(t.b), q(t.c)};
}

struct RandomSystemConfig {
    std::size_t order = 3;   // cores; 2^order states
    std::size_t rank = 2;    // interior GTT-rank of A
    double margin = 0.5;     // target spectral radius is 1 - margin
    std::uint64_t seed = 0;
    std::size_t inputs = 1;  // carried on the last mode of K
    std::size_t outputs = 1; // carried on the last mode of I
    std::size_t dense_limit = kDenseStabilityLimit;
};

/// Random QTT system with standard-normal cores, A rescaled to the target radius.
inline MltiSystem random_stable_system(const RandomSystemConfig& cfg) {
    if (!(cfg.margin > 0.0 && cfg.margin < 1.0)) throw ConfigError("margin must lie in (0, 1)");
    if (cfg.order == 0 || cfg.rank == 0 || cfg.inputs == 0 || cfg.outputs == 0)
        throw ConfigError("order, rank and channel counts must be positive");
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> g;
    auto train = [&](const Shape& row, const Shape& col, std::size_t rank) {
        std::vector<TrainCore> cores;
        for (std::size_t n = 0; n < row.order(); ++n) {
            const std::size_t r0 = n == 0 ? 1 : rank, r1 = n + 1 == row.order() ? 1 : rank;
            TrainCore c(r0, row[n] * col[n], r1);
            for (auto& v : c.data()) v = g(rng);
            cores.push_back(std::move(c));
        }
        return PairedTensorTrain(TensorTrain(std::move(cores)), row, col);
    };
    const Shape j(std::vector<std::size_t>(cfg.order, 2));
    const Shape k = Shape::ones(cfg.order).with(cfg.order - 1, cfg.inputs);
    const Shape i = Shape::ones(cfg.order).with(cfg.order - 1, cfg.outputs);
    auto a = train(j, j, cfg.rank);
    auto b = train(j, k, 1);
    auto c = train(i, j, 1);
    const double rho = spectral_radius(a, cfg.dense_limit);
    if (rho > 0)
        for (auto& v : a.core(0).data()) v *= (1.0 - cfg.margin) / rho;
    return {std::move(a), std::move(b), std::move(c)};
}

}  // namespace mltt
