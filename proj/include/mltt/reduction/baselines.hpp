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
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "mltt/errors.hpp"
#include "mltt/linalg.hpp"
#include "mltt/lyapunov.hpp"
#include "mltt/reduction/model.hpp"
#include "mltt/system.hpp"

namespace mltt {

// Plain matrix versions of the reductions, used as reference implementations.

namespace detail {

inline ReducedModel matrix_model(Method method, std::size_t inputs, std::size_t outputs) {
    ReducedModel out;
    out.method = method;
    out.input_shape = Shape{inputs};
    out.output_shape = Shape{outputs};
    out.m = {Matrix(0, 0), Matrix(0, static_cast<Eigen::Index>(inputs)), Matrix(static_cast<Eigen::Index>(outputs), 0)};
    return out;
}

/// Z with Z Z^T ~= W for a symmetric PSD W by pivoted Cholesky, stopped once
/// the largest remaining diagonal falls below kRankFloor times the largest
/// diagonal of W.
inline Matrix psd_factor(const Matrix& w) {
    const Eigen::Index n = w.rows();
    Vector d = w.diagonal();
    const double top = n ? std::max(d.maxCoeff(), 0.0) : 0.0;
    std::vector<Vector> cols;
    while (static_cast<Eigen::Index>(cols.size()) < n) {
        Eigen::Index p = 0;
        const double dp = d.maxCoeff(&p);
        if (!(dp > kRankFloor * top)) break;
        Vector c = w.col(p);
        for (const auto& l : cols) c -= l[p] * l;
        c /= std::sqrt(dp);
        d -= c.cwiseAbs2();
        d[p] = 0.0;
        cols.push_back(std::move(c));
    }
    Matrix z(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) z.col(static_cast<Eigen::Index>(k)) = cols[k];
    return z;
}

/// Square-root balancing from factors L (n x o) and R (n x c) of the two gramians.
inline ReducedModel matrix_balance(const MatrixSystem& sys, const Matrix& l, const Matrix& r, std::size_t order,
                                   Method method) {
    auto out = matrix_model(method, sys.inputs(), sys.outputs());
    const Matrix h = l.transpose() * r;
    auto f = linalg::svd(h);
    Vector s = f.s;
    std::size_t keep = 0;
    while (keep < static_cast<std::size_t>(s.size()) && s[static_cast<Eigen::Index>(keep)] > kRankFloor * s[0]) ++keep;
    out.all_sigma = s.head(static_cast<Eigen::Index>(keep));
    check_order(out.all_sigma, order);
    out.sigma = s.head(static_cast<Eigen::Index>(order));
    if (order == 0) return out;
    const auto k = static_cast<Eigen::Index>(order);
    const Vector w = s.head(k).cwiseSqrt().cwiseInverse();
    const Matrix p = r * f.v.leftCols(k) * w.asDiagonal();
    const Matrix q = l * f.u.leftCols(k) * w.asDiagonal();
    out.m = {q.transpose() * sys.a * p, q.transpose() * sys.b, sys.c * p};
    return out;
}

}  // namespace detail

/// Dense squared Smith iteration for X - A X A^T = B: X <- X + A_k X A_k^T,
/// A_k <- A_k^2, until the update is below machine precision relative to X.
/// Divergence means rho(A) >= 1.
inline Matrix stein_doubling(const Matrix& a, const Matrix& b, std::size_t max_doublings = 64) {
    if (a.rows() != a.cols() || b.rows() != a.rows() || b.cols() != a.rows())
        throw DimensionError("Stein equation shape mismatch");
    Matrix x = b, ak = a;
    for (std::size_t k = 0; k < max_doublings; ++k) {
        const Matrix step = ak * x * ak.transpose();
        x += step;
        const double nx = x.norm();
        if (!std::isfinite(nx)) break;
        if (step.norm() <= 1e-16 * nx) return x;
        ak = ak * ak;
    }
    throw StabilityError("dense Smith doubling diverged; the operator is not stable");
}

/// Matrix balanced truncation: doubling gramians, pivoted-Cholesky factors,
/// square-root balancing.
inline ReducedModel bt_matrix(const MatrixSystem& sys, std::size_t order) {
    const Matrix wr = stein_doubling(sys.a, sys.b * sys.b.transpose());
    const Matrix wo = stein_doubling(sys.a.transpose(), sys.c.transpose() * sys.c);
    return detail::matrix_balance(sys, detail::psd_factor(wo), detail::psd_factor(wr), order, Method::bt);
}

/// [B, A B, ..., A^T B].
inline Matrix krylov_matrix(const Matrix& a, const Matrix& b, std::size_t horizon) {
    Matrix x(a.rows(), b.cols() * static_cast<Eigen::Index>(horizon + 1));
    Matrix p = b;
    for (std::size_t t = 0; t <= horizon; ++t) {
        x.middleCols(b.cols() * static_cast<Eigen::Index>(t), b.cols()) = p;
        if (t < horizon) p = a * p;
    }
    return x;
}

/// Matrix balanced POD from impulse and adjoint snapshot matrices.
inline ReducedModel bpod_matrix(const MatrixSystem& sys, std::size_t t_horizon, std::size_t l_horizon,
                                std::size_t order) {
    const Matrix x = krylov_matrix(sys.a, sys.b, t_horizon);
    const Matrix y = krylov_matrix(sys.a.transpose(), sys.c.transpose(), l_horizon);
    return detail::matrix_balance(sys, y, x, order, Method::bpod);
}

/// Standard ERA on Markov matrices M_k (p x m).
inline ReducedModel era_matrix(const std::vector<Matrix>& markov, std::size_t t_horizon, std::size_t l_horizon,
                               std::size_t order) {
    if (markov.size() < t_horizon + l_horizon + 2)
        throw ConfigError("need at least " + std::to_string(t_horizon + l_horizon + 2) + " Markov parameters, got " +
                          std::to_string(markov.size()));
    const Eigen::Index p = markov[0].rows(), m = markov[0].cols();
    const auto rows = p * static_cast<Eigen::Index>(l_horizon + 1), cols = m * static_cast<Eigen::Index>(t_horizon + 1);
    Matrix h(rows, cols), h1(rows, cols);
    for (std::size_t l = 0; l <= l_horizon; ++l)
        for (std::size_t t = 0; t <= t_horizon; ++t) {
            h.block(p * static_cast<Eigen::Index>(l), m * static_cast<Eigen::Index>(t), p, m) = markov[l + t];
            h1.block(p * static_cast<Eigen::Index>(l), m * static_cast<Eigen::Index>(t), p, m) = markov[l + t + 1];
        }
    auto out = detail::matrix_model(Method::era, static_cast<std::size_t>(m), static_cast<std::size_t>(p));
    auto f = linalg::svd(h);
    std::size_t keep = 0;
    while (keep < static_cast<std::size_t>(f.s.size()) && f.s[static_cast<Eigen::Index>(keep)] > kRankFloor * f.s[0])
        ++keep;
    out.all_sigma = f.s.head(static_cast<Eigen::Index>(keep));
    detail::check_order(out.all_sigma, order);
    out.sigma = f.s.head(static_cast<Eigen::Index>(order));
    if (order == 0) return out;
    const auto k = static_cast<Eigen::Index>(order);
    const Vector w = f.s.head(k).cwiseSqrt().cwiseInverse();
    const Matrix ut = w.asDiagonal() * f.u.leftCols(k).transpose();
    const Matrix v = f.v.leftCols(k) * w.asDiagonal();
    out.m = {ut * h1 * v, ut * h.leftCols(m), h.topRows(p) * v};
    return out;
}

}  // namespace mltt
