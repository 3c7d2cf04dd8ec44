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

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "mltt/dense/tensor.hpp"
#include "mltt/errors.hpp"
#include "mltt/linalg.hpp"

namespace mltt {

inline double inner_product(const DenseTensor& x, const DenseTensor& y) {
    if (x.shape() != y.shape())
        throw DimensionError("inner product of shapes " + x.shape().str() + " and " + y.shape().str());
    return x.vec().dot(y.vec());
}

inline double frobenius_norm(const DenseTensor& x) { return x.vec().norm(); }

inline double frobenius_norm(const PairedTensor& a) {
    return Eigen::Map<const Vector>(a.data().data(), static_cast<Eigen::Index>(a.size())).norm();
}

/// X x_n M: contracts mode n (0-based) of x with the columns of m.
inline DenseTensor mode_n_product(const DenseTensor& x, const Matrix& m, std::size_t n) {
    if (n >= x.order()) throw DimensionError("mode " + std::to_string(n) + " out of range for order " + std::to_string(x.order()));
    const std::size_t jn = x.shape()[n];
    if (static_cast<std::size_t>(m.cols()) != jn)
        throw DimensionError("mode-" + std::to_string(n) + " product: matrix has " + std::to_string(m.cols()) +
                             " columns, mode size is " + std::to_string(jn));
    std::size_t left = 1;
    for (std::size_t k = 0; k < n; ++k) left *= x.shape()[k];
    const std::size_t right = x.size() / (left * jn);
    const auto out_n = static_cast<std::size_t>(m.rows());
    DenseTensor y(x.shape().with(n, out_n));
    const auto L = static_cast<Eigen::Index>(left);
    for (std::size_t r = 0; r < right; ++r) {
        Eigen::Map<const Matrix> xs(x.values().data() + r * left * jn, L, static_cast<Eigen::Index>(jn));
        Eigen::Map<Matrix> ys(y.values().data() + r * left * out_n, L, static_cast<Eigen::Index>(out_n));
        ys.noalias() = xs * m.transpose();
    }
    return y;
}

/// X x {M_1, ..., M_N}.
inline DenseTensor tucker_product(const DenseTensor& x, const std::vector<Matrix>& mats) {
    if (mats.size() != x.order())
        throw DimensionError("Tucker product needs " + std::to_string(x.order()) + " matrices, got " +
                             std::to_string(mats.size()));
    DenseTensor y = x;
    for (std::size_t n = 0; n < mats.size(); ++n) y = mode_n_product(y, mats[n], n);
    return y;
}

namespace detail {

/// Visits every entry of a paired tensor in storage order, passing
/// (flat offset, psi row, psi column).
template <class F>
void for_each_psi_index(const Shape& row, const Shape& col, F&& f) {
    const std::size_t order = row.order();
    const std::size_t total = row.total() * col.total();
    std::vector<std::size_t> sizes(2 * order), strides(2 * order), digit(2 * order, 0);
    std::size_t rs = 1, cs = 1;
    for (std::size_t n = 0; n < order; ++n) {
        sizes[2 * n] = row[n];
        sizes[2 * n + 1] = col[n];
        strides[2 * n] = rs;
        strides[2 * n + 1] = cs;
        rs *= row[n];
        cs *= col[n];
    }
    std::size_t r = 0, c = 0;
    for (std::size_t flat = 0; flat < total; ++flat) {
        f(flat, r, c);
        for (std::size_t d = 0; d < 2 * order; ++d) {
            std::size_t& acc = (d % 2 == 0) ? r : c;
            if (++digit[d] < sizes[d]) {
                acc += strides[d];
                break;
            }
            acc -= strides[d] * (sizes[d] - 1);
            digit[d] = 0;
        }
    }
}

}  // namespace detail

/// psi: R^{J (x) I} -> R^{|J| x |I|}; row = j1 + sum_k j_k prod_{l<k} J_l (0-based),
/// column analogous in I.
inline Matrix psi_unfold(const PairedTensor& a) {
    Matrix m(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
    const double* src = a.data().data();
    detail::for_each_psi_index(a.row_shape(), a.col_shape(), [&](std::size_t flat, std::size_t r, std::size_t c) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = src[flat];
    });
    return m;
}

inline PairedTensor psi_fold(const Eigen::Ref<const Matrix>& m, const Shape& row_shape, const Shape& col_shape) {
    if (static_cast<std::size_t>(m.rows()) != row_shape.total() || static_cast<std::size_t>(m.cols()) != col_shape.total())
        throw DimensionError("psi_fold: matrix " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                             " does not match " + row_shape.str() + " (x) " + col_shape.str());
    PairedTensor a(row_shape, col_shape);
    double* dst = a.values().data();
    detail::for_each_psi_index(row_shape, col_shape, [&](std::size_t flat, std::size_t r, std::size_t c) {
        dst[flat] = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    });
    return a;
}

/// (A * B)_{j (x) i} = sum_k A_{j (x) k} B_{k (x) i}.
inline PairedTensor einstein_product(const PairedTensor& a, const PairedTensor& b) {
    if (a.col_shape() != b.row_shape())
        throw DimensionError("Einstein product: column shape " + a.col_shape().str() + " != row shape " +
                             b.row_shape().str());
    const Matrix p = psi_unfold(a) * psi_unfold(b);
    return psi_fold(p, a.row_shape(), b.col_shape());
}

/// A * X for a plain tensor X in R^I.
inline DenseTensor apply(const PairedTensor& a, const DenseTensor& x) {
    if (a.col_shape() != x.shape())
        throw DimensionError("apply: operator column shape " + a.col_shape().str() + " != state shape " +
                             x.shape().str());
    const Vector y = psi_unfold(a) * x.vec();
    return {a.row_shape(), std::vector<double>(y.data(), y.data() + y.size())};
}

inline PairedTensor u_transpose(const PairedTensor& a) {
    return psi_fold(psi_unfold(a).transpose(), a.col_shape(), a.row_shape());
}

/// Reciprocal condition number below which u_inverse reports singularity.
inline constexpr double kSingularRcond = 1e-13;

inline PairedTensor u_inverse(const PairedTensor& a) {
    if (a.row_shape() != a.col_shape())
        throw DimensionError("U-inverse needs a square paired tensor, got " + a.row_shape().str() + " (x) " +
                             a.col_shape().str());
    const Matrix m = psi_unfold(a);
    Eigen::PartialPivLU<Matrix> lu(m);
    const double rcond = lu.rcond();
    if (!(rcond > kSingularRcond))
        throw SingularityError("U-inverse: unfolding is singular (rcond estimate " + std::to_string(rcond) + ")");
    return psi_fold(lu.inverse(), a.row_shape(), a.col_shape());
}

/// Number of singular values of psi(a) above tol * sigma_max. tol = 0 uses the
/// usual max(m, n) * eps floor.
inline std::size_t unfolding_rank(const PairedTensor& a, double tol) {
    if (tol < 0) throw ConfigError("unfolding_rank: tolerance must be non-negative");
    const Matrix m = psi_unfold(a);
    const Vector s = linalg::singular_values(m);
    if (s.size() == 0 || s[0] == 0.0) return 0;
    const double floor = static_cast<double>(std::max(m.rows(), m.cols())) * Eigen::NumTraits<double>::epsilon();
    const double cut = std::max(tol, floor) * s[0];
    std::size_t r = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s[k] > cut) ++r;
    return r;
}

}  // namespace mltt
