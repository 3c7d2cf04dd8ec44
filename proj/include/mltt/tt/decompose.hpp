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

#include "mltt/dense/algebra.hpp"
#include "mltt/dense/tensor.hpp"
#include "mltt/linalg.hpp"
#include "mltt/tt/algebra.hpp"
#include "mltt/tt/train.hpp"

namespace mltt {

namespace detail {

/// Sequential SVD of an array of shape (r_left, n_1, ..., n_d, r_right),
/// dropping singular tails below `delta` (absolute) at each step.
inline std::vector<TrainCore> split_sequential(const double* values, std::size_t r_left,
                                               const std::vector<std::size_t>& sizes, std::size_t r_right,
                                               double delta, std::size_t max_rank = 0) {
    std::vector<TrainCore> cores;
    const std::size_t d = sizes.size();
    std::size_t rest = r_right;
    for (auto s : sizes) rest *= s;
    Matrix c = Eigen::Map<const Matrix>(values, static_cast<Eigen::Index>(r_left),
                                        static_cast<Eigen::Index>(rest));
    std::size_t r = r_left;
    for (std::size_t k = 0; k + 1 < d; ++k) {
        const std::size_t rows = r * sizes[k];
        const std::size_t cols = static_cast<std::size_t>(c.size()) / rows;
        Eigen::Map<const Matrix> m(c.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        auto f = linalg::svd(m);
        const std::size_t keep = linalg::truncation_rank(f.s, delta, max_rank);
        const auto kk = static_cast<Eigen::Index>(keep);
        cores.emplace_back(r, sizes[k], keep, Matrix(f.u.leftCols(kk)));
        c = f.s.head(kk).asDiagonal() * f.v.leftCols(kk).transpose();
        r = keep;
    }
    cores.emplace_back(r, sizes[d - 1], r_right, c);
    return cores;
}

inline double frobenius(const std::vector<double>& v) {
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())).norm();
}

/// Per-step absolute threshold for a relative tolerance spread over `steps` SVDs.
inline double sweep_delta(double tol, std::size_t steps, double norm) {
    if (tol < 0) throw ConfigError("tolerance must be non-negative");
    const double per = steps > 0 ? tol / std::sqrt(static_cast<double>(steps)) : tol;
    return std::max(per, linalg::kExactTol) * norm;
}

}  // namespace detail

/// TT-SVD. tol is relative to the Frobenius norm of x.
inline TensorTrain tt_decompose(const DenseTensor& x, double tol, std::size_t max_rank = 0) {
    const std::size_t d = x.order();
    if (d == 0) throw DimensionError("cannot decompose an order-0 tensor");
    const double delta = detail::sweep_delta(tol, d - 1, detail::frobenius(x.data()));
    return TensorTrain(detail::split_sequential(x.data().data(), 1, x.shape().values(), 1, delta, max_rank));
}

/// GTTD: TT-SVD of the interleaved pair view.
inline PairedTensorTrain gtt_decompose(const PairedTensor& a, double tol, std::size_t max_rank = 0) {
    DenseTensor flat(Shape(a.pair_sizes()), a.data());
    return {tt_decompose(flat, tol, max_rank), a.row_shape(), a.col_shape()};
}

/// Per-mode factor lists J_n = J_n1 J_n2 ... and I_n = I_n1 I_n2 ...; the row
/// and column lists of one mode are padded with 1s to a common length.
struct QuantizationPlan {
    std::vector<std::vector<std::size_t>> row_factors;
    std::vector<std::vector<std::size_t>> col_factors;

    /// Prime factorization of every mode (2s for powers of two).
    static QuantizationPlan prime(const Shape& row, const Shape& col) {
        QuantizationPlan p;
        for (auto j : row) p.row_factors.push_back(prime_factors(j));
        for (auto i : col) p.col_factors.push_back(prime_factors(i));
        return p;
    }

    static std::vector<std::size_t> prime_factors(std::size_t n) {
        std::vector<std::size_t> f;
        for (std::size_t q = 2; q * q <= n; ++q)
            while (n % q == 0) {
                f.push_back(q);
                n /= q;
            }
        if (n > 1 || f.empty()) f.push_back(n);
        return f;
    }

    /// Checks the plan against the shapes and returns the padded per-core
    /// (row, col) sizes of the quantized train.
    std::pair<Shape, Shape> quantized_shapes(const Shape& row, const Shape& col) const {
        if (row_factors.size() != row.order() || col_factors.size() != col.order())
            throw ConfigError("quantization plan covers " + std::to_string(row_factors.size()) + " modes, tensor has " +
                              std::to_string(row.order()));
        std::vector<std::size_t> qr, qc;
        for (std::size_t n = 0; n < row.order(); ++n) {
            auto rf = row_factors[n], cf = col_factors[n];
            if (product(rf) != row[n] || product(cf) != col[n])
                throw ConfigError("quantization factors of mode " + std::to_string(n) + " do not multiply to " +
                                  std::to_string(row[n]) + "x" + std::to_string(col[n]));
            const std::size_t m = std::max(rf.size(), cf.size());
            rf.resize(m, 1);
            cf.resize(m, 1);
            qr.insert(qr.end(), rf.begin(), rf.end());
            qc.insert(qc.end(), cf.begin(), cf.end());
        }
        return {Shape(qr), Shape(qc)};
    }

    /// Number of quantized cores contributed by mode n.
    std::size_t cores_of(std::size_t n) const { return std::max(row_factors.at(n).size(), col_factors.at(n).size()); }

private:
    static std::size_t product(const std::vector<std::size_t>& v) {
        std::size_t p = 1;
        for (auto x : v) {
            if (x == 0) throw ConfigError("quantization factors must be positive");
            p *= x;
        }
        return p;
    }
};

/// QTTD: GTTD of the reshaped tensor. psi is invariant under the reshape, so
/// the reshaped paired tensor is a re-fold of the same unfolding.
inline PairedTensorTrain quantize(const PairedTensor& a, const QuantizationPlan& plan, double tol,
                                  std::size_t max_rank = 0) {
    auto [qr, qc] = plan.quantized_shapes(a.row_shape(), a.col_shape());
    return gtt_decompose(psi_fold(psi_unfold(a), qr, qc), tol, max_rank);
}

/// QTTD of a train: every GTT core is reshaped and split by a local TT-SVD.
/// The sweep keeps the orthogonality center on the core being split, so the
/// per-split truncations are measured against the norm of the whole train.
inline PairedTensorTrain quantize(const PairedTensorTrain& a, const QuantizationPlan& plan, double tol) {
    auto [qr, qc] = plan.quantized_shapes(a.row_shape(), a.col_shape());
    TensorTrain src = a.train();
    right_orthonormalize(src, 0);
    const double norm = detail::frobenius(src.core(0).data());
    const std::size_t splits = std::max<std::size_t>(qr.order() - a.order(), 1);
    const double delta = detail::sweep_delta(tol, splits, norm);
    std::vector<TrainCore> cores;
    std::size_t q = 0;
    for (std::size_t n = 0; n < a.order(); ++n) {
        const auto& c = src.core(n);
        const std::size_t m = plan.cores_of(n);
        std::vector<std::size_t> rsz(qr.values().begin() + q, qr.values().begin() + q + m);
        std::vector<std::size_t> csz(qc.values().begin() + q, qc.values().begin() + q + m);
        const std::size_t jn = a.row_shape()[n], in = a.col_shape()[n];
        std::vector<std::size_t> merged(m);
        for (std::size_t t = 0; t < m; ++t) merged[t] = rsz[t] * csz[t];
        // (r0, j + J i, r1) -> (r0, j_1 + J_1 i_1, ..., j_m + J_m i_m, r1).
        std::vector<double> buf(c.size());
        for (std::size_t i = 0; i < in; ++i)
            for (std::size_t j = 0; j < jn; ++j) {
                const auto jd = unravel(j, rsz), id = unravel(i, csz);
                std::vector<std::size_t> md(m);
                for (std::size_t t = 0; t < m; ++t) md[t] = jd[t] + rsz[t] * id[t];
                const std::size_t mid = ravel(md, merged);
                for (std::size_t b = 0; b < c.r1(); ++b)
                    for (std::size_t a0 = 0; a0 < c.r0(); ++a0)
                        buf[a0 + c.r0() * (mid + (jn * in) * b)] = c(a0, j + jn * i, b);
            }
        auto part = detail::split_sequential(buf.data(), c.r0(), merged, c.r1(), delta);
        if (n + 1 < a.order()) {
            auto& last = part.back();
            auto f = linalg::qr(last.left());
            const std::size_t r = static_cast<std::size_t>(f.q.cols());
            last = TrainCore(last.r0(), last.n(), r, f.q);
            auto& next = src.core(n + 1);
            Matrix nr = f.r * next.right();
            next = TrainCore(r, next.n(), next.r1(), nr);
        }
        for (auto& p : part) cores.push_back(std::move(p));
        q += m;
    }
    return {TensorTrain(std::move(cores)), qr, qc};
}

}  // namespace mltt
