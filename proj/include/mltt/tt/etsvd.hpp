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

#include "mltt/errors.hpp"
#include "mltt/linalg.hpp"
#include "mltt/tt/algebra.hpp"
#include "mltt/tt/blocks.hpp"
#include "mltt/tt/nptt.hpp"
#include "mltt/tt/train.hpp"

namespace mltt {

/// Singular values at or below this fraction of sigma_1 are treated as zero.
inline constexpr double kRankFloor = 1e-13;

struct SingularTriple {
    double sigma = 0;
    TensorTrain left;   // over J
    TensorTrain right;  // over I
};

/// A ~= U * S * V^T. U is the mode row block train J (x) {1, ..., 1, R}
/// (block index on the last core, where the pivot SVD leaves it); V is
/// I (x) {R, 1, ..., 1} (block index on the first core of the right half).
struct Etsvd {
    Vector sigma;
    PairedTensorTrain u;
    PairedTensorTrain v;

    std::size_t rank() const { return static_cast<std::size_t>(sigma.size()); }

    Factorization u_factorization() const { return last_mode(u.order(), rank()); }
    Factorization v_factorization() const { return first_mode(v.order(), rank()); }

    SingularTriple triple(std::size_t k) const {
        if (k >= rank()) throw DimensionError("singular triple " + std::to_string(k) + " out of range");
        return {sigma[static_cast<Eigen::Index>(k)], block_tt_extract(u, k, u_factorization()).as_vector(),
                block_tt_extract(v, k, v_factorization()).as_vector()};
    }

    std::vector<SingularTriple> triples() const {
        std::vector<SingularTriple> out;
        for (std::size_t k = 0; k < rank(); ++k) out.push_back(triple(k));
        return out;
    }

    static Factorization last_mode(std::size_t order, std::size_t r) {
        std::vector<std::size_t> f(order, 1);
        f.back() = r;
        return Factorization(std::move(f));
    }
    static Factorization first_mode(std::size_t order, std::size_t r) {
        std::vector<std::size_t> f(order, 1);
        f.front() = r;
        return Factorization(std::move(f));
    }
};

/// Economy TSVD in train form: NPTT conversion, orthonormalization around the
/// pair boundary, and one SVD of the pivot core's left unfolding. tol is
/// relative; it bounds both the NPTT conversion and the discarded sigma tail.
/// max_rank = 0 keeps every retained triple.
inline Etsvd etsvd(const PairedTensorTrain& a, double tol = 0.0, std::size_t max_rank = 0) {
    if (tol < 0) throw ConfigError("etsvd: tolerance must be non-negative");
    const std::size_t n = a.order();
    TensorTrain x = tt_to_nptt(gtt_to_tt(a), tol);
    const std::size_t pivot = n - 1;
    if (pivot > 0) left_orthonormalize(x, pivot);
    right_orthonormalize(x, pivot);
    const auto& pc = x.core(pivot);
    auto f = linalg::svd(pc.left());
    std::size_t r = linalg::truncation_rank(f.s, tol * f.s.norm(), max_rank);
    while (r > 0 && !(f.s[static_cast<Eigen::Index>(r - 1)] > kRankFloor * f.s[0])) --r;

    Etsvd out;
    out.sigma = f.s.head(static_cast<Eigen::Index>(r));
    if (r == 0) return out;
    const auto rr = static_cast<Eigen::Index>(r);

    // Left factor: cores 0..pivot-1 unchanged, pivot core carries U.
    std::vector<TrainCore> ucores;
    for (std::size_t k = 0; k < pivot; ++k) ucores.push_back(x.core(k));
    ucores.emplace_back(pc.r0(), pc.n() * r, 1, Matrix(f.u.leftCols(rr)));
    std::vector<std::size_t> ucol(n, 1);
    ucol.back() = r;
    out.u = PairedTensorTrain(TensorTrain(std::move(ucores)), a.row_shape(), Shape(ucol));

    // Right factor: V^T absorbed into core N, block index moved into the column slot.
    const auto& first = x.core(n);
    Matrix vt = f.v.leftCols(rr).transpose() * first.right();  // r x (I_1 r')
    const std::size_t i1 = first.n(), rnext = first.r1();
    TrainCore v0(1, i1 * r, rnext);
    for (std::size_t b = 0; b < rnext; ++b)
        for (std::size_t k = 0; k < r; ++k)
            for (std::size_t i = 0; i < i1; ++i)
                v0(0, i + i1 * k, b) = vt(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i + i1 * b));
    std::vector<TrainCore> vcores;
    vcores.push_back(std::move(v0));
    for (std::size_t k = n + 1; k < 2 * n; ++k) vcores.push_back(x.core(k));
    std::vector<std::size_t> vcol(n, 1);
    vcol.front() = r;
    out.v = PairedTensorTrain(TensorTrain(std::move(vcores)), a.col_shape(), Shape(vcol));
    return out;
}

/// Symmetry tolerance for U-eigendecompositions, relative to the norm.
inline constexpr double kSymmetryTol = 1e-8;

struct UEigen {
    Vector values;             // descending, non-negative
    PairedTensorTrain vectors; // J (x) {1, ..., 1, R}

    Factorization factorization() const { return Etsvd::last_mode(vectors.order(), static_cast<std::size_t>(values.size())); }
};

/// U-eigendecomposition of a weakly symmetric U-positive-semidefinite train,
/// read off the ETSVD (left and right singular tensors coincide).
inline UEigen u_eigendecompose_psd(const PairedTensorTrain& a, double tol = 0.0, std::size_t max_rank = 0) {
    if (a.row_shape() != a.col_shape())
        throw DimensionError("U-eigendecomposition needs a square paired train");
    const double na = tt_norm(a);
    const double asym = tt_norm(tt_sub(a, tt_transpose(a)));
    if (asym > kSymmetryTol * std::max(na, 1e-300))
        throw ConfigError("tensor is not weakly symmetric (relative asymmetry " + std::to_string(asym / na) + ")");
    auto s = etsvd(a, tol, max_rank);
    return {s.sigma, s.u};
}

}  // namespace mltt
