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
#include "mltt/tt/train.hpp"

namespace mltt {

/// Splits every 4-way GTT core (r0, J, I, r1) into (r0, J, r) and (r, I, r1)
/// by an economy SVD; the result is the TT of the interleaved tensor
/// (j1, i1, ..., jN, iN). tol is relative to each core's norm.
inline TensorTrain gtt_to_tt(const PairedTensorTrain& a, double tol = 0.0) {
    if (tol < 0) throw ConfigError("gtt_to_tt: tolerance must be non-negative");
    std::vector<TrainCore> cores;
    for (std::size_t n = 0; n < a.order(); ++n) {
        const auto& c = a.core(n);
        const std::size_t J = a.row_shape()[n], I = a.col_shape()[n];
        Eigen::Map<const Matrix> m(c.data().data(), static_cast<Eigen::Index>(c.r0() * J),
                                   static_cast<Eigen::Index>(I * c.r1()));
        auto f = linalg::svd(m);
        const double delta = std::max(tol, linalg::kExactTol) * f.s.norm();
        const std::size_t r = linalg::truncation_rank(f.s, delta);
        const auto rr = static_cast<Eigen::Index>(r);
        cores.emplace_back(c.r0(), J, r, Matrix(f.u.leftCols(rr)));
        cores.emplace_back(r, I, c.r1(), Matrix(f.s.head(rr).asDiagonal() * f.v.leftCols(rr).transpose()));
    }
    return TensorTrain(std::move(cores));
}

namespace detail {

/// Exchanges the modes of cores k and k+1 through one SVD. The center must be
/// inside the pair on entry; it stays on core k (U S) on exit, core k+1 becomes
/// right-orthonormal.
inline void swap_adjacent(TensorTrain& t, std::size_t k, double delta) {
    const auto& x = t.core(k);
    const auto& y = t.core(k + 1);
    const std::size_t r0 = x.r0(), a = x.n(), b = y.n(), r2 = y.r1();
    // W(r0, a, b, r2) = X.left * Y.right.
    Matrix w = x.left() * y.right();
    // Permute to (r0, b) x (a, r2).
    Matrix p(static_cast<Eigen::Index>(r0 * b), static_cast<Eigen::Index>(a * r2));
    for (std::size_t s = 0; s < r2; ++s)
        for (std::size_t jb = 0; jb < b; ++jb)
            for (std::size_t ja = 0; ja < a; ++ja)
                for (std::size_t r = 0; r < r0; ++r)
                    p(static_cast<Eigen::Index>(r + r0 * jb), static_cast<Eigen::Index>(ja + a * s)) =
                        w(static_cast<Eigen::Index>(r + r0 * ja), static_cast<Eigen::Index>(jb + b * s));
    auto f = linalg::svd(p);
    const std::size_t r = linalg::truncation_rank(f.s, delta);
    const auto rr = static_cast<Eigen::Index>(r);
    Matrix us = f.u.leftCols(rr) * f.s.head(rr).asDiagonal();
    Matrix vt = f.v.leftCols(rr).transpose();
    t.core(k) = TrainCore(r0, b, r, us);
    t.core(k + 1) = TrainCore(r, a, r2, vt);
}

}  // namespace detail

/// Reorders the modes of a 2N-core interleaved train (j1, i1, ..., jN, iN) to
/// (j1, ..., jN, i1, ..., iN) by N(N-1)/2 adjacent swaps. Each swap drops a
/// singular tail of at most tol / sqrt(#swaps) relative to the train norm.
inline TensorTrain tt_to_nptt(const TensorTrain& t, double tol = 0.0) {
    if (tol < 0) throw ConfigError("tt_to_nptt: tolerance must be non-negative");
    if (t.order() % 2 != 0)
        throw DimensionError("tt_to_nptt needs an even core count, got " + std::to_string(t.order()));
    const std::size_t n = t.order() / 2;
    TensorTrain x = t;
    if (n <= 1) return x;
    const std::size_t swaps = n * (n - 1) / 2;
    right_orthonormalize(x, 0);
    const double norm = Eigen::Map<const Vector>(x.core(0).data().data(), static_cast<Eigen::Index>(x.core(0).size())).norm();
    const double delta = std::max(tol / std::sqrt(static_cast<double>(swaps)), linalg::kExactTol) * norm;
    std::size_t center = 0;
    for (std::size_t m = 1; m < n; ++m) {
        // j_m sits at position 2m; bring the center to 2m - 1 first.
        left_orthonormalize(x, 2 * m - 1, center);
        // After each swap the center is on core k, inside the next pair.
        for (std::size_t k = 2 * m - 1; k + 1 > m; --k) detail::swap_adjacent(x, k, delta);
        center = m;
    }
    return x;
}

}  // namespace mltt
