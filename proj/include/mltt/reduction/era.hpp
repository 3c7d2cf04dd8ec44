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

#include <cstddef>
#include <string>
#include <vector>

#include "mltt/dense/blocks.hpp"
#include "mltt/dense/tensor.hpp"
#include "mltt/errors.hpp"
#include "mltt/reduction/model.hpp"
#include "mltt/tt/algebra.hpp"
#include "mltt/tt/decompose.hpp"

namespace mltt {

/// Generalized Hankel tensors built from Markov parameters Z_k (I (x) K).
struct HankelPair {
    PairedTensor h;   // block (l, t) = Z_{l+t}
    PairedTensor h1;  // block (l, t) = Z_{l+t+1}
};

namespace detail {

inline void check_markov(const std::vector<PairedTensor>& z, std::size_t need) {
    if (z.size() < need)
        throw ConfigError("need at least " + std::to_string(need) + " Markov parameters, got " +
                          std::to_string(z.size()));
    for (const auto& x : z)
        if (x.row_shape() != z[0].row_shape() || x.col_shape() != z[0].col_shape())
            throw DimensionError("Markov parameters must share one shape");
}

inline PairedTensor hankel_of(const std::vector<PairedTensor>& z, std::size_t shift, std::size_t t_horizon,
                              std::size_t l_horizon, const Factorization& ft, const Factorization& fl) {
    std::vector<PairedTensor> rows;
    rows.reserve(l_horizon + 1);
    for (std::size_t l = 0; l <= l_horizon; ++l) {
        std::vector<PairedTensor> blocks(z.begin() + static_cast<std::ptrdiff_t>(l + shift),
                                         z.begin() + static_cast<std::ptrdiff_t>(l + shift + t_horizon + 1));
        rows.push_back(block_row(blocks, ft));
    }
    return block_col(rows, fl);
}

}  // namespace detail

/// Pads a paired tensor with trailing singleton modes; psi is unchanged.
inline PairedTensor promote(const PairedTensor& z, std::size_t order) {
    if (order < z.order()) throw DimensionError("cannot lower the order of a paired tensor");
    auto row = z.row_shape().values(), col = z.col_shape().values();
    row.resize(order, 1);
    col.resize(order, 1);
    return {Shape(row), Shape(col), z.data()};
}

inline HankelPair hankel_tensors(const std::vector<PairedTensor>& z, std::size_t t_horizon, std::size_t l_horizon,
                                 const Factorization& ft, const Factorization& fl) {
    detail::check_markov(z, t_horizon + l_horizon + 2);
    const std::size_t order = z[0].order();
    if (ft.order() != order || fl.order() != order)
        throw ConfigError("horizon factorizations must have " + std::to_string(order) + " modes");
    if (ft.total() != t_horizon + 1 || fl.total() != l_horizon + 1)
        throw ConfigError("horizon factorizations " + ft.str() + ", " + fl.str() + " do not match T = " +
                          std::to_string(t_horizon) + ", L = " + std::to_string(l_horizon));
    return {detail::hankel_of(z, 0, t_horizon, l_horizon, ft, fl), detail::hankel_of(z, 1, t_horizon, l_horizon, ft, fl)};
}

/// Higher-order ERA: rank-S ETSVD of the generalized Hankel tensor, then
/// A_r = S^{-1/2} U^T H1 V S^{-1/2}, B_r = S^{-1/2} U^T Col_0(H), C_r = Row_0(H) V S^{-1/2}.
inline ReducedModel hoera(const std::vector<PairedTensor>& z, std::size_t t_horizon, std::size_t l_horizon,
                          const Factorization& ft, const Factorization& fl, std::size_t order,
                          const ReductionConfig& cfg = {}) {
    const auto hp = hankel_tensors(z, t_horizon, l_horizon, ft, fl);
    const auto f = detail::hankel_factors(gtt_decompose(hp.h, cfg.decompose_tol), order, cfg.etsvd_tol);
    ReducedModel out;
    out.input_shape = z[0].col_shape();
    out.output_shape = z[0].row_shape();
    out.sigma = f.sigma;
    out.all_sigma = f.all_sigma;
    out.method = Method::hoera;
    if (order == 0) {
        out.m = {Matrix(0, 0), Matrix(0, static_cast<Eigen::Index>(out.input_shape.total())),
                 Matrix(static_cast<Eigen::Index>(out.output_shape.total()), 0)};
        return out;
    }
    const auto ut = tt_transpose(f.left);
    const auto h1 = gtt_decompose(hp.h1, cfg.decompose_tol);
    const auto col0 = gtt_decompose(extract_block(hp.h, 0, ft, out.input_shape), cfg.decompose_tol);
    const auto row0 = gtt_decompose(extract_block_col(hp.h, 0, fl, out.output_shape), cfg.decompose_tol);
    out.m.a = einstein_to_dense(ut, tt_einstein(h1, f.right));
    out.m.b = einstein_to_dense(ut, col0);
    out.m.c = einstein_to_dense(row0, f.right);
    return out;
}

/// Same, with all-2 horizon factorizations over the Markov order.
inline ReducedModel hoera(const std::vector<PairedTensor>& z, std::size_t t_horizon, std::size_t l_horizon,
                          std::size_t order, const ReductionConfig& cfg = {}) {
    if (z.empty()) throw ConfigError("no Markov parameters");
    const std::size_t n = z[0].order();
    return hoera(z, t_horizon, l_horizon, binary_factorization(t_horizon + 1, n), binary_factorization(l_horizon + 1, n),
                 order, cfg);
}

/// First differences of a step response: dZ_k = Z_{k+1} - Z_k.
inline std::vector<PairedTensor> step_to_impulse(const std::vector<PairedTensor>& steps) {
    if (steps.size() < 2) throw ConfigError("step response needs at least two samples");
    std::vector<PairedTensor> out;
    out.reserve(steps.size() - 1);
    for (std::size_t k = 1; k < steps.size(); ++k) out.push_back(steps[k] - steps[k - 1]);
    return out;
}

}  // namespace mltt
