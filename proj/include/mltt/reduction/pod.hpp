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

#include "mltt/dense/algebra.hpp"
#include "mltt/errors.hpp"
#include "mltt/reduction/model.hpp"
#include "mltt/system.hpp"
#include "mltt/tt/algebra.hpp"
#include "mltt/tt/blocks.hpp"

namespace mltt {

/// Snapshot block tensor |X_0 X_1 ... X_T| with X_t = A^t * B, J (x) K T.
struct SnapshotTensor {
    PairedTensorTrain data;
    std::size_t horizon = 0;
    Factorization fact;
};

namespace detail {

inline void check_horizon(std::size_t horizon, const Factorization& fact, std::size_t order) {
    if (fact.order() != order)
        throw ConfigError("horizon factorization " + fact.str() + " must have " + std::to_string(order) + " modes");
    if (fact.total() != horizon + 1)
        throw ConfigError("horizon factorization " + fact.str() + " does not multiply to " +
                          std::to_string(horizon + 1));
}

}  // namespace detail

/// Default horizon factorization: powers of two dealt round-robin over the modes.
inline Factorization default_horizon(std::size_t horizon, std::size_t order) {
    return binary_factorization(horizon + 1, order);
}

/// Impulse responses of every input channel over t = 0 .. T.
inline SnapshotTensor impulse_snapshots(const MltiSystem& sys, std::size_t horizon, const Factorization& fact,
                                        double round_tol = 1e-13) {
    detail::check_horizon(horizon, fact, sys.order());
    const auto t = sys.train();
    std::vector<PairedTensorTrain> blocks;
    blocks.reserve(horizon + 1);
    PairedTensorTrain x = t.b;
    for (std::size_t k = 0; k <= horizon; ++k) {
        blocks.push_back(x);
        if (k < horizon) x = tt_round(tt_einstein(t.a, x), round_tol);
    }
    return {block_tt_row(blocks, fact, round_tol), horizon, fact};
}

/// Impulse responses of the adjoint system (A^T, C^T); J (x) I L.
inline SnapshotTensor adjoint_snapshots(const MltiSystem& sys, std::size_t horizon, const Factorization& fact,
                                        double round_tol = 1e-13) {
    return impulse_snapshots(sys.dual(), horizon, fact, round_tol);
}

/// W ~= X * X^T.
inline PairedTensor empirical_gramian(const SnapshotTensor& snap, std::size_t budget = kDefaultDenseBudget) {
    const auto& x = snap.data;
    return psi_fold(einstein_to_dense(x, tt_transpose(x), budget), x.row_shape(), x.row_shape());
}

/// Higher-order balanced POD from forward snapshots X and adjoint snapshots Y.
inline ReducedModel hobpod(const MltiSystem& sys, const SnapshotTensor& forward, const SnapshotTensor& adjoint,
                           std::size_t order, const ReductionConfig& cfg = {}) {
    if (forward.data.row_shape() != sys.state_shape() || adjoint.data.row_shape() != sys.state_shape())
        throw DimensionError("snapshot rows do not match the state shape " + sys.state_shape().str());
    return detail::balance(sys.train(), adjoint.data, forward.data, order, cfg, Method::hobpod);
}

}  // namespace mltt
