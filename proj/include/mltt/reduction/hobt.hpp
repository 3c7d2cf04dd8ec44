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
#include <string>
#include <vector>

#include "mltt/errors.hpp"
#include "mltt/lyapunov.hpp"
#include "mltt/reduction/model.hpp"
#include "mltt/system.hpp"
#include "mltt/tt/etsvd.hpp"

namespace mltt {

/// Gramian factor Z with Z * Z^T ~= W; Z is J (x) {1, ..., 1, R}.
struct GramianFactor {
    PairedTensorTrain z;
    Vector eigenvalues;
    double residual = 0.0;  // of the underlying Lyapunov solve
};

namespace detail {

inline GramianFactor gramian_factor(const LyapSolveReport& rep, double tol, const char* which) {
    if (!rep.converged)
        throw ConvergenceError(std::string(which) + " gramian did not converge (residual " +
                               std::to_string(rep.residual) + " after " + std::to_string(rep.iterations) +
                               " iterations)");
    auto e = u_eigendecompose_psd(rep.solution, tol);
    GramianFactor f;
    f.eigenvalues = e.values;
    f.residual = rep.residual;
    if (e.values.size() == 0) return f;
    std::vector<double> w(static_cast<std::size_t>(e.values.size()));
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::sqrt(e.values[static_cast<Eigen::Index>(k)]);
    f.z = scale_cols(e.vectors, e.vectors.order() - 1, w);
    return f;
}

}  // namespace detail

inline GramianFactor reachability_factor(const MltiSystem& sys, const ReductionConfig& cfg = {}) {
    return detail::gramian_factor(reachability_gramian(sys, cfg.lyap), cfg.gramian_tol, "reachability");
}

inline GramianFactor observability_factor(const MltiSystem& sys, const ReductionConfig& cfg = {}) {
    return detail::gramian_factor(observability_gramian(sys, cfg.lyap), cfg.gramian_tol, "observability");
}

/// Higher-order balanced truncation to order S.
inline ReducedModel hobt(const MltiSystem& sys, std::size_t order, const ReductionConfig& cfg = {}) {
    const auto zr = reachability_factor(sys, cfg);
    const auto zo = observability_factor(sys, cfg);
    if (zr.eigenvalues.size() == 0 || zo.eigenvalues.size() == 0) {
        if (order > 0) throw RankError("gramian is zero; no Hankel singular values to retain");
        ReducedModel out;
        out.input_shape = sys.input_shape();
        out.output_shape = sys.output_shape();
        out.m = {Matrix(0, 0), Matrix(0, static_cast<Eigen::Index>(sys.input_shape().total())),
                 Matrix(static_cast<Eigen::Index>(sys.output_shape().total()), 0)};
        return out;
    }
    return detail::balance(sys.train(), zo.z, zr.z, order, cfg, Method::hobt);
}

}  // namespace mltt
