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
#include <optional>
#include <string>
#include <vector>

#include "mltt/dense/algebra.hpp"
#include "mltt/errors.hpp"
#include "mltt/linalg.hpp"
#include "mltt/lyapunov.hpp"
#include "mltt/system.hpp"
#include "mltt/tt/algebra.hpp"
#include "mltt/tt/decompose.hpp"
#include "mltt/tt/etsvd.hpp"

namespace mltt {

/// Hankel singular values below this fraction of sigma_1 are never retained.
inline constexpr double kDegenerateSigma = 1e-12;

/// Hankel sizes up to this many entries are formed in the full format.
inline constexpr std::size_t kHankelDenseBudget = std::size_t{1} << 20;

enum class Method { hobt, hobpod, hoera, bt, bpod, era };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::hobt: return "hobt";
        case Method::hobpod: return "hobpod";
        case Method::hoera: return "hoera";
        case Method::bt: return "bt";
        case Method::bpod: return "bpod";
        case Method::era: return "era";
    }
    return "?";
}

struct ReductionConfig {
    SolverConfig lyap;
    double decompose_tol = 1e-13;  // GTTD of full-format Hankels
    double round_tol = 1e-13;      // products, snapshots
    double gramian_tol = 1e-13;    // U-eigendecomposition of gramians
    double etsvd_tol = 0.0;
    std::size_t dense_budget = kHankelDenseBudget;
};

/// Reduced system held through its unfoldings; the state shape is {1, ..., 1, S}.
struct ReducedModel {
    MatrixSystem m;
    Shape input_shape;
    Shape output_shape;
    Vector sigma;      // retained Hankel singular values
    Vector all_sigma;  // every computed Hankel singular value
    Method method = Method::hobt;

    std::size_t order() const { return static_cast<std::size_t>(sigma.size()); }

    Shape state_shape() const {
        if (order() == 0) return Shape();
        return Shape::ones(input_shape.order()).with(input_shape.order() - 1, order());
    }

    MltiSystem system() const {
        if (order() == 0) throw RankError("a zero-order model has no state space");
        const Shape s = state_shape();
        return {psi_fold(m.a, s, s), psi_fold(m.b, s, input_shape), psi_fold(m.c, output_shape, s)};
    }
};

struct ErrorBound {
    double tail_sum = 0.0;          // 2 sum_{r > S} sigma_r
    std::optional<double> epsilon;  // known only against an exact reference

    double bound() const { return tail_sum + epsilon.value_or(0.0); }
};

inline ErrorBound hobt_error_bound(const Vector& sigmas, std::size_t order, std::optional<double> epsilon = {}) {
    for (Eigen::Index k = 1; k < sigmas.size(); ++k)
        if (sigmas[k] > sigmas[k - 1]) throw ConfigError("singular values must be in descending order");
    ErrorBound b;
    for (auto k = static_cast<Eigen::Index>(order); k < sigmas.size(); ++k) b.tail_sum += 2.0 * sigmas[k];
    b.epsilon = epsilon;
    return b;
}

namespace detail {

/// Number of singular values a truncation may keep.
inline std::size_t numerical_rank(const Vector& s) {
    std::size_t r = 0;
    while (r < static_cast<std::size_t>(s.size()) && s[static_cast<Eigen::Index>(r)] > kDegenerateSigma * s[0]) ++r;
    return r;
}

inline void check_order(const Vector& s, std::size_t order) {
    const std::size_t r = numerical_rank(s);
    if (order > r)
        throw RankError("requested order " + std::to_string(order) + " exceeds the numerical Hankel rank " +
                        std::to_string(r));
}

/// Keeps the first w.size() column indices of mode n and scales column k by w_k.
inline PairedTensorTrain scale_cols(const PairedTensorTrain& a, std::size_t n, const std::vector<double>& w) {
    const std::size_t J = a.row_shape()[n];
    if (w.size() > a.col_shape()[n]) throw DimensionError("scale_cols: too many weights");
    const auto& c = a.core(n);
    TrainCore p(c.r0(), J * w.size(), c.r1());
    for (std::size_t b = 0; b < c.r1(); ++b)
        for (std::size_t k = 0; k < w.size(); ++k)
            for (std::size_t j = 0; j < J; ++j)
                for (std::size_t r = 0; r < c.r0(); ++r) p(r, j + J * k, b) = w[k] * c(r, j + J * k, b);
    TensorTrain t = a.train();
    t.core(n) = std::move(p);
    return {std::move(t), a.row_shape(), a.col_shape().with(n, w.size())};
}

inline std::vector<double> inv_sqrt(const Vector& s, std::size_t order) {
    std::vector<double> w(order);
    for (std::size_t k = 0; k < order; ++k) w[k] = 1.0 / std::sqrt(s[static_cast<Eigen::Index>(k)]);
    return w;
}

/// Rank-S factors of a Hankel train: U S^{-1/2} (block index on the last
/// mode) and V S^{-1/2} (block index on the first mode).
struct HankelFactors {
    Vector all_sigma;
    Vector sigma;
    PairedTensorTrain left;
    PairedTensorTrain right;
};

inline HankelFactors hankel_factors(const PairedTensorTrain& h, std::size_t order, double etsvd_tol) {
    auto e = etsvd(h, etsvd_tol);
    check_order(e.sigma, order);
    HankelFactors f;
    f.all_sigma = e.sigma;
    f.sigma = e.sigma.head(static_cast<Eigen::Index>(order));
    if (order == 0) return f;
    const auto w = inv_sqrt(e.sigma, order);
    f.left = scale_cols(e.u, e.u.order() - 1, w);
    f.right = scale_cols(e.v, 0, w);
    return f;
}

/// H = L^T * R, formed in the full format when it fits the budget.
inline PairedTensorTrain hankel_train(const PairedTensorTrain& l, const PairedTensorTrain& r,
                                      const ReductionConfig& cfg) {
    const auto lt = tt_transpose(l);
    const std::size_t rows = l.col_shape().total(), cols = r.col_shape().total();
    if (rows * cols <= cfg.dense_budget)
        return gtt_decompose(psi_fold(einstein_to_dense(lt, r), lt.row_shape(), r.col_shape()), cfg.decompose_tol);
    return tt_round(tt_einstein(lt, r), cfg.round_tol);
}

/// Petrov-Galerkin projection A_r = Q^T A P, B_r = Q^T B, C_r = C P.
inline MatrixSystem project(const TrainForm& sys, const PairedTensorTrain& q, const PairedTensorTrain& p) {
    const auto qt = tt_transpose(q);
    MatrixSystem m;
    m.a = einstein_to_dense(qt, tt_einstein(sys.a, p));
    m.b = einstein_to_dense(qt, sys.b);
    m.c = einstein_to_dense(sys.c, p);
    return m;
}

/// Balanced reduction from a left factor L (J (x) O) and right factor R (J (x) C).
inline ReducedModel balance(const TrainForm& sys, const PairedTensorTrain& l, const PairedTensorTrain& r,
                            std::size_t order, const ReductionConfig& cfg, Method method) {
    const auto f = hankel_factors(hankel_train(l, r, cfg), order, cfg.etsvd_tol);
    ReducedModel out;
    out.input_shape = sys.b.col_shape();
    out.output_shape = sys.c.row_shape();
    out.sigma = f.sigma;
    out.all_sigma = f.all_sigma;
    out.method = method;
    if (order == 0) {
        out.m = {Matrix(0, 0), Matrix(0, static_cast<Eigen::Index>(out.input_shape.total())),
                 Matrix(static_cast<Eigen::Index>(out.output_shape.total()), 0)};
        return out;
    }
    const auto p = tt_einstein(r, f.right);
    const auto q = tt_einstein(l, f.left);
    out.m = project(sys, q, p);
    return out;
}

}  // namespace detail

}  // namespace mltt
