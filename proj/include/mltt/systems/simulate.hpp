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
#include "mltt/dense/tensor.hpp"
#include "mltt/errors.hpp"
#include "mltt/system.hpp"
#include "mltt/tt/algebra.hpp"
#include "mltt/tt/train.hpp"

namespace mltt {

struct Trajectory {
    std::vector<DenseTensor> states;   // X_0 ... X_steps
    std::vector<DenseTensor> outputs;  // Y_0 ... Y_steps
};

struct TrainTrajectory {
    std::vector<TensorTrain> states;
    std::vector<TensorTrain> outputs;
};

namespace detail {

inline Eigen::Map<const Vector> as_vec(const DenseTensor& x) {
    return {x.data().data(), static_cast<Eigen::Index>(x.size())};
}

inline void check_inputs(std::size_t given, std::size_t steps) {
    if (given != 0 && given < steps)
        throw DimensionError(std::to_string(steps) + " steps need " + std::to_string(steps) + " inputs, got " +
                             std::to_string(given));
}

}  // namespace detail

/// X_{t+1} = A * X_t + B * U_t, Y_t = C * X_t. An empty input list means zero input.
inline Trajectory simulate(const MltiSystem& sys, const DenseTensor& x0, const std::vector<DenseTensor>& inputs,
                           std::size_t steps) {
    if (x0.shape() != sys.state_shape())
        throw DimensionError("initial state shape " + x0.shape().str() + " != " + sys.state_shape().str());
    detail::check_inputs(inputs.size(), steps);
    for (const auto& u : inputs)
        if (u.shape() != sys.input_shape())
            throw DimensionError("input shape " + u.shape().str() + " != " + sys.input_shape().str());
    const auto m = sys.unfolded();
    Trajectory out;
    Vector x = detail::as_vec(x0);
    auto emit = [&](const Vector& v) {
        out.states.emplace_back(sys.state_shape(), std::vector<double>(v.data(), v.data() + v.size()));
        Vector y = m.c * v;
        out.outputs.emplace_back(sys.output_shape(), std::vector<double>(y.data(), y.data() + y.size()));
    };
    emit(x);
    for (std::size_t t = 0; t < steps; ++t) {
        Vector next = m.a * x;
        if (!inputs.empty()) next += m.b * detail::as_vec(inputs[t]);
        x = std::move(next);
        emit(x);
    }
    return out;
}

/// Train-form time stepping, rounded to round_tol after every step.
inline TrainTrajectory simulate_tt(const MltiSystem& sys, const TensorTrain& x0, const std::vector<TensorTrain>& inputs,
                                   std::size_t steps, double round_tol) {
    if (x0.shape() != sys.state_shape())
        throw DimensionError("initial state shape " + x0.shape().str() + " != " + sys.state_shape().str());
    detail::check_inputs(inputs.size(), steps);
    for (const auto& u : inputs)
        if (u.shape() != sys.input_shape())
            throw DimensionError("input shape " + u.shape().str() + " != " + sys.input_shape().str());
    const auto t = sys.train();
    TrainTrajectory out;
    TensorTrain x = x0;
    auto emit = [&](const TensorTrain& v) {
        out.states.push_back(v);
        out.outputs.push_back(tt_round(tt_apply(t.c, v), round_tol));
    };
    emit(x);
    for (std::size_t k = 0; k < steps; ++k) {
        TensorTrain next = tt_apply(t.a, x);
        if (!inputs.empty()) next = tt_add(next, tt_apply(t.b, inputs[k]));
        x = tt_round(next, round_tol);
        emit(x);
    }
    return out;
}

/// Z_k = C A^k B for k < count, as matrices.
inline std::vector<Matrix> markov_matrices(const MatrixSystem& m, std::size_t count) {
    if (count == 0) throw ConfigError("need at least one Markov parameter");
    std::vector<Matrix> out;
    out.reserve(count);
    Matrix p = m.b;
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(m.c * p);
        if (k + 1 < count) p = m.a * p;
    }
    return out;
}

/// Z_k = C * A^k * B for k < count, each of shape I (x) K.
inline std::vector<PairedTensor> markov_parameters(const MltiSystem& sys, std::size_t count) {
    if (count == 0) throw ConfigError("need at least one Markov parameter");
    std::vector<PairedTensor> out;
    out.reserve(count);
    if (sys.has_dense()) {
        for (const auto& z : markov_matrices(sys.unfolded(), count))
            out.push_back(psi_fold(z, sys.output_shape(), sys.input_shape()));
        return out;
    }
    const auto t = sys.train();
    PairedTensorTrain p = t.b;
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(psi_fold(einstein_to_dense(t.c, p), sys.output_shape(), sys.input_shape()));
        if (k + 1 < count) p = tt_round(tt_einstein(t.a, p), linalg::kExactTol);
    }
    return out;
}

}  // namespace mltt
