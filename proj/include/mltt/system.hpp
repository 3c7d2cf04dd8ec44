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
#include <optional>
#include <string>
#include <utility>

#include "mltt/dense/algebra.hpp"
#include "mltt/dense/tensor.hpp"
#include "mltt/errors.hpp"
#include "mltt/tt/algebra.hpp"
#include "mltt/tt/decompose.hpp"
#include "mltt/tt/train.hpp"

namespace mltt {

/// Unfolded state-space triple x' = A x + B u, y = C x.
struct MatrixSystem {
    Matrix a, b, c;

    std::size_t states() const { return static_cast<std::size_t>(a.rows()); }
    std::size_t inputs() const { return static_cast<std::size_t>(b.cols()); }
    std::size_t outputs() const { return static_cast<std::size_t>(c.rows()); }
};

struct DenseForm {
    PairedTensor a, b, c;
};

struct TrainForm {
    PairedTensorTrain a, b, c;
};

/// MLTI system X_{t+1} = A * X_t + B * U_t, Y_t = C * X_t with A: J (x) J,
/// B: J (x) K and C: I (x) J. Either or both representations may be held;
/// the missing one is produced on demand.
class MltiSystem {
public:
    MltiSystem() = default;
    MltiSystem(PairedTensor a, PairedTensor b, PairedTensor c)
        : dense_(DenseForm{std::move(a), std::move(b), std::move(c)}) {
        check(dense_->a.row_shape(), dense_->a.col_shape(), dense_->b.row_shape(), dense_->b.col_shape(),
              dense_->c.row_shape(), dense_->c.col_shape());
    }
    MltiSystem(PairedTensorTrain a, PairedTensorTrain b, PairedTensorTrain c)
        : train_(TrainForm{std::move(a), std::move(b), std::move(c)}) {
        check(train_->a.row_shape(), train_->a.col_shape(), train_->b.row_shape(), train_->b.col_shape(),
              train_->c.row_shape(), train_->c.col_shape());
    }
    MltiSystem(DenseForm d, TrainForm t) : dense_(std::move(d)), train_(std::move(t)) {
        check(dense_->a.row_shape(), dense_->a.col_shape(), dense_->b.row_shape(), dense_->b.col_shape(),
              dense_->c.row_shape(), dense_->c.col_shape());
        if (dense_->a.row_shape() != train_->a.row_shape() || dense_->b.col_shape() != train_->b.col_shape() ||
            dense_->c.row_shape() != train_->c.row_shape())
            throw DimensionError("dense and train forms describe different shapes");
    }

    bool has_dense() const noexcept { return dense_.has_value(); }
    bool has_train() const noexcept { return train_.has_value(); }

    const Shape& state_shape() const { return has_dense() ? dense_->a.row_shape() : train_->a.row_shape(); }
    const Shape& input_shape() const { return has_dense() ? dense_->b.col_shape() : train_->b.col_shape(); }
    const Shape& output_shape() const { return has_dense() ? dense_->c.row_shape() : train_->c.row_shape(); }
    std::size_t order() const { return state_shape().order(); }
    std::size_t states() const { return state_shape().total(); }

    /// Dense operators; reconstructed from the trains if needed.
    DenseForm dense(std::size_t budget = kDefaultDenseBudget) const {
        if (dense_) return *dense_;
        if (!train_) throw ConfigError("empty system");
        return {reconstruct(train_->a, budget), reconstruct(train_->b, budget), reconstruct(train_->c, budget)};
    }

    /// GTT operators; decomposed from the dense tensors at `tol` if needed.
    TrainForm train(double tol = 0.0) const {
        if (train_) return *train_;
        if (!dense_) throw ConfigError("empty system");
        return {gtt_decompose(dense_->a, tol), gtt_decompose(dense_->b, tol), gtt_decompose(dense_->c, tol)};
    }

    MatrixSystem unfolded(std::size_t budget = kDefaultDenseBudget) const {
        if (dense_) return {psi_unfold(dense_->a), psi_unfold(dense_->b), psi_unfold(dense_->c)};
        const auto d = dense(budget);
        return {psi_unfold(d.a), psi_unfold(d.b), psi_unfold(d.c)};
    }

    /// Adjoint system (A^T, C^T, B^T), in every held representation.
    MltiSystem dual() const {
        MltiSystem out;
        if (dense_) out.dense_ = DenseForm{u_transpose(dense_->a), u_transpose(dense_->c), u_transpose(dense_->b)};
        if (train_)
            out.train_ = TrainForm{tt_transpose(train_->a), tt_transpose(train_->c), tt_transpose(train_->b)};
        return out;
    }

private:
    static void check(const Shape& ar, const Shape& ac, const Shape& br, const Shape& bc, const Shape& cr,
                      const Shape& cc) {
        if (ar != ac) throw DimensionError("state operator must be square, got " + ar.str() + "x" + ac.str());
        if (br != ar) throw DimensionError("input operator rows " + br.str() + " != state shape " + ar.str());
        if (cc != ar) throw DimensionError("output operator columns " + cc.str() + " != state shape " + ar.str());
        if (bc.order() != ar.order() || cr.order() != ar.order())
            throw DimensionError("input/output shapes must have the state order");
    }

    std::optional<DenseForm> dense_;
    std::optional<TrainForm> train_;
};

}  // namespace mltt
