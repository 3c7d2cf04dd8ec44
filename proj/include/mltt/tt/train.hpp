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
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "mltt/dense/shape.hpp"
#include "mltt/dense/tensor.hpp"
#include "mltt/errors.hpp"

namespace mltt {

/// Three-way TT core of size r0 x n x r1, column-major. The left unfolding
/// (r0 n x r1) and right unfolding (r0 x n r1) are views of the same buffer.
class TrainCore {
public:
    TrainCore() = default;
    TrainCore(std::size_t r0, std::size_t n, std::size_t r1) : r0_(r0), n_(n), r1_(r1), v_(r0 * n * r1, 0.0) {
        check();
    }
    TrainCore(std::size_t r0, std::size_t n, std::size_t r1, std::vector<double> values)
        : r0_(r0), n_(n), r1_(r1), v_(std::move(values)) {
        check();
        if (v_.size() != r0_ * n_ * r1_)
            throw DimensionError("core " + std::to_string(r0_) + "x" + std::to_string(n_) + "x" + std::to_string(r1_) +
                                 " needs " + std::to_string(r0_ * n_ * r1_) + " values");
    }
    TrainCore(std::size_t r0, std::size_t n, std::size_t r1, const Eigen::Ref<const Matrix>& m)
        : TrainCore(r0, n, r1) {
        if (static_cast<std::size_t>(m.size()) != v_.size()) throw DimensionError("core matrix size mismatch");
        Eigen::Map<Matrix>(v_.data(), m.rows(), m.cols()) = m;
    }

    std::size_t r0() const noexcept { return r0_; }
    std::size_t n() const noexcept { return n_; }
    std::size_t r1() const noexcept { return r1_; }
    std::size_t size() const noexcept { return v_.size(); }

    double operator()(std::size_t a, std::size_t j, std::size_t b) const { return v_[a + r0_ * (j + n_ * b)]; }
    double& operator()(std::size_t a, std::size_t j, std::size_t b) { return v_[a + r0_ * (j + n_ * b)]; }

    const std::vector<double>& data() const noexcept { return v_; }
    std::vector<double>& data() noexcept { return v_; }

    Eigen::Map<const Matrix> left() const { return {v_.data(), idx(r0_ * n_), idx(r1_)}; }
    Eigen::Map<Matrix> left() { return {v_.data(), idx(r0_ * n_), idx(r1_)}; }
    Eigen::Map<const Matrix> right() const { return {v_.data(), idx(r0_), idx(n_ * r1_)}; }
    Eigen::Map<Matrix> right() { return {v_.data(), idx(r0_), idx(n_ * r1_)}; }

    /// r0 x r1 slice at mode index j.
    Eigen::Map<const Matrix, 0, Eigen::OuterStride<>> slice(std::size_t j) const {
        return {v_.data() + r0_ * j, idx(r0_), idx(r1_), Eigen::OuterStride<>(idx(r0_ * n_))};
    }
    Eigen::Map<Matrix, 0, Eigen::OuterStride<>> slice(std::size_t j) {
        return {v_.data() + r0_ * j, idx(r0_), idx(r1_), Eigen::OuterStride<>(idx(r0_ * n_))};
    }

    friend bool operator==(const TrainCore&, const TrainCore&) = default;

private:
    static Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }
    void check() const {
        if (r0_ == 0 || n_ == 0 || r1_ == 0) throw DimensionError("core extents must be positive");
    }

    std::size_t r0_ = 1, n_ = 1, r1_ = 1;
    std::vector<double> v_;
};

/// Default cap on the number of entries materialized by `reconstruct`.
inline constexpr std::size_t kDefaultDenseBudget = std::size_t{1} << 27;

/// Tensor train X = X^(1) x^1 X^(2) x^1 ... x^1 X^(N), boundary ranks 1.
class TensorTrain {
public:
    TensorTrain() = default;
    explicit TensorTrain(std::vector<TrainCore> cores) : cores_(std::move(cores)) { validate(); }

    std::size_t order() const noexcept { return cores_.size(); }
    const std::vector<TrainCore>& cores() const noexcept { return cores_; }
    std::vector<TrainCore>& cores() noexcept { return cores_; }
    const TrainCore& core(std::size_t n) const { return cores_.at(n); }
    TrainCore& core(std::size_t n) { return cores_.at(n); }

    Shape shape() const {
        std::vector<std::size_t> s(order());
        for (std::size_t n = 0; n < order(); ++n) s[n] = cores_[n].n();
        return Shape(std::move(s));
    }

    /// {R_0, ..., R_N}.
    std::vector<std::size_t> ranks() const {
        std::vector<std::size_t> r;
        if (cores_.empty()) return r;
        r.push_back(cores_.front().r0());
        for (const auto& c : cores_) r.push_back(c.r1());
        return r;
    }

    std::size_t max_rank() const {
        std::size_t m = 0;
        for (auto r : ranks()) m = std::max(m, r);
        return m;
    }

    /// Total number of stored core entries.
    std::size_t storage() const {
        std::size_t s = 0;
        for (const auto& c : cores_) s += c.size();
        return s;
    }

    void validate() const {
        if (cores_.empty()) throw DimensionError("tensor train needs at least one core");
        if (cores_.front().r0() != 1 || cores_.back().r1() != 1)
            throw DimensionError("boundary ranks must be 1");
        for (std::size_t n = 0; n + 1 < cores_.size(); ++n)
            if (cores_[n].r1() != cores_[n + 1].r0())
                throw DimensionError("rank mismatch between cores " + std::to_string(n) + " and " +
                                     std::to_string(n + 1));
    }

    friend bool operator==(const TensorTrain&, const TensorTrain&) = default;

private:
    std::vector<TrainCore> cores_;
};

/// GTT of a paired tensor: core n is R_{n-1} x J_n x I_n x R_n, stored as a
/// three-way core over the merged index j + J_n i. The GTT of a paired tensor
/// is therefore exactly the TT of its interleaved value array.
class PairedTensorTrain {
public:
    PairedTensorTrain() = default;
    PairedTensorTrain(TensorTrain train, Shape row, Shape col)
        : train_(std::move(train)), row_(std::move(row)), col_(std::move(col)) {
        if (row_.order() != col_.order() || row_.order() != train_.order())
            throw DimensionError("GTT shape orders disagree with the core count");
        for (std::size_t n = 0; n < row_.order(); ++n)
            if (train_.core(n).n() != row_[n] * col_[n])
                throw DimensionError("core " + std::to_string(n) + " mode size " + std::to_string(train_.core(n).n()) +
                                     " != " + std::to_string(row_[n]) + "*" + std::to_string(col_[n]));
    }

    /// Views a plain train over shape J as the paired train J (x) 1.
    static PairedTensorTrain column(TensorTrain t) {
        auto s = t.shape();
        const auto n = s.order();
        return {std::move(t), std::move(s), Shape::ones(n)};
    }

    /// U-identity on J (x) J; every GTT-rank is 1.
    static PairedTensorTrain identity(const Shape& shape) {
        std::vector<TrainCore> cores;
        for (auto j : shape) {
            TrainCore c(1, j * j, 1);
            for (std::size_t k = 0; k < j; ++k) c(0, k + j * k, 0) = 1.0;
            cores.push_back(std::move(c));
        }
        return {TensorTrain(std::move(cores)), shape, shape};
    }

    const TensorTrain& train() const noexcept { return train_; }
    TensorTrain& train() noexcept { return train_; }
    const Shape& row_shape() const noexcept { return row_; }
    const Shape& col_shape() const noexcept { return col_; }
    std::size_t order() const noexcept { return train_.order(); }
    std::vector<std::size_t> ranks() const { return train_.ranks(); }
    std::size_t max_rank() const { return train_.max_rank(); }
    const TrainCore& core(std::size_t n) const { return train_.core(n); }
    TrainCore& core(std::size_t n) { return train_.core(n); }

    /// Entry (a, j, i, b) of core n.
    double at(std::size_t n, std::size_t a, std::size_t j, std::size_t i, std::size_t b) const {
        return train_.core(n)(a, j + row_[n] * i, b);
    }

    /// Underlying plain train; requires a singleton column shape.
    TensorTrain as_vector() const {
        if (col_.total() != 1) throw DimensionError("paired train has non-singleton columns");
        return train_;
    }

    friend bool operator==(const PairedTensorTrain&, const PairedTensorTrain&) = default;

private:
    TensorTrain train_;
    Shape row_;
    Shape col_;
};

namespace detail {

inline std::size_t checked_total(const std::vector<std::size_t>& sizes, std::size_t budget) {
    std::size_t p = 1;
    for (auto s : sizes) {
        if (s != 0 && p > budget / s) throw CapacityError("dense materialization exceeds the budget of " +
                                                          std::to_string(budget) + " entries");
        p *= s;
    }
    return p;
}

}  // namespace detail

/// zeta: contracts every core into the full value array.
inline DenseTensor reconstruct(const TensorTrain& t, std::size_t budget = kDefaultDenseBudget) {
    const auto shape = t.shape();
    detail::checked_total(shape.values(), budget);
    Matrix acc = Matrix::Ones(1, 1);  // (prefix size) x rank
    for (const auto& c : t.cores()) {
        const auto p = acc.rows();
        if (static_cast<std::size_t>(p) * c.n() * c.r1() > budget)
            throw CapacityError("intermediate contraction exceeds the dense budget");
        // acc (P x r0) times right unfolding (r0 x n r1) -> (P x n r1), which is
        // (P n) x r1 in column-major order.
        Matrix next = acc * c.right();
        acc = Eigen::Map<Matrix>(next.data(), p * static_cast<Eigen::Index>(c.n()), static_cast<Eigen::Index>(c.r1()));
    }
    return {shape, std::vector<double>(acc.data(), acc.data() + acc.size())};
}

inline PairedTensor reconstruct(const PairedTensorTrain& a, std::size_t budget = kDefaultDenseBudget) {
    auto x = reconstruct(a.train(), budget);
    return {a.row_shape(), a.col_shape(), x.data()};
}

}  // namespace mltt
