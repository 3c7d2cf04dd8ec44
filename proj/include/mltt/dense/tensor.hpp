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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "mltt/dense/shape.hpp"
#include "mltt/errors.hpp"

namespace mltt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense real tensor, column-major (first index fastest).
class DenseTensor {
public:
    DenseTensor() = default;
    explicit DenseTensor(Shape shape) : shape_(std::move(shape)), values_(shape_.total(), 0.0) {}
    DenseTensor(Shape shape, std::vector<double> values) : shape_(std::move(shape)), values_(std::move(values)) {
        if (values_.size() != shape_.total())
            throw DimensionError("tensor of shape " + shape_.str() + " needs " + std::to_string(shape_.total()) +
                                 " values, got " + std::to_string(values_.size()));
    }

    const Shape& shape() const noexcept { return shape_; }
    std::size_t order() const noexcept { return shape_.order(); }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    const std::vector<double>& data() const noexcept { return values_; }

    double operator[](std::size_t flat) const { return values_[flat]; }
    double& operator[](std::size_t flat) { return values_[flat]; }

    double at(const std::vector<std::size_t>& index) const { return values_.at(offset(index)); }
    double& at(const std::vector<std::size_t>& index) { return values_.at(offset(index)); }

    /// Column vector view of the values (vec(X)).
    Eigen::Map<const Vector> vec() const { return {values_.data(), static_cast<Eigen::Index>(values_.size())}; }

    friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

private:
    std::size_t offset(const std::vector<std::size_t>& index) const {
        if (index.size() != shape_.order()) throw DimensionError("index order mismatch");
        for (std::size_t n = 0; n < index.size(); ++n)
            if (index[n] >= shape_[n]) throw DimensionError("index out of range");
        return ravel(index, shape_.values());
    }

    Shape shape_;
    std::vector<double> values_;
};

/// Even-order paired tensor A in R^{J (x) I}. Values are stored in the
/// interleaved order (j1, i1, j2, i2, ..., jN, iN), column-major, so the
/// unfolding psi is a pure index computation.
class PairedTensor {
public:
    PairedTensor() = default;
    PairedTensor(Shape row_shape, Shape col_shape)
        : row_(std::move(row_shape)), col_(std::move(col_shape)) {
        check_orders();
        values_.assign(row_.total() * col_.total(), 0.0);
    }
    PairedTensor(Shape row_shape, Shape col_shape, std::vector<double> values)
        : row_(std::move(row_shape)), col_(std::move(col_shape)), values_(std::move(values)) {
        check_orders();
        if (values_.size() != row_.total() * col_.total())
            throw DimensionError("paired tensor " + row_.str() + "x" + col_.str() + " needs " +
                                 std::to_string(row_.total() * col_.total()) + " values, got " +
                                 std::to_string(values_.size()));
    }

    /// U-identity on J (x) J.
    static PairedTensor identity(const Shape& shape) {
        PairedTensor e(shape, shape);
        const std::size_t n = shape.total();
        std::vector<std::size_t> j(shape.order());
        for (std::size_t r = 0; r < n; ++r) {
            j = unravel(r, shape.values());
            e.at(j, j) = 1.0;
        }
        return e;
    }

    /// Scalar viewed as a 1 (x) 1 paired tensor of the given order.
    static PairedTensor scalar(double value, std::size_t order = 1) {
        return PairedTensor(Shape::ones(order), Shape::ones(order), {value});
    }

    const Shape& row_shape() const noexcept { return row_; }
    const Shape& col_shape() const noexcept { return col_; }
    std::size_t order() const noexcept { return row_.order(); }
    std::size_t rows() const { return row_.total(); }
    std::size_t cols() const { return col_.total(); }
    std::size_t size() const noexcept { return values_.size(); }

    /// Interleaved mode sizes {J1, I1, J2, I2, ...}.
    std::vector<std::size_t> interleaved_sizes() const {
        std::vector<std::size_t> s;
        s.reserve(2 * order());
        for (std::size_t n = 0; n < order(); ++n) {
            s.push_back(row_[n]);
            s.push_back(col_[n]);
        }
        return s;
    }

    /// Merged pair sizes {J1 I1, ..., JN IN}; the mode sizes of the GTT view.
    std::vector<std::size_t> pair_sizes() const {
        std::vector<std::size_t> s(order());
        for (std::size_t n = 0; n < order(); ++n) s[n] = row_[n] * col_[n];
        return s;
    }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    const std::vector<double>& data() const noexcept { return values_; }

    double operator[](std::size_t flat) const { return values_[flat]; }
    double& operator[](std::size_t flat) { return values_[flat]; }

    std::size_t offset(const std::vector<std::size_t>& j, const std::vector<std::size_t>& i) const {
        if (j.size() != order() || i.size() != order()) throw DimensionError("index order mismatch");
        std::size_t off = 0;
        std::size_t stride = 1;
        for (std::size_t n = 0; n < order(); ++n) {
            if (j[n] >= row_[n] || i[n] >= col_[n]) throw DimensionError("index out of range");
            off += (j[n] + row_[n] * i[n]) * stride;
            stride *= row_[n] * col_[n];
        }
        return off;
    }

    double at(const std::vector<std::size_t>& j, const std::vector<std::size_t>& i) const {
        return values_[offset(j, i)];
    }
    double& at(const std::vector<std::size_t>& j, const std::vector<std::size_t>& i) { return values_[offset(j, i)]; }

    friend bool operator==(const PairedTensor&, const PairedTensor&) = default;

private:
    void check_orders() const {
        if (row_.order() != col_.order())
            throw DimensionError("row shape " + row_.str() + " and column shape " + col_.str() +
                                 " must have the same order");
    }

    Shape row_;
    Shape col_;
    std::vector<double> values_;
};

/// Element-wise combinations; shapes must match exactly.
inline PairedTensor operator+(const PairedTensor& a, const PairedTensor& b) {
    if (a.row_shape() != b.row_shape() || a.col_shape() != b.col_shape())
        throw DimensionError("paired tensor sum shape mismatch");
    std::vector<double> v(a.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] + b[k];
    return {a.row_shape(), a.col_shape(), std::move(v)};
}

inline PairedTensor operator-(const PairedTensor& a, const PairedTensor& b) {
    if (a.row_shape() != b.row_shape() || a.col_shape() != b.col_shape())
        throw DimensionError("paired tensor difference shape mismatch");
    std::vector<double> v(a.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] - b[k];
    return {a.row_shape(), a.col_shape(), std::move(v)};
}

inline PairedTensor operator*(double s, const PairedTensor& a) {
    std::vector<double> v(a.data());
    for (auto& x : v) x *= s;
    return {a.row_shape(), a.col_shape(), std::move(v)};
}

/// Reinterprets a tensor X in R^J as the paired tensor J (x) 1.
inline PairedTensor as_column(const DenseTensor& x) {
    return {x.shape(), Shape::ones(x.order()), x.data()};
}

/// Inverse of `as_column`; requires a singleton column shape.
inline DenseTensor column_values(const PairedTensor& a) {
    if (a.cols() != 1) throw DimensionError("paired tensor has more than one column");
    return {a.row_shape(), a.data()};
}

}  // namespace mltt
