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

namespace mltt {

namespace detail {

/// Visits a window of a larger paired tensor whose per-mode offsets are
/// given, passing (flat offset in small, flat offset in big).
template <class F>
void for_each_window(const std::vector<std::size_t>& big_sizes, const std::vector<std::size_t>& small_sizes,
                     const std::vector<std::size_t>& row_off, const std::vector<std::size_t>& col_off, F&& f) {
    const std::size_t dims = small_sizes.size();
    std::vector<std::size_t> big_strides(dims);
    std::size_t stride = 1;
    for (std::size_t d = 0; d < dims; ++d) {
        big_strides[d] = stride;
        stride *= big_sizes[d];
    }
    std::size_t pos = 0;
    for (std::size_t n = 0; n < dims / 2; ++n)
        pos += row_off[n] * big_strides[2 * n] + col_off[n] * big_strides[2 * n + 1];
    std::size_t total = 1;
    for (auto s : small_sizes) total *= s;
    std::vector<std::size_t> digit(dims, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        f(flat, pos);
        for (std::size_t d = 0; d < dims; ++d) {
            if (++digit[d] < small_sizes[d]) {
                pos += big_strides[d];
                break;
            }
            pos -= big_strides[d] * (small_sizes[d] - 1);
            digit[d] = 0;
        }
    }
}

inline void put_window(PairedTensor& big, const PairedTensor& small, const std::vector<std::size_t>& row_off,
                       const std::vector<std::size_t>& col_off) {
    auto dst = big.values();
    auto src = small.values();
    for_each_window(big.interleaved_sizes(), small.interleaved_sizes(), row_off, col_off,
                    [&](std::size_t s, std::size_t b) { dst[b] = src[s]; });
}

inline void get_window(const PairedTensor& big, PairedTensor& small, const std::vector<std::size_t>& row_off,
                       const std::vector<std::size_t>& col_off) {
    auto src = big.values();
    auto dst = small.values();
    for_each_window(big.interleaved_sizes(), small.interleaved_sizes(), row_off, col_off,
                    [&](std::size_t s, std::size_t b) { dst[s] = src[b]; });
}

inline void check_same_shapes(const std::vector<PairedTensor>& blocks) {
    if (blocks.empty()) throw DimensionError("block tensor needs at least one block");
    for (const auto& b : blocks)
        if (b.row_shape() != blocks[0].row_shape() || b.col_shape() != blocks[0].col_shape())
            throw DimensionError("blocks must share one shape; got " + b.row_shape().str() + "x" + b.col_shape().str() +
                                 " vs " + blocks[0].row_shape().str() + "x" + blocks[0].col_shape().str());
}

inline void check_fact(const Factorization& fact, std::size_t count, std::size_t order) {
    if (fact.order() != order)
        throw DimensionError("factorization " + fact.str() + " has order " + std::to_string(fact.order()) +
                             ", tensors have order " + std::to_string(order));
    if (fact.total() != count)
        throw DimensionError("factorization " + fact.str() + " has product " + std::to_string(fact.total()) + ", but " +
                             std::to_string(count) + " blocks were given");
}

/// Offsets of block k inside the blocked modes: (k_n digits) * base_n.
inline std::vector<std::size_t> block_offsets(std::size_t k, const Factorization& fact, const Shape& base) {
    auto digits = unravel(k, fact.values());
    for (std::size_t n = 0; n < digits.size(); ++n) digits[n] *= base[n];
    return digits;
}

}  // namespace detail

/// Mode row block tensor |X_0 ... X_{K-1}| built with factorization
/// K = K_1...K_N (0-based block index, K_1 digit fastest). Block k sits at
/// column indices l_n = i_n + I_n k_n, which is exactly what the staged
/// 1-mode, 2-mode, ... concatenation produces.
inline PairedTensor block_row(const std::vector<PairedTensor>& blocks, const Factorization& fact) {
    detail::check_same_shapes(blocks);
    const auto& row = blocks[0].row_shape();
    const auto& col = blocks[0].col_shape();
    detail::check_fact(fact, blocks.size(), row.order());
    PairedTensor y(row, scaled(col, fact));
    const std::vector<std::size_t> zero(row.order(), 0);
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        detail::put_window(y, blocks[k], zero, detail::block_offsets(k, fact, col));
    }
    return y;
}

/// Mode column block tensor; the dual of `block_row` on the row modes.
inline PairedTensor block_col(const std::vector<PairedTensor>& blocks, const Factorization& fact) {
    detail::check_same_shapes(blocks);
    const auto& row = blocks[0].row_shape();
    const auto& col = blocks[0].col_shape();
    detail::check_fact(fact, blocks.size(), row.order());
    PairedTensor y(scaled(row, fact), col);
    const std::vector<std::size_t> zero(row.order(), 0);
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        detail::put_window(y, blocks[k], detail::block_offsets(k, fact, row), zero);
    }
    return y;
}

/// n-mode row block tensor |A B|_n (mode n is 0-based).
inline PairedTensor block_row_n(const PairedTensor& a, const PairedTensor& b, std::size_t n) {
    if (n >= a.order())
        throw DimensionError("block mode " + std::to_string(n) + " out of range for order " + std::to_string(a.order()));
    std::vector<std::size_t> f(a.order(), 1);
    f[n] = 2;
    return block_row({a, b}, Factorization(f));
}

/// n-mode column block tensor.
inline PairedTensor block_col_n(const PairedTensor& a, const PairedTensor& b, std::size_t n) {
    if (n >= a.order())
        throw DimensionError("block mode " + std::to_string(n) + " out of range for order " + std::to_string(a.order()));
    std::vector<std::size_t> f(a.order(), 1);
    f[n] = 2;
    return block_col({a, b}, Factorization(f));
}

/// Block k (0-based) of a mode row block tensor with column blocks of shape `base_col`.
inline PairedTensor extract_block(const PairedTensor& y, std::size_t k, const Factorization& fact,
                                  const Shape& base_col) {
    if (k >= fact.total())
        throw DimensionError("block index " + std::to_string(k) + " out of range for " + std::to_string(fact.total()) +
                             " blocks");
    if (y.col_shape() != scaled(base_col, fact))
        throw DimensionError("column shape " + y.col_shape().str() + " is not " + base_col.str() + " scaled by " +
                             fact.str());
    PairedTensor x(y.row_shape(), base_col);
    detail::get_window(y, x, std::vector<std::size_t>(y.order(), 0), detail::block_offsets(k, fact, base_col));
    return x;
}

/// Block k (0-based) of a mode column block tensor with row blocks of shape `base_row`.
inline PairedTensor extract_block_col(const PairedTensor& y, std::size_t k, const Factorization& fact,
                                      const Shape& base_row) {
    if (k >= fact.total())
        throw DimensionError("block index " + std::to_string(k) + " out of range for " + std::to_string(fact.total()) +
                             " blocks");
    if (y.row_shape() != scaled(base_row, fact))
        throw DimensionError("row shape " + y.row_shape().str() + " is not " + base_row.str() + " scaled by " +
                             fact.str());
    PairedTensor x(base_row, y.col_shape());
    detail::get_window(y, x, detail::block_offsets(k, fact, base_row), std::vector<std::size_t>(y.order(), 0));
    return x;
}

/// Column permutation relating psi of a mode row block tensor to the plain
/// matrix concatenation: psi(Y).col(perm[c]) == [psi(X_0) ... psi(X_{K-1})].col(c).
/// The row-block dual is the same map applied to rows.
inline std::vector<std::size_t> block_permutation(const Shape& base, const Factorization& fact) {
    const std::size_t inner = base.total();
    const std::size_t count = fact.total();
    const auto big = scaled(base, fact);
    std::vector<std::size_t> perm(inner * count);
    for (std::size_t k = 0; k < count; ++k) {
        const auto kd = unravel(k, fact.values());
        for (std::size_t c = 0; c < inner; ++c) {
            auto l = unravel(c, base.values());
            for (std::size_t n = 0; n < l.size(); ++n) l[n] += base[n] * kd[n];
            perm[k * inner + c] = ravel(l, big.values());
        }
    }
    return perm;
}

}  // namespace mltt
