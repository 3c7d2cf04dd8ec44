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

#include "mltt/dense/shape.hpp"
#include "mltt/errors.hpp"
#include "mltt/tt/algebra.hpp"
#include "mltt/tt/train.hpp"

namespace mltt {

namespace detail {

/// Zero-pads core n of `a` to K I_n columns with the data in column slot `slot`.
inline PairedTensorTrain pad_core_cols(const PairedTensorTrain& a, std::size_t n, std::size_t count, std::size_t slot) {
    const std::size_t J = a.row_shape()[n], I = a.col_shape()[n];
    const auto& c = a.core(n);
    TrainCore p(c.r0(), J * I * count, c.r1());
    for (std::size_t b = 0; b < c.r1(); ++b)
        for (std::size_t i = 0; i < I; ++i)
            for (std::size_t j = 0; j < J; ++j)
                for (std::size_t r = 0; r < c.r0(); ++r) p(r, j + J * (i + I * slot), b) = c(r, j + J * i, b);
    TensorTrain t = a.train();
    t.core(n) = std::move(p);
    return {std::move(t), a.row_shape(), a.col_shape().with(n, I * count)};
}

inline void check_block_mode(const PairedTensorTrain& a, std::size_t n) {
    if (n >= a.order())
        throw DimensionError("block mode " + std::to_string(n) + " out of range for order " + std::to_string(a.order()));
}

}  // namespace detail

/// n-mode row block tensor in GTT form: zero-fill the n-th cores, then add.
inline PairedTensorTrain block_tt_row_n(const PairedTensorTrain& a, const PairedTensorTrain& b, std::size_t n) {
    detail::check_block_mode(a, n);
    if (a.row_shape() != b.row_shape() || a.col_shape() != b.col_shape())
        throw DimensionError("block_tt_row_n: operand shapes differ");
    return tt_add(detail::pad_core_cols(a, n, 2, 0), detail::pad_core_cols(b, n, 2, 1));
}

/// Mode row block tensor in GTT form, built by the staged 1-mode, 2-mode, ...
/// concatenation with a rounding after every summation.
inline PairedTensorTrain block_tt_row(const std::vector<PairedTensorTrain>& blocks, const Factorization& fact,
                                      double round_tol) {
    if (blocks.empty()) throw DimensionError("block tensor needs at least one block");
    const auto& row = blocks[0].row_shape();
    const auto& col = blocks[0].col_shape();
    for (const auto& b : blocks)
        if (b.row_shape() != row || b.col_shape() != col) throw DimensionError("blocks must share one shape");
    if (fact.order() != row.order() || fact.total() != blocks.size())
        throw DimensionError("factorization " + fact.str() + " does not cover " + std::to_string(blocks.size()) +
                             " blocks of order " + std::to_string(row.order()));
    std::vector<PairedTensorTrain> cur = blocks;
    for (std::size_t n = 0; n < fact.order(); ++n) {
        const std::size_t kn = fact[n];
        if (kn == 1) continue;
        std::vector<PairedTensorTrain> next;
        for (std::size_t g = 0; g < cur.size(); g += kn) {
            PairedTensorTrain acc = detail::pad_core_cols(cur[g], n, kn, 0);
            for (std::size_t s = 1; s < kn; ++s)
                acc = tt_round(tt_add(acc, detail::pad_core_cols(cur[g + s], n, kn, s)), round_tol);
            next.push_back(std::move(acc));
        }
        cur = std::move(next);
    }
    return cur.front();
}

/// Slice `which` of `count` equal column blocks at mode n.
inline PairedTensorTrain block_tt_extract(const PairedTensorTrain& y, std::size_t n, std::size_t which,
                                          std::size_t count) {
    detail::check_block_mode(y, n);
    const std::size_t L = y.col_shape()[n];
    if (count == 0 || L % count != 0)
        throw DimensionError("mode " + std::to_string(n) + " column size " + std::to_string(L) +
                             " is not a multiple of " + std::to_string(count));
    if (which >= count)
        throw DimensionError("block " + std::to_string(which) + " out of range for " + std::to_string(count) + " blocks");
    const std::size_t J = y.row_shape()[n], I = L / count;
    const auto& c = y.core(n);
    TrainCore p(c.r0(), J * I, c.r1());
    for (std::size_t b = 0; b < c.r1(); ++b)
        for (std::size_t i = 0; i < I; ++i)
            for (std::size_t j = 0; j < J; ++j)
                for (std::size_t r = 0; r < c.r0(); ++r) p(r, j + J * i, b) = c(r, j + J * (i + I * which), b);
    TensorTrain t = y.train();
    t.core(n) = std::move(p);
    return {std::move(t), y.row_shape(), y.col_shape().with(n, I)};
}

/// Block k (0-based, first factor fastest) of a mode row block train.
inline PairedTensorTrain block_tt_extract(const PairedTensorTrain& y, std::size_t k, const Factorization& fact) {
    if (fact.order() != y.order()) throw DimensionError("factorization order mismatch");
    if (k >= fact.total())
        throw DimensionError("block " + std::to_string(k) + " out of range for " + std::to_string(fact.total()) + " blocks");
    const auto digits = unravel(k, fact.values());
    PairedTensorTrain out = y;
    for (std::size_t n = 0; n < y.order(); ++n)
        if (fact[n] > 1) out = block_tt_extract(out, n, digits[n], fact[n]);
    return out;
}

/// Column-block duals through the transpose.
inline PairedTensorTrain block_tt_col_n(const PairedTensorTrain& a, const PairedTensorTrain& b, std::size_t n) {
    return tt_transpose(block_tt_row_n(tt_transpose(a), tt_transpose(b), n));
}

inline PairedTensorTrain block_tt_col(const std::vector<PairedTensorTrain>& blocks, const Factorization& fact,
                                      double round_tol) {
    std::vector<PairedTensorTrain> t;
    t.reserve(blocks.size());
    for (const auto& b : blocks) t.push_back(tt_transpose(b));
    return tt_transpose(block_tt_row(t, fact, round_tol));
}

}  // namespace mltt
