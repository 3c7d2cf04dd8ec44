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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mltt/dense/tensor.hpp"
#include "mltt/errors.hpp"
#include "mltt/linalg.hpp"
#include "mltt/tt/train.hpp"

namespace mltt {

/// Makes cores [from, up_to) left-orthonormal by QR, pushing R into the next
/// core. up_to may be at most order - 1.
inline void left_orthonormalize(TensorTrain& t, std::size_t up_to, std::size_t from = 0) {
    if (up_to >= t.order())
        throw DimensionError("left_orthonormalize: core " + std::to_string(up_to) + " out of range");
    for (std::size_t n = from; n < up_to; ++n) {
        auto& c = t.core(n);
        auto f = linalg::qr(c.left());
        const std::size_t r = static_cast<std::size_t>(f.q.cols());
        TrainCore q(c.r0(), c.n(), r, f.q);
        auto& next = t.core(n + 1);
        Matrix nr = f.r * next.right();
        next = TrainCore(r, next.n(), next.r1(), nr);
        c = std::move(q);
    }
}

/// Makes cores (down_to, order - 1] right-orthonormal by LQ, pushing L into
/// the previous core.
inline void right_orthonormalize(TensorTrain& t, std::size_t down_to, std::size_t from = static_cast<std::size_t>(-1)) {
    if (down_to >= t.order()) throw DimensionError("right_orthonormalize: core " + std::to_string(down_to) + " out of range");
    const std::size_t start = std::min(from, t.order() - 1);
    for (std::size_t n = start; n > down_to; --n) {
        auto& c = t.core(n);
        auto f = linalg::qr(c.right().transpose());
        const std::size_t r = static_cast<std::size_t>(f.q.cols());
        TrainCore q(r, c.n(), c.r1(), Matrix(f.q.transpose()));
        auto& prev = t.core(n - 1);
        Matrix pl = prev.left() * f.r.transpose();
        prev = TrainCore(prev.r0(), prev.n(), r, pl);
        c = std::move(q);
    }
}

inline void left_orthonormalize(PairedTensorTrain& a, std::size_t up_to) { left_orthonormalize(a.train(), up_to); }
inline void right_orthonormalize(PairedTensorTrain& a, std::size_t down_to) { right_orthonormalize(a.train(), down_to); }

/// Frobenius norm; computed through a right-orthonormal sweep.
inline double tt_norm(const TensorTrain& t) {
    TensorTrain c = t;
    right_orthonormalize(c, 0);
    return Eigen::Map<const Vector>(c.core(0).data().data(), static_cast<Eigen::Index>(c.core(0).size())).norm();
}

inline double tt_norm(const PairedTensorTrain& a) { return tt_norm(a.train()); }

/// <x, y> by left-to-right environment contraction.
inline double tt_dot(const TensorTrain& x, const TensorTrain& y) {
    if (x.shape() != y.shape()) throw DimensionError("tt_dot: shapes " + x.shape().str() + " and " + y.shape().str());
    Matrix env = Matrix::Ones(1, 1);
    for (std::size_t n = 0; n < x.order(); ++n) {
        const auto& a = x.core(n);
        const auto& b = y.core(n);
        Matrix next = Matrix::Zero(static_cast<Eigen::Index>(a.r1()), static_cast<Eigen::Index>(b.r1()));
        for (std::size_t j = 0; j < a.n(); ++j) next.noalias() += a.slice(j).transpose() * env * b.slice(j);
        env = std::move(next);
    }
    return env(0, 0);
}

inline double tt_dot(const PairedTensorTrain& a, const PairedTensorTrain& b) {
    if (a.row_shape() != b.row_shape() || a.col_shape() != b.col_shape())
        throw DimensionError("tt_dot: paired shapes differ");
    return tt_dot(a.train(), b.train());
}

inline TensorTrain tt_scale(TensorTrain t, double s) {
    for (auto& v : t.core(0).data()) v *= s;
    return t;
}

inline PairedTensorTrain tt_scale(const PairedTensorTrain& a, double s) {
    return {tt_scale(a.train(), s), a.row_shape(), a.col_shape()};
}

/// Block-diagonal core merge; interior ranks add.
inline TensorTrain tt_add(const TensorTrain& x, const TensorTrain& y) {
    if (x.shape() != y.shape()) throw DimensionError("tt_add: shapes " + x.shape().str() + " and " + y.shape().str());
    const std::size_t d = x.order();
    std::vector<TrainCore> cores;
    for (std::size_t n = 0; n < d; ++n) {
        const auto& a = x.core(n);
        const auto& b = y.core(n);
        const std::size_t r0 = n == 0 ? 1 : a.r0() + b.r0();
        const std::size_t r1 = n + 1 == d ? 1 : a.r1() + b.r1();
        const std::size_t a_off0 = 0, b_off0 = n == 0 ? 0 : a.r0();
        const std::size_t a_off1 = 0, b_off1 = n + 1 == d ? 0 : a.r1();
        TrainCore c(r0, a.n(), r1);
        for (std::size_t k = 0; k < a.r1(); ++k)
            for (std::size_t j = 0; j < a.n(); ++j)
                for (std::size_t i = 0; i < a.r0(); ++i) c(i + a_off0, j, k + a_off1) += a(i, j, k);
        for (std::size_t k = 0; k < b.r1(); ++k)
            for (std::size_t j = 0; j < b.n(); ++j)
                for (std::size_t i = 0; i < b.r0(); ++i) c(i + b_off0, j, k + b_off1) += b(i, j, k);
        cores.push_back(std::move(c));
    }
    return TensorTrain(std::move(cores));
}

inline PairedTensorTrain tt_add(const PairedTensorTrain& a, const PairedTensorTrain& b) {
    if (a.row_shape() != b.row_shape() || a.col_shape() != b.col_shape())
        throw DimensionError("tt_add: paired shapes " + a.row_shape().str() + "x" + a.col_shape().str() + " and " +
                             b.row_shape().str() + "x" + b.col_shape().str());
    return {tt_add(a.train(), b.train()), a.row_shape(), a.col_shape()};
}

inline PairedTensorTrain tt_sub(const PairedTensorTrain& a, const PairedTensorTrain& b) {
    return tt_add(a, tt_scale(b, -1.0));
}

/// Transposes the J_n x I_n slices of every core.
inline PairedTensorTrain tt_transpose(const PairedTensorTrain& a) {
    std::vector<TrainCore> cores;
    for (std::size_t n = 0; n < a.order(); ++n) {
        const auto& c = a.core(n);
        const std::size_t jn = a.row_shape()[n], in = a.col_shape()[n];
        TrainCore t(c.r0(), c.n(), c.r1());
        for (std::size_t b = 0; b < c.r1(); ++b)
            for (std::size_t i = 0; i < in; ++i)
                for (std::size_t j = 0; j < jn; ++j)
                    for (std::size_t r = 0; r < c.r0(); ++r) t(r, i + in * j, b) = c(r, j + jn * i, b);
        cores.push_back(std::move(t));
    }
    return {TensorTrain(std::move(cores)), a.col_shape(), a.row_shape()};
}

/// TT-Einstein product: E^(n) = A^(n) B^(n) with merged rank index r + s R.
inline PairedTensorTrain tt_einstein(const PairedTensorTrain& a, const PairedTensorTrain& b) {
    if (a.col_shape() != b.row_shape())
        throw DimensionError("tt_einstein: column shape " + a.col_shape().str() + " != row shape " +
                             b.row_shape().str());
    std::vector<TrainCore> cores;
    for (std::size_t n = 0; n < a.order(); ++n) {
        const auto& ca = a.core(n);
        const auto& cb = b.core(n);
        const std::size_t J = a.row_shape()[n], K = a.col_shape()[n], I = b.col_shape()[n];
        const std::size_t ra0 = ca.r0(), ra1 = ca.r1(), rb0 = cb.r0(), rb1 = cb.r1();
        // A as (ra0 J ra1) x K, B as K x (rb0 I rb1).
        Matrix ma(static_cast<Eigen::Index>(ra0 * J * ra1), static_cast<Eigen::Index>(K));
        for (std::size_t r1 = 0; r1 < ra1; ++r1)
            for (std::size_t k = 0; k < K; ++k)
                for (std::size_t j = 0; j < J; ++j)
                    for (std::size_t r0 = 0; r0 < ra0; ++r0)
                        ma(static_cast<Eigen::Index>(r0 + ra0 * (j + J * r1)), static_cast<Eigen::Index>(k)) =
                            ca(r0, j + J * k, r1);
        Matrix mb(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(rb0 * I * rb1));
        for (std::size_t s1 = 0; s1 < rb1; ++s1)
            for (std::size_t i = 0; i < I; ++i)
                for (std::size_t k = 0; k < K; ++k)
                    for (std::size_t s0 = 0; s0 < rb0; ++s0)
                        mb(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(s0 + rb0 * (i + I * s1))) =
                            cb(s0, k + K * i, s1);
        Matrix p = ma * mb;
        TrainCore e(ra0 * rb0, J * I, ra1 * rb1);
        for (std::size_t s1 = 0; s1 < rb1; ++s1)
            for (std::size_t i = 0; i < I; ++i)
                for (std::size_t s0 = 0; s0 < rb0; ++s0)
                    for (std::size_t r1 = 0; r1 < ra1; ++r1)
                        for (std::size_t j = 0; j < J; ++j)
                            for (std::size_t r0 = 0; r0 < ra0; ++r0)
                                e(r0 + ra0 * s0, j + J * i, r1 + ra1 * s1) =
                                    p(static_cast<Eigen::Index>(r0 + ra0 * (j + J * r1)),
                                      static_cast<Eigen::Index>(s0 + rb0 * (i + I * s1)));
        cores.push_back(std::move(e));
    }
    return {TensorTrain(std::move(cores)), a.row_shape(), b.col_shape()};
}

/// TT-rounding: right-orthonormal sweep, then a truncated SVD sweep from the
/// left. tol is relative to the norm of the operand.
inline TensorTrain tt_round(const TensorTrain& t, double tol, std::size_t max_rank = 0) {
    if (tol < 0) throw ConfigError("tt_round: tolerance must be non-negative");
    TensorTrain c = t;
    const std::size_t d = c.order();
    if (d == 1) return c;
    right_orthonormalize(c, 0);
    const double norm = Eigen::Map<const Vector>(c.core(0).data().data(), static_cast<Eigen::Index>(c.core(0).size())).norm();
    const double per = tol / std::sqrt(static_cast<double>(d - 1));
    const double delta = std::max(per, linalg::kExactTol) * norm;
    for (std::size_t n = 0; n + 1 < d; ++n) {
        auto& cur = c.core(n);
        auto f = linalg::svd(cur.left());
        const std::size_t r = linalg::truncation_rank(f.s, delta, max_rank);
        const auto rr = static_cast<Eigen::Index>(r);
        TrainCore u(cur.r0(), cur.n(), r, Matrix(f.u.leftCols(rr)));
        Matrix sv = f.s.head(rr).asDiagonal() * f.v.leftCols(rr).transpose();
        auto& next = c.core(n + 1);
        Matrix nr = sv * next.right();
        next = TrainCore(r, next.n(), next.r1(), nr);
        cur = std::move(u);
    }
    return c;
}

inline PairedTensorTrain tt_round(const PairedTensorTrain& a, double tol, std::size_t max_rank = 0) {
    return {tt_round(a.train(), tol, max_rank), a.row_shape(), a.col_shape()};
}

/// A * x for an operator train and a plain train.
inline TensorTrain tt_apply(const PairedTensorTrain& a, const TensorTrain& x) {
    return tt_einstein(a, PairedTensorTrain::column(x)).train();
}

/// psi(a * b) as a dense |J| x |I| matrix, contracted core by core so the
/// shared index set is never materialized. Meant for small outer shapes.
inline Matrix einstein_to_dense(const PairedTensorTrain& a, const PairedTensorTrain& b,
                                std::size_t budget = kDefaultDenseBudget) {
    if (a.col_shape() != b.row_shape())
        throw DimensionError("einstein_to_dense: column shape " + a.col_shape().str() + " != row shape " +
                             b.row_shape().str());
    detail::checked_total({a.row_shape().total(), b.col_shape().total()}, budget);
    // State layout (alpha, p, beta), p = jp + Jp ip.
    std::vector<double> state{1.0};
    std::size_t ra = 1, rb = 1, jp = 1, ip = 1;
    for (std::size_t n = 0; n < a.order(); ++n) {
        const auto& ca = a.core(n);
        const auto& cb = b.core(n);
        const std::size_t J = a.row_shape()[n], K = a.col_shape()[n], I = b.col_shape()[n];
        const std::size_t ra1 = ca.r1(), rb1 = cb.r1();
        const std::size_t P = jp * ip;
        if (ra1 * P * J * I * rb1 > budget) throw CapacityError("einstein_to_dense: intermediate exceeds the budget");
        Eigen::Map<const Matrix> s(state.data(), static_cast<Eigen::Index>(ra), static_cast<Eigen::Index>(P * rb));
        // T = s^T * A_right : (p, beta) x (j, k, alpha').
        Matrix t = s.transpose() * ca.right();
        // Rearrange to (p, j, alpha') x (beta, k).
        Matrix tp(static_cast<Eigen::Index>(P * J * ra1), static_cast<Eigen::Index>(rb * K));
        for (std::size_t a1 = 0; a1 < ra1; ++a1)
            for (std::size_t k = 0; k < K; ++k)
                for (std::size_t j = 0; j < J; ++j)
                    for (std::size_t be = 0; be < rb; ++be)
                        for (std::size_t p = 0; p < P; ++p)
                            tp(static_cast<Eigen::Index>(p + P * (j + J * a1)), static_cast<Eigen::Index>(be + rb * k)) =
                                t(static_cast<Eigen::Index>(p + P * be), static_cast<Eigen::Index>(j + J * (k + K * a1)));
        // B left unfolding over (beta, k) with the remaining (i, beta') columns.
        Eigen::Map<const Matrix> mb(cb.data().data(), static_cast<Eigen::Index>(rb * K),
                                    static_cast<Eigen::Index>(I * rb1));
        Matrix u = tp * mb;  // (p, j, alpha') x (i, beta')
        const std::size_t njp = jp * J, nip = ip * I, nP = njp * nip;
        std::vector<double> next(ra1 * nP * rb1);
        for (std::size_t b1 = 0; b1 < rb1; ++b1)
            for (std::size_t i = 0; i < I; ++i)
                for (std::size_t a1 = 0; a1 < ra1; ++a1)
                    for (std::size_t j = 0; j < J; ++j)
                        for (std::size_t p = 0; p < P; ++p) {
                            const std::size_t pj = p % jp, pi = p / jp;
                            const std::size_t np = (pj + jp * j) + njp * (pi + ip * i);
                            next[a1 + ra1 * (np + nP * b1)] =
                                u(static_cast<Eigen::Index>(p + P * (j + J * a1)), static_cast<Eigen::Index>(i + I * b1));
                        }
        state = std::move(next);
        ra = ra1;
        rb = rb1;
        jp = njp;
        ip = nip;
    }
    return Eigen::Map<const Matrix>(state.data(), static_cast<Eigen::Index>(jp), static_cast<Eigen::Index>(ip));
}

}  // namespace mltt
