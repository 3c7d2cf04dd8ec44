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

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "mltt/dense/tensor.hpp"

namespace mltt::linalg {

/// Floor for "exact" truncations, relative to the operand norm. Singular
/// values whose tail lies below this are rounding noise.
inline constexpr double kExactTol = 1e-14;

struct Svd {
    Matrix u;  // m x k
    Vector s;  // k, descending
    Matrix v;  // n x k
};

/// Flips singular pairs so the largest-magnitude entry of each left vector is
/// positive; makes every factorization in the library deterministic.
inline void fix_signs(Matrix& u, Matrix& v) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        Eigen::Index arg = 0;
        u.col(c).cwiseAbs().maxCoeff(&arg);
        if (u(arg, c) < 0) {
            u.col(c) *= -1.0;
            if (c < v.cols()) v.col(c) *= -1.0;
        }
    }
}

/// Thin SVD. Jacobi for small operands, divide-and-conquer otherwise.
inline Svd svd(const Eigen::Ref<const Matrix>& m) {
    Svd out;
    if (m.rows() == 0 || m.cols() == 0) return out;
    if (std::min(m.rows(), m.cols()) <= 48) {
        Eigen::JacobiSVD<Matrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.u = solver.matrixU();
        out.s = solver.singularValues();
        out.v = solver.matrixV();
    } else {
        Eigen::BDCSVD<Matrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.u = solver.matrixU();
        out.s = solver.singularValues();
        out.v = solver.matrixV();
    }
    fix_signs(out.u, out.v);
    return out;
}

inline Vector singular_values(const Eigen::Ref<const Matrix>& m) {
    if (m.rows() == 0 || m.cols() == 0) return {};
    if (std::min(m.rows(), m.cols()) <= 48) return Eigen::JacobiSVD<Matrix>(m).singularValues();
    return Eigen::BDCSVD<Matrix>(m).singularValues();
}

/// Smallest rank r >= 1 whose discarded tail sqrt(sum_{k>=r} s_k^2) is at
/// most `tail_tol`, capped at `max_rank`.
inline std::size_t truncation_rank(const Vector& s, double tail_tol, std::size_t max_rank = 0) {
    const auto n = static_cast<std::size_t>(s.size());
    if (n == 0) return 0;
    std::size_t r = n;
    double tail = 0.0;
    while (r > 1) {
        const double next = tail + s[static_cast<Eigen::Index>(r - 1)] * s[static_cast<Eigen::Index>(r - 1)];
        if (std::sqrt(next) > tail_tol) break;
        tail = next;
        --r;
    }
    if (max_rank > 0) r = std::min(r, max_rank);
    return r;
}

/// Thin QR with a non-negative diagonal in R.
struct Qr {
    Matrix q;
    Matrix r;
};

inline Qr qr(const Eigen::Ref<const Matrix>& m) {
    const Eigen::Index k = std::min(m.rows(), m.cols());
    Eigen::HouseholderQR<Matrix> solver(m);
    Qr out;
    out.q = solver.householderQ() * Matrix::Identity(m.rows(), k);
    out.r = solver.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < k; ++i) {
        if (out.r(i, i) < 0) {
            out.r.row(i) *= -1.0;
            out.q.col(i) *= -1.0;
        }
    }
    return out;
}

}  // namespace mltt::linalg
