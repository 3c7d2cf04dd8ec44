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
#include <random>
#include <vector>

#include "mltt/dense/shape.hpp"
#include "mltt/dense/tensor.hpp"

namespace mltt::test {

inline std::vector<double> normal_values(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

inline DenseTensor random_dense(const Shape& s, std::mt19937_64& rng) { return {s, normal_values(s.total(), rng)}; }

inline PairedTensor random_paired(const Shape& row, const Shape& col, std::mt19937_64& rng) {
    return {row, col, normal_values(row.total() * col.total(), rng)};
}

inline Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
    Matrix m(r, c);
    std::normal_distribution<double> g(0.0, 1.0);
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = g(rng);
    return m;
}

/// All multi-indices of a shape, first digit fastest.
inline std::vector<std::vector<std::size_t>> indices(const Shape& s) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t k = 0; k < s.total(); ++k) out.push_back(unravel(k, s.values()));
    return out;
}

inline double rel_diff(const Matrix& a, const Matrix& b) {
    const double nb = b.norm();
    return (a - b).norm() / (nb > 0 ? nb : 1.0);
}

}  // namespace mltt::test

#include <Eigen/Eigenvalues>

#include "mltt/tt/train.hpp"

namespace mltt::test {

/// Train with standard-normal cores and the given interior ranks.
inline TensorTrain random_train(const std::vector<std::size_t>& modes, const std::vector<std::size_t>& inner_ranks,
                                std::mt19937_64& rng) {
    std::vector<TrainCore> cores;
    for (std::size_t n = 0; n < modes.size(); ++n) {
        const std::size_t r0 = n == 0 ? 1 : inner_ranks[n - 1];
        const std::size_t r1 = n + 1 == modes.size() ? 1 : inner_ranks[n];
        cores.emplace_back(r0, modes[n], r1, normal_values(r0 * modes[n] * r1, rng));
    }
    return TensorTrain(std::move(cores));
}

inline PairedTensorTrain random_gtt(const Shape& row, const Shape& col, const std::vector<std::size_t>& inner_ranks,
                                    std::mt19937_64& rng) {
    std::vector<std::size_t> m(row.order());
    for (std::size_t n = 0; n < m.size(); ++n) m[n] = row[n] * col[n];
    return {random_train(m, inner_ranks, rng), row, col};
}

inline double rel_err(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0, den = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        num += (a[k] - b[k]) * (a[k] - b[k]);
        den += b[k] * b[k];
    }
    return std::sqrt(num) / (den > 0 ? std::sqrt(den) : 1.0);
}

inline double dense_radius(const Matrix& a) {
    Eigen::EigenSolver<Matrix> es(a, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Random GTT operator on J (x) J rescaled so that rho(psi(A)) = radius.
inline PairedTensorTrain random_stable_gtt(const Shape& j, const std::vector<std::size_t>& inner_ranks, double radius,
                                           std::mt19937_64& rng) {
    auto a = random_gtt(j, j, inner_ranks, rng);
    const auto d = reconstruct(a);
    Matrix m(static_cast<Eigen::Index>(j.total()), static_cast<Eigen::Index>(j.total()));
    for (std::size_t c = 0; c < j.total(); ++c)
        for (std::size_t r = 0; r < j.total(); ++r) m(r, c) = d.at(unravel(r, j.values()), unravel(c, j.values()));
    const double rho = dense_radius(m);
    for (auto& v : a.core(0).data()) v *= radius / rho;
    return a;
}

}  // namespace mltt::test
