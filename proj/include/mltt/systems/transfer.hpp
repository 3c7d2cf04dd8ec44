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
#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "mltt/errors.hpp"
#include "mltt/lyapunov.hpp"
#include "mltt/system.hpp"

namespace mltt {

using Complex = std::complex<double>;

/// Reciprocal pivot ratio below which the resolvent counts as singular.
inline constexpr double kResolventRcond = 1e-13;

/// G(z) = C (zI - A)^{-1} B. A is reduced to Hessenberg form once; each
/// evaluation is then an O(n^2) elimination with adjacent-row pivoting.
class TransferFunction {
public:
    explicit TransferFunction(const MatrixSystem& m) {
        const auto n = m.a.rows();
        if (m.a.cols() != n || m.b.rows() != n || m.c.cols() != n)
            throw DimensionError("transfer function: inconsistent state dimension");
        if (n == 0) {
            d_ = Matrix::Zero(m.c.rows(), m.b.cols());
            return;
        }
        Eigen::HessenbergDecomposition<Matrix> hd(m.a);
        h_ = hd.matrixH();
        const Matrix q = hd.matrixQ();
        qb_ = q.transpose() * m.b;
        cq_ = m.c * q;
    }

    std::size_t outputs() const { return static_cast<std::size_t>(h_.rows() ? cq_.rows() : d_.rows()); }
    std::size_t inputs() const { return static_cast<std::size_t>(h_.rows() ? qb_.cols() : d_.cols()); }

    CMatrix operator()(Complex z) const {
        const Eigen::Index n = h_.rows();
        if (n == 0) return d_.cast<Complex>();
        CMatrix m = -h_.cast<Complex>();
        m.diagonal().array() += z;
        CMatrix r = qb_.cast<Complex>();
        for (Eigen::Index k = 0; k + 1 < n; ++k) {
            if (std::abs(m(k + 1, k)) > std::abs(m(k, k))) {
                m.row(k).tail(n - k).swap(m.row(k + 1).tail(n - k));
                r.row(k).swap(r.row(k + 1));
            }
            if (m(k, k) == Complex(0)) continue;
            const Complex l = m(k + 1, k) / m(k, k);
            m.row(k + 1).tail(n - k) -= l * m.row(k).tail(n - k);
            r.row(k + 1) -= l * r.row(k);
        }
        const double pmax = m.diagonal().cwiseAbs().maxCoeff();
        const double pmin = m.diagonal().cwiseAbs().minCoeff();
        if (!(pmin > kResolventRcond * pmax)) {
            std::ostringstream os;
            os << "resolvent is numerically singular at z = " << z;
            throw SingularityError(os.str());
        }
        return cq_.cast<Complex>() * m.triangularView<Eigen::Upper>().solve(r);
    }

private:
    Matrix h_, qb_, cq_, d_;
};

inline CMatrix transfer_eval(const MatrixSystem& m, Complex z) { return TransferFunction(m)(z); }

inline CMatrix transfer_eval(const MltiSystem& sys, Complex z) { return transfer_eval(sys.unfolded(), z); }

/// Sample points on the unit circle.
struct FrequencyGrid {
    std::vector<Complex> points;

    /// z_k = exp(2 pi i k / count), k = 0 .. count - 1.
    static FrequencyGrid uniform(std::size_t count) {
        if (count == 0) throw ConfigError("frequency grid needs at least one sample");
        FrequencyGrid g;
        g.points.reserve(count);
        for (std::size_t k = 0; k < count; ++k)
            g.points.push_back(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count)));
        return g;
    }

    std::size_t count() const { return points.size(); }
};

inline double spectral_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<CMatrix>(m).singularValues()(0);
}

/// max over the grid of || G_a(z) - G_b(z) ||_2; a lower bound on the H-infinity distance.
inline double hinf_estimate(const MatrixSystem& a, const MatrixSystem& b, const FrequencyGrid& grid) {
    if (a.inputs() != b.inputs() || a.outputs() != b.outputs())
        throw DimensionError("systems have different input/output dimensions");
    const TransferFunction ga(a), gb(b);
    double best = 0.0;
    for (const auto& z : grid.points) best = std::max(best, spectral_norm(ga(z) - gb(z)));
    return best;
}

inline double hinf_estimate(const MltiSystem& a, const MltiSystem& b, const FrequencyGrid& grid) {
    return hinf_estimate(a.unfolded(), b.unfolded(), grid);
}

}  // namespace mltt
