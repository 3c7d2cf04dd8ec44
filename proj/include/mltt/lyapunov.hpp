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
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "mltt/dense/algebra.hpp"
#include "mltt/errors.hpp"
#include "mltt/system.hpp"
#include "mltt/tt/algebra.hpp"
#include "mltt/tt/decompose.hpp"
#include "mltt/tt/nptt.hpp"
#include "mltt/tt/train.hpp"

namespace mltt {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

enum class LyapSolver { dense, smith, squared_smith };

/// Largest state count whose stability is checked by a dense eigensolve.
inline constexpr std::size_t kDenseStabilityLimit = 1024;

struct SolverConfig {
    double tol = 1e-10;
    std::size_t max_iter = 500;
    double round_tol = 1e-12;
    LyapSolver solver = LyapSolver::squared_smith;
    bool check_stability = true;
    std::size_t dense_stability_limit = kDenseStabilityLimit;
};

/// Solution of X - A*X*A^T = B with its honestly evaluated relative residual.
struct LyapSolveReport {
    PairedTensorTrain solution;
    double residual = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> history;  // residual of every iterate

    /// Non-paired layout (row modes first, then column modes).
    TensorTrain nptt() const { return tt_to_nptt(gtt_to_tt(solution)); }
    PairedTensor dense(std::size_t budget = kDefaultDenseBudget) const { return reconstruct(solution, budget); }
};

// ---------------------------------------------------------------------------
// spectral radius

inline double spectral_radius(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("spectral radius of a non-square matrix");
    if (a.size() == 0) return 0.0;
    Eigen::EigenSolver<Matrix> es(a, false);
    if (es.info() != Eigen::Success) throw ConvergenceError("eigenvalue iteration failed");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Spectral radius of psi(a). Rank-1 trains are Kronecker products, so the
/// radius is the product of the per-core radii; small operators use a dense
/// eigensolve; anything else a 50-step power iteration.
inline double spectral_radius(const PairedTensorTrain& a, std::size_t dense_limit = kDenseStabilityLimit) {
    if (a.row_shape() != a.col_shape()) throw DimensionError("spectral radius needs a square operator");
    if (a.max_rank() == 1) {
        double rho = 1.0;
        for (std::size_t n = 0; n < a.order(); ++n) {
            const auto j = static_cast<Eigen::Index>(a.row_shape()[n]);
            rho *= spectral_radius(Matrix(Eigen::Map<const Matrix>(a.core(n).data().data(), j, j)));
        }
        return rho;
    }
    if (a.row_shape().total() <= dense_limit) return spectral_radius(psi_unfold(reconstruct(a)));

    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> g;
    std::vector<TrainCore> cores;
    for (auto j : a.row_shape()) {
        TrainCore c(1, j, 1);
        for (auto& v : c.data()) v = g(rng);
        cores.push_back(std::move(c));
    }
    TensorTrain x(std::move(cores));
    x = tt_scale(x, 1.0 / tt_norm(x));
    constexpr int steps = 50, window = 10;
    double log_growth = 0.0;
    for (int k = 0; k < steps; ++k) {
        x = tt_round(tt_apply(a, x), 1e-8, 64);
        const double nx = tt_norm(x);
        if (nx == 0.0) return 0.0;
        if (k >= steps - window) log_growth += std::log(nx);
        x = tt_scale(x, 1.0 / nx);
    }
    return std::exp(log_growth / window);
}

namespace detail {

inline void check_lyap_shapes(const Shape& ar, const Shape& ac, const Shape& br, const Shape& bc) {
    if (ar != ac) throw DimensionError("Lyapunov operator must be square, got " + ar.str() + "x" + ac.str());
    if (br != ar || bc != ar)
        throw DimensionError("right-hand side " + br.str() + "x" + bc.str() + " does not match " + ar.str());
}

inline void stability_gate(const PairedTensorTrain& a, const SolverConfig& cfg) {
    if (!cfg.check_stability) return;
    const double rho = spectral_radius(a, cfg.dense_stability_limit);
    if (!(rho < 1.0)) throw StabilityError("spectral radius " + std::to_string(rho) + " is not below 1");
}

inline PairedTensorTrain sandwich(const PairedTensorTrain& a, const PairedTensorTrain& x,
                                  const PairedTensorTrain& at) {
    return tt_einstein(tt_einstein(a, x), at);
}

inline bool is_symmetric(const PairedTensorTrain& b) {
    if (b.row_shape() != b.col_shape()) return false;
    return tt_norm(tt_sub(b, tt_transpose(b))) <= 1e-12 * tt_norm(b);
}

inline PairedTensorTrain symmetrize(const PairedTensorTrain& x, double tol) {
    return tt_round(tt_scale(tt_add(x, tt_transpose(x)), 0.5), tol);
}

inline void check_solver_config(double tol, double round_tol) {
    if (tol < 0 || round_tol < 0) throw ConfigError("solver tolerances must be non-negative");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// dense

/// Solves X - A X A^T = B through the complex Schur form of A, one triangular
/// system per column. Throws StabilityError when rho(A) >= 1.
inline Matrix stein_solve(const Matrix& a, const Matrix& b) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n || b.rows() != n || b.cols() != n) throw DimensionError("Stein equation shape mismatch");
    if (n == 0) return Matrix(0, 0);
    Eigen::ComplexSchur<Matrix> schur(a);
    if (schur.info() != Eigen::Success) throw ConvergenceError("Schur iteration failed");
    const CMatrix& t = schur.matrixT();
    const CMatrix& q = schur.matrixU();
    const double rho = t.diagonal().cwiseAbs().maxCoeff();
    if (!(rho < 1.0)) throw StabilityError("spectral radius " + std::to_string(rho) + " is not below 1");

    const CMatrix c = q.adjoint() * b.cast<std::complex<double>>() * q;
    CMatrix y(n, n);
    CMatrix m(n, n);
    for (Eigen::Index j = n - 1; j >= 0; --j) {
        const Eigen::Index tail = n - 1 - j;
        CVector rhs = c.col(j);
        if (tail > 0) {
            CVector acc = y.rightCols(tail) * t.row(j).tail(tail).adjoint();
            rhs += t.triangularView<Eigen::Upper>() * acc;
        }
        m = -std::conj(t(j, j)) * t;
        m.diagonal().array() += 1.0;
        y.col(j) = m.triangularView<Eigen::Upper>().solve(rhs);
    }
    return (q * y * q.adjoint()).real();
}

/// ||X - A X A^T - B|| / ||B|| on unfoldings.
inline double lyap_residual(const Matrix& a, const Matrix& x, const Matrix& b) {
    const double nb = b.norm();
    return (x - a * x * a.transpose() - b).norm() / (nb > 0 ? nb : 1.0);
}

inline double lyap_residual(const PairedTensor& a, const PairedTensor& x, const PairedTensor& b) {
    return lyap_residual(psi_unfold(a), psi_unfold(x), psi_unfold(b));
}

inline double lyap_residual(const PairedTensorTrain& a, const PairedTensorTrain& x, const PairedTensorTrain& b) {
    const double nb = tt_norm(b);
    const auto r = tt_sub(tt_sub(x, detail::sandwich(a, x, tt_transpose(a))), b);
    return tt_norm(r) / (nb > 0 ? nb : 1.0);
}

/// Dense tensor Lyapunov solve on the psi unfolding.
inline PairedTensor lyap_dense(const PairedTensor& a, const PairedTensor& b) {
    detail::check_lyap_shapes(a.row_shape(), a.col_shape(), b.row_shape(), b.col_shape());
    return psi_fold(stein_solve(psi_unfold(a), psi_unfold(b)), b.row_shape(), b.col_shape());
}

// ---------------------------------------------------------------------------
// train

/// I - A o A on (J u J) (x) (J u J): the train of A written twice end to end,
/// minus the U-identity. Acts on X in its non-paired layout.
inline PairedTensorTrain lyap_operator(const PairedTensorTrain& a) {
    if (a.row_shape() != a.col_shape()) throw DimensionError("lyap_operator needs a square operator");
    std::vector<TrainCore> cores = a.train().cores();
    cores.insert(cores.end(), a.train().cores().begin(), a.train().cores().end());
    std::vector<std::size_t> s = a.row_shape().values();
    s.insert(s.end(), a.row_shape().values().begin(), a.row_shape().values().end());
    const Shape jj(s);
    PairedTensorTrain aa(TensorTrain(std::move(cores)), jj, jj);
    return tt_sub(PairedTensorTrain::identity(jj), aa);
}

/// Smith iteration X <- B + A X A^T with rounding. The residual of each
/// iterate falls out of the next update, so the reported value is exact for
/// the returned solution.
inline LyapSolveReport lyap_tt_smith(const PairedTensorTrain& a, const PairedTensorTrain& b, double tol,
                                     std::size_t max_iter, double round_tol) {
    detail::check_lyap_shapes(a.row_shape(), a.col_shape(), b.row_shape(), b.col_shape());
    detail::check_solver_config(tol, round_tol);
    LyapSolveReport rep;
    const double nb = tt_norm(b);
    if (nb == 0.0) return {b, 0.0, 1, true, {0.0}};
    const bool sym = detail::is_symmetric(b);
    const auto at = tt_transpose(a);
    PairedTensorTrain x = tt_round(b, round_tol);
    for (std::size_t it = 1; it <= std::max<std::size_t>(max_iter, 1); ++it) {
        auto z = tt_add(b, detail::sandwich(a, x, at));
        rep.residual = tt_norm(tt_sub(z, x)) / nb;
        rep.history.push_back(rep.residual);
        rep.iterations = it;
        if (rep.residual <= tol) {
            rep.converged = true;
            break;
        }
        if (it == max_iter) break;
        x = tt_round(z, round_tol);
        if (sym) x = detail::symmetrize(x, round_tol);
    }
    rep.solution = std::move(x);
    return rep;
}

/// Squared Smith: X <- X + A_k X A_k^T, A_k <- A_k * A_k. After k doublings X
/// holds 2^k terms of the series. Residuals are taken against the original A.
inline LyapSolveReport lyap_tt_squared_smith(const PairedTensorTrain& a, const PairedTensorTrain& b, double tol,
                                             std::size_t max_iter, double round_tol) {
    detail::check_lyap_shapes(a.row_shape(), a.col_shape(), b.row_shape(), b.col_shape());
    detail::check_solver_config(tol, round_tol);
    LyapSolveReport rep;
    const double nb = tt_norm(b);
    if (nb == 0.0) return {b, 0.0, 1, true, {0.0}};
    const bool sym = detail::is_symmetric(b);
    const auto at = tt_transpose(a);
    PairedTensorTrain x = tt_round(b, round_tol);
    PairedTensorTrain ak = a;
    for (std::size_t it = 1; it <= std::max<std::size_t>(max_iter, 1); ++it) {
        rep.residual = tt_norm(tt_sub(tt_add(b, detail::sandwich(a, x, at)), x)) / nb;
        rep.history.push_back(rep.residual);
        rep.iterations = it;
        if (rep.residual <= tol) {
            rep.converged = true;
            break;
        }
        if (it == max_iter) break;
        const auto akx = tt_round(tt_einstein(ak, x), round_tol);
        x = tt_round(tt_add(x, tt_round(tt_einstein(akx, tt_transpose(ak)), round_tol)), round_tol);
        if (sym) x = detail::symmetrize(x, round_tol);
        ak = tt_round(tt_einstein(ak, ak), round_tol);
    }
    rep.solution = std::move(x);
    return rep;
}

/// Dispatches on cfg.solver after the stability gate.
inline LyapSolveReport lyap_solve(const PairedTensorTrain& a, const PairedTensorTrain& b, const SolverConfig& cfg) {
    detail::check_lyap_shapes(a.row_shape(), a.col_shape(), b.row_shape(), b.col_shape());
    detail::check_solver_config(cfg.tol, cfg.round_tol);
    switch (cfg.solver) {
        case LyapSolver::dense: {
            const auto ad = reconstruct(a), bd = reconstruct(b);
            const auto x = lyap_dense(ad, bd);
            LyapSolveReport rep;
            rep.residual = lyap_residual(ad, x, bd);
            rep.history = {rep.residual};
            rep.iterations = 1;
            rep.converged = rep.residual <= std::max(cfg.tol, 1e-10);
            rep.solution = gtt_decompose(x, 0.0);
            return rep;
        }
        case LyapSolver::smith:
            detail::stability_gate(a, cfg);
            return lyap_tt_smith(a, b, cfg.tol, cfg.max_iter, cfg.round_tol);
        case LyapSolver::squared_smith:
            detail::stability_gate(a, cfg);
            return lyap_tt_squared_smith(a, b, cfg.tol, cfg.max_iter, cfg.round_tol);
    }
    throw ConfigError("unknown Lyapunov solver");
}

// ---------------------------------------------------------------------------
// gramians

/// W_r - A W_r A^T = B B^T.
inline LyapSolveReport reachability_gramian(const MltiSystem& sys, const SolverConfig& cfg = {}) {
    const auto t = sys.train();
    const auto bbt = tt_round(tt_einstein(t.b, tt_transpose(t.b)), cfg.round_tol);
    return lyap_solve(t.a, bbt, cfg);
}

/// Reachability gramian of the dual system (A^T, C^T).
inline LyapSolveReport observability_gramian(const MltiSystem& sys, const SolverConfig& cfg = {}) {
    return reachability_gramian(sys.dual(), cfg);
}

/// True iff the smallest eigenvalue of psi(W_r) exceeds tol.
inline bool is_reachable(const MltiSystem& sys, double tol, const SolverConfig& cfg = {}) {
    const auto w = psi_unfold(reachability_gramian(sys, cfg).dense());
    const Matrix s = 0.5 * (w + w.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() > tol;
}

}  // namespace mltt
