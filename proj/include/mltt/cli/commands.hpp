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
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "mltt/dense/algebra.hpp"
#include "mltt/errors.hpp"
#include "mltt/io/config.hpp"
#include "mltt/io/csv.hpp"
#include "mltt/io/tensor_file.hpp"
#include "mltt/reduction/baselines.hpp"
#include "mltt/reduction/era.hpp"
#include "mltt/reduction/hobt.hpp"
#include "mltt/reduction/pod.hpp"
#include "mltt/system.hpp"
#include "mltt/systems/generators.hpp"
#include "mltt/systems/simulate.hpp"
#include "mltt/systems/transfer.hpp"
#include "mltt/tt/decompose.hpp"

namespace mltt::cli {

enum ExitCode : int { kSuccess = 0, kValidationError = 1, kNumericalError = 2 };

/// Non-convergence and singular resolvents are numerical failures; every
/// other library error is a problem with the inputs.
inline int exit_code(const std::exception& e) {
    if (dynamic_cast<const ConvergenceError*>(&e) || dynamic_cast<const SingularityError*>(&e))
        return kNumericalError;
    return kValidationError;
}

/// Largest state count for which the matrix baselines run.
inline constexpr std::size_t kDenseBaselineCap = 4096;

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t) {
    return std::chrono::duration<double>(Clock::now() - t).count();
}

inline std::filesystem::path output_dir(const RunConfig& cfg) {
    std::filesystem::path dir(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

inline void write_model(const std::filesystem::path& dir, const ReducedModel& r) {
    if (r.order() == 0) return;
    const auto sys = r.system().dense();
    write_tensor_file((dir / "A_r.mltt").string(), sys.a);
    write_tensor_file((dir / "B_r.mltt").string(), sys.b);
    write_tensor_file((dir / "C_r.mltt").string(), sys.c);
}

inline void write_sigma(const std::filesystem::path& dir, const Vector& sigma) {
    CsvTable t({"index", "sigma"});
    for (Eigen::Index k = 0; k < sigma.size(); ++k) t.add({static_cast<double>(k + 1), sigma[k]});
    t.write((dir / "sigma.csv").string());
}

inline void write_bound(const std::filesystem::path& dir, const Vector& sigma) {
    CsvTable t({"S", "tail_sum"});
    for (Eigen::Index s = 0; s <= sigma.size(); ++s)
        t.add({static_cast<double>(s), hobt_error_bound(sigma, static_cast<std::size_t>(s)).tail_sum});
    t.write((dir / "bound.csv").string());
}

/// sqrt(sum_k ||Z_k - Zr_k||^2 / sum_k ||Z_k||^2) over the given responses.
inline double impulse_error(const std::vector<Matrix>& truth, const std::vector<Matrix>& approx) {
    double e = 0, n = 0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        e += (truth[k] - approx[k]).squaredNorm();
        n += truth[k].squaredNorm();
    }
    return n > 0 ? std::sqrt(e / n) : std::sqrt(e);
}

inline std::vector<Matrix> unfold_all(const std::vector<PairedTensor>& z, std::size_t count) {
    std::vector<Matrix> out;
    for (std::size_t k = 0; k < std::min(count, z.size()); ++k) out.push_back(psi_unfold(z[k]));
    return out;
}

inline MltiSystem load_system(const std::string& a, const std::string& b, const std::string& c, double tol) {
    const auto fa = read_tensor_file(a), fb = read_tensor_file(b), fc = read_tensor_file(c);
    if (!fa.is_train() && !fb.is_train() && !fc.is_train()) return {fa.paired(), fb.paired(), fc.paired()};
    auto train = [&](const TensorFile& f) { return f.is_train() ? f.gtt() : gtt_decompose(f.paired(), tol); };
    return {train(fa), train(fb), train(fc)};
}

inline bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

inline std::size_t log2_exact(std::size_t n) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// decompose

struct DecomposeOptions {
    std::string input;
    std::string output;
    double tol = 1e-12;
    bool quantize = false;
};

struct DecomposeReport {
    TensorKind kind = TensorKind::tt;
    std::vector<std::size_t> ranks;
    std::size_t dense_params = 0;
    std::size_t train_params = 0;
    double error = 0.0;  // relative, of the reconstruction

    double compression() const { return static_cast<double>(dense_params) / static_cast<double>(train_params); }
};

/// TTD of a dense tensor or GTTD of a paired tensor; with `quantize` every
/// mode is first split into its prime factors.
inline DecomposeReport decompose(const TensorFile& in, const DecomposeOptions& opt, TensorValue& out) {
    DecomposeReport rep;
    if (auto* d = std::get_if<DenseTensor>(&in.value)) {
        Shape s = d->shape();
        if (opt.quantize) {
            std::vector<std::size_t> q;
            for (auto j : s.values())
                for (auto p : QuantizationPlan::prime_factors(j)) q.push_back(p);
            s = Shape(q);
        }
        auto t = tt_decompose(DenseTensor(s, d->data()), opt.tol);
        rep.kind = TensorKind::tt;
        rep.ranks = t.ranks();
        rep.dense_params = d->size();
        rep.train_params = t.storage();
        const auto back = reconstruct(t);
        rep.error = (back.vec() - d->vec()).norm() / std::max(d->vec().norm(), 1e-300);
        out = std::move(t);
    } else if (auto* p = std::get_if<PairedTensor>(&in.value)) {
        auto g = opt.quantize ? quantize(*p, QuantizationPlan::prime(p->row_shape(), p->col_shape()), opt.tol)
                              : gtt_decompose(*p, opt.tol);
        rep.kind = TensorKind::gtt;
        rep.ranks = g.ranks();
        rep.dense_params = p->size();
        rep.train_params = g.train().storage();
        const Matrix ref = psi_unfold(*p);
        rep.error = (psi_unfold(reconstruct(g)) - ref).norm() / std::max(ref.norm(), 1e-300);
        out = std::move(g);
    } else {
        throw ConfigError(std::string("decompose needs a dense or paired tensor, file holds kind ") +
                          kind_name(in.kind()));
    }
    return rep;
}

inline DecomposeReport cmd_decompose(const DecomposeOptions& opt, std::ostream& log) {
    if (opt.tol < 0) throw ConfigError("tolerance must be non-negative");
    const auto in = read_tensor_file(opt.input);
    TensorValue out;
    const auto rep = decompose(in, opt, out);
    write_tensor_file(opt.output, out);
    log << "kind: " << kind_name(rep.kind) << "\nranks:";
    for (auto r : rep.ranks) log << ' ' << r;
    log << "\nparameters: dense " << rep.dense_params << ", train " << rep.train_params << "\ncompression ratio: "
        << rep.compression() << "\nrelative error: " << rep.error << '\n';
    return rep;
}

// ---------------------------------------------------------------------------
// reduce

struct ReduceOptions {
    Method method = Method::hobt;
    std::string a, b, c;              // system files (hobt, hobpod)
    std::vector<std::string> markov;  // Markov parameter files (hoera)
    std::string markov_csv;           // scalar impulse response (hoera)
    bool check_baseline = false;
    RunConfig cfg;
};

struct ReduceReport {
    ReducedModel model;
    std::optional<double> baseline_sigma_diff;  // max |sigma - sigma_ref| / sigma_ref_1
};

inline Method parse_method(const std::string& s) {
    if (s == "hobt") return Method::hobt;
    if (s == "hobpod") return Method::hobpod;
    if (s == "hoera") return Method::hoera;
    throw ConfigError("method must be hobt, hobpod or hoera, got '" + s + "'");
}

namespace detail {

inline double sigma_discrepancy(const Vector& s, const Vector& ref) {
    const auto n = std::min(s.size(), ref.size());
    if (n == 0) return 0.0;
    return (s.head(n) - ref.head(n)).cwiseAbs().maxCoeff() / ref[0];
}

inline std::vector<PairedTensor> load_markov(const ReduceOptions& opt) {
    std::vector<PairedTensor> z;
    if (!opt.markov_csv.empty())
        for (auto v : read_signal_csv(opt.markov_csv)) z.push_back(PairedTensor::scalar(v));
    for (const auto& f : opt.markov) z.push_back(read_tensor_file(f).paired());
    return z;
}

}  // namespace detail

inline ReduceReport reduce(const ReduceOptions& opt) {
    opt.cfg.validate();
    const auto rc = opt.cfg.reduction();
    const std::size_t s = opt.cfg.order;
    const bool has_system = !opt.a.empty() || !opt.b.empty() || !opt.c.empty();
    const bool has_markov = !opt.markov.empty() || !opt.markov_csv.empty();
    ReduceReport rep;
    if (opt.method == Method::hoera) {
        if (!has_markov) throw ConfigError("hoera needs Markov parameters (--markov or --markov-csv)");
        if (has_system) throw ConfigError("hoera works from Markov parameters, not system files");
        const auto z = detail::load_markov(opt);
        if (z.empty()) throw ConfigError("no Markov parameters were read");
        const std::size_t n = z[0].order();
        const std::size_t t = opt.cfg.horizon_t, l = opt.cfg.horizon_l;
        rep.model = hoera(z, t, l, opt.cfg.t_fact(n), opt.cfg.l_fact(n), s, rc);
        if (opt.check_baseline)
            rep.baseline_sigma_diff =
                detail::sigma_discrepancy(rep.model.all_sigma, era_matrix(detail::unfold_all(z, z.size()), t, l, 0).all_sigma);
        return rep;
    }
    if (has_markov) throw ConfigError(std::string(method_name(opt.method)) + " works from system files, not Markov data");
    if (opt.a.empty() || opt.b.empty() || opt.c.empty()) throw ConfigError("system files --A, --B and --C are required");
    const auto sys = detail::load_system(opt.a, opt.b, opt.c, opt.cfg.decompose_tol);
    const bool baseline = opt.check_baseline && sys.states() <= kDenseBaselineCap;
    if (opt.method == Method::hobt) {
        rep.model = hobt(sys, s, rc);
        if (baseline)
            rep.baseline_sigma_diff = detail::sigma_discrepancy(rep.model.all_sigma, bt_matrix(sys.unfolded(), 0).all_sigma);
    } else if (opt.method == Method::hobpod) {
        const std::size_t n = sys.order();
        const auto ft = opt.cfg.t_fact(n), fl = opt.cfg.l_fact(n);
        rep.model = hobpod(sys, impulse_snapshots(sys, opt.cfg.horizon_t, ft, rc.round_tol),
                           adjoint_snapshots(sys, opt.cfg.horizon_l, fl, rc.round_tol), s, rc);
        if (baseline)
            rep.baseline_sigma_diff = detail::sigma_discrepancy(
                rep.model.all_sigma, bpod_matrix(sys.unfolded(), opt.cfg.horizon_t, opt.cfg.horizon_l, 0).all_sigma);
    } else {
        throw ConfigError("reduce supports hobt, hobpod and hoera");
    }
    return rep;
}

inline ReduceReport cmd_reduce(const ReduceOptions& opt, std::ostream& log) {
    auto rep = reduce(opt);
    const auto dir = detail::output_dir(opt.cfg);
    detail::write_model(dir, rep.model);
    detail::write_sigma(dir, rep.model.all_sigma);
    detail::write_bound(dir, rep.model.all_sigma);
    log << "method: " << method_name(opt.method) << "\norder: " << rep.model.order() << "\nsigma:";
    for (Eigen::Index k = 0; k < rep.model.all_sigma.size(); ++k) log << ' ' << rep.model.all_sigma[k];
    log << "\ntail sum: " << hobt_error_bound(rep.model.all_sigma, rep.model.order()).tail_sum << '\n';
    if (rep.baseline_sigma_diff) log << "baseline max sigma discrepancy: " << *rep.baseline_sigma_diff << '\n';
    else if (opt.check_baseline) log << "baseline skipped: more than " << kDenseBaselineCap << " states\n";
    log << "output: " << dir.string() << '\n';
    return rep;
}

// ---------------------------------------------------------------------------
// identify

struct IdentifyOptions {
    std::string signal;     // one-column CSV
    bool step = false;      // the signal is a step response
    double threshold = 0;   // if > 0, keep every sigma above it instead of cfg.order
    RunConfig cfg;
};

struct IdentifyReport {
    ReducedModel model;
    std::vector<double> impulse;  // measured impulse response
    std::vector<double> fitted;   // impulse response of the model
    double relative_error = 0.0;
    std::vector<double> autocorrelation;   // of the residual, lags 0 ..
    std::vector<double> crosscorrelation;  // residual against the input, lags 0 ..
};

/// Scalar HOERA on the quantized Hankel matrix of a signal.
inline IdentifyReport identify(const std::vector<double>& signal, const IdentifyOptions& opt) {
    opt.cfg.validate();
    const std::size_t t = opt.cfg.horizon_t, l = opt.cfg.horizon_l;
    if (!detail::is_power_of_two(t + 1) || !detail::is_power_of_two(l + 1))
        throw ConfigError("identify needs T + 1 and L + 1 to be powers of two, got T = " + std::to_string(t) +
                          ", L = " + std::to_string(l));
    IdentifyReport rep;
    if (opt.step) {
        if (signal.size() < 2) throw ConfigError("step response needs at least two samples");
        for (std::size_t k = 1; k < signal.size(); ++k) rep.impulse.push_back(signal[k] - signal[k - 1]);
    } else {
        rep.impulse = signal;
    }
    if (rep.impulse.size() < t + l + 2)
        throw ConfigError("signal has " + std::to_string(rep.impulse.size()) + " impulse samples, need at least " +
                          std::to_string(t + l + 2));
    const std::size_t modes = std::max<std::size_t>({detail::log2_exact(t + 1), detail::log2_exact(l + 1), 1});
    std::vector<PairedTensor> z;
    for (std::size_t k = 0; k < t + l + 2; ++k) z.push_back(PairedTensor::scalar(rep.impulse[k], modes));
    const auto ft = binary_factorization(t + 1, modes), fl = binary_factorization(l + 1, modes);
    const auto rc = opt.cfg.reduction();
    std::size_t order = opt.cfg.order;
    if (opt.threshold > 0) {
        const auto all = hoera(z, t, l, ft, fl, 0, rc).all_sigma;
        order = std::min<std::size_t>(static_cast<std::size_t>((all.array() > opt.threshold).count()),
                                      mltt::detail::numerical_rank(all));
    }
    rep.model = hoera(z, t, l, ft, fl, order, rc);

    const std::size_t n = rep.impulse.size();
    const auto zr = markov_matrices(rep.model.m, n);
    double en = 0, hn = 0;
    std::vector<double> e(n);
    for (std::size_t k = 0; k < n; ++k) {
        rep.fitted.push_back(zr[k].size() ? zr[k](0, 0) : 0.0);
        e[k] = rep.impulse[k] - rep.fitted[k];
        en += e[k] * e[k];
        hn += rep.impulse[k] * rep.impulse[k];
    }
    rep.relative_error = hn > 0 ? std::sqrt(en / hn) : std::sqrt(en);

    const std::size_t lags = std::min<std::size_t>(n, 64);
    std::vector<double> u(n, opt.step ? 1.0 : 0.0);
    u[0] = 1.0;
    double un = 0;
    for (auto v : u) un += v * v;
    for (std::size_t tau = 0; tau < lags; ++tau) {
        double ac = 0, cc = 0;
        for (std::size_t k = 0; k + tau < n; ++k) {
            ac += e[k] * e[k + tau];
            cc += u[k] * e[k + tau];
        }
        rep.autocorrelation.push_back(en > 0 ? ac / en : 0.0);
        rep.crosscorrelation.push_back(en > 0 ? cc / std::sqrt(en * un) : 0.0);
    }
    return rep;
}

inline IdentifyReport cmd_identify(const IdentifyOptions& opt, std::ostream& log) {
    auto rep = identify(read_signal_csv(opt.signal), opt);
    const auto dir = detail::output_dir(opt.cfg);
    detail::write_model(dir, rep.model);
    detail::write_sigma(dir, rep.model.all_sigma);
    CsvTable imp({"k", "measured", "fitted", "residual"});
    for (std::size_t k = 0; k < rep.impulse.size(); ++k)
        imp.add({static_cast<double>(k), rep.impulse[k], rep.fitted[k], rep.impulse[k] - rep.fitted[k]});
    imp.write((dir / "impulse.csv").string());
    CsvTable res({"lag", "autocorrelation", "cross_correlation"});
    for (std::size_t k = 0; k < rep.autocorrelation.size(); ++k)
        res.add({static_cast<double>(k), rep.autocorrelation[k], rep.crosscorrelation[k]});
    res.write((dir / "residuals.csv").string());
    log << "samples: " << rep.impulse.size() << "\nsingular values retained: " << rep.model.order() << " of "
        << rep.model.all_sigma.size() << "\nrelative error: " << rep.relative_error << "\noutput: " << dir.string()
        << '\n';
    return rep;
}

// ---------------------------------------------------------------------------
// heat-demo

struct HeatDemoOptions {
    std::vector<std::size_t> grids{7};
    double c = 1.0;
    std::optional<double> dt;  // default: min(0.01, 0.2 h^2 / c^2)
    std::size_t steps = 100;   // impulse-response horizon of the error
    std::size_t dense_cap = kDenseBaselineCap;
    RunConfig cfg;
};

struct HeatErrorRow {
    std::size_t grid = 0, states = 0, order = 0;
    Method method = Method::hoera;
    double impulse_error = 0.0;
    double transfer_error = 0.0;
    double seconds = 0.0;
};

struct HeatDemoReport {
    std::vector<HeatErrorRow> rows;

    /// Error of `method` at the largest order run for `grid`.
    std::optional<HeatErrorRow> final_row(std::size_t grid, Method method) const {
        std::optional<HeatErrorRow> best;
        for (const auto& r : rows)
            if (r.grid == grid && r.method == method && (!best || r.order > best->order)) best = r;
        return best;
    }
};

inline double heat_dt(std::size_t grid, double c) {
    HeatConfig h;
    h.grid = grid;
    return std::min(0.01, 0.2 * h.h() * h.h() / (c * c));
}

inline HeatDemoReport heat_demo(const HeatDemoOptions& opt) {
    opt.cfg.validate();
    const auto rc = opt.cfg.reduction();
    const std::size_t t = opt.cfg.horizon_t, l = opt.cfg.horizon_l;
    HeatDemoReport rep;
    for (auto grid : opt.grids) {
        HeatConfig hc;
        hc.grid = grid;
        hc.c = opt.c;
        hc.dt = opt.dt ? *opt.dt : heat_dt(grid, opt.c);
        const auto sys = heat_system(hc);
        const std::size_t states = sys.states();
        const bool dense = states <= opt.dense_cap;
        const std::size_t n = sys.order();
        const auto ft = opt.cfg.t_fact(n), fl = opt.cfg.l_fact(n);

        const auto z = markov_parameters(sys, std::max(t + l + 2, opt.steps));
        const auto truth = detail::unfold_all(z, opt.steps);
        const auto grid64 = FrequencyGrid::uniform(64);
        std::vector<CMatrix> g_full;
        double g_norm = 0.0;
        {
            const TransferFunction g(sys.unfolded());
            for (const auto& p : grid64.points) {
                g_full.push_back(g(p));
                g_norm = std::max(g_norm, spectral_norm(g_full.back()));
            }
        }
        auto row = [&](Method m, std::size_t s, const ReducedModel& r, double secs) {
            HeatErrorRow out;
            out.grid = grid;
            out.states = states;
            out.order = s;
            out.method = m;
            out.seconds = secs;
            out.impulse_error = detail::impulse_error(truth, markov_matrices(r.m, opt.steps));
            const TransferFunction gr(r.m);
            for (std::size_t k = 0; k < grid64.points.size(); ++k)
                out.transfer_error = std::max(out.transfer_error, spectral_norm(g_full[k] - gr(grid64.points[k])));
            out.transfer_error /= g_norm;
            rep.rows.push_back(out);
        };

        auto t0 = detail::Clock::now();
        const auto xs = impulse_snapshots(sys, t, ft, rc.round_tol);
        const auto ys = adjoint_snapshots(sys, l, fl, rc.round_tol);
        const double snap_secs = detail::seconds_since(t0);
        const std::size_t rank =
            std::min(mltt::detail::numerical_rank(hoera(z, t, l, ft, fl, 0, rc).all_sigma),
                     mltt::detail::numerical_rank(hobpod(sys, xs, ys, 0, rc).all_sigma));
        const std::size_t top = std::min(opt.cfg.order, rank);
        const auto mz = dense ? detail::unfold_all(z, t + l + 2) : std::vector<Matrix>{};
        for (std::size_t s = 1; s <= top; ++s) {
            t0 = detail::Clock::now();
            const auto r = hoera(z, t, l, ft, fl, s, rc);
            row(Method::hoera, s, r, detail::seconds_since(t0));
            t0 = detail::Clock::now();
            const auto p = hobpod(sys, xs, ys, s, rc);
            row(Method::hobpod, s, p, detail::seconds_since(t0) + snap_secs);
            if (!dense) continue;
            t0 = detail::Clock::now();
            const auto e = era_matrix(mz, t, l, s);
            row(Method::era, s, e, detail::seconds_since(t0));
            t0 = detail::Clock::now();
            const auto b = bpod_matrix(sys.unfolded(), t, l, s);
            row(Method::bpod, s, b, detail::seconds_since(t0));
        }
    }
    return rep;
}

inline HeatDemoReport cmd_heat_demo(const HeatDemoOptions& opt, std::ostream& log) {
    auto rep = heat_demo(opt);
    const auto dir = detail::output_dir(opt.cfg);
    CsvTable err({"grid", "states", "S", "method", "impulse_error", "transfer_error"});
    CsvTable tim({"grid", "states", "S", "method", "seconds"});
    for (const auto& r : rep.rows) {
        const char* m = method_name(r.method);
        err.add({double(r.grid), double(r.states), double(r.order), m, r.impulse_error, r.transfer_error});
        tim.add({double(r.grid), double(r.states), double(r.order), m, r.seconds});
    }
    err.write((dir / "heat_error.csv").string());
    tim.write((dir / "heat_timing.csv").string());
    for (auto grid : opt.grids)
        for (auto m : {Method::hoera, Method::era, Method::hobpod, Method::bpod})
            if (auto r = rep.final_row(grid, m))
                log << "grid " << grid << " (" << r->states << " states) " << method_name(m) << " S=" << r->order
                    << ": impulse error " << r->impulse_error << ", transfer error " << r->transfer_error << ", "
                    << r->seconds << " s\n";
    log << "output: " << dir.string() << '\n';
    return rep;
}

// ---------------------------------------------------------------------------
// synth-demo

struct SynthDemoOptions {
    std::size_t n_min = 3, n_max = 12;
    std::size_t rank = 1;  // GTT-rank of A
    double margin = 0.5;
    std::size_t inputs = 2, outputs = 2;
    std::size_t dense_cap = kDenseBaselineCap;
    RunConfig cfg;
};

struct SynthRow {
    std::size_t n = 0, states = 0;
    double hobt_seconds = 0.0;
    std::optional<double> bt_seconds;
    Vector hobt_sigma;
    std::optional<Vector> bt_sigma;
    double hobt_tail = 0.0;
    std::optional<double> bt_tail;
    std::optional<double> sigma_diff;

    std::optional<double> ratio() const {
        if (!bt_seconds) return std::nullopt;
        return *bt_seconds / hobt_seconds;
    }
};

inline std::vector<SynthRow> synth_demo(const SynthDemoOptions& opt) {
    opt.cfg.validate();
    if (opt.n_min == 0 || opt.n_min > opt.n_max) throw ConfigError("need 1 <= n_min <= n_max");
    const auto rc = opt.cfg.reduction();
    std::vector<SynthRow> rows;
    for (std::size_t n = opt.n_min; n <= opt.n_max; ++n) {
        RandomSystemConfig sc;
        sc.order = n;
        sc.rank = opt.rank;
        sc.margin = opt.margin;
        sc.seed = opt.cfg.seed + n;
        sc.inputs = opt.inputs;
        sc.outputs = opt.outputs;
        const auto sys = random_stable_system(sc);
        SynthRow row;
        row.n = n;
        row.states = sys.states();
        auto t0 = detail::Clock::now();
        const auto h = hobt(sys, opt.cfg.order, rc);
        row.hobt_seconds = detail::seconds_since(t0);
        row.hobt_sigma = h.all_sigma;
        row.hobt_tail = hobt_error_bound(h.all_sigma, opt.cfg.order).tail_sum;
        if (row.states <= opt.dense_cap) {
            const auto m = sys.unfolded();
            t0 = detail::Clock::now();
            const auto b = bt_matrix(m, opt.cfg.order);
            row.bt_seconds = detail::seconds_since(t0);
            row.bt_sigma = b.all_sigma;
            row.bt_tail = hobt_error_bound(b.all_sigma, opt.cfg.order).tail_sum;
            row.sigma_diff = detail::sigma_discrepancy(h.sigma, b.sigma);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<SynthRow> cmd_synth_demo(const SynthDemoOptions& opt, std::ostream& log) {
    auto rows = synth_demo(opt);
    const auto dir = detail::output_dir(opt.cfg);
    CsvTable tim({"N", "states", "hobt_seconds", "bt_seconds", "ratio"});
    CsvTable bnd({"N", "states", "S", "hobt_tail_sum", "bt_tail_sum", "sigma_diff"});
    for (const auto& r : rows) {
        tim.add({double(r.n), double(r.states), r.hobt_seconds, r.bt_seconds, r.ratio()});
        bnd.add({double(r.n), double(r.states), double(opt.cfg.order), r.hobt_tail, r.bt_tail, r.sigma_diff});
        log << "N=" << r.n << " states=" << r.states << " hobt " << r.hobt_seconds << " s";
        if (r.bt_seconds) log << ", bt " << *r.bt_seconds << " s, sigma diff " << *r.sigma_diff;
        else log << ", bt skipped";
        log << '\n';
    }
    tim.write((dir / "synth_timing.csv").string());
    bnd.write((dir / "synth_bound.csv").string());
    log << "output: " << dir.string() << '\n';
    return rows;
}

}  // namespace mltt::cli
