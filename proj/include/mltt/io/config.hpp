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

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mltt/dense/shape.hpp"
#include "mltt/errors.hpp"
#include "mltt/io/csv.hpp"
#include "mltt/lyapunov.hpp"
#include "mltt/reduction/model.hpp"

namespace mltt {

inline constexpr const char* kOutputDirEnv = "MLTT_OUTPUT_DIR";

/// Flat key=value run configuration shared by every command.
struct RunConfig {
    double decompose_tol = 1e-13;
    double round_tol = 1e-13;
    double etsvd_tol = 0.0;
    double lyap_tol = 1e-10;
    std::size_t lyap_max_iter = 500;
    LyapSolver solver = LyapSolver::squared_smith;
    std::size_t horizon_t = 15;
    std::size_t horizon_l = 15;
    std::optional<Factorization> t_factors;  // default: powers of two over the modes
    std::optional<Factorization> l_factors;
    std::size_t order = 4;
    std::uint64_t seed = 0;
    std::string output_dir = ".";

    static const std::vector<std::string>& keys() {
        static const std::vector<std::string> k{"decompose_tol", "round_tol", "etsvd_tol", "lyap_tol",
                                                "lyap_max_iter", "solver",    "horizon_t", "horizon_l",
                                                "t_factors",     "l_factors", "order",     "seed",
                                                "output_dir"};
        return k;
    }

    void set(const std::string& key, const std::string& raw) {
        const auto value = detail::trim(raw);
        auto real = [&]() {
            auto v = detail::parse_double(value);
            if (!v || !(*v >= 0)) throw ConfigError(key + " must be a non-negative number, got '" + value + "'");
            return *v;
        };
        auto count = [&]() -> std::uint64_t {
            std::uint64_t v = 0;
            const auto* end = value.data() + value.size();
            auto [p, ec] = std::from_chars(value.data(), end, v);
            if (ec != std::errc() || p != end) throw ConfigError(key + " must be a non-negative integer, got '" + value + "'");
            return v;
        };
        auto factors = [&]() -> std::optional<Factorization> {
            if (value.empty()) return std::nullopt;
            std::vector<std::size_t> f;
            std::istringstream in(value);
            std::string part;
            while (std::getline(in, part, ',')) {
                const auto t = detail::trim(part);
                auto v = detail::parse_double(t);
                if (!v || *v < 1 || *v != static_cast<double>(static_cast<std::size_t>(*v)))
                    throw ConfigError(key + " must be a comma list of positive integers, got '" + value + "'");
                f.push_back(static_cast<std::size_t>(*v));
            }
            return Factorization(f);
        };
        if (key == "decompose_tol") decompose_tol = real();
        else if (key == "round_tol") round_tol = real();
        else if (key == "etsvd_tol") etsvd_tol = real();
        else if (key == "lyap_tol") lyap_tol = real();
        else if (key == "lyap_max_iter") lyap_max_iter = count();
        else if (key == "solver") solver = parse_solver(value);
        else if (key == "horizon_t") horizon_t = count();
        else if (key == "horizon_l") horizon_l = count();
        else if (key == "t_factors") t_factors = factors();
        else if (key == "l_factors") l_factors = factors();
        else if (key == "order") order = count();
        else if (key == "seed") seed = count();
        else if (key == "output_dir") {
            if (value.empty()) throw ConfigError("output_dir must not be empty");
            output_dir = value;
        } else
            throw ConfigError("unknown configuration key '" + key + "'");
    }

    static LyapSolver parse_solver(const std::string& s) {
        if (s == "dense") return LyapSolver::dense;
        if (s == "smith") return LyapSolver::smith;
        if (s == "squared_smith") return LyapSolver::squared_smith;
        throw ConfigError("solver must be dense, smith or squared_smith, got '" + s + "'");
    }

    void validate() const {
        if (lyap_max_iter == 0) throw ConfigError("lyap_max_iter must be positive");
        if (t_factors && t_factors->total() != horizon_t + 1)
            throw ConfigError("t_factors " + t_factors->str() + " must multiply to horizon_t + 1 = " +
                              std::to_string(horizon_t + 1));
        if (l_factors && l_factors->total() != horizon_l + 1)
            throw ConfigError("l_factors " + l_factors->str() + " must multiply to horizon_l + 1 = " +
                              std::to_string(horizon_l + 1));
    }

    /// Horizon factorization for a train of the given order.
    Factorization t_fact(std::size_t modes) const { return t_factors ? *t_factors : binary_factorization(horizon_t + 1, modes); }
    Factorization l_fact(std::size_t modes) const { return l_factors ? *l_factors : binary_factorization(horizon_l + 1, modes); }

    ReductionConfig reduction() const {
        ReductionConfig r;
        r.lyap.tol = lyap_tol;
        r.lyap.max_iter = lyap_max_iter;
        r.lyap.round_tol = round_tol;
        r.lyap.solver = solver;
        r.decompose_tol = decompose_tol;
        r.round_tol = round_tol;
        r.gramian_tol = round_tol;
        r.etsvd_tol = etsvd_tol;
        return r;
    }

    /// Applies the output directory override from the environment.
    void apply_env() {
        if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) output_dir = dir;
    }

    static RunConfig parse(const std::string& text) {
        RunConfig c;
        std::istringstream in(text);
        std::string line;
        std::size_t lineno = 0, offset = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::size_t here = offset;
            offset += line.size() + 1;
            const auto body = detail::trim(line.substr(0, line.find('#')));
            if (body.empty()) continue;
            const auto eq = body.find('=');
            if (eq == std::string::npos)
                throw FormatError("line " + std::to_string(lineno) + ": expected key = value", here);
            c.set(detail::trim(body.substr(0, eq)), body.substr(eq + 1));
        }
        c.validate();
        return c;
    }

    static RunConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw FormatError("cannot open " + path, 0);
        std::ostringstream s;
        s << in.rdbuf();
        auto c = parse(s.str());
        c.apply_env();
        return c;
    }
};

}  // namespace mltt
