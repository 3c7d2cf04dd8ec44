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

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mltt/cli/commands.hpp"

namespace {

using namespace mltt;

/// --config FILE plus one flag per RunConfig key. Precedence: flags, then the
/// output directory environment override, then the file, then defaults.
class ConfigFlags {
public:
    void attach(CLI::App* sub) {
        sub->add_option("--config", file_, "key = value run configuration file")->check(CLI::ExistingFile);
        for (const auto& key : RunConfig::keys()) {
            std::string flag = "--" + key;
            for (auto& ch : flag)
                if (ch == '_') ch = '-';
            opts_.emplace_back(key, sub->add_option(flag, values_[key], "run configuration: " + key));
        }
    }

    RunConfig resolve() const {
        RunConfig cfg = file_.empty() ? RunConfig{} : RunConfig::load(file_);
        if (file_.empty()) cfg.apply_env();
        for (const auto& [key, opt] : opts_)
            if (opt->count()) cfg.set(key, values_.at(key));
        cfg.validate();
        return cfg;
    }

private:
    std::string file_;
    std::map<std::string, std::string> values_;
    std::vector<std::pair<std::string, CLI::Option*>> opts_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tensor-train linear algebra and model reduction for multilinear time-invariant systems"};
    app.require_subcommand(1);

    cli::DecomposeOptions dec;
    auto* sdec = app.add_subcommand("decompose", "TT/GTT/QTT decomposition of a tensor file");
    sdec->add_option("--input", dec.input, "dense or paired tensor file")->required();
    sdec->add_option("--output", dec.output, "train file to write")->required();
    sdec->add_option("--tol", dec.tol, "relative truncation tolerance")->capture_default_str();
    sdec->add_flag("--quantize", dec.quantize, "split every mode into its prime factors first");

    cli::ReduceOptions red;
    std::string method;
    ConfigFlags red_cfg;
    auto* sred = app.add_subcommand("reduce", "reduce a system (hobt, hobpod) or identify one from Markov data (hoera)");
    sred->add_option("--method", method, "hobt, hobpod or hoera")->required();
    sred->add_option("--A", red.a, "state operator file");
    sred->add_option("--B", red.b, "input operator file");
    sred->add_option("--C", red.c, "output operator file");
    sred->add_option("--markov", red.markov, "Markov parameter files Z_0, Z_1, ...");
    sred->add_option("--markov-csv", red.markov_csv, "scalar impulse response, one value per line");
    sred->add_flag("--check-baseline", red.check_baseline, "compare sigma against the matrix method");
    red_cfg.attach(sred);

    cli::IdentifyOptions idn;
    ConfigFlags idn_cfg;
    auto* sidn = app.add_subcommand("identify", "identify a scalar model from a signal");
    sidn->add_option("--signal", idn.signal, "one-column CSV")->required();
    sidn->add_flag("--step", idn.step, "the signal is a step response");
    sidn->add_option("--threshold", idn.threshold, "keep every sigma above this instead of --order");
    idn_cfg.attach(sidn);

    cli::HeatDemoOptions heat;
    double heat_dt = 0.0;
    ConfigFlags heat_cfg;
    auto* sheat = app.add_subcommand("heat-demo", "HOERA/HOBPOD against ERA/BPOD on the 2D heat equation");
    sheat->add_option("--grid", heat.grids, "interior points per axis (repeatable)")->capture_default_str();
    sheat->add_option("--c", heat.c, "diffusivity")->capture_default_str();
    auto* dt_opt = sheat->add_option("--dt", heat_dt, "time step (default keeps c^2 dt / h^2 <= 0.2)");
    sheat->add_option("--steps", heat.steps, "impulse-response horizon of the error")->capture_default_str();
    sheat->add_option("--dense-cap", heat.dense_cap, "largest state count for the matrix baselines")
        ->capture_default_str();
    heat_cfg.attach(sheat);

    cli::SynthDemoOptions syn;
    ConfigFlags syn_cfg;
    auto* ssyn = app.add_subcommand("synth-demo", "HOBT against BT timing on random QTT systems");
    ssyn->add_option("--n-min", syn.n_min, "smallest number of cores")->capture_default_str();
    ssyn->add_option("--n-max", syn.n_max, "largest number of cores")->capture_default_str();
    ssyn->add_option("--rank", syn.rank, "GTT-rank of the state operator")->capture_default_str();
    ssyn->add_option("--margin", syn.margin, "spectral radius is 1 - margin")->capture_default_str();
    ssyn->add_option("--inputs", syn.inputs, "input channels")->capture_default_str();
    ssyn->add_option("--outputs", syn.outputs, "output channels")->capture_default_str();
    ssyn->add_option("--dense-cap", syn.dense_cap, "largest state count for the BT baseline")->capture_default_str();
    syn_cfg.attach(ssyn);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kSuccess : cli::kValidationError;
    }

    try {
        if (sdec->parsed()) {
            cli::cmd_decompose(dec, std::cout);
        } else if (sred->parsed()) {
            red.method = cli::parse_method(method);
            red.cfg = red_cfg.resolve();
            cli::cmd_reduce(red, std::cout);
        } else if (sidn->parsed()) {
            idn.cfg = idn_cfg.resolve();
            cli::cmd_identify(idn, std::cout);
        } else if (sheat->parsed()) {
            if (dt_opt->count()) heat.dt = heat_dt;
            heat.cfg = heat_cfg.resolve();
            cli::cmd_heat_demo(heat, std::cout);
        } else if (ssyn->parsed()) {
            syn.cfg = syn_cfg.resolve();
            cli::cmd_synth_demo(syn, std::cout);
        }
    } catch (const mltt::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kValidationError;
    }
    return cli::kSuccess;
}
