// SPDX-License-Identifier: Apache-2.0
//
// riscr - link-level simulator for RIS-aided mmWave MIMO cognitive radio
// downlinks with hybrid transceivers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "riscr/harness.hpp"
#include "riscr/selftest.hpp"

namespace
{

riscr::ScenarioConfig load_or_default(const std::string &path)
{
    if (path.empty())
        return riscr::ScenarioConfig{};
    return riscr::load_config(path);
}

void apply_overrides(riscr::ScenarioConfig &cfg, long long trials, long long seed,
                     const std::string &schemes)
{
    if (trials > 0)
        cfg.trials = static_cast<arma::uword>(trials);
    if (seed >= 0)
        cfg.seed = static_cast<std::uint64_t>(seed);
    if (!schemes.empty())
    {
        cfg.schemes.clear();
        for (const auto &name : riscr::detail::split(schemes, ','))
            cfg.schemes.push_back(riscr::scheme_from_name(name));
    }
    cfg.validate();
}

int cmd_sweep(const std::string &config_path, const std::string &variable,
              const std::vector<double> &values, long long trials, long long seed,
              const std::string &schemes, const std::string &out_path, unsigned threads,
              bool timing)
{
    riscr::ScenarioConfig cfg = load_or_default(config_path);
    apply_overrides(cfg, trials, seed, schemes);
    riscr::SweepResult result = riscr::run_sweep(cfg, variable, values, threads, timing);
    riscr::emit_csv(result, out_path);

    arma::uword errors = 0;
    for (const auto &r : result.rows)
        if (r.status.rfind("error", 0) == 0)
            ++errors;
    std::cout << "wrote " << result.rows.size() << " rows to " << out_path;
    if (errors)
        std::cout << " (" << errors << " rows carry errors)";
    std::cout << "\n";
    return errors == 0 ? 0 : 1;
}

int cmd_single(const std::string &config_path, long long trial, long long seed,
               const std::string &schemes)
{
    riscr::ScenarioConfig cfg = load_or_default(config_path);
    apply_overrides(cfg, -1, seed, schemes);
    const arma::uword t = trial < 0 ? 0 : static_cast<arma::uword>(trial);

    const std::uint64_t tseed = riscr::trial_seed(cfg.seed, t);
    riscr::Rng crng(riscr::Rng::mix(tseed, 0));
    riscr::ChannelSet ch = riscr::build_scenario(cfg, crng);
    riscr::PowerBudget budget = riscr::PowerBudget::from(cfg);

    std::cout << "trial " << t << " seed " << tseed << "  sigma2 " << budget.sigma2
              << " mW  P_T " << budget.p_t << " mW  I_th " << budget.i_th << " mW\n";

    for (riscr::Scheme s : cfg.schemes)
    {
        riscr::Rng srng(riscr::Rng::mix(tseed, riscr::stage_stream(s)));
        riscr::SchemeOutput out = riscr::run_scheme(s, ch, cfg, budget, srng);
        std::cout << "\n[" << riscr::scheme_name(s) << "] status " << out.status << "\n";
        std::cout << "  sum_se " << out.report.sum_se << " bits/s/Hz   per-SU";
        for (double v : out.report.per_su_se)
            std::cout << ' ' << v;
        std::cout << "\n  i_pu " << out.report.i_pu << " (I_th " << budget.i_th << ")   tp "
                  << out.report.tp_used << " (P_T " << budget.p_t << ")\n";
        std::cout << "  outer iterations " << out.trace.outer_iterations
                  << (out.trace.converged ? " (converged)" : " (cap reached)") << "\n";
        if (!out.trace.surrogate.empty())
        {
            std::cout << "  surrogate trace";
            for (std::size_t i = 0; i < out.trace.surrogate.size(); ++i)
                std::cout << (i ? ", " : " ") << out.trace.surrogate[i];
            std::cout << "\n  inner iterations (rf/rm)";
            for (std::size_t i = 0; i < out.trace.rf_iterations.size(); ++i)
                std::cout << ' ' << out.trace.rf_iterations[i] << '/'
                          << out.trace.rm_iterations[i];
            std::cout << "\n";
        }
    }
    return 0;
}

int cmd_selftest()
{
    auto cases = riscr::run_selftest();
    bool all_ok = true;
    for (const auto &c : cases)
    {
        std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << " (" << c.detail << ")\n";
        all_ok = all_ok && c.passed;
    }
    std::cout << (all_ok ? "selftest passed\n" : "selftest FAILED\n");
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    // keep BLAS single threaded unless the caller overrides; trials are the
    // unit of parallelism and reductions stay deterministic
    setenv("OPENBLAS_NUM_THREADS", "1", 0);

    CLI::App app{"link-level simulator for an RIS-aided mmWave MIMO cognitive-radio downlink"};
    app.require_subcommand(1);

    std::string config_path, variable, schemes, out_path = "sweep.csv";
    std::vector<double> values;
    long long trials = -1, seed = -1, trial = -1;
    unsigned threads = 0;
    bool timing = false;

    auto *sweep = app.add_subcommand("sweep", "run a Monte Carlo sweep and write CSV");
    sweep->add_option("--config", config_path, "scenario config file");
    sweep->add_option("--variable", variable, "sweep variable: N|snr|gamma|Nr|M|dris|Nt")
        ->required();
    sweep->add_option("--values", values, "sweep values")->required()->delimiter(',');
    sweep->add_option("--trials", trials, "override trial count");
    sweep->add_option("--seed", seed, "override master seed");
    sweep->add_option("--schemes", schemes, "comma-separated scheme subset");
    sweep->add_option("--out", out_path, "output CSV path");
    sweep->add_option("--threads", threads, "worker threads (0 = hardware)");
    sweep->add_flag("--timing", timing, "record wall times (breaks byte determinism)");

    auto *single = app.add_subcommand("single", "run one trial and dump the solver traces");
    single->add_option("--config", config_path, "scenario config file");
    single->add_option("--trial", trial, "trial index (default 0)");
    single->add_option("--seed", seed, "override master seed");
    single->add_option("--schemes", schemes, "comma-separated scheme subset");

    auto *selftest = app.add_subcommand("selftest", "run the built-in oracle checks");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (sweep->parsed())
            return cmd_sweep(config_path, variable, values, trials, seed, schemes, out_path,
                             threads, timing);
        if (single->parsed())
            return cmd_single(config_path, trial, seed, schemes);
        if (selftest->parsed())
            return cmd_selftest();
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
