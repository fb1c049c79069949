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
//
// Experiment driver: scenario configs, the five schemes, seeded parallel
// Monte Carlo sweeps, and CSV output.

#ifndef RISCR_HARNESS_HPP
#define RISCR_HARNESS_HPP

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "riscr/baseband.hpp"
#include "riscr/bcd.hpp"
#include "riscr/channel.hpp"
#include "riscr/config.hpp"
#include "riscr/metrics.hpp"

namespace riscr
{

// ---------------------------------------------------------------------------
// config file handling (key = value with [sections], # comments)
// ---------------------------------------------------------------------------

namespace detail
{

inline std::string trim(const std::string &s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        out.push_back(trim(item));
    if (!out.empty() && out.back().empty())
        out.pop_back();
    return out;
}

} // namespace detail

inline std::map<std::string, std::string> parse_key_values(std::istream &in)
{
    std::map<std::string, std::string> kv;
    std::string line, section;
    arma::uword line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[' && line.back() == ']')
        {
            section = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
        kv[section.empty() ? key : section + "." + key] = value;
    }
    return kv;
}

inline ScenarioConfig config_from_map(const std::map<std::string, std::string> &kv)
{
    ScenarioConfig cfg;
    std::map<std::string, std::string> rest = kv;

    auto take = [&rest](const std::string &key) -> std::optional<std::string> {
        auto it = rest.find(key);
        if (it == rest.end())
            return std::nullopt;
        std::string v = it->second;
        rest.erase(it);
        return v;
    };
    auto num = [&take](const std::string &key, double &target) {
        if (auto v = take(key))
            target = std::stod(*v);
    };
    auto cnt = [&take](const std::string &key, arma::uword &target) {
        if (auto v = take(key))
        {
            long long x = std::stoll(*v);
            if (x < 0)
                throw std::invalid_argument(key + " must be nonnegative");
            target = static_cast<arma::uword>(x);
        }
    };

    cnt("system.n_t", cfg.n_t);
    cnt("system.n_r", cfg.n_r);
    cnt("system.n_ris", cfg.n_ris);
    cnt("system.n_su", cfg.n_su);
    cnt("system.n_streams", cfg.n_streams);
    cnt("system.m_r", cfg.m_r);
    cfg.m_t = cfg.n_su * cfg.m_r;
    cnt("system.m_t", cfg.m_t);

    num("power.noise_dbm", cfg.noise_dbm);
    num("power.snr_db", cfg.snr_db);
    num("power.gamma_db", cfg.gamma_db);

    cnt("channel.n_paths", cfg.n_paths);
    num("channel.angular_spread_deg", cfg.angular_spread_deg);
    num("channel.carrier_ghz", cfg.carrier_ghz);
    num("channel.element_spacing", cfg.element_spacing);
    num("channel.pathloss_alpha_db", cfg.pathloss_alpha_db);
    num("channel.pathloss_beta", cfg.pathloss_beta);
    num("channel.shadowing_db", cfg.shadowing_db);

    num("geometry.d_ris", cfg.d_ris);
    num("geometry.ris_y", cfg.ris_y);
    num("geometry.su_center_x", cfg.su_center_x);
    num("geometry.su_center_y", cfg.su_center_y);
    num("geometry.su_radius", cfg.su_radius);
    num("geometry.pu_x", cfg.pu_x);
    num("geometry.pu_y", cfg.pu_y);

    cnt("solver.bcd_max_outer", cfg.bcd_max_outer);
    num("solver.bcd_tol", cfg.bcd_tol);
    cnt("solver.rcg_max_iterations", cfg.rcg_max_iterations);
    num("solver.rcg_tolerance", cfg.rcg_tolerance);
    num("solver.armijo_slope", cfg.armijo_slope);
    num("solver.armijo_contraction", cfg.armijo_contraction);
    num("solver.armijo_initial_step", cfg.armijo_initial_step);
    num("solver.alpha_scale", cfg.alpha_scale);
    num("solver.psvd_rank_tol", cfg.psvd_rank_tol);

    cnt("run.trials", cfg.trials);
    if (auto v = take("run.seed"))
        cfg.seed = std::stoull(*v);
    if (auto v = take("run.schemes"))
    {
        cfg.schemes.clear();
        for (const auto &name : detail::split(*v, ','))
            cfg.schemes.push_back(scheme_from_name(name));
        if (cfg.schemes.empty())
            throw std::invalid_argument("run.schemes must not be empty");
    }
    if (auto v = take("run.weights"))
    {
        cfg.stream_weights.clear();
        auto parts = detail::split(*v, ',');
        if (parts.size() == 1)
        {
            double w = std::stod(parts.front());
            if (w != 1.0)
                cfg.stream_weights.assign(cfg.n_su * cfg.n_streams, w);
        }
        else
        {
            for (const auto &p : parts)
                cfg.stream_weights.push_back(std::stod(p));
        }
    }

    if (!rest.empty())
        throw std::invalid_argument("unknown config key: " + rest.begin()->first);
    cfg.validate();
    return cfg;
}

inline ScenarioConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    auto kv = parse_key_values(in);
    return config_from_map(kv);
}

// ---------------------------------------------------------------------------
// scheme pipelines
// ---------------------------------------------------------------------------

/// Per-trial transmit and interference budgets, referenced to the base
/// configuration so that sweeps do not silently renormalize the link
/// budget. snr_db is the per-element received SNR of the nominal SU
/// cascade; gamma_db scales the mean aggregate PU coupling
/// E||G f||_F^2 = n_r * n_ris * ref_pu of an isotropic unit-power
/// transmitter at snr 0 dB, which puts the interference constraint in its
/// operating range (slack at low snr, binding at high snr).
struct PowerBudget
{
    double sigma2 = 0.0;
    double p_t = 0.0;
    double i_th = 0.0;

    static PowerBudget from(const ScenarioConfig &swept, const ScenarioConfig &base)
    {
        PowerBudget b;
        b.sigma2 = swept.noise_mw();
        double ref_su = base.reference_su_gain();
        double ref_pu = base.reference_pu_gain();
        double pu_aperture = static_cast<double>(base.n_r) * static_cast<double>(base.n_ris);
        b.p_t = db_to_linear(swept.snr_db) * b.sigma2 / ref_su;
        b.i_th = db_to_linear(swept.gamma_db) * b.sigma2 * pu_aperture * ref_pu / ref_su;
        return b;
    }

    static PowerBudget from(const ScenarioConfig &cfg) { return from(cfg, cfg); }
};

struct SchemeOutput
{
    BeamformerSet bf;
    LinkReport report;
    BcdTrace trace;
    std::string status = "ok";
};

// Independent random streams per trial: the channel stream and one stream
// per design stage, so that schemes sharing a stage reproduce it exactly.
inline std::uint64_t trial_seed(std::uint64_t master, arma::uword trial)
{
    return Rng::mix(master, trial);
}

inline std::uint64_t stage_stream(Scheme s)
{
    switch (s)
    {
    case Scheme::bcd_dsvd:
    case Scheme::bcd_psvd:
    case Scheme::white_spectrum:
        return 1; // full BCD analog stage
    case Scheme::random_phase:
        return 2;
    case Scheme::fdb_noip:
        return 3;
    }
    return 0;
}

namespace detail
{

inline void append_status(std::string &status, const std::string &token)
{
    if (status == "ok")
        status = token;
    else
        status += "+" + token;
}

inline std::vector<arma::cx_mat> cascades_of(const ChannelSet &ch, const arma::cx_vec &phi)
{
    std::vector<arma::cx_mat> h;
    h.reserve(ch.h_is.size());
    for (const auto &his : ch.h_is)
        h.push_back(cascade(his, phi, ch.h_ci));
    return h;
}

/// Baseband + power + exact metrics on top of a finished analog stage.
inline SchemeOutput finish_hybrid(const BcdResult &stage, const ChannelSet &ch,
                                  const ScenarioConfig &cfg, const PowerBudget &budget,
                                  Scheme scheme)
{
    SchemeOutput out;
    out.trace = stage.trace;

    auto cascades = cascades_of(ch, stage.phi);
    arma::cx_mat g = cascade(ch.h_ip, stage.phi, ch.h_ci);

    BasebandSolution bb;
    if (scheme == Scheme::bcd_psvd)
        bb = psvd_baseband(stage.rf, cascades, g, cfg.n_streams, cfg.psvd_rank_tol);
    else
        bb = dsvd_baseband(stage.rf, cascades, cfg.n_streams);
    if (bb.regularized)
        append_status(out.status, "regularized");

    StreamGains gains = stream_gains(bb, stage.rf.f_rf, g);
    gains.weights = cfg.weights_matrix();

    arma::mat p;
    if (scheme == Scheme::white_spectrum)
    {
        double sum_t = arma::accu(gains.t);
        double sum_z = arma::accu(gains.zeta);
        double level = sum_t > 0.0 ? budget.p_t / sum_t : 0.0;
        if (sum_z > 0.0)
            level = std::min(level, budget.i_th / sum_z);
        p = level * arma::ones(cfg.n_su, cfg.n_streams);
    }
    else
    {
        BasebandMethod mode =
            scheme == Scheme::bcd_psvd ? BasebandMethod::psvd : BasebandMethod::dsvd;
        PowerAllocation alloc = waterfill(gains, budget.sigma2, budget.p_t, budget.i_th, mode);
        if (!alloc.feasible)
            append_status(out.status, "zero_gains");
        p = alloc.p;
    }

    out.bf = BeamformerSet{stage.rf.f_rf, stage.rf.w_rf, stage.phi, bb.f_bb, bb.w_bb, p};
    out.report = link_report(out.bf, ch, budget.sigma2, budget.p_t, budget.i_th);
    return out;
}

/// Fully digital baseline: per-SU truncated-SVD transceivers alternated
/// with the reflection sweep, ZF across users, TP-only water-filling.
inline SchemeOutput run_fdb(const ChannelSet &ch, const ScenarioConfig &cfg,
                            const PowerBudget &budget, Rng &rng)
{
    BcdSettings settings = BcdSettings::from_config(cfg);
    const arma::uword n_s = cfg.n_streams;

    arma::cx_vec phi = rng.unit_modulus_vec(cfg.n_ris);
    SchemeOutput out;

    auto digital_surrogate = [&](const arma::cx_vec &phases) {
        double obj = 0.0;
        for (arma::uword m = 0; m < cfg.n_su; ++m)
        {
            arma::vec s = arma::svd(cascade(ch.h_is[m], phases, ch.h_ci));
            for (arma::uword d = 0; d < n_s; ++d)
            {
                if (s(d) == 0.0)
                    return -std::numeric_limits<double>::infinity();
                obj += std::log2(s(d));
            }
        }
        return obj;
    };

    double prev = digital_surrogate(phi);
    for (arma::uword outer = 0; outer < settings.max_outer_iterations; ++outer)
    {
        RmState state;
        state.phases = phi;
        for (arma::uword m = 0; m < cfg.n_su; ++m)
        {
            TruncatedSvd svd = truncate_svd(cascade(ch.h_is[m], phi, ch.h_ci), n_s);
            state.r_mats.push_back(svd.u_hat.t() * ch.h_is[m]);
            state.t_mats.push_back(ch.h_ci * svd.v_hat);
        }
        RmReport rep = optimize_rm(state, settings.rcg, settings.alpha_scale);
        phi = state.phases;
        out.trace.rf_iterations.push_back(0);
        out.trace.rm_iterations.push_back(rep.iterations);

        double obj = digital_surrogate(phi);
        out.trace.surrogate.push_back(obj);
        out.trace.outer_iterations = outer + 1;
        const bool degenerate = !std::isfinite(obj) && !std::isfinite(prev);
        double rel =
            degenerate ? 0.0 : std::abs(obj - prev) / std::max(std::abs(prev), 1e-300);
        if (rel < settings.relative_tolerance)
        {
            out.trace.converged = true;
            break;
        }
        prev = obj;
    }

    auto cascades = cascades_of(ch, phi);
    arma::cx_mat g = cascade(ch.h_ip, phi, ch.h_ci);
    arma::cx_mat f_rf(arma::eye(cfg.n_t, cfg.n_t), arma::zeros(cfg.n_t, cfg.n_t));
    std::vector<arma::cx_mat> w_rf(
        cfg.n_su, arma::cx_mat(arma::eye(cfg.n_r, cfg.n_r), arma::zeros(cfg.n_r, cfg.n_r)));

    BasebandSolution bb = dsvd_baseband(f_rf, w_rf, cascades, n_s, n_s);
    if (bb.regularized)
        append_status(out.status, "regularized");

    StreamGains gains = stream_gains(bb, f_rf, g);
    gains.weights = cfg.weights_matrix();
    // interference constraint deliberately ignored
    PowerAllocation alloc =
        waterfill(gains, budget.sigma2, budget.p_t, budget.i_th, BasebandMethod::psvd);
    if (!alloc.feasible)
        append_status(out.status, "zero_gains");

    out.bf = BeamformerSet{f_rf, w_rf, phi, bb.f_bb, bb.w_bb, alloc.p};
    out.report = link_report(out.bf, ch, budget.sigma2, budget.p_t, budget.i_th);
    return out;
}

} // namespace detail

/// Runs one scheme on one channel realization. The random source drives
/// only the design-stage initialization; pass identically seeded sources
/// to reproduce a shared analog stage across schemes.
inline SchemeOutput run_scheme(Scheme scheme, const ChannelSet &ch, const ScenarioConfig &cfg,
                               const PowerBudget &budget, Rng &rng)
{
    switch (scheme)
    {
    case Scheme::bcd_dsvd:
    case Scheme::bcd_psvd:
    case Scheme::white_spectrum:
    {
        BcdSettings settings = BcdSettings::from_config(cfg);
        BcdResult stage = bcd_srcg(ch, cfg, settings, rng);
        return detail::finish_hybrid(stage, ch, cfg, budget, scheme);
    }
    case Scheme::random_phase:
    {
        BcdSettings settings = BcdSettings::from_config(cfg);
        settings.optimize_ris = false;
        BcdResult stage = bcd_srcg(ch, cfg, settings, rng);
        return detail::finish_hybrid(stage, ch, cfg, budget, Scheme::bcd_dsvd);
    }
    case Scheme::fdb_noip:
        return detail::run_fdb(ch, cfg, budget, rng);
    }
    throw std::logic_error("unknown scheme");
}

inline SchemeOutput run_scheme(Scheme scheme, const ChannelSet &ch, const ScenarioConfig &cfg,
                               Rng &rng)
{
    return run_scheme(scheme, ch, cfg, PowerBudget::from(cfg), rng);
}

// ---------------------------------------------------------------------------
// sweeps
// ---------------------------------------------------------------------------

struct SweepRow
{
    std::string variable;
    double value = 0.0;
    Scheme scheme = Scheme::bcd_dsvd;
    arma::uword trial = 0;
    std::uint64_t seed = 0;
    double sum_se = 0.0;
    arma::vec per_su_se;
    double i_pu = 0.0;
    double tp_used = 0.0;
    arma::uword outer_iters = 0;
    double wall_time = 0.0;
    std::string status = "ok";
};

struct SweepResult
{
    std::vector<SweepRow> rows;

    double mean_sum_se(double value, Scheme scheme) const
    {
        double acc = 0.0;
        arma::uword n = 0;
        for (const auto &r : rows)
            if (r.value == value && r.scheme == scheme && std::isfinite(r.sum_se))
            {
                acc += r.sum_se;
                ++n;
            }
        if (n == 0)
            throw std::runtime_error("no rows for the requested sweep point");
        return acc / static_cast<double>(n);
    }
};

inline ScenarioConfig apply_sweep_value(ScenarioConfig cfg, const std::string &variable,
                                        double value)
{
    auto as_count = [&](double v) {
        if (v < 1.0 || v != std::floor(v))
            throw std::invalid_argument("sweep value for " + variable +
                                        " must be a positive integer");
        return static_cast<arma::uword>(v);
    };
    if (variable == "N")
        cfg.n_ris = as_count(value);
    else if (variable == "snr")
        cfg.snr_db = value;
    else if (variable == "gamma")
        cfg.gamma_db = value;
    else if (variable == "Nr")
        cfg.n_r = as_count(value);
    else if (variable == "M")
    {
        cfg.n_su = as_count(value);
        cfg.m_t = cfg.n_su * cfg.m_r;
        if (!cfg.stream_weights.empty())
            cfg.stream_weights.assign(cfg.n_su * cfg.n_streams, cfg.stream_weights.front());
    }
    else if (variable == "dris")
        cfg.d_ris = value;
    else if (variable == "Nt")
        cfg.n_t = as_count(value);
    else
        throw std::invalid_argument("unknown sweep variable: " + variable);
    cfg.validate();
    return cfg;
}

/// Seeded Monte Carlo sweep. Trials are the unit of parallelism; all
/// workers write into preallocated slots, so the result is independent of
/// the worker count and execution order.
inline SweepResult run_sweep(const ScenarioConfig &cfg, const std::string &variable,
                             const std::vector<double> &values, unsigned n_threads = 0,
                             bool timing = false)
{
    cfg.validate();
    if (values.empty())
        throw std::invalid_argument("sweep needs at least one value");
    const arma::uword n_values = values.size();
    const arma::uword n_trials = cfg.trials;
    const arma::uword n_schemes = cfg.schemes.size();

    std::vector<ScenarioConfig> configs;
    configs.reserve(n_values);
    for (double v : values)
        configs.push_back(apply_sweep_value(cfg, variable, v));

    SweepResult result;
    result.rows.resize(n_values * n_trials * n_schemes);

    const arma::uword n_tasks = n_values * n_trials;
    std::atomic<arma::uword> next{0};

    auto worker = [&]() {
        for (;;)
        {
            arma::uword task = next.fetch_add(1);
            if (task >= n_tasks)
                return;
            const arma::uword vi = task / n_trials;
            const arma::uword trial = task % n_trials;
            const ScenarioConfig &scfg = configs[vi];
            const std::uint64_t tseed = trial_seed(cfg.seed, trial);
            const PowerBudget budget = PowerBudget::from(scfg, cfg);

            ChannelSet ch;
            bool channels_ok = true;
            std::string channel_error;
            try
            {
                Rng crng(Rng::mix(tseed, 0));
                ch = build_scenario(scfg, crng);
            }
            catch (const std::exception &e)
            {
                channels_ok = false;
                channel_error = e.what();
            }

            // schemes sharing an analog stage reuse the cached result; the
            // cache key is the stage stream id, so results are identical to
            // independent run_scheme calls with the same derived seeds
            std::map<std::uint64_t, BcdResult> stage_cache;
            auto analog_stage = [&](Scheme scheme) -> const BcdResult & {
                const std::uint64_t group = stage_stream(scheme);
                auto it = stage_cache.find(group);
                if (it == stage_cache.end())
                {
                    Rng srng(Rng::mix(tseed, group));
                    BcdSettings s = BcdSettings::from_config(scfg);
                    if (scheme == Scheme::random_phase)
                        s.optimize_ris = false;
                    it = stage_cache.emplace(group, bcd_srcg(ch, scfg, s, srng)).first;
                }
                return it->second;
            };

            for (arma::uword si = 0; si < n_schemes; ++si)
            {
                Scheme scheme = scfg.schemes[si];
                SweepRow row;
                row.variable = variable;
                row.value = values[vi];
                row.scheme = scheme;
                row.trial = trial;
                row.seed = tseed;
                auto t0 = std::chrono::steady_clock::now();
                try
                {
                    if (!channels_ok)
                        throw std::runtime_error(channel_error);
                    SchemeOutput out;
                    if (scheme == Scheme::fdb_noip)
                    {
                        Rng srng(Rng::mix(tseed, stage_stream(scheme)));
                        out = detail::run_fdb(ch, scfg, budget, srng);
                    }
                    else
                    {
                        Scheme finish_as =
                            scheme == Scheme::random_phase ? Scheme::bcd_dsvd : scheme;
                        out = detail::finish_hybrid(analog_stage(scheme), ch, scfg, budget,
                                                    finish_as);
                    }
                    row.sum_se = out.report.sum_se;
                    row.per_su_se = out.report.per_su_se;
                    row.i_pu = out.report.i_pu;
                    row.tp_used = out.report.tp_used;
                    row.outer_iters = out.trace.outer_iterations;
                    row.status = out.status;
                }
                catch (const std::exception &e)
                {
                    row.sum_se = std::numeric_limits<double>::quiet_NaN();
                    row.i_pu = std::numeric_limits<double>::quiet_NaN();
                    row.tp_used = std::numeric_limits<double>::quiet_NaN();
                    row.status = std::string("error: ") + e.what();
                }
                if (timing)
                    row.wall_time =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count();
                result.rows[(vi * n_trials + trial) * n_schemes + si] = std::move(row);
            }
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    unsigned workers = n_threads > 0 ? n_threads : (hw > 0 ? hw : 1);
    workers = std::min<unsigned>(workers, n_tasks);
    if (workers <= 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < workers; ++i)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }
    return result;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace detail
{

inline std::string fmt_g9(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

} // namespace detail

inline void emit_csv(const SweepResult &result, std::ostream &out)
{
    out << "variable,value,scheme,trial,seed,sum_se,per_su_se,i_pu,tp_used,outer_iters,"
           "wall_time,status\n";
    for (const auto &r : result.rows)
    {
        out << r.variable << ',' << detail::fmt_g9(r.value) << ',' << scheme_name(r.scheme)
            << ',' << r.trial << ',' << r.seed << ',' << detail::fmt_g9(r.sum_se) << ',';
        for (arma::uword i = 0; i < r.per_su_se.n_elem; ++i)
        {
            if (i)
                out << ';';
            out << detail::fmt_g9(r.per_su_se(i));
        }
        out << ',' << detail::fmt_g9(r.i_pu) << ',' << detail::fmt_g9(r.tp_used) << ','
            << r.outer_iters << ',' << detail::fmt_g9(r.wall_time) << ',' << r.status << '\n';
    }
}

inline void emit_csv(const SweepResult &result, const std::string &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    emit_csv(result, out);
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

inline SweepResult parse_csv(std::istream &in)
{
    SweepResult result;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty CSV");
    while (std::getline(in, line))
    {
        if (detail::trim(line).empty())
            continue;
        auto fields = detail::split(line, ',');
        if (fields.size() != 12)
            throw std::runtime_error("malformed CSV row: " + line);
        SweepRow r;
        r.variable = fields[0];
        r.value = std::stod(fields[1]);
        r.scheme = scheme_from_name(fields[2]);
        r.trial = std::stoull(fields[3]);
        r.seed = std::stoull(fields[4]);
        r.sum_se = std::stod(fields[5]);
        auto parts = detail::split(fields[6], ';');
        r.per_su_se.set_size(parts.size());
        for (arma::uword i = 0; i < parts.size(); ++i)
            r.per_su_se(i) = std::stod(parts[i]);
        r.i_pu = std::stod(fields[7]);
        r.tp_used = std::stod(fields[8]);
        r.outer_iters = std::stoull(fields[9]);
        r.wall_time = std::stod(fields[10]);
        r.status = fields[11];
        result.rows.push_back(std::move(r));
    }
    return result;
}

} // namespace riscr

#endif
