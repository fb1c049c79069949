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
// Outer alternation between the analog pair sweep and the reflection
// element sweep, until the joint surrogate stops moving.

#ifndef RISCR_BCD_HPP
#define RISCR_BCD_HPP

#include <limits>
#include <vector>

#include "riscr/channel.hpp"
#include "riscr/rf_design.hpp"
#include "riscr/ris_design.hpp"

namespace riscr
{

struct BcdSettings
{
    arma::uword max_outer_iterations = 20;
    double relative_tolerance = 1e-3; // on the surrogate objective
    RcgSettings rcg{};
    double alpha_scale = 1e-3;
    bool optimize_ris = true; // false freezes the reflection phases (random-phase baseline)

    void validate() const
    {
        if (max_outer_iterations == 0 || relative_tolerance <= 0.0 || alpha_scale <= 0.0)
            throw std::invalid_argument("BCD settings must be positive");
    }

    static BcdSettings from_config(const ScenarioConfig &cfg)
    {
        BcdSettings s;
        s.max_outer_iterations = cfg.bcd_max_outer;
        s.relative_tolerance = cfg.bcd_tol;
        s.rcg.tolerance = cfg.rcg_tolerance;
        s.rcg.max_iterations = cfg.rcg_max_iterations;
        s.rcg.armijo_slope = cfg.armijo_slope;
        s.rcg.armijo_contraction = cfg.armijo_contraction;
        s.rcg.initial_step = cfg.armijo_initial_step;
        s.alpha_scale = cfg.alpha_scale;
        return s;
    }
};

struct BcdTrace
{
    std::vector<double> surrogate;          // value after each outer iteration
    std::vector<arma::uword> rf_iterations; // inner RCG iterations per outer step
    std::vector<arma::uword> rm_iterations;
    bool converged = false;
    arma::uword outer_iterations = 0;
};

/// Joint surrogate: sum_m log2 |det(W_rf,m^H H_m(phi) F_rf,m)|, with the
/// -inf sentinel when any determinant vanishes exactly.
inline double surrogate_objective(const RfSolution &rf, const arma::cx_vec &phi,
                                  const ChannelSet &ch)
{
    double obj = 0.0;
    for (arma::uword m = 0; m < rf.n_su(); ++m)
    {
        arma::cx_mat h = cascade(ch.h_is[m], phi, ch.h_ci);
        std::complex<double> d = arma::det(arma::cx_mat(rf.w_rf[m].t() * h * rf.f_block(m)));
        double mag = std::abs(d);
        if (mag == 0.0)
            return -std::numeric_limits<double>::infinity();
        obj += std::log2(mag);
    }
    return obj;
}

struct BcdResult
{
    RfSolution rf;
    arma::cx_vec phi;
    BcdTrace trace;
};

/// Alternates the analog pair sweep and the element sweep, warm-starting
/// each stage from the previous iterate, until the relative surrogate
/// change drops below the tolerance or the iteration cap is hit.
inline BcdResult bcd_srcg(const ChannelSet &ch, const ScenarioConfig &cfg,
                          const BcdSettings &settings, Rng &rng)
{
    settings.validate();
    BcdResult out;
    out.rf = RfSolution::random(cfg.n_t, cfg.n_r, cfg.n_su, cfg.m_r, rng);
    out.phi = rng.unit_modulus_vec(cfg.n_ris);

    double prev = surrogate_objective(out.rf, out.phi, ch);
    for (arma::uword outer = 0; outer < settings.max_outer_iterations; ++outer)
    {
        std::vector<arma::cx_mat> cascades;
        cascades.reserve(cfg.n_su);
        for (arma::uword m = 0; m < cfg.n_su; ++m)
            cascades.push_back(cascade(ch.h_is[m], out.phi, ch.h_ci));

        RfDesignResult rf_res =
            srcg_rf_design(cascades, std::move(out.rf), settings.rcg, settings.alpha_scale);
        out.rf = std::move(rf_res.solution);
        out.trace.rf_iterations.push_back(rf_res.total_iterations());

        if (settings.optimize_ris)
        {
            RmState state = RmState::build(out.phi, out.rf, ch.h_ci, ch.h_is);
            RmReport rep = optimize_rm(state, settings.rcg, settings.alpha_scale);
            out.phi = state.phases;
            out.trace.rm_iterations.push_back(rep.iterations);
        }
        else
        {
            out.trace.rm_iterations.push_back(0);
        }

        double obj = surrogate_objective(out.rf, out.phi, ch);
        out.trace.surrogate.push_back(obj);
        out.trace.outer_iterations = outer + 1;

        const bool both_degenerate = !std::isfinite(obj) && !std::isfinite(prev);
        double rel = both_degenerate
                         ? 0.0
                         : std::abs(obj - prev) / std::max(std::abs(prev), 1e-300);
        if (rel < settings.relative_tolerance)
        {
            out.trace.converged = true;
            break;
        }
        prev = obj;
    }
    return out;
}

} // namespace riscr

#endif
