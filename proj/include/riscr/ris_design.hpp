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
// Successive per-element optimization of the reflection phases for fixed
// analog beamformers. Each scalar subproblem maximizes
// sum_m log2|1 + phi * delta_m| on the unit circle, where delta_m comes
// from the rank-one expansion of the effective channel determinant.

#ifndef RISCR_RIS_DESIGN_HPP
#define RISCR_RIS_DESIGN_HPP

#include <limits>
#include <utility>
#include <vector>

#include "riscr/common.hpp"
#include "riscr/manifold.hpp"
#include "riscr/rf_design.hpp"

namespace riscr
{

/// Reflection phases plus the per-SU factor matrices of the effective
/// channel: r_mats[m] = W_rf,m^H H_is,m (m_r x N) and
/// t_mats[m] = H_ci F_rf,m (N x m_r), so that the effective channel is
/// sum_n phi_n r_n t_n^H.
struct RmState
{
    arma::cx_vec phases;                // N, unit modulus
    std::vector<arma::cx_mat> r_mats;   // per SU: m_r x N
    std::vector<arma::cx_mat> t_mats;   // per SU: N x m_r

    arma::uword n_elements() const { return phases.n_elem; }
    arma::uword n_su() const { return r_mats.size(); }

    static RmState build(const arma::cx_vec &phases, const RfSolution &rf,
                         const arma::cx_mat &h_ci, const std::vector<arma::cx_mat> &h_is)
    {
        RmState st;
        st.phases = phases;
        st.r_mats.reserve(rf.n_su());
        st.t_mats.reserve(rf.n_su());
        for (arma::uword m = 0; m < rf.n_su(); ++m)
        {
            st.r_mats.push_back(rf.w_rf[m].t() * h_is[m]);
            st.t_mats.push_back(h_ci * rf.f_block(m));
        }
        return st;
    }

    /// Effective channel of SU m for the current phases.
    arma::cx_mat effective(arma::uword m) const
    {
        return r_mats[m] * arma::diagmat(phases) * t_mats[m];
    }
};

/// delta_{m,n} = t_n^H (alpha I + sum_{i != n} phi_i r_i t_i^H)^{-1} r_n.
inline std::complex<double> compute_delta(const RmState &state, arma::uword su,
                                          arma::uword element, double alpha_reg)
{
    if (su >= state.n_su() || element >= state.n_elements())
        throw std::invalid_argument("compute_delta: index out of range");
    if (alpha_reg <= 0.0)
        throw std::invalid_argument("alpha_reg must be positive");
    const arma::cx_mat &r = state.r_mats[su];
    const arma::cx_mat &t = state.t_mats[su];
    const arma::uword m_r = r.n_rows;

    arma::cx_mat excl = r * arma::diagmat(state.phases) * t; // full sum
    excl -= state.phases(element) * (r.col(element) * t.row(element));
    excl += alpha_reg * arma::cx_mat(arma::eye(m_r, m_r), arma::zeros(m_r, m_r));

    arma::cx_vec solved;
    if (!arma::solve(solved, excl, arma::cx_vec(r.col(element))))
        throw std::runtime_error("compute_delta: exclusion system is singular");
    return arma::as_scalar(t.row(element) * solved);
}

/// Objective sum_m log2|1 + phi delta_m| and its scalar Wirtinger gradient
/// (1/ln2) sum_m conj(delta_m / (1 + phi delta_m)). A vanishing factor
/// makes the objective -inf; callers skip such elements.
inline std::pair<double, std::complex<double>>
element_objective_and_gradient(std::complex<double> phi_n,
                               const std::vector<std::complex<double>> &deltas)
{
    constexpr double ln2 = 0.6931471805599453;
    double obj = 0.0;
    std::complex<double> grad = 0.0;
    for (const auto &d : deltas)
    {
        std::complex<double> fac = 1.0 + phi_n * d;
        double mag = std::abs(fac);
        if (mag < 1e-300)
            return {-std::numeric_limits<double>::infinity(), 0.0};
        obj += std::log2(mag);
        grad += std::conj(d / fac) / ln2;
    }
    return {obj, grad};
}

struct RmReport
{
    arma::uword updates = 0;
    arma::uword skipped = 0; // degenerate elements left untouched
    arma::uword iterations = 0;
};

/// One sweep n = 1..N: recompute the deltas for every SU, maximize the
/// scalar circle subproblem, write the phase back. The per-element
/// surrogate never decreases. The regularizer per SU is alpha_scale times
/// the mean singular value of the full effective channel at entry.
inline RmReport optimize_rm(RmState &state, const RcgSettings &settings,
                            double alpha_scale = 1e-3)
{
    const arma::uword n = state.n_elements();
    const arma::uword n_su = state.n_su();

    arma::vec alpha(n_su);
    for (arma::uword m = 0; m < n_su; ++m)
    {
        arma::vec s = arma::svd(state.effective(m));
        double mean_sigma = arma::mean(s);
        alpha(m) = alpha_scale * (mean_sigma > 0.0 ? mean_sigma : 1.0);
    }

    RmReport report;
    for (arma::uword e = 0; e < n; ++e)
    {
        std::vector<std::complex<double>> deltas(n_su);
        for (arma::uword m = 0; m < n_su; ++m)
            deltas[m] = compute_delta(state, m, e, alpha(m));

        auto at_current = element_objective_and_gradient(state.phases(e), deltas);
        if (!std::isfinite(at_current.first))
        {
            ++report.skipped;
            continue;
        }

        RcgProblem problem;
        problem.objective = [&deltas](const arma::cx_vec &z) {
            return element_objective_and_gradient(z(0), deltas).first;
        };
        problem.euclidean_gradient = [&deltas](const arma::cx_vec &z) {
            arma::cx_vec g(1);
            g(0) = element_objective_and_gradient(z(0), deltas).second;
            return g;
        };

        // the scalar objective can be multimodal for several SUs; start the
        // local ascent from the best of a coarse phase grid and the current
        // phase, which keeps the update globally competitive and ascending
        std::complex<double> start = state.phases(e);
        double best = at_current.first;
#ifndef RISCR_RM_LOCAL_ONLY
        for (int k = 0; k < 16; ++k)
        {
            std::complex<double> cand = std::polar(1.0, 2.0 * pi * k / 16.0);
            double val = element_objective_and_gradient(cand, deltas).first;
            if (val > best)
            {
                best = val;
                start = cand;
            }
        }
#endif

        CirclePoint z0;
        z0.v = arma::cx_vec{start};
        RcgResult r = rcg_maximize(problem, z0, settings);
        state.phases(e) = r.point.v(0);
        ++report.updates;
        report.iterations += r.iterations;
    }
    return report;
}

} // namespace riscr

#endif
