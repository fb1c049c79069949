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
// Approximation-free evaluation of per-SU SINR matrices, spectral
// efficiency, and interference at the PU for a complete beamformer set.
// The design surrogates are judged against these numbers.

#ifndef RISCR_METRICS_HPP
#define RISCR_METRICS_HPP

#include <vector>

#include "riscr/channel.hpp"
#include "riscr/common.hpp"

namespace riscr
{

/// Full solution of one design run. Analog parts are unit modulus for the
/// hybrid schemes; fully digital schemes carry identity analog stages.
struct BeamformerSet
{
    arma::cx_mat f_rf;              // n_t x m_t
    std::vector<arma::cx_mat> w_rf; // per SU: n_r x m_r
    arma::cx_vec phi;               // N reflection phases
    std::vector<arma::cx_mat> f_bb; // per SU: m_t x n_s, normalized composites
    std::vector<arma::cx_mat> w_bb; // per SU: m_r x n_s
    arma::mat p;                    // M x n_s stream powers

    arma::uword n_su() const { return w_rf.size(); }
};

struct LinkReport
{
    arma::vec per_su_se; // bits/s/Hz
    double sum_se = 0.0;
    double i_pu = 0.0;    // linear power at the PU
    double tp_used = 0.0; // linear transmit power
    double ip_slack = 0.0;
    double tp_slack = 0.0;
};

namespace detail
{

inline std::vector<arma::cx_mat> cascade_all(const BeamformerSet &bf, const ChannelSet &ch)
{
    std::vector<arma::cx_mat> h;
    h.reserve(bf.n_su());
    for (arma::uword m = 0; m < bf.n_su(); ++m)
        h.push_back(cascade(ch.h_is[m], bf.phi, ch.h_ci));
    return h;
}

} // namespace detail

/// Exact SINR matrix of one SU: desired-signal quadratic form times the
/// inverse of the multi-user interference plus combined-noise terms. Falls
/// back to a pseudo-inverse when the denominator is singular.
inline arma::cx_mat sinr_matrix(const BeamformerSet &bf, const ChannelSet &ch, arma::uword su,
                                double sigma2, bool *pinv_used = nullptr)
{
    if (su >= bf.n_su())
        throw std::invalid_argument("sinr_matrix: SU index out of range");
    const arma::uword n_s = bf.f_bb[su].n_cols;
    arma::cx_mat h = cascade(ch.h_is[su], bf.phi, ch.h_ci);
    arma::cx_mat wbar = bf.w_rf[su] * bf.w_bb[su]; // n_r x n_s
    arma::cx_mat a = wbar.t() * h * bf.f_rf;       // n_s x m_t

    arma::cx_mat num(n_s, n_s, arma::fill::zeros);
    arma::cx_mat den = sigma2 * (wbar.t() * wbar);
    for (arma::uword n = 0; n < bf.n_su(); ++n)
    {
        arma::cx_mat e = a * bf.f_bb[n]; // n_s x n_s effective link
        arma::cx_mat quad =
            e * arma::diagmat(arma::cx_vec(bf.p.row(n).t(), arma::zeros(n_s))) * e.t();
        if (n == su)
            num = quad;
        else
            den += quad;
    }

    arma::cx_mat gamma;
    if (arma::solve(gamma, den, num, arma::solve_opts::no_approx))
    {
        if (pinv_used)
            *pinv_used = false;
        return gamma;
    }
    if (pinv_used)
        *pinv_used = true;
    return arma::pinv(den) * num;
}

/// sum_m log2 det(I + Gamma_m) with Gamma_m Hermitian-symmetrized and its
/// spectrum clamped at zero before the determinant.
inline double sum_se(const BeamformerSet &bf, const ChannelSet &ch, double sigma2,
                     arma::vec *per_su = nullptr)
{
    double total = 0.0;
    if (per_su)
        per_su->set_size(bf.n_su());
    for (arma::uword m = 0; m < bf.n_su(); ++m)
    {
        arma::cx_mat gamma = sinr_matrix(bf, ch, m, sigma2);
        arma::cx_mat sym = 0.5 * (gamma + gamma.t());
        arma::vec ev;
        if (!arma::eig_sym(ev, sym))
            throw std::runtime_error("sum_se: eigen decomposition failed");
        double se = 0.0;
        for (double l : ev)
            se += std::log2(1.0 + std::max(l, 0.0));
        if (per_su)
            (*per_su)(m) = se;
        total += se;
    }
    return total;
}

/// Aggregate interference power at the PU: sum_m ||G F_rf F_bb,m D(sqrt p_m)||_F^2.
inline double interference_power(const BeamformerSet &bf, const arma::cx_mat &g)
{
    if (g.n_elem == 0)
        return 0.0;
    double total = 0.0;
    for (arma::uword m = 0; m < bf.n_su(); ++m)
    {
        arma::cx_mat gm = g * bf.f_rf * bf.f_bb[m];
        for (arma::uword d = 0; d < gm.n_cols; ++d)
        {
            double cn = arma::norm(arma::cx_vec(gm.col(d)));
            total += bf.p(m, d) * cn * cn;
        }
    }
    return total;
}

/// Transmit power actually used: ||F_rf F_bb D(sqrt p)||_F^2.
inline double transmit_power(const BeamformerSet &bf)
{
    double total = 0.0;
    for (arma::uword m = 0; m < bf.n_su(); ++m)
    {
        arma::cx_mat fm = bf.f_rf * bf.f_bb[m];
        for (arma::uword d = 0; d < fm.n_cols; ++d)
        {
            double cn = arma::norm(arma::cx_vec(fm.col(d)));
            total += bf.p(m, d) * cn * cn;
        }
    }
    return total;
}

inline LinkReport link_report(const BeamformerSet &bf, const ChannelSet &ch, double sigma2,
                              double p_t, double i_th)
{
    LinkReport rep;
    rep.sum_se = sum_se(bf, ch, sigma2, &rep.per_su_se);
    arma::cx_mat g = cascade(ch.h_ip, bf.phi, ch.h_ci);
    rep.i_pu = interference_power(bf, g);
    rep.tp_used = transmit_power(bf);
    rep.ip_slack = i_th - rep.i_pu;
    rep.tp_slack = p_t - rep.tp_used;
    return rep;
}

} // namespace riscr

#endif
