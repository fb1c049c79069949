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
// Successive joint design of the analog precoder/combiner column pairs.
// Each pair is the manifold maximizer of the modulus surrogate built from
// the truncated SVD of the SU's cascaded channel and the rank-one
// determinant expansion over the remaining columns.

#ifndef RISCR_RF_DESIGN_HPP
#define RISCR_RF_DESIGN_HPP

#include <utility>
#include <vector>

#include "riscr/common.hpp"
#include "riscr/manifold.hpp"

namespace riscr
{

struct TruncatedSvd
{
    arma::cx_mat u_hat;  // rows x rank, orthonormal columns
    arma::vec sigma_hat; // rank, descending
    arma::cx_mat v_hat;  // cols x rank, orthonormal columns
};

inline TruncatedSvd truncate_svd(const arma::cx_mat &h, arma::uword rank)
{
    if (rank > std::min(h.n_rows, h.n_cols))
        throw std::invalid_argument("truncation rank exceeds min(rows, cols)");
    arma::cx_mat u, v;
    arma::vec s;
    if (!arma::svd_econ(u, s, v, h))
        throw std::runtime_error("SVD failed");
    return TruncatedSvd{u.cols(0, rank - 1), s.head(rank), v.cols(0, rank - 1)};
}

/// Analog stage of one design run: the precoder is partitioned into
/// per-SU blocks of m_r columns; every entry has unit modulus.
struct RfSolution
{
    arma::cx_mat f_rf;              // n_t x (n_su * m_r)
    std::vector<arma::cx_mat> w_rf; // per SU: n_r x m_r

    arma::uword n_su() const { return w_rf.size(); }
    arma::uword m_r() const { return w_rf.empty() ? 0 : w_rf.front().n_cols; }

    arma::cx_mat f_block(arma::uword m) const
    {
        const arma::uword k = m_r();
        return f_rf.cols(m * k, (m + 1) * k - 1);
    }

    static RfSolution random(arma::uword n_t, arma::uword n_r, arma::uword n_su,
                             arma::uword m_r, Rng &rng)
    {
        RfSolution s;
        s.f_rf.set_size(n_t, n_su * m_r);
        for (auto &e : s.f_rf)
            e = std::polar(1.0, rng.phase());
        s.w_rf.resize(n_su);
        for (auto &w : s.w_rf)
        {
            w.set_size(n_r, m_r);
            for (auto &e : w)
                e = std::polar(1.0, rng.phase());
        }
        return s;
    }
};

/// Exclusion-weighted effective channel of one column pair:
///   Q = U_hat (alpha I + S_hat V_hat^H F_excl W_excl^H U_hat)^{-1} S_hat V_hat^H.
/// The exclusion matrices hold the other m_r - 1 columns (possibly none).
inline arma::cx_mat compute_q(const TruncatedSvd &svd, const arma::cx_mat &f_excl,
                              const arma::cx_mat &w_excl, double alpha_reg)
{
    if (alpha_reg <= 0.0)
        throw std::invalid_argument("alpha_reg must be positive");
    if (f_excl.n_cols != w_excl.n_cols)
        throw std::invalid_argument("exclusion matrices must have equal column counts");
    const arma::uword rank = svd.sigma_hat.n_elem;
    arma::cx_mat sv = arma::diagmat(arma::cx_vec(svd.sigma_hat, arma::zeros(rank))) * svd.v_hat.t();
    arma::cx_mat inner(rank, rank, arma::fill::eye);
    inner *= alpha_reg;
    if (f_excl.n_cols > 0)
        inner += sv * f_excl * w_excl.t() * svd.u_hat;
    arma::cx_mat solved;
    if (!arma::solve(solved, inner, sv))
        throw std::runtime_error("compute_q: inner system is singular");
    return svd.u_hat * solved;
}

/// Objective sum_m |w^H Q_m f| over the concatenated pair z = [w; f],
/// with its Euclidean gradient (phase-weighted per modulus term; the
/// subgradient 0 is used at a vanishing modulus).
inline std::pair<double, arma::cx_vec>
pair_objective_and_gradient(const arma::cx_vec &z, const std::vector<arma::cx_mat> &q_set)
{
    if (q_set.empty())
        throw std::invalid_argument("q_set must not be empty");
    const arma::uword n_r = q_set.front().n_rows;
    const arma::uword n_t = q_set.front().n_cols;
    if (z.n_elem != n_r + n_t)
        throw std::invalid_argument("pair vector length must be n_r + n_t");

    arma::cx_vec w = z.head(n_r);
    arma::cx_vec f = z.tail(n_t);
    double obj = 0.0;
    arma::cx_vec grad(n_r + n_t, arma::fill::zeros);
    for (const auto &q : q_set)
    {
        arma::cx_vec qf = q * f;
        std::complex<double> c = arma::cdot(w, qf); // w^H Q f
        double mag = std::abs(c);
        obj += mag;
        if (mag > 0.0)
        {
            std::complex<double> ph = std::conj(c) / mag; // e^{-j arg c}
            grad.head(n_r) += ph * qf;
            grad.tail(n_t) += std::conj(ph) * (q.t() * w);
        }
    }
    return {obj, grad};
}

struct PairReport
{
    arma::uword su = 0;
    arma::uword column = 0;
    double initial_objective = 0.0;
    double final_objective = 0.0;
    arma::uword iterations = 0;
    bool converged = false;
};

struct RfDesignResult
{
    RfSolution solution;
    std::vector<PairReport> reports;

    arma::uword total_iterations() const
    {
        arma::uword n = 0;
        for (const auto &r : reports)
            n += r.iterations;
        return n;
    }
};

/// One successive sweep over all SUs and columns: for each pair (m, l)
/// rebuild Q from the current exclusions and maximize the surrogate over
/// the concatenated pair on the circle manifold. The regularizer is
/// alpha_scale times the mean retained singular value of the SU.
inline RfDesignResult srcg_rf_design(const std::vector<arma::cx_mat> &channels,
                                     RfSolution init, const RcgSettings &settings,
                                     double alpha_scale = 1e-3)
{
    const arma::uword n_su = init.n_su();
    if (channels.size() != n_su)
        throw std::invalid_argument("one cascaded channel per SU required");
    const arma::uword m_r = init.m_r();
    const arma::uword n_t = init.f_rf.n_rows;
    const arma::uword n_r = init.w_rf.front().n_rows;

    RfDesignResult out;
    out.solution = std::move(init);
    RfSolution &rf = out.solution;

    for (arma::uword m = 0; m < n_su; ++m)
    {
        TruncatedSvd svd = truncate_svd(channels[m], m_r);
        double mean_sigma = arma::mean(svd.sigma_hat);
        double alpha = alpha_scale * (mean_sigma > 0.0 ? mean_sigma : 1.0);

        for (arma::uword l = 0; l < m_r; ++l)
        {
            const arma::uword col0 = m * m_r;
            arma::uvec keep(m_r - 1);
            for (arma::uword i = 0, k = 0; i < m_r; ++i)
                if (i != l)
                    keep(k++) = i;

            arma::cx_mat f_excl(n_t, m_r - 1), w_excl(n_r, m_r - 1);
            for (arma::uword k = 0; k < keep.n_elem; ++k)
            {
                f_excl.col(k) = rf.f_rf.col(col0 + keep(k));
                w_excl.col(k) = rf.w_rf[m].col(keep(k));
            }

            std::vector<arma::cx_mat> q_set{compute_q(svd, f_excl, w_excl, alpha)};

            arma::cx_vec z0(n_r + n_t);
            z0.head(n_r) = rf.w_rf[m].col(l);
            z0.tail(n_t) = rf.f_rf.col(col0 + l);

            RcgProblem problem;
            problem.objective = [&q_set](const arma::cx_vec &z) {
                return pair_objective_and_gradient(z, q_set).first;
            };
            problem.euclidean_gradient = [&q_set](const arma::cx_vec &z) {
                return pair_objective_and_gradient(z, q_set).second;
            };

            RcgResult r = rcg_maximize(problem, CirclePoint(z0), settings);
            rf.w_rf[m].col(l) = r.point.v.head(n_r);
            rf.f_rf.col(col0 + l) = r.point.v.tail(n_t);
            out.reports.push_back(PairReport{m, l, r.trace.front(), r.trace.back(),
                                             r.iterations, r.converged});
        }
    }
    return out;
}

} // namespace riscr

#endif
