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
// Digital stage: direct-SVD and projected-SVD baseband transceivers,
// zero-forcing across users, per-SU normalization, and the weighted
// water-filling power allocation under the transmit-power and
// interference-power constraints.

#ifndef RISCR_BASEBAND_HPP
#define RISCR_BASEBAND_HPP

#include <limits>
#include <vector>

#include "riscr/common.hpp"
#include "riscr/rf_design.hpp"

namespace riscr
{

enum class BasebandMethod
{
    dsvd,
    psvd,
};

struct BasebandSolution
{
    std::vector<arma::cx_mat> f_bb1; // per SU: m_t x n_s, first-stage precoder block
    std::vector<arma::cx_mat> f_bb2; // per SU: n_s x n_s, own diagonal block of the ZF
                                     // stage, carrying the SU's normalization scale
    std::vector<arma::cx_mat> f_bb;  // per SU: m_t x n_s, composite with ||F_rf F_bb,m||_F = 1
    std::vector<arma::cx_mat> w_bb;  // per SU: m_r x n_s
    arma::cx_mat zf;                 // (M n_s) x (M n_s) zero-forcing stage, unscaled
    std::vector<TruncatedSvd> svds;  // per-SU SVD the design was built from
    BasebandMethod method = BasebandMethod::dsvd;
    bool regularized = false;        // a Gram or ZF solve needed regularization
};

namespace detail
{

// (A^H A)^{-1} A^H B with a scaled-identity fallback for rank deficiency.
inline arma::cx_mat gram_solve(const arma::cx_mat &a, const arma::cx_mat &b, bool &regularized)
{
    arma::cx_mat gram = a.t() * a;
    arma::cx_mat rhs = a.t() * b;
    arma::cx_mat x;
    if (arma::solve(x, gram, rhs, arma::solve_opts::no_approx))
        return x;
    regularized = true;
    double reg = 1e-12 * std::max(1.0, std::abs(arma::trace(gram).real())) /
                 static_cast<double>(gram.n_rows);
    gram += reg * arma::cx_mat(arma::eye(gram.n_rows, gram.n_rows),
                               arma::zeros(gram.n_rows, gram.n_rows));
    return arma::solve(gram, rhs);
}

} // namespace detail

/// Inverse of the stacked per-SU effective channel. Condition numbers past
/// 1e10 fall back to a Tikhonov-regularized inverse, reported through the
/// flag.
inline arma::cx_mat zf_stage(const arma::cx_mat &h_bar, bool &regularized)
{
    if (h_bar.n_rows != h_bar.n_cols)
        throw std::invalid_argument("stacked effective channel must be square");
    arma::vec s = arma::svd(h_bar);
    double smax = s.max();
    if (smax > 0.0 && s.min() > 1e-10 * smax)
    {
        arma::cx_mat x;
        if (arma::solve(x, h_bar, arma::cx_mat(arma::eye(h_bar.n_rows, h_bar.n_rows),
                                               arma::zeros(h_bar.n_rows, h_bar.n_rows)),
                        arma::solve_opts::no_approx))
            return x;
    }
    regularized = true;
    double eps = std::max(1e-300, 1e-12 * smax * smax);
    arma::cx_mat gram = h_bar.t() * h_bar;
    gram += eps * arma::cx_mat(arma::eye(gram.n_rows, gram.n_rows),
                               arma::zeros(gram.n_rows, gram.n_rows));
    return arma::solve(gram, arma::cx_mat(h_bar.t()));
}

inline arma::cx_mat zf_stage(const arma::cx_mat &h_bar)
{
    bool reg = false;
    return zf_stage(h_bar, reg);
}

namespace detail
{

/// Shared construction for both SVD flavors: first-stage least-squares fit
/// of the target directions through the analog stage, ZF across users on
/// the true effective channels, then per-SU normalization.
inline BasebandSolution assemble_baseband(const arma::cx_mat &f_rf,
                                          const std::vector<arma::cx_mat> &w_rf,
                                          const std::vector<arma::cx_mat> &channels,
                                          std::vector<TruncatedSvd> svds,
                                          arma::uword n_streams, BasebandMethod method)
{
    const arma::uword n_su = channels.size();
    const arma::uword m_t = f_rf.n_cols;
    const arma::uword total = n_su * n_streams;

    BasebandSolution bb;
    bb.method = method;
    bb.svds = std::move(svds);
    bb.f_bb1.resize(n_su);
    bb.w_bb.resize(n_su);

    arma::cx_mat f1_full(m_t, total);
    for (arma::uword m = 0; m < n_su; ++m)
    {
        arma::cx_mat v = bb.svds[m].v_hat.cols(0, n_streams - 1);
        arma::cx_mat u = bb.svds[m].u_hat.cols(0, n_streams - 1);
        bb.f_bb1[m] = gram_solve(f_rf, v, bb.regularized);
        bb.w_bb[m] = gram_solve(w_rf[m], u, bb.regularized);
        f1_full.cols(m * n_streams, (m + 1) * n_streams - 1) = bb.f_bb1[m];
    }

    arma::cx_mat h_bar(total, total);
    for (arma::uword m = 0; m < n_su; ++m)
        h_bar.rows(m * n_streams, (m + 1) * n_streams - 1) =
            bb.w_bb[m].t() * w_rf[m].t() * channels[m] * f_rf * f1_full;

    bb.zf = zf_stage(h_bar, bb.regularized);

    bb.f_bb.resize(n_su);
    bb.f_bb2.resize(n_su);
    for (arma::uword m = 0; m < n_su; ++m)
    {
        arma::cx_mat block = bb.zf.cols(m * n_streams, (m + 1) * n_streams - 1);
        arma::cx_mat composite = f1_full * block;
        double nrm = arma::norm(f_rf * composite, "fro");
        double scale = nrm > 0.0 ? 1.0 / nrm : 0.0;
        bb.f_bb[m] = scale * composite;
        bb.f_bb2[m] = scale * arma::cx_mat(block.rows(m * n_streams, (m + 1) * n_streams - 1));
    }
    return bb;
}

} // namespace detail

/// Direct-SVD design from the cascaded channels as they stand.
inline BasebandSolution dsvd_baseband(const arma::cx_mat &f_rf,
                                      const std::vector<arma::cx_mat> &w_rf,
                                      const std::vector<arma::cx_mat> &channels,
                                      arma::uword n_streams, arma::uword rank)
{
    std::vector<TruncatedSvd> svds;
    svds.reserve(channels.size());
    for (const auto &h : channels)
        svds.push_back(truncate_svd(h, rank));
    return detail::assemble_baseband(f_rf, w_rf, channels, std::move(svds), n_streams,
                                     BasebandMethod::dsvd);
}

inline BasebandSolution dsvd_baseband(const RfSolution &rf,
                                      const std::vector<arma::cx_mat> &channels,
                                      arma::uword n_streams)
{
    return dsvd_baseband(rf.f_rf, rf.w_rf, channels, n_streams, rf.m_r());
}

/// Projection of a channel onto the null space of the PU channel g; the
/// projector keeps the singular directions of g above rank_tol * sigma_max.
inline arma::cx_mat psvd_project(const arma::cx_mat &h, const arma::cx_mat &g,
                                 double rank_tol = 1e-10)
{
    if (g.n_cols != h.n_cols)
        throw std::invalid_argument("psvd_project: column counts disagree");
    arma::cx_mat u, v;
    arma::vec s;
    if (!arma::svd_econ(u, s, v, g))
        throw std::runtime_error("psvd_project: SVD failed");
    if (s.n_elem == 0 || s.max() == 0.0)
        return h;
    arma::uvec keep = arma::find(s > rank_tol * s.max());
    if (keep.n_elem == 0)
        return h;
    arma::cx_mat vg = v.cols(keep);
    return h - (h * vg) * vg.t();
}

/// Projected-SVD design: same construction as the direct flavor, but the
/// target directions come from the channels projected into the PU null
/// space. The effective channels for the ZF stage stay the true ones.
inline BasebandSolution psvd_baseband(const arma::cx_mat &f_rf,
                                      const std::vector<arma::cx_mat> &w_rf,
                                      const std::vector<arma::cx_mat> &channels,
                                      const arma::cx_mat &g, arma::uword n_streams,
                                      arma::uword rank, double rank_tol = 1e-10)
{
    std::vector<TruncatedSvd> svds;
    svds.reserve(channels.size());
    for (const auto &h : channels)
        svds.push_back(truncate_svd(psvd_project(h, g, rank_tol), rank));
    return detail::assemble_baseband(f_rf, w_rf, channels, std::move(svds), n_streams,
                                     BasebandMethod::psvd);
}

inline BasebandSolution psvd_baseband(const RfSolution &rf,
                                      const std::vector<arma::cx_mat> &channels,
                                      const arma::cx_mat &g, arma::uword n_streams,
                                      double rank_tol = 1e-10)
{
    return psvd_baseband(rf.f_rf, rf.w_rf, channels, g, n_streams, rf.m_r(), rank_tol);
}

/// Per-stream coefficients of the power allocation problem.
struct StreamGains
{
    arma::mat upsilon; // M x n_s: sigma_hat^2 * ||f_bb2 column||^2
    arma::mat zeta;    // M x n_s: interference coupling through the PU channel
    arma::mat t;       // M x n_s: transmit-power coupling
    arma::mat weights; // M x n_s, positive
};

inline StreamGains stream_gains(const BasebandSolution &bb, const arma::cx_mat &f_rf,
                                const arma::cx_mat &g)
{
    const arma::uword n_su = bb.f_bb.size();
    const arma::uword n_s = bb.f_bb.front().n_cols;
    StreamGains gains;
    gains.upsilon.set_size(n_su, n_s);
    gains.zeta.set_size(n_su, n_s);
    gains.t.set_size(n_su, n_s);
    gains.weights = arma::ones(n_su, n_s);

    const bool no_pu = g.n_elem == 0 || arma::norm(g, "fro") == 0.0;
    for (arma::uword m = 0; m < n_su; ++m)
    {
        arma::cx_mat fc = f_rf * bb.f_bb[m];
        arma::cx_mat tm = fc.t() * fc;
        for (arma::uword d = 0; d < n_s; ++d)
        {
            double f2n = arma::norm(arma::cx_vec(bb.f_bb2[m].col(d)));
            gains.upsilon(m, d) = bb.svds[m].sigma_hat(d) * bb.svds[m].sigma_hat(d) * f2n * f2n;
            gains.t(m, d) = std::real(tm(d, d));
        }
        if (no_pu)
        {
            gains.zeta.row(m).zeros();
        }
        else
        {
            arma::cx_mat gc = g * fc;
            arma::cx_mat zm = gc.t() * gc;
            for (arma::uword d = 0; d < n_s; ++d)
                gains.zeta(m, d) = std::real(zm(d, d));
        }
    }
    return gains;
}

struct PowerAllocation
{
    arma::mat p;      // M x n_s, nonnegative
    double lambda = 0.0; // dual of the interference constraint
    double tau = 0.0;    // dual of the transmit-power constraint
    bool ip_binding = false;
    bool tp_binding = false;
    bool feasible = true; // false when every stream gain vanishes
};

namespace detail
{

inline double wf_power(double weight, double upsilon, double zeta, double t, double sigma2,
                       double lambda, double tau)
{
    if (upsilon <= 0.0)
        return 0.0;
    double denom = lambda * zeta + tau * t;
    if (denom <= 0.0)
        return std::numeric_limits<double>::infinity();
    return std::max(0.0, weight / denom - sigma2 / upsilon);
}

struct WfSums
{
    double tp = 0.0;
    double ip = 0.0;
};

inline WfSums wf_sums(const StreamGains &g, double sigma2, double lambda, double tau)
{
    WfSums s;
    for (arma::uword m = 0; m < g.upsilon.n_rows; ++m)
        for (arma::uword d = 0; d < g.upsilon.n_cols; ++d)
        {
            double p = wf_power(g.weights(m, d), g.upsilon(m, d), g.zeta(m, d), g.t(m, d),
                                sigma2, lambda, tau);
            if (std::isinf(p))
            {
                s.tp = s.ip = std::numeric_limits<double>::infinity();
                return s;
            }
            s.tp += p * g.t(m, d);
            s.ip += p * g.zeta(m, d);
        }
    return s;
}

// Largest tau meeting the transmit-power budget for a fixed lambda;
// returns 0 when the budget is already slack there.
inline double wf_solve_tau(const StreamGains &g, double sigma2, double lambda, double p_t)
{
    if (wf_sums(g, sigma2, lambda, 0.0).tp <= p_t)
        return 0.0;
    double hi = 1.0;
    while (wf_sums(g, sigma2, lambda, hi).tp > p_t)
    {
        hi *= 2.0;
        if (hi > 1e300)
            return hi;
    }
    double lo = 0.0;
    for (int i = 0; i < 128; ++i)
    {
        double mid = 0.5 * (lo + hi);
        if (wf_sums(g, sigma2, lambda, mid).tp > p_t)
            lo = mid;
        else
            hi = mid;
    }
    return hi; // feasible side of the bracket
}

} // namespace detail

/// Water-filling under the TP constraint and, in dsvd mode, the IP
/// constraint. The duals come from nested bisections; the dsvd branch
/// first tries lambda = 0 (IP slack) and otherwise searches lambda so that
/// the IP constraint holds with equality.
inline PowerAllocation waterfill(const StreamGains &gains, double sigma2, double p_t,
                                 double i_th, BasebandMethod mode)
{
    if (sigma2 <= 0.0 || p_t <= 0.0)
        throw std::invalid_argument("waterfill: sigma2 and p_t must be positive");
    if (mode == BasebandMethod::dsvd && i_th <= 0.0)
        throw std::invalid_argument("waterfill: i_th must be positive in dsvd mode");

    const arma::uword n_su = gains.upsilon.n_rows;
    const arma::uword n_s = gains.upsilon.n_cols;
    PowerAllocation out;
    out.p = arma::zeros(n_su, n_s);

    if (gains.upsilon.max() <= 0.0)
    {
        out.feasible = false;
        return out;
    }

    double lambda = 0.0;
    double tau = detail::wf_solve_tau(gains, sigma2, 0.0, p_t);
    if (mode == BasebandMethod::dsvd)
    {
        double ip0 = detail::wf_sums(gains, sigma2, 0.0, tau).ip;
        if (!(ip0 <= i_th * (1.0 + 1e-12)))
        {
            // interference constraint binds: bisect lambda, re-solving tau inside
            double hi = 1.0;
            while (detail::wf_sums(gains, sigma2, hi, detail::wf_solve_tau(gains, sigma2, hi, p_t)).ip >
                   i_th)
            {
                hi *= 2.0;
                if (hi > 1e300)
                    break;
            }
            double lo = 0.0;
            for (int i = 0; i < 128; ++i)
            {
                double mid = 0.5 * (lo + hi);
                double ip = detail::wf_sums(gains, sigma2, mid,
                                            detail::wf_solve_tau(gains, sigma2, mid, p_t))
                                .ip;
                if (ip > i_th)
                    lo = mid;
                else
                    hi = mid;
            }
            lambda = hi; // feasible side of the bracket
            tau = detail::wf_solve_tau(gains, sigma2, lambda, p_t);
            out.ip_binding = true;
        }
    }

    out.lambda = lambda;
    out.tau = tau;
    out.tp_binding = tau > 0.0;
    for (arma::uword m = 0; m < n_su; ++m)
        for (arma::uword d = 0; d < n_s; ++d)
            out.p(m, d) = detail::wf_power(gains.weights(m, d), gains.upsilon(m, d),
                                           gains.zeta(m, d), gains.t(m, d), sigma2, lambda, tau);
    return out;
}

/// Diagonal-approximation weighted rate: sum w log2(1 + upsilon p / sigma2).
inline double weighted_rate_dsvd(const StreamGains &gains, const arma::mat &p, double sigma2)
{
    double rate = 0.0;
    for (arma::uword m = 0; m < gains.upsilon.n_rows; ++m)
        for (arma::uword d = 0; d < gains.upsilon.n_cols; ++d)
            rate += gains.weights(m, d) *
                    std::log2(1.0 + gains.upsilon(m, d) * p(m, d) / sigma2);
    return rate;
}

} // namespace riscr

#endif
