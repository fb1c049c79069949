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
// Built-in oracle checks behind the `sim selftest` subcommand: fast
// independent verifications of the gradient conventions, the determinant
// expansions, the zero-forcing residual, and the water-filling KKT system.

#ifndef RISCR_SELFTEST_HPP
#define RISCR_SELFTEST_HPP

#include <functional>
#include <string>
#include <vector>

#include "riscr/baseband.hpp"
#include "riscr/bcd.hpp"
#include "riscr/channel.hpp"
#include "riscr/ris_design.hpp"

namespace riscr
{

struct SelftestCase
{
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace selftest_detail
{

inline arma::cx_mat random_cx(arma::uword r, arma::uword c, Rng &rng)
{
    arma::cx_mat m(r, c);
    for (auto &e : m)
        e = rng.cnormal();
    return m;
}

// max relative error of the Euclidean gradient against central differences
// along random tangent directions
inline double fd_gradient_error(const RcgProblem &p, const arma::cx_vec &z, Rng &rng,
                                arma::uword n_dirs = 4, double h = 1e-6)
{
    arma::cx_vec g = p.euclidean_gradient(z);
    double worst = 0.0;
    for (arma::uword k = 0; k < n_dirs; ++k)
    {
        arma::cx_vec v(z.n_elem);
        for (auto &e : v)
            e = rng.cnormal();
        v = riemannian_gradient(z, v); // random tangent direction
        double vn = arma::norm(v);
        if (vn == 0.0)
            continue;
        v /= vn;
        double fp = p.objective(z + h * v);
        double fm = p.objective(z - h * v);
        double fd = (fp - fm) / (2.0 * h);
        double an = std::real(arma::cdot(g, v));
        double scale = std::max({std::abs(fd), std::abs(an), 1e-12});
        worst = std::max(worst, std::abs(fd - an) / scale);
    }
    return worst;
}

} // namespace selftest_detail

inline std::vector<SelftestCase> run_selftest()
{
    using namespace selftest_detail;
    std::vector<SelftestCase> cases;
    auto push = [&cases](const std::string &name, bool ok, const std::string &detail) {
        cases.push_back(SelftestCase{name, ok, detail});
    };

    { // steering vector normalization
        Rng rng(11);
        double worst = 0.0;
        for (int i = 0; i < 50; ++i)
        {
            UpaGeometry g{1 + rng.next_u64() % 4, 1 + rng.next_u64() % 4, 0.5};
            arma::cx_vec a = array_response(rng.uniform(-pi, pi), rng.uniform(0.0, pi), g);
            worst = std::max(worst, std::abs(arma::norm(a) - 1.0));
        }
        push("array_response unit norm", worst < 1e-12, "max deviation " + std::to_string(worst));
    }

    { // cascade equals the rank-one sum
        Rng rng(12);
        arma::cx_mat h_is = random_cx(3, 5, rng), h_ci = random_cx(5, 4, rng);
        arma::cx_vec phi = rng.unit_modulus_vec(5);
        arma::cx_mat direct = cascade(h_is, phi, h_ci);
        arma::cx_mat sum(3, 4, arma::fill::zeros);
        for (arma::uword n = 0; n < 5; ++n)
            sum += phi(n) * (arma::cx_vec(h_is.col(n)) * arma::cx_rowvec(h_ci.row(n)));
        double err = arma::norm(direct - sum, "fro");
        push("cascade rank-one expansion", err < 1e-10, "residual " + std::to_string(err));
    }

    { // pair surrogate gradient vs finite differences
        Rng rng(13);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i)
        {
            std::vector<arma::cx_mat> q{random_cx(3, 4, rng), random_cx(3, 4, rng)};
            RcgProblem p;
            p.objective = [&q](const arma::cx_vec &z) {
                return pair_objective_and_gradient(z, q).first;
            };
            p.euclidean_gradient = [&q](const arma::cx_vec &z) {
                return pair_objective_and_gradient(z, q).second;
            };
            worst = std::max(worst, fd_gradient_error(p, rng.unit_modulus_vec(7), rng));
        }
        push("pair gradient finite differences", worst < 1e-5,
             "max relative error " + std::to_string(worst));
    }

    { // rank-one determinant expansion of the pair subproblem
        Rng rng(14);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i)
        {
            arma::cx_mat h = random_cx(4, 4, rng);
            TruncatedSvd svd = truncate_svd(h, 2);
            arma::cx_mat f = rng.unit_modulus_vec(4), w = rng.unit_modulus_vec(4);
            arma::cx_mat f_excl(rng.unit_modulus_vec(4)), w_excl(rng.unit_modulus_vec(4));
            double alpha = 0.05;
            arma::cx_mat sv =
                arma::diagmat(arma::cx_vec(svd.sigma_hat, arma::zeros(2))) * svd.v_hat.t();
            auto logdet = [](const arma::cx_mat &m) { return std::log2(std::abs(arma::det(m))); };
            arma::cx_mat eye2(arma::eye(2, 2), arma::zeros(2, 2));
            arma::cx_mat full_f(4, 2), full_w(4, 2);
            full_f.col(0) = f_excl;
            full_f.col(1) = f;
            full_w.col(0) = w_excl;
            full_w.col(1) = w;
            double lhs = logdet(alpha * eye2 + sv * full_f * full_w.t() * svd.u_hat);
            arma::cx_mat q = compute_q(svd, f_excl, w_excl, alpha);
            std::complex<double> inner =
                arma::cdot(arma::cx_vec(w.col(0)), arma::cx_vec(q * f.col(0)));
            double rhs = logdet(alpha * eye2 + sv * f_excl * w_excl.t() * svd.u_hat) +
                         std::log2(std::abs(1.0 + inner));
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        push("pair determinant expansion", worst < 1e-8, "max gap " + std::to_string(worst));
    }

    { // rank-one determinant expansion of the element subproblem
        Rng rng(15);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i)
        {
            const arma::uword n = 4, mr = 2;
            RmState st;
            st.phases = rng.unit_modulus_vec(n);
            st.r_mats = {random_cx(mr, n, rng)};
            st.t_mats = {random_cx(n, mr, rng)};
            double alpha = 0.07;
            arma::cx_mat eye(arma::eye(mr, mr), arma::zeros(mr, mr));
            auto logdet = [](const arma::cx_mat &m) { return std::log2(std::abs(arma::det(m))); };
            for (arma::uword e = 0; e < n; ++e)
            {
                arma::cx_mat full = st.r_mats[0] * arma::diagmat(st.phases) * st.t_mats[0];
                arma::cx_mat excl =
                    full - st.phases(e) * (arma::cx_vec(st.r_mats[0].col(e)) *
                                           arma::cx_rowvec(st.t_mats[0].row(e)));
                std::complex<double> delta = compute_delta(st, 0, e, alpha);
                double lhs = logdet(alpha * eye + full);
                double rhs =
                    logdet(alpha * eye + excl) + std::log2(std::abs(1.0 + st.phases(e) * delta));
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        }
        push("element determinant expansion", worst < 1e-8, "max gap " + std::to_string(worst));
    }

    { // zero-forcing residual
        Rng rng(16);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i)
        {
            arma::cx_mat hbar = random_cx(6, 6, rng);
            arma::cx_mat f2 = zf_stage(hbar);
            worst = std::max(worst, arma::norm(hbar * f2 -
                                                   arma::cx_mat(arma::eye(6, 6),
                                                                arma::zeros(6, 6)),
                                               "fro"));
        }
        push("zero-forcing residual", worst < 1e-8, "max residual " + std::to_string(worst));
    }

    { // water-filling KKT residuals
        Rng rng(17);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i)
        {
            StreamGains g;
            g.upsilon.set_size(2, 2);
            g.zeta.set_size(2, 2);
            g.t.set_size(2, 2);
            for (arma::uword k = 0; k < 4; ++k)
            {
                g.upsilon(k) = 1.0 + 3.0 * rng.uniform();
                g.zeta(k) = 0.2 * rng.uniform();
                g.t(k) = 1.0 + rng.uniform();
            }
            g.weights = arma::ones(2, 2);
            double sigma2 = 0.5, p_t = 2.0, i_th = 0.15;
            PowerAllocation a = waterfill(g, sigma2, p_t, i_th, BasebandMethod::dsvd);
            double tp = arma::accu(a.p % g.t), ip = arma::accu(a.p % g.zeta);
            worst = std::max(worst, std::max(tp - p_t, 0.0) / p_t);
            worst = std::max(worst, std::max(ip - i_th, 0.0) / i_th);
            if (a.lambda > 0.0)
                worst = std::max(worst, std::abs(i_th - ip) / i_th);
            if (a.tau > 0.0)
                worst = std::max(worst, std::abs(p_t - tp) / p_t);
        }
        push("water-filling KKT residuals", worst < 1e-6, "max residual " + std::to_string(worst));
    }

    return cases;
}

} // namespace riscr

#endif
