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

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "riscr/baseband.hpp"

using namespace riscr;
using riscr_test::grid_search_power_objective;
using riscr_test::random_cx_mat;

namespace
{

// DFT-style analog precoder: orthogonal unit-modulus columns
arma::cx_mat dft_columns(arma::uword n, arma::uword k)
{
    arma::cx_mat f(n, k);
    for (arma::uword c = 0; c < k; ++c)
        for (arma::uword r = 0; r < n; ++r)
            f(r, c) = std::polar(1.0, 2.0 * pi * double(r) * double(c) / double(n));
    return f;
}

std::vector<arma::cx_mat> random_channels(arma::uword n_su, arma::uword n_r, arma::uword n_t,
                                          Rng &rng)
{
    std::vector<arma::cx_mat> h;
    for (arma::uword m = 0; m < n_su; ++m)
        h.push_back(random_cx_mat(n_r, n_t, rng));
    return h;
}

std::vector<arma::cx_mat> random_unit_modulus_combiners(arma::uword n_su, arma::uword n_r,
                                                        arma::uword m_r, Rng &rng)
{
    std::vector<arma::cx_mat> w;
    for (arma::uword m = 0; m < n_su; ++m)
    {
        arma::cx_mat wm(n_r, m_r);
        for (auto &e : wm)
            e = std::polar(1.0, rng.phase());
        w.push_back(wm);
    }
    return w;
}

} // namespace

TEST_CASE("direct-SVD first stage")
{
    Rng rng(1);
    const arma::uword n_t = 8, n_r = 4, m_r = 2, n_s = 2, n_su = 2, m_t = 4;
    auto channels = random_channels(n_su, n_r, n_t, rng);
    auto w_rf = random_unit_modulus_combiners(n_su, n_r, m_r, rng);

    SECTION("orthogonal-column analog stage reduces to a scaled adjoint")
    {
        arma::cx_mat f_rf = dft_columns(n_t, m_t);
        BasebandSolution bb = dsvd_baseband(f_rf, w_rf, channels, n_s, m_r);
        for (arma::uword m = 0; m < n_su; ++m)
        {
            arma::cx_mat v = bb.svds[m].v_hat.cols(0, n_s - 1);
            arma::cx_mat expected = f_rf.t() * v / double(n_t);
            REQUIRE(arma::norm(bb.f_bb1[m] - expected, "fro") < 1e-10);
        }
    }

    SECTION("first stage solves the least-squares fit")
    {
        arma::cx_mat f_rf = random_cx_mat(n_t, m_t, rng);
        BasebandSolution bb = dsvd_baseband(f_rf, w_rf, channels, n_s, m_r);
        for (arma::uword m = 0; m < n_su; ++m)
        {
            arma::cx_mat v = bb.svds[m].v_hat.cols(0, n_s - 1);
            arma::cx_mat residual = f_rf.t() * (f_rf * bb.f_bb1[m] - v);
            REQUIRE(arma::norm(residual, "fro") < 1e-9);
        }
    }

    SECTION("composite normalization invariant")
    {
        arma::cx_mat f_rf = random_cx_mat(n_t, m_t, rng);
        BasebandSolution bb = dsvd_baseband(f_rf, w_rf, channels, n_s, m_r);
        for (arma::uword m = 0; m < n_su; ++m)
            REQUIRE(arma::norm(f_rf * bb.f_bb[m], "fro") == Catch::Approx(1.0).epsilon(1e-10));
    }

    SECTION("streams equal to the RF chain count use the full truncation")
    {
        arma::cx_mat f_rf = random_cx_mat(n_t, m_t, rng);
        BasebandSolution bb = dsvd_baseband(f_rf, w_rf, channels, m_r, m_r);
        REQUIRE(bb.f_bb1[0].n_cols == m_r);
        REQUIRE(bb.svds[0].v_hat.n_cols == m_r);
    }
}

TEST_CASE("null-space projection of the PU channel")
{
    Rng rng(2);
    arma::cx_mat h = random_cx_mat(4, 8, rng);

    SECTION("a zero PU channel leaves the input unchanged")
    {
        arma::cx_mat g(3, 8, arma::fill::zeros);
        REQUIRE(arma::norm(psvd_project(h, g) - h, "fro") == 0.0);
    }

    SECTION("the projected channel is orthogonal to the PU row space")
    {
        arma::cx_mat g = random_cx_mat(3, 8, rng);
        arma::cx_mat ht = psvd_project(h, g);
        arma::cx_mat u, v;
        arma::vec s;
        arma::svd_econ(u, s, v, g);
        arma::cx_mat vg = v.cols(arma::find(s > 1e-10 * s.max()));
        REQUIRE(arma::norm(ht * vg, "fro") < 1e-10);
    }

    SECTION("projecting twice equals projecting once")
    {
        arma::cx_mat g = random_cx_mat(3, 8, rng);
        arma::cx_mat once = psvd_project(h, g);
        arma::cx_mat twice = psvd_project(once, g);
        REQUIRE(arma::norm(once - twice, "fro") < 1e-11);
    }
}

TEST_CASE("projected-SVD design")
{
    Rng rng(3);
    const arma::uword n_su = 2, n_s = 2, m_r = 2;

    SECTION("a zero PU channel reproduces the direct design")
    {
        const arma::uword n_t = 8, n_r = 4, m_t = 4;
        auto channels = random_channels(n_su, n_r, n_t, rng);
        auto w_rf = random_unit_modulus_combiners(n_su, n_r, m_r, rng);
        arma::cx_mat f_rf = random_cx_mat(n_t, m_t, rng);
        arma::cx_mat g(n_r, n_t, arma::fill::zeros);

        BasebandSolution d = dsvd_baseband(f_rf, w_rf, channels, n_s, m_r);
        BasebandSolution p = psvd_baseband(f_rf, w_rf, channels, g, n_s, m_r);
        for (arma::uword m = 0; m < n_su; ++m)
            REQUIRE(arma::norm(d.f_bb[m] - p.f_bb[m], "fro") < 1e-10);
    }

    SECTION("with a square analog stage the composite lies in the PU null space")
    {
        // n_t = m_t makes the analog projection exact, so the null-space
        // containment is limited only by arithmetic
        const arma::uword n_t = 6, m_t = 6, n_r = 2, m_r2 = 2;
        std::vector<arma::cx_mat> channels = random_channels(n_su, n_r, n_t, rng);
        auto w_rf = random_unit_modulus_combiners(n_su, n_r, m_r2, rng);
        arma::cx_mat f_rf = random_cx_mat(n_t, m_t, rng);
        arma::cx_mat g = random_cx_mat(2, n_t, rng);

        BasebandSolution bb = psvd_baseband(f_rf, w_rf, channels, g, n_s, m_r2);
        const double p_t = 4.0;
        double worst = 0.0;
        double gn = arma::norm(g, "fro");
        for (arma::uword m = 0; m < n_su; ++m)
        {
            // any feasible power splits at most p_t over unit-norm columns
            arma::cx_mat leak = g * f_rf * bb.f_bb[m];
            double l = arma::norm(leak, "fro");
            worst = std::max(worst, p_t * l * l / (p_t * gn * gn));
        }
        REQUIRE(worst < 1e-6);
    }

    SECTION("fixed inputs give identical outputs on repeated calls")
    {
        const arma::uword n_t = 8, n_r = 4, m_t = 4;
        auto channels = random_channels(n_su, n_r, n_t, rng);
        auto w_rf = random_unit_modulus_combiners(n_su, n_r, m_r, rng);
        arma::cx_mat f_rf = random_cx_mat(n_t, m_t, rng);
        arma::cx_mat g = random_cx_mat(n_r, n_t, rng);
        BasebandSolution a = psvd_baseband(f_rf, w_rf, channels, g, n_s, m_r);
        BasebandSolution b = psvd_baseband(f_rf, w_rf, channels, g, n_s, m_r);
        for (arma::uword m = 0; m < n_su; ++m)
            REQUIRE(arma::norm(a.f_bb[m] - b.f_bb[m], "fro") == 0.0);
    }
}

TEST_CASE("zero-forcing stage")
{
    Rng rng(4);

    SECTION("identity input")
    {
        arma::cx_mat eye(arma::eye(4, 4), arma::zeros(4, 4));
        REQUIRE(arma::norm(zf_stage(eye) - eye, "fro") < 1e-12);
    }

    SECTION("well-conditioned random input")
    {
        arma::cx_mat hbar = random_cx_mat(6, 6, rng);
        arma::cx_mat f2 = zf_stage(hbar);
        arma::cx_mat eye(arma::eye(6, 6), arma::zeros(6, 6));
        REQUIRE(arma::norm(hbar * f2 - eye, "fro") < 1e-8);
    }

    SECTION("block-diagonal input stays block-diagonal")
    {
        arma::cx_mat hbar(4, 4, arma::fill::zeros);
        hbar.submat(0, 0, 1, 1) = random_cx_mat(2, 2, rng);
        hbar.submat(2, 2, 3, 3) = random_cx_mat(2, 2, rng);
        arma::cx_mat f2 = zf_stage(hbar);
        REQUIRE(arma::norm(arma::cx_mat(f2.submat(0, 2, 1, 3)), "fro") < 1e-10);
        REQUIRE(arma::norm(arma::cx_mat(f2.submat(2, 0, 3, 1)), "fro") < 1e-10);
    }

    SECTION("singular input takes the regularized path")
    {
        arma::cx_mat hbar(3, 3, arma::fill::zeros);
        hbar(0, 0) = 1.0;
        bool reg = false;
        arma::cx_mat f2 = zf_stage(hbar, reg);
        REQUIRE(reg);
        REQUIRE(f2.is_finite());
    }

    SECTION("non-square input is rejected")
    {
        REQUIRE_THROWS_AS(zf_stage(random_cx_mat(3, 4, rng)), std::invalid_argument);
    }
}

TEST_CASE("per-stream gain coefficients")
{
    Rng rng(5);
    const arma::uword n_t = 8, n_r = 4, m_t = 4, m_r = 2, n_s = 2, n_su = 2;
    auto channels = random_channels(n_su, n_r, n_t, rng);
    auto w_rf = random_unit_modulus_combiners(n_su, n_r, m_r, rng);
    arma::cx_mat f_rf = random_cx_mat(n_t, m_t, rng);
    BasebandSolution bb = dsvd_baseband(f_rf, w_rf, channels, n_s, m_r);

    SECTION("no PU channel means zero interference coefficients")
    {
        StreamGains g = stream_gains(bb, f_rf, arma::cx_mat());
        REQUIRE(arma::accu(g.zeta) == 0.0);
    }

    SECTION("diagonals match the dense-product oracle")
    {
        arma::cx_mat g_ch = random_cx_mat(n_r, n_t, rng);
        StreamGains g = stream_gains(bb, f_rf, g_ch);
        for (arma::uword m = 0; m < n_su; ++m)
        {
            arma::cx_mat z =
                bb.f_bb[m].t() * f_rf.t() * g_ch.t() * g_ch * f_rf * bb.f_bb[m];
            arma::cx_mat t = bb.f_bb[m].t() * f_rf.t() * f_rf * bb.f_bb[m];
            for (arma::uword d = 0; d < n_s; ++d)
            {
                REQUIRE(g.zeta(m, d) == Catch::Approx(std::real(z(d, d))).margin(1e-12));
                REQUIRE(g.t(m, d) == Catch::Approx(std::real(t(d, d))).margin(1e-12));
                double f2n = arma::norm(arma::cx_vec(bb.f_bb2[m].col(d)));
                REQUIRE(g.upsilon(m, d) ==
                        Catch::Approx(bb.svds[m].sigma_hat(d) * bb.svds[m].sigma_hat(d) * f2n *
                                      f2n)
                            .epsilon(1e-12));
            }
        }
    }

    SECTION("an orthonormal composite has unit transmit coefficients")
    {
        BasebandSolution unit;
        unit.f_bb = {arma::cx_mat(arma::eye(4, 2), arma::zeros(4, 2))};
        unit.f_bb2 = {arma::cx_mat(arma::eye(2, 2), arma::zeros(2, 2))};
        unit.svds = {TruncatedSvd{arma::cx_mat(arma::eye(2, 2), arma::zeros(2, 2)),
                                  arma::vec{1.0, 1.0},
                                  arma::cx_mat(arma::eye(2, 2), arma::zeros(2, 2))}};
        arma::cx_mat eye4(arma::eye(4, 4), arma::zeros(4, 4));
        StreamGains g = stream_gains(unit, eye4, arma::cx_mat());
        REQUIRE(g.t(0, 0) == Catch::Approx(1.0));
        REQUIRE(g.t(0, 1) == Catch::Approx(1.0));
    }
}

TEST_CASE("water-filling power allocation")
{
    SECTION("a single dominant stream takes the whole budget")
    {
        StreamGains g;
        g.upsilon = arma::mat(1, 1, arma::fill::value(1e6));
        g.zeta = arma::mat(1, 1, arma::fill::zeros);
        g.t = arma::mat(1, 1, arma::fill::ones);
        g.weights = arma::ones(1, 1);
        PowerAllocation a = waterfill(g, 1.0, 5.0, 1.0, BasebandMethod::dsvd);
        REQUIRE(a.p(0, 0) == Catch::Approx(5.0).epsilon(1e-9));
        REQUIRE(a.tp_binding);
        REQUIRE_FALSE(a.ip_binding);
    }

    SECTION("identical streams split the budget evenly when IP is slack")
    {
        StreamGains g;
        g.upsilon = arma::mat(2, 1, arma::fill::value(50.0));
        g.zeta = arma::mat(2, 1, arma::fill::value(1e-6));
        g.t = arma::mat(2, 1, arma::fill::value(2.0));
        g.weights = arma::ones(2, 1);
        PowerAllocation a = waterfill(g, 1.0, 8.0, 100.0, BasebandMethod::dsvd);
        REQUIRE(a.p(0, 0) == Catch::Approx(8.0 / (2.0 * 2.0)).epsilon(1e-9));
        REQUIRE(a.p(1, 0) == Catch::Approx(a.p(0, 0)).epsilon(1e-12));
    }

    SECTION("random instances satisfy the KKT system and match the grid oracle")
    {
        Rng rng(6);
        for (int i = 0; i < 6; ++i)
        {
            StreamGains g;
            g.upsilon.set_size(2, 2);
            g.zeta.set_size(2, 2);
            g.t.set_size(2, 2);
            for (arma::uword k = 0; k < 4; ++k)
            {
                g.upsilon(k) = 0.5 + 4.0 * rng.uniform();
                g.zeta(k) = 0.3 * rng.uniform();
                g.t(k) = 0.5 + rng.uniform();
            }
            g.weights = arma::ones(2, 2);
            const double sigma2 = 0.4, p_t = 3.0, i_th = 0.2;
            PowerAllocation a = waterfill(g, sigma2, p_t, i_th, BasebandMethod::dsvd);

            double tp = arma::accu(a.p % g.t), ip = arma::accu(a.p % g.zeta);
            REQUIRE(tp <= p_t * (1.0 + 1e-8));
            REQUIRE(ip <= i_th * (1.0 + 1e-8));
            REQUIRE(a.lambda >= 0.0);
            REQUIRE(a.tau >= 0.0);
            if (a.lambda > 0.0)
                REQUIRE(std::abs(i_th - ip) <= 1e-6 * i_th);
            if (a.tau > 0.0)
                REQUIRE(std::abs(p_t - tp) <= 1e-6 * p_t);

            double mine = weighted_rate_dsvd(g, a.p, sigma2);
            double oracle = grid_search_power_objective(g, sigma2, p_t, i_th, true);
            REQUIRE(mine >= oracle - 1e-4);
        }
    }

    SECTION("non-uniform weights still beat the grid oracle")
    {
        Rng rng(7);
        StreamGains g;
        g.upsilon.set_size(2, 2);
        g.zeta.set_size(2, 2);
        g.t.set_size(2, 2);
        g.weights.set_size(2, 2);
        for (arma::uword k = 0; k < 4; ++k)
        {
            g.upsilon(k) = 1.0 + 2.0 * rng.uniform();
            g.zeta(k) = 0.2 * rng.uniform();
            g.t(k) = 0.8 + rng.uniform();
            g.weights(k) = 0.5 + 2.0 * rng.uniform();
        }
        const double sigma2 = 0.7, p_t = 2.5, i_th = 0.15;
        PowerAllocation a = waterfill(g, sigma2, p_t, i_th, BasebandMethod::dsvd);
        double mine = weighted_rate_dsvd(g, a.p, sigma2);
        double oracle = grid_search_power_objective(g, sigma2, p_t, i_th, true);
        REQUIRE(mine >= oracle - 1e-4);
    }

    SECTION("the rate never drops when the interference budget grows")
    {
        Rng rng(8);
        StreamGains g;
        g.upsilon.set_size(2, 2);
        g.zeta.set_size(2, 2);
        g.t.set_size(2, 2);
        for (arma::uword k = 0; k < 4; ++k)
        {
            g.upsilon(k) = 1.0 + rng.uniform();
            g.zeta(k) = 0.1 + 0.3 * rng.uniform();
            g.t(k) = 1.0;
        }
        g.weights = arma::ones(2, 2);
        double last = -1e300;
        for (double i_th : {0.01, 0.05, 0.2, 1.0, 10.0})
        {
            PowerAllocation a = waterfill(g, 0.5, 4.0, i_th, BasebandMethod::dsvd);
            double rate = weighted_rate_dsvd(g, a.p, 0.5);
            REQUIRE(rate >= last - 1e-10);
            last = rate;
        }
    }

    SECTION("the TP-only mode ignores the interference budget")
    {
        StreamGains g;
        g.upsilon = arma::mat(2, 2, arma::fill::value(3.0));
        g.zeta = arma::mat(2, 2, arma::fill::value(5.0));
        g.t = arma::mat(2, 2, arma::fill::ones);
        g.weights = arma::ones(2, 2);
        PowerAllocation a = waterfill(g, 1.0, 4.0, 1e-6, BasebandMethod::psvd);
        PowerAllocation b = waterfill(g, 1.0, 4.0, 1e6, BasebandMethod::psvd);
        REQUIRE(arma::norm(a.p - b.p, "fro") == 0.0);
        REQUIRE(a.lambda == 0.0);
    }

    SECTION("all-zero gains report infeasibility")
    {
        StreamGains g;
        g.upsilon = arma::zeros(2, 2);
        g.zeta = arma::zeros(2, 2);
        g.t = arma::ones(2, 2);
        g.weights = arma::ones(2, 2);
        PowerAllocation a = waterfill(g, 1.0, 4.0, 1.0, BasebandMethod::dsvd);
        REQUIRE_FALSE(a.feasible);
        REQUIRE(arma::accu(a.p) == 0.0);
    }
}

TEST_CASE("diagonal-approximation rate")
{
    SECTION("zero power gives zero rate")
    {
        StreamGains g;
        g.upsilon = arma::ones(2, 2);
        g.weights = arma::ones(2, 2);
        REQUIRE(weighted_rate_dsvd(g, arma::zeros(2, 2), 1.0) == 0.0);
    }

    SECTION("a unit-SNR stream contributes its weight")
    {
        StreamGains g;
        g.upsilon = arma::mat(1, 1, arma::fill::value(2.0));
        g.weights = arma::mat(1, 1, arma::fill::value(0.7));
        arma::mat p(1, 1, arma::fill::value(0.5)); // upsilon p / sigma2 = 1
        REQUIRE(weighted_rate_dsvd(g, p, 1.0) == Catch::Approx(0.7));
    }

    SECTION("matches the dense log-det when the second stage is diagonal")
    {
        Rng rng(9);
        arma::vec sig{2.0, 1.2};
        arma::cx_mat f2(2, 2, arma::fill::zeros);
        f2(0, 0) = 0.8;
        f2(1, 1) = 1.4; // diagonal, hence orthogonal columns
        arma::mat p(1, 2);
        p(0, 0) = 0.3;
        p(0, 1) = 1.1;
        const double sigma2 = 0.6;

        StreamGains g;
        g.upsilon.set_size(1, 2);
        for (arma::uword d = 0; d < 2; ++d)
        {
            double cn = arma::norm(arma::cx_vec(f2.col(d)));
            g.upsilon(0, d) = sig(d) * sig(d) * cn * cn;
        }
        g.weights = arma::ones(1, 2);

        arma::cx_mat sigma2m = arma::diagmat(arma::cx_vec(arma::square(sig), arma::zeros(2)));
        arma::cx_mat inner = f2.t() * sigma2m * f2 *
                             arma::diagmat(arma::cx_vec(p.row(0).t(), arma::zeros(2)));
        arma::cx_mat eye2(arma::eye(2, 2), arma::zeros(2, 2));
        double dense = std::log2(std::abs(arma::det(eye2 + inner / sigma2)));
        REQUIRE(weighted_rate_dsvd(g, p, sigma2) == Catch::Approx(dense).epsilon(1e-10));
    }

    SECTION("matches the dense log-det for equal singular values and orthogonal columns")
    {
        Rng rng(10);
        arma::cx_mat q, r;
        arma::qr(q, r, random_cx_mat(2, 2, rng));
        arma::cx_mat f2 = q * arma::diagmat(arma::cx_vec{std::complex<double>(0.9, 0.0),
                                                         std::complex<double>(1.3, 0.0)});
        const double s = 1.7;
        arma::mat p(1, 2);
        p(0, 0) = 0.4;
        p(0, 1) = 0.9;
        const double sigma2 = 0.8;

        StreamGains g;
        g.upsilon.set_size(1, 2);
        for (arma::uword d = 0; d < 2; ++d)
        {
            double cn = arma::norm(arma::cx_vec(f2.col(d)));
            g.upsilon(0, d) = s * s * cn * cn;
        }
        g.weights = arma::ones(1, 2);

        arma::cx_mat eye2(arma::eye(2, 2), arma::zeros(2, 2));
        arma::cx_mat inner = f2.t() * (s * s * eye2) * f2 *
                             arma::diagmat(arma::cx_vec(p.row(0).t(), arma::zeros(2)));
        double dense = std::log2(std::abs(arma::det(eye2 + inner / sigma2)));
        REQUIRE(weighted_rate_dsvd(g, p, sigma2) == Catch::Approx(dense).epsilon(1e-10));
    }
}
