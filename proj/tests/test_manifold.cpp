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

#include "riscr/manifold.hpp"

using namespace riscr;

namespace
{

arma::cx_vec random_cx_vec(arma::uword n, Rng &rng)
{
    arma::cx_vec v(n);
    for (auto &e : v)
        e = rng.cnormal();
    return v;
}

double tangency_defect(const arma::cx_vec &z, const arma::cx_vec &v)
{
    return arma::abs(arma::real(v % arma::conj(z))).max();
}

} // namespace

TEST_CASE("riemannian gradient removes the radial component")
{
    Rng rng(1);
    arma::cx_vec z = rng.unit_modulus_vec(6);

    SECTION("fully radial gradient projects to zero")
    {
        REQUIRE(arma::norm(riemannian_gradient(z, z)) < 1e-14);
    }

    SECTION("an already tangent direction is unchanged")
    {
        arma::cx_vec z1{std::complex<double>(1.0, 0.0)};
        arma::cx_vec e{std::complex<double>(0.0, 1.0)};
        arma::cx_vec g = riemannian_gradient(z1, e);
        REQUIRE(std::abs(g(0) - e(0)) < 1e-15);
    }

    SECTION("projection lands in the tangent space")
    {
        for (int i = 0; i < 50; ++i)
        {
            arma::cx_vec zz = rng.unit_modulus_vec(8);
            arma::cx_vec g = riemannian_gradient(zz, random_cx_vec(8, rng));
            REQUIRE(tangency_defect(zz, g) < 1e-12);
        }
    }

    REQUIRE_THROWS_AS(riemannian_gradient(z, random_cx_vec(5, rng)), std::invalid_argument);
}

TEST_CASE("transport projects onto the destination tangent space")
{
    Rng rng(2);
    arma::cx_vec z_new = rng.unit_modulus_vec(5);

    arma::cx_vec tangent = riemannian_gradient(z_new, random_cx_vec(5, rng));
    REQUIRE(arma::norm(transport(z_new, tangent) - tangent) < 1e-13);

    REQUIRE(arma::norm(transport(z_new, z_new)) < 1e-14);

    for (int i = 0; i < 25; ++i)
    {
        arma::cx_vec out = transport(z_new, random_cx_vec(5, rng));
        REQUIRE(tangency_defect(z_new, out) < 1e-12);
    }
}

TEST_CASE("retraction renormalizes onto the circle")
{
    Rng rng(3);
    CirclePoint z = CirclePoint::random(7, rng);

    SECTION("zero step is a no-op")
    {
        CirclePoint out = retract(z, arma::cx_vec(7, arma::fill::zeros));
        REQUIRE(arma::norm(out.v - z.v) < 1e-15);
    }

    SECTION("the unit example lands at the eighth root of unity")
    {
        CirclePoint one(arma::cx_vec{std::complex<double>(1.0, 0.0)});
        CirclePoint out = retract(one, arma::cx_vec{std::complex<double>(0.0, 1.0)});
        REQUIRE(std::abs(out.v(0) - std::polar(1.0, pi / 4.0)) < 1e-14);
    }

    SECTION("any valid step keeps unit modulus")
    {
        for (int i = 0; i < 50; ++i)
        {
            CirclePoint out = retract(z, random_cx_vec(7, rng));
            for (const auto &e : out.v)
                REQUIRE(std::abs(std::abs(e) - 1.0) < 1e-12);
        }
    }

    SECTION("a degenerate entry is rejected")
    {
        CirclePoint one(arma::cx_vec{std::complex<double>(1.0, 0.0)});
        REQUIRE_THROWS_AS(retract(one, arma::cx_vec{std::complex<double>(-1.0, 0.0)}),
                          std::runtime_error);
    }
}

TEST_CASE("Polak-Ribiere parameter")
{
    Rng rng(4);
    arma::cx_vec z = rng.unit_modulus_vec(6);
    arma::cx_vec g_old = riemannian_gradient(z, random_cx_vec(6, rng));

    SECTION("vanishing numerator")
    {
        REQUIRE(polak_ribiere(g_old, g_old, g_old) == 0.0);
    }

    SECTION("orthogonal equal-norm gradients give one")
    {
        arma::cx_vec a(4, arma::fill::zeros), b(4, arma::fill::zeros);
        a(0) = 1.0;
        b(1) = 1.0; // orthogonal, equal norm, identity transport
        REQUIRE(polak_ribiere(a, b, b) == Catch::Approx(1.0));
    }

    SECTION("negative raw values clamp to zero")
    {
        arma::cx_vec g_new = 0.5 * g_old; // raw value is negative
        REQUIRE(polak_ribiere(g_new, g_old, g_old) == 0.0);
    }

    SECTION("zero old gradient is an error")
    {
        arma::cx_vec zero(6, arma::fill::zeros);
        REQUIRE_THROWS_AS(polak_ribiere(g_old, zero, zero), std::domain_error);
    }
}

TEST_CASE("rcg maximizes a linear phase objective")
{
    // f(z) = Re{conj(c) z}, |c| = 1: the circle maximizer is z = c with f = 1
    std::complex<double> c = std::polar(1.0, 2.1);
    RcgProblem p;
    p.objective = [c](const arma::cx_vec &z) { return std::real(std::conj(c) * z(0)); };
    p.euclidean_gradient = [c](const arma::cx_vec &) { return arma::cx_vec{c}; };

    Rng rng(5);
    RcgSettings settings;
    settings.tolerance = 1e-9;
    RcgResult r = rcg_maximize(p, CirclePoint::random(1, rng), settings);
    REQUIRE(r.converged);
    REQUIRE(std::abs(r.point.v(0) - c) < 1e-6);
    REQUIRE(r.trace.back() == Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("rcg returns immediately from a stationary point")
{
    RcgProblem p;
    p.objective = [](const arma::cx_vec &) { return 3.0; };
    p.euclidean_gradient = [](const arma::cx_vec &z) {
        return arma::cx_vec(z.n_elem, arma::fill::zeros);
    };
    Rng rng(6);
    CirclePoint z0 = CirclePoint::random(3, rng);
    RcgResult r = rcg_maximize(p, z0, RcgSettings{});
    REQUIRE(r.converged);
    REQUIRE(r.iterations == 0);
    REQUIRE(arma::norm(r.point.v - z0.v) == 0.0);
}

TEST_CASE("rcg beats random sampling on a Hermitian quadratic form")
{
    Rng rng(7);
    arma::cx_mat b(4, 4);
    for (auto &e : b)
        e = rng.cnormal();
    arma::cx_mat a = b.t() * b; // Hermitian PSD

    RcgProblem p;
    p.objective = [&a](const arma::cx_vec &z) {
        return std::real(arma::as_scalar(z.t() * a * z));
    };
    p.euclidean_gradient = [&a](const arma::cx_vec &z) { return arma::cx_vec(2.0 * a * z); };

    RcgResult r = rcg_maximize(p, CirclePoint::random(4, rng), RcgSettings{});

    double best_random = -arma::datum::inf;
    for (int i = 0; i < 10000; ++i)
        best_random = std::max(best_random, p.objective(rng.unit_modulus_vec(4)));
    REQUIRE(r.trace.back() >= best_random - 1e-9);
}

TEST_CASE("armijo acceptance keeps every trace non-decreasing")
{
    Rng rng(8);
    for (int i = 0; i < 10; ++i)
    {
        arma::cx_mat b(5, 5);
        for (auto &e : b)
            e = rng.cnormal();
        arma::cx_mat a = b.t() * b;
        RcgProblem p;
        p.objective = [&a](const arma::cx_vec &z) {
            return std::real(arma::as_scalar(z.t() * a * z));
        };
        p.euclidean_gradient = [&a](const arma::cx_vec &z) { return arma::cx_vec(2.0 * a * z); };
        RcgResult r = rcg_maximize(p, CirclePoint::random(5, rng), RcgSettings{});
        for (std::size_t k = 1; k < r.trace.size(); ++k)
            REQUIRE(r.trace[k] >= r.trace[k - 1]);
    }
}

TEST_CASE("euclidean gradients match central finite differences")
{
    // the quadratic-form problem family used across the repo
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial)
    {
        arma::cx_mat b(6, 6);
        for (auto &e : b)
            e = rng.cnormal();
        arma::cx_mat a = b.t() * b;
        RcgProblem p;
        p.objective = [&a](const arma::cx_vec &z) {
            return std::real(arma::as_scalar(z.t() * a * z));
        };
        p.euclidean_gradient = [&a](const arma::cx_vec &z) { return arma::cx_vec(2.0 * a * z); };

        arma::cx_vec z = rng.unit_modulus_vec(6);
        arma::cx_vec g = p.euclidean_gradient(z);
        arma::cx_vec v = riemannian_gradient(z, random_cx_vec(6, rng));
        v /= arma::norm(v);
        const double h = 1e-6;
        double fd = (p.objective(z + h * v) - p.objective(z - h * v)) / (2.0 * h);
        double an = std::real(arma::cdot(g, v));
        REQUIRE(std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-12}) < 1e-5);
    }
}
