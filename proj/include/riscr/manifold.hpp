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
// Conjugate-gradient ascent on the complex circle manifold (vectors with
// all entries of unit modulus). Shared by the RF pair and the RM element
// subproblems.

#ifndef RISCR_MANIFOLD_HPP
#define RISCR_MANIFOLD_HPP

#include <functional>
#include <vector>

#include "riscr/common.hpp"

namespace riscr
{

/// A point with every entry on the unit circle.
struct CirclePoint
{
    arma::cx_vec v;

    CirclePoint() = default;
    explicit CirclePoint(arma::cx_vec z) : v(std::move(z))
    {
        for (const auto &e : v)
            if (std::abs(std::abs(e) - 1.0) > 1e-12)
                throw std::invalid_argument("CirclePoint entries must have unit modulus");
    }

    arma::uword size() const { return v.n_elem; }

    static CirclePoint random(arma::uword n, Rng &rng)
    {
        CirclePoint p;
        p.v = rng.unit_modulus_vec(n);
        return p;
    }
};

/// Objective and Euclidean gradient of a smooth function on C^n.
/// Gradient convention, enforced by finite-difference tests:
///   d/dt f(z + t v) |_{t=0} = Re{ g(z)^H v }.
struct RcgProblem
{
    std::function<double(const arma::cx_vec &)> objective;
    std::function<arma::cx_vec(const arma::cx_vec &)> euclidean_gradient;
};

struct RcgSettings
{
    // stop once the Riemannian gradient norm falls below
    // tolerance * max(1, initial gradient norm); the relative form keeps the
    // criterion meaningful across the many orders of magnitude the channel
    // scales span
    double tolerance = 1e-4;
    arma::uword max_iterations = 200;
    double armijo_slope = 1e-4;
    double armijo_contraction = 0.5;
    double initial_step = 1.0;
    arma::uword max_backtracks = 40;
};

struct RcgResult
{
    CirclePoint point;
    std::vector<double> trace; // objective values, trace[0] at the start point
    bool converged = false;    // gradient norm reached the tolerance
    arma::uword iterations = 0;
    double gradient_norm = 0.0;
};

/// Projection onto the tangent space at z: egrad - Re{egrad .* conj(z)} .* z.
inline arma::cx_vec riemannian_gradient(const arma::cx_vec &z, const arma::cx_vec &egrad)
{
    if (z.n_elem != egrad.n_elem)
        throw std::invalid_argument("gradient length must match the point length");
    return egrad - arma::cx_vec(arma::real(egrad % arma::conj(z)), arma::zeros(z.n_elem)) % z;
}

/// Maps a tangent vector into the tangent space at z_new.
inline arma::cx_vec transport(const arma::cx_vec &z_new, const arma::cx_vec &eta)
{
    return riemannian_gradient(z_new, eta);
}

/// Entry-wise renormalization back onto the circle.
inline CirclePoint retract(const CirclePoint &z, const arma::cx_vec &step)
{
    if (z.size() != step.n_elem)
        throw std::invalid_argument("step length must match the point length");
    CirclePoint out;
    out.v.set_size(z.size());
    for (arma::uword i = 0; i < z.size(); ++i)
    {
        std::complex<double> s = z.v(i) + step(i);
        double mag = std::abs(s);
        if (mag < 1e-14)
            throw std::runtime_error("retraction hit a degenerate entry");
        out.v(i) = s / mag;
    }
    return out;
}

/// Nonnegative (restart) variant of the Polak-Ribiere parameter.
inline double polak_ribiere(const arma::cx_vec &grad_new, const arma::cx_vec &grad_old,
                            const arma::cx_vec &transported_grad_old)
{
    if (grad_new.n_elem != grad_old.n_elem || grad_new.n_elem != transported_grad_old.n_elem)
        throw std::invalid_argument("gradient lengths disagree");
    const double n_old = arma::norm(grad_old);
    const double den = n_old * n_old;
    if (den <= 0.0)
        throw std::domain_error("zero old gradient: the iteration already converged");
    double num = std::real(arma::cdot(grad_new, grad_new - transported_grad_old));
    return std::max(0.0, num / den);
}

/// Ascent iteration with Armijo backtracking. The trace is non-decreasing;
/// hitting the iteration cap or a failed line search ends the run with
/// converged = false.
inline RcgResult rcg_maximize(const RcgProblem &problem, const CirclePoint &z0,
                              const RcgSettings &settings)
{
    RcgResult res;
    CirclePoint z = z0;
    arma::cx_vec grad = riemannian_gradient(z.v, problem.euclidean_gradient(z.v));
    arma::cx_vec dir = grad;
    double f = problem.objective(z.v);
    res.trace.push_back(f);
    const double threshold = settings.tolerance * std::max(1.0, arma::norm(grad));

    for (arma::uword it = 0; it < settings.max_iterations; ++it)
    {
        double gn = arma::norm(grad);
        res.gradient_norm = gn;
        if (gn <= threshold)
        {
            res.converged = true;
            break;
        }

        double slope = std::real(arma::cdot(grad, dir));
        if (slope <= 0.0) // not an ascent direction, reset to steepest ascent
        {
            dir = grad;
            slope = gn * gn;
        }

        double step = settings.initial_step;
        bool accepted = false;
        CirclePoint z_next;
        double f_next = f;
        for (arma::uword bt = 0; bt <= settings.max_backtracks; ++bt)
        {
            CirclePoint cand = retract(z, step * dir);
            double f_cand = problem.objective(cand.v);
            if (f_cand >= f + settings.armijo_slope * step * slope)
            {
                accepted = true;
                z_next = std::move(cand);
                f_next = f_cand;
                break;
            }
            step *= settings.armijo_contraction;
        }
        if (!accepted)
            break; // numerically stationary, no admissible ascent step

        arma::cx_vec grad_next = riemannian_gradient(z_next.v, problem.euclidean_gradient(z_next.v));
        double beta = polak_ribiere(grad_next, grad, transport(z_next.v, grad));
        dir = grad_next + beta * transport(z_next.v, dir);
        z = std::move(z_next);
        grad = std::move(grad_next);
        f = f_next;
        res.trace.push_back(f);
        res.iterations = it + 1;
    }

    if (!res.converged)
        res.gradient_norm = arma::norm(grad);
    res.point = std::move(z);
    return res;
}

} // namespace riscr

#endif
