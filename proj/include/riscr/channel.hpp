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
// Clustered (Saleh-Valenzuela) mmWave MIMO channel generation with UPA
// array responses and log-distance path loss, plus assembly of the
// cascaded RIS links of one scenario.

#ifndef RISCR_CHANNEL_HPP
#define RISCR_CHANNEL_HPP

#include <vector>

#include "riscr/common.hpp"
#include "riscr/config.hpp"

namespace riscr
{

struct UpaGeometry
{
    arma::uword n_horizontal = 1;
    arma::uword n_vertical = 1;
    double element_spacing = 0.5; // in wavelengths

    arma::uword size() const { return n_horizontal * n_vertical; }

    void validate() const
    {
        if (n_horizontal < 1 || n_vertical < 1)
            throw std::invalid_argument("UPA needs at least one element per axis");
        if (element_spacing <= 0.0)
            throw std::invalid_argument("element spacing must be positive");
    }

    // Near-square split with a power-of-two horizontal count. Reproduces the
    // usual factorizations: 8 -> 2x4, 16 -> 4x4, 32 -> 4x8, 128 -> 8x16.
    static UpaGeometry factor(arma::uword n, double spacing = 0.5)
    {
        if (n == 0)
            throw std::invalid_argument("cannot factor a zero-element array");
        arma::uword h = 1;
        while (2 * h * 2 * h <= n)
            h *= 2;
        while (n % h != 0)
            h /= 2;
        return UpaGeometry{h, n / h, spacing};
    }
};

struct PathLossParams
{
    double alpha_db = 61.4;     // fixed offset
    double beta = 2.0;          // path-loss exponent
    double sigma_shadow_db = 5.8;

    void validate() const
    {
        if (beta <= 0.0)
            throw std::invalid_argument("path-loss exponent must be positive");
        if (sigma_shadow_db < 0.0)
            throw std::invalid_argument("shadowing sigma must be nonnegative");
    }
};

/// Everything needed to draw one link.
struct ChannelSpec
{
    arma::uword n_paths = 10;
    double aod_azimuth_mean = 0.0;   // radians
    double aod_elevation_mean = 0.5 * pi;
    double aoa_azimuth_mean = 0.0;
    double aoa_elevation_mean = 0.5 * pi;
    double angular_spread = 10.0 * pi / 180.0; // Laplacian scale, radians
    double distance = 1.0;                     // meters
    // true: every path gets its own uniformly drawn mean direction before
    // the Laplacian offset (well-spread multipath, full-rank links);
    // false: all paths share the spec means (one narrow cluster)
    bool per_path_means = true;
    UpaGeometry tx_geometry{};
    UpaGeometry rx_geometry{};
    PathLossParams path_loss{};
    double shadow_db = 0.0; // realized shadowing draw; 0 in deterministic mode

    void validate() const
    {
        if (n_paths < 1)
            throw std::invalid_argument("n_paths must be at least 1");
        if (angular_spread <= 0.0)
            throw std::invalid_argument("angular spread must be positive");
        if (distance <= 0.0)
            throw std::invalid_argument("distance must be positive");
        tx_geometry.validate();
        rx_geometry.validate();
        path_loss.validate();
    }
};

/// The three links of one realization plus per-SU geometry bookkeeping.
struct ChannelSet
{
    arma::cx_mat h_ci;              // RIS x CBS
    std::vector<arma::cx_mat> h_is; // per SU: SU x RIS
    arma::cx_mat h_ip;              // PU x RIS
    std::vector<double> su_distance_from_ris;
};

/// UPA steering vector, entries (1/sqrt(N)) exp(j 2 pi d (o sin(az) sin(el) + p cos(el)))
/// with o the horizontal and p the vertical index, o-major ordering.
inline arma::cx_vec array_response(double azimuth, double elevation, const UpaGeometry &g)
{
    g.validate();
    const arma::uword n = g.size();
    const double k = 2.0 * pi * g.element_spacing;
    const double u = std::sin(azimuth) * std::sin(elevation);
    const double v = std::cos(elevation);
    arma::cx_vec a(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    arma::uword idx = 0;
    for (arma::uword o = 0; o < g.n_horizontal; ++o)
        for (arma::uword p = 0; p < g.n_vertical; ++p, ++idx)
            a(idx) = std::polar(scale, k * (static_cast<double>(o) * u + static_cast<double>(p) * v));
    return a;
}

inline double path_loss_db(double distance, const PathLossParams &params, double shadow_db)
{
    params.validate();
    if (distance <= 0.0)
        throw std::invalid_argument("path loss needs a positive distance");
    return params.alpha_db + 10.0 * params.beta * std::log10(distance) + shadow_db;
}

/// Sum of rank-one path contributions: H = sum_l gain_l a_r(l) a_t(l)^H.
inline arma::cx_mat sv_assemble(const arma::cx_vec &gains,
                                const arma::vec &aoa_azimuth, const arma::vec &aoa_elevation,
                                const arma::vec &aod_azimuth, const arma::vec &aod_elevation,
                                const UpaGeometry &rx_geometry, const UpaGeometry &tx_geometry)
{
    const arma::uword n_paths = gains.n_elem;
    if (aoa_azimuth.n_elem != n_paths || aoa_elevation.n_elem != n_paths ||
        aod_azimuth.n_elem != n_paths || aod_elevation.n_elem != n_paths)
        throw std::invalid_argument("per-path parameter lengths disagree");
    arma::cx_mat h(rx_geometry.size(), tx_geometry.size(), arma::fill::zeros);
    for (arma::uword l = 0; l < n_paths; ++l)
    {
        arma::cx_vec ar = array_response(aoa_azimuth(l), aoa_elevation(l), rx_geometry);
        arma::cx_vec at = array_response(aod_azimuth(l), aod_elevation(l), tx_geometry);
        h += gains(l) * ar * at.t();
    }
    return h;
}

namespace detail
{
inline double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }
} // namespace detail

/// Draws one link. Per-path angles are Laplacian around the spec means
/// (azimuth clamped to [-pi, pi], elevation to [0, pi]); path gains are
/// CN(0, g^2 10^(-PL/10)) with g^2 = rows*cols/n_paths.
inline arma::cx_mat draw_channel(const ChannelSpec &spec, Rng &rng)
{
    spec.validate();
    const arma::uword np = spec.n_paths;
    arma::vec aod_az(np), aod_el(np), aoa_az(np), aoa_el(np);
    arma::cx_vec gains(np);

    const double pl = path_loss_db(spec.distance, spec.path_loss, spec.shadow_db);
    const double rows = static_cast<double>(spec.rx_geometry.size());
    const double cols = static_cast<double>(spec.tx_geometry.size());
    const double gain_std = std::sqrt(rows * cols / static_cast<double>(np) * db_to_linear(-pl));

    for (arma::uword l = 0; l < np; ++l)
    {
        double aod_az_mean = spec.aod_azimuth_mean;
        double aod_el_mean = spec.aod_elevation_mean;
        double aoa_az_mean = spec.aoa_azimuth_mean;
        double aoa_el_mean = spec.aoa_elevation_mean;
        if (spec.per_path_means)
        {
            aod_az_mean = rng.uniform(-pi, pi);
            aod_el_mean = rng.uniform(0.0, pi);
            aoa_az_mean = rng.uniform(-pi, pi);
            aoa_el_mean = rng.uniform(0.0, pi);
        }
        aod_az(l) = detail::clamp(rng.laplace(aod_az_mean, spec.angular_spread), -pi, pi);
        aod_el(l) = detail::clamp(rng.laplace(aod_el_mean, spec.angular_spread), 0.0, pi);
        aoa_az(l) = detail::clamp(rng.laplace(aoa_az_mean, spec.angular_spread), -pi, pi);
        aoa_el(l) = detail::clamp(rng.laplace(aoa_el_mean, spec.angular_spread), 0.0, pi);
        gains(l) = gain_std * rng.cnormal();
    }
    return sv_assemble(gains, aoa_az, aoa_el, aod_az, aod_el, spec.rx_geometry, spec.tx_geometry);
}

/// Cascade of an RIS link pair through the diagonal reflection vector.
inline arma::cx_mat cascade(const arma::cx_mat &h_is, const arma::cx_vec &phi,
                            const arma::cx_mat &h_ci)
{
    if (h_is.n_cols != phi.n_elem || phi.n_elem != h_ci.n_rows)
        throw std::invalid_argument("cascade: inner dimensions disagree");
    return h_is * arma::diagmat(phi) * h_ci;
}

namespace detail
{

inline ChannelSpec link_spec(const ScenarioConfig &cfg, double distance,
                             const UpaGeometry &tx, const UpaGeometry &rx, Rng &rng)
{
    ChannelSpec spec;
    spec.n_paths = cfg.n_paths;
    spec.angular_spread = cfg.angular_spread_deg * pi / 180.0;
    spec.distance = distance;
    spec.tx_geometry = tx;
    spec.rx_geometry = rx;
    spec.path_loss = PathLossParams{cfg.pathloss_alpha_db, cfg.pathloss_beta, cfg.shadowing_db};
    spec.shadow_db = cfg.shadowing_db > 0.0 ? rng.normal(0.0, cfg.shadowing_db) : 0.0;
    spec.aod_azimuth_mean = rng.uniform(-pi, pi);
    spec.aod_elevation_mean = rng.uniform(0.0, pi);
    spec.aoa_azimuth_mean = rng.uniform(-pi, pi);
    spec.aoa_elevation_mean = rng.uniform(0.0, pi);
    return spec;
}

} // namespace detail

/// Places the CBS at the origin, SUs uniformly in a disc around
/// (su_center_x, su_center_y), the PU at (pu_x, pu_y) and the RIS at
/// (d_ris, ris_y); draws all n_su + 2 links.
inline ChannelSet build_scenario(const ScenarioConfig &cfg, Rng &rng)
{
    cfg.validate();
    const UpaGeometry cbs = UpaGeometry::factor(cfg.n_t, cfg.element_spacing);
    const UpaGeometry ue = UpaGeometry::factor(cfg.n_r, cfg.element_spacing);
    const UpaGeometry ris = UpaGeometry::factor(cfg.n_ris, cfg.element_spacing);

    const double ris_x = cfg.d_ris;
    const double ris_y = cfg.ris_y;

    // SU positions first so that the draw order is independent of link order
    std::vector<std::pair<double, double>> su_pos(cfg.n_su);
    for (auto &p : su_pos)
    {
        double r = cfg.su_radius * std::sqrt(rng.uniform());
        double a = rng.uniform(0.0, 2.0 * pi);
        p = {cfg.su_center_x + r * std::cos(a), cfg.su_center_y + r * std::sin(a)};
    }

    ChannelSet set;
    double d_ci = std::hypot(ris_x, ris_y);
    set.h_ci = draw_channel(detail::link_spec(cfg, d_ci, cbs, ris, rng), rng);

    set.h_is.reserve(cfg.n_su);
    for (const auto &p : su_pos)
    {
        double d = std::hypot(p.first - ris_x, p.second - ris_y);
        set.su_distance_from_ris.push_back(d);
        set.h_is.push_back(draw_channel(detail::link_spec(cfg, d, ris, ue, rng), rng));
    }

    double d_ip = std::hypot(cfg.pu_x - ris_x, cfg.pu_y - ris_y);
    set.h_ip = draw_channel(detail::link_spec(cfg, d_ip, ris, ue, rng), rng);
    return set;
}

} // namespace riscr

#endif
