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

#ifndef RISCR_CONFIG_HPP
#define RISCR_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "riscr/common.hpp"

namespace riscr
{

enum class Scheme
{
    bcd_dsvd,       // BCD-SRCG analog stage + direct-SVD baseband + two-constraint water-filling
    bcd_psvd,       // BCD-SRCG analog stage + projected-SVD baseband + TP-only water-filling
    fdb_noip,       // fully digital SVD transceivers, RM optimized, interference constraint ignored
    random_phase,   // uniformly random RM, successive RF design only, direct-SVD baseband
    white_spectrum, // BCD-SRCG + direct-SVD baseband, equal power on all streams
};

inline std::string scheme_name(Scheme s)
{
    switch (s)
    {
    case Scheme::bcd_dsvd: return "bcd_dsvd";
    case Scheme::bcd_psvd: return "bcd_psvd";
    case Scheme::fdb_noip: return "fdb_noip";
    case Scheme::random_phase: return "random_phase";
    case Scheme::white_spectrum: return "white_spectrum";
    }
    throw std::logic_error("unknown scheme");
}

inline Scheme scheme_from_name(const std::string &name)
{
    for (Scheme s : {Scheme::bcd_dsvd, Scheme::bcd_psvd, Scheme::fdb_noip,
                     Scheme::random_phase, Scheme::white_spectrum})
        if (scheme_name(s) == name)
            return s;
    throw std::invalid_argument("unknown scheme name: " + name);
}

/// All system, geometry, channel, and solver parameters of one scenario.
/// Flat plain-number fields so that the key = value config format maps 1:1.
struct ScenarioConfig
{
    // system dimensions
    arma::uword n_t = 128;      // CBS transmit antennas
    arma::uword n_r = 8;        // receive antennas at each SU and the PU
    arma::uword n_ris = 16;     // RIS reflective elements
    arma::uword n_su = 4;       // number of SUs
    arma::uword n_streams = 2;  // data streams per SU
    arma::uword m_r = 2;        // RF chains per SU
    arma::uword m_t = 8;        // RF chains at the CBS (defaults to n_su * m_r)

    // power
    double noise_dbm = -91.0;   // noise power at each SU and the PU
    double snr_db = 0.0;        // transmit SNR over the reference SU link budget
    double gamma_db = 0.0;      // interference threshold over the reference PU link budget

    // channel
    arma::uword n_paths = 10;
    double angular_spread_deg = 10.0;
    double carrier_ghz = 28.0;         // informational; spacings are in wavelengths
    double element_spacing = 0.5;      // in wavelengths, all arrays
    double pathloss_alpha_db = 61.4;
    double pathloss_beta = 2.0;
    double shadowing_db = 5.8;         // sigma of the log-normal term; 0 disables shadowing

    // geometry, meters (CBS at the origin)
    double d_ris = 20.0;
    double ris_y = 20.0;
    double su_center_x = 100.0;
    double su_center_y = 0.0;
    double su_radius = 10.0;
    double pu_x = -100.0;
    double pu_y = 0.0;

    // solver
    arma::uword bcd_max_outer = 20;
    double bcd_tol = 1e-3;
    arma::uword rcg_max_iterations = 200;
    double rcg_tolerance = 1e-4;
    double armijo_slope = 1e-4;
    double armijo_contraction = 0.5;
    double armijo_initial_step = 1.0;
    double alpha_scale = 1e-3;         // regularizer relative to the mean singular value
    double psvd_rank_tol = 1e-10;      // singular-value cut defining the PU null-space projector

    // run control
    arma::uword trials = 50;
    std::uint64_t seed = 1;
    std::vector<Scheme> schemes = {Scheme::bcd_dsvd, Scheme::bcd_psvd, Scheme::fdb_noip,
                                   Scheme::random_phase, Scheme::white_spectrum};
    std::vector<double> stream_weights; // empty = all ones; else n_su*n_streams entries

    void validate() const
    {
        if (n_t == 0 || n_r == 0 || n_ris == 0 || n_su == 0 || n_streams == 0 || m_r == 0)
            throw std::invalid_argument("all dimension counts must be positive");
        if (m_t != n_su * m_r)
            throw std::invalid_argument("m_t must equal n_su * m_r");
        if (n_streams > m_r)
            throw std::invalid_argument("n_streams must not exceed m_r");
        if (n_su * n_streams > m_t)
            throw std::invalid_argument("n_su * n_streams must not exceed m_t");
        if (m_r > std::min(n_r, n_t))
            throw std::invalid_argument("m_r must not exceed min(n_r, n_t)");
        if (n_paths == 0)
            throw std::invalid_argument("n_paths must be positive");
        if (trials == 0)
            throw std::invalid_argument("trials must be positive");
        if (d_ris <= 0.0 || su_radius < 0.0)
            throw std::invalid_argument("bad geometry");
        if (!stream_weights.empty() && stream_weights.size() != n_su * n_streams)
            throw std::invalid_argument("stream_weights must have n_su*n_streams entries");
        for (double w : stream_weights)
            if (w <= 0.0)
                throw std::invalid_argument("stream weights must be positive");
    }

    double noise_mw() const { return dbm_to_mw(noise_dbm); }

    // Deterministic (zero-shadowing) cascaded reference path gains of the
    // nominal geometry. Transmit power and the interference threshold are
    // referenced to these budgets so that snr_db and gamma_db land in the
    // operating range regardless of the absolute path-loss scale.
    double reference_su_gain() const
    {
        double d_ci = std::hypot(d_ris, ris_y);
        double d_is = std::hypot(su_center_x - d_ris, su_center_y - ris_y);
        return db_to_linear(-(pl_db(d_ci) + pl_db(d_is)));
    }

    double reference_pu_gain() const
    {
        double d_ci = std::hypot(d_ris, ris_y);
        double d_ip = std::hypot(pu_x - d_ris, pu_y - ris_y);
        return db_to_linear(-(pl_db(d_ci) + pl_db(d_ip)));
    }

    double p_t_mw() const { return db_to_linear(snr_db) * noise_mw() / reference_su_gain(); }

    double i_th_mw() const
    {
        return db_to_linear(gamma_db) * noise_mw() * reference_pu_gain() / reference_su_gain();
    }

    arma::mat weights_matrix() const
    {
        if (stream_weights.empty())
            return arma::ones(n_su, n_streams);
        arma::mat w(n_su, n_streams);
        for (arma::uword m = 0; m < n_su; ++m)
            for (arma::uword d = 0; d < n_streams; ++d)
                w(m, d) = stream_weights[m * n_streams + d];
        return w;
    }

  private:
    double pl_db(double d) const { return pathloss_alpha_db + 10.0 * pathloss_beta * std::log10(d); }
};

} // namespace riscr

#endif
