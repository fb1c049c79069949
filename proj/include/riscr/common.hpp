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

#ifndef RISCR_COMMON_HPP
#define RISCR_COMMON_HPP

#include <armadillo>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace riscr
{

constexpr double pi = 3.14159265358979323846;

inline double db_to_linear(double x_db) { return std::pow(10.0, 0.1 * x_db); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

// dBm-referenced powers are kept in linear milliwatts throughout.
inline double dbm_to_mw(double x_dbm) { return std::pow(10.0, 0.1 * x_dbm); }

/// Deterministic random source. All draws are produced by explicit
/// transforms of the raw 64-bit stream so that results are identical
/// across standard libraries and platforms.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller (two uniforms per draw, no caching)
    double normal()
    {
        double u1 = 1.0 - uniform(); // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    std::complex<double> cnormal() // CN(0, 1)
    {
        const double s = 1.0 / std::sqrt(2.0);
        return {s * normal(), s * normal()};
    }

    // Laplacian via inverse CDF
    double laplace(double mean, double scale)
    {
        double u = uniform() - 0.5;
        double t = std::max(1.0 - 2.0 * std::abs(u), 1e-300);
        return mean - scale * (u >= 0.0 ? 1.0 : -1.0) * std::log(t);
    }

    double phase() { return uniform(0.0, 2.0 * pi); }

    arma::cx_vec unit_modulus_vec(arma::uword n)
    {
        arma::cx_vec z(n);
        for (arma::uword i = 0; i < n; ++i)
            z(i) = std::polar(1.0, phase());
        return z;
    }

    // splitmix64 finalizer, used to derive independent streams
    static std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b)
    {
        return splitmix64(a ^ splitmix64(b + 0x9e3779b97f4a7c15ULL));
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace riscr

#endif
