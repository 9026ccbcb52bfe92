// SPDX-License-Identifier: Apache-2.0
//
// usris -- simulation library for multi-layer user-side RIS uplink beamforming
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

#ifndef USRIS_TYPES_HPP
#define USRIS_TYPES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace usris
{
    using Complex = std::complex<double>;
    using CVector = Eigen::VectorXcd;
    using CMatrix = Eigen::MatrixXcd;
    using RVector = Eigen::VectorXd;

    inline constexpr double kPi = std::numbers::pi;
    inline constexpr double kSpeedOfLight = 299792458.0; // m/s

    inline double db_from_linear(double x) { return 10.0 * std::log10(x); }
    inline double linear_from_db(double db) { return std::pow(10.0, db / 10.0); }

    inline Complex unit_phasor(double phase) { return {std::cos(phase), std::sin(phase)}; }

    // splitmix64: decorrelates derived seeds (restart index, sweep index)
    // from a single user-facing seed.
    inline std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Deterministic uniform doubles in [0,1); identical output on every
    // platform, unlike std::uniform_real_distribution.
    class Rng
    {
      public:
        explicit Rng(std::uint64_t seed) : state_(splitmix64(seed ^ 0x5851f42d4c957f2dULL)) {}

        std::uint64_t next_u64()
        {
            state_ = splitmix64(state_);
            return state_;
        }

        double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

        // Uniform phase in [-pi, pi).
        double next_phase() { return (2.0 * next_unit() - 1.0) * kPi; }

        Complex next_phasor() { return unit_phasor(next_phase()); }

      private:
        std::uint64_t state_;
    };
} // namespace usris

#endif
