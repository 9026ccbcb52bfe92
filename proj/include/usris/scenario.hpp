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

#ifndef USRIS_SCENARIO_HPP
#define USRIS_SCENARIO_HPP

#include <cmath>
#include <string>
#include <vector>

#include "usris/errors.hpp"
#include "usris/geometry.hpp"
#include "usris/types.hpp"

namespace usris
{
    // Full physical description of one uplink setup: the user and BS arrays,
    // the stack of RIS layers between them (empty for the direct-link
    // baseline), and the scalar link parameters.
    struct Scenario
    {
        UlaSpec user; // K transmit antennas
        UlaSpec bs;   // M receive antennas
        std::vector<UpaLayerSpec> layers;
        double wavelength = 0.0;  // m
        double kappa = 1.0;       // per-layer penetration amplitude loss, (0,1]
        double noise_power = 0.0; // sigma^2, W
        double p_max = 1.0;       // transmit power budget, W

        int num_layers() const { return static_cast<int>(layers.size()); }
        int num_user_antennas() const { return user.count; }
        int num_bs_antennas() const { return bs.count; }
    };

    inline void validate(const Scenario &s)
    {
        auto fail = [](const std::string &what) { throw ConfigError("scenario: " + what); };
        if (s.user.count < 1 || s.bs.count < 1)
            fail("antenna counts must be positive");
        if (!(s.user.spacing > 0.0) && s.user.count > 1)
            fail("user array spacing must be positive");
        if (!(s.bs.spacing > 0.0) && s.bs.count > 1)
            fail("BS array spacing must be positive");
        if (!(s.wavelength > 0.0))
            fail("wavelength must be positive");
        if (!(s.kappa > 0.0) || s.kappa > 1.0)
            fail("kappa must lie in (0,1]");
        if (!(s.noise_power > 0.0))
            fail("noise power must be positive");
        if (!(s.p_max > 0.0))
            fail("power budget must be positive");
        const double axis_norm = std::sqrt(s.user.axis.x * s.user.axis.x + s.user.axis.y * s.user.axis.y +
                                           s.user.axis.z * s.user.axis.z);
        if (std::abs(axis_norm - 1.0) > 1.0e-9)
            fail("user array axis must be a unit vector");
        for (const auto &layer : s.layers)
        {
            if (layer.cols < 1 || layer.rows < 1)
                fail("layer dimensions must be positive");
            if (!(layer.element_size > 0.0))
                fail("element size must be positive");
        }
    }
} // namespace usris

#endif
