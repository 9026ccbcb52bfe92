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

#ifndef USRIS_METRICS_HPP
#define USRIS_METRICS_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "usris/beamformer.hpp"
#include "usris/channel.hpp"
#include "usris/errors.hpp"
#include "usris/geometry.hpp"
#include "usris/types.hpp"

// Evaluation quantities: per-layer incident power distributions, the element
// activation ratio (EAR), azimuth-cut radiation patterns, and multi-user
// SINR / sum-rate.

namespace usris
{
    struct PowerDistribution
    {
        int layer = 0;                        // 0-based layer index
        std::vector<double> per_element_power; // W, incident on each element
        double mean_power = 0.0;
    };

    struct EarResult
    {
        double epsilon = 0.0;
        int activated_count = 0;
        double ratio = 0.0;
    };

    struct RadiationPattern
    {
        std::vector<double> angles; // rad, strictly increasing
        std::vector<double> gain_db;
    };

    // Power incident on each element of layer `layer` (0-based) before that
    // layer's phase shift is applied: |[kappa^l f_{l+1} xi_(l,1) w]_n|^2.
    inline PowerDistribution layer_power(const BeamformerState &st, const ChannelSet &ch, double kappa,
                                         int layer)
    {
        detail::check_dimensions(st, ch);
        if (layer < 0 || layer >= ch.num_layers())
            throw LayerOutOfRange("layer_power: layer index out of range");
        const auto pre = detail::prefix_products(st, ch, kappa);
        const std::size_t l = static_cast<std::size_t>(layer);
        const CVector incident = std::pow(kappa, layer) * (ch.f[l] * pre[l]);

        PowerDistribution dist;
        dist.layer = layer;
        dist.per_element_power.resize(static_cast<std::size_t>(incident.size()));
        double total = 0.0;
        for (Eigen::Index n = 0; n < incident.size(); n++)
        {
            const double p = std::norm(incident(n));
            dist.per_element_power[static_cast<std::size_t>(n)] = p;
            total += p;
        }
        dist.mean_power = total / static_cast<double>(incident.size());
        return dist;
    }

    // An element is activated when its power strictly exceeds epsilon times
    // the layer mean.
    inline EarResult ear(const PowerDistribution &dist, double epsilon)
    {
        if (dist.per_element_power.empty())
            throw EmptyDistribution("ear: empty power distribution");
        if (!(epsilon > 0.0))
            throw ConfigError("ear: epsilon must be positive");
        EarResult out;
        out.epsilon = epsilon;
        const double threshold = epsilon * dist.mean_power;
        for (double p : dist.per_element_power)
            if (p > threshold)
                out.activated_count++;
        out.ratio = static_cast<double>(out.activated_count) /
                    static_cast<double>(dist.per_element_power.size());
        return out;
    }

    // Complex emission vector of the last layer: kappa Theta_L f_L xi_(L-1,1) w.
    inline CVector emission_vector(const BeamformerState &st, const ChannelSet &ch, double kappa)
    {
        detail::check_dimensions(st, ch);
        const auto pre = detail::prefix_products(st, ch, kappa);
        return pre.back();
    }

    // Array factor of an emission vector over azimuth angles in the xy-plane:
    // |sum_n e_n exp(j k alpha_n sin(phi))|. Elements sharing an x-coordinate
    // add coherently through the sum.
    inline std::vector<double> pattern_magnitudes(const CVector &emission, const std::vector<double> &alphas,
                                                  double wavelength, const std::vector<double> &angles)
    {
        if (static_cast<std::size_t>(emission.size()) != alphas.size())
            throw DimensionMismatch("pattern_magnitudes: emission/alpha length mismatch");
        if (!(emission.cwiseAbs().maxCoeff() > 0.0))
            throw ZeroEmission("pattern_magnitudes: zero emission vector");
        const double k = 2.0 * kPi / wavelength;
        std::vector<double> mags;
        mags.reserve(angles.size());
        for (double phi : angles)
        {
            const double s = std::sin(phi);
            Complex acc = 0.0;
            for (Eigen::Index n = 0; n < emission.size(); n++)
                acc += emission(n) * unit_phasor(k * alphas[static_cast<std::size_t>(n)] * s);
            mags.push_back(std::abs(acc));
        }
        return mags;
    }

    // Normalizes magnitudes to gain in dB relative to `reference` (pass the
    // own maximum for a standalone pattern, or a shared maximum when
    // comparing variants in one plot).
    inline RadiationPattern pattern_db(const std::vector<double> &angles, const std::vector<double> &mags,
                                       double reference)
    {
        RadiationPattern out;
        out.angles = angles;
        out.gain_db.reserve(mags.size());
        for (double m : mags)
            out.gain_db.push_back(20.0 * std::log10(m / reference));
        return out;
    }

    // Azimuth-cut radiation pattern of the final layer's emission, 0 dB at
    // the grid maximum.
    inline RadiationPattern radiation_pattern(const BeamformerState &st, const ChannelSet &ch, double kappa,
                                              const Scenario &scn, const std::vector<double> &angle_grid)
    {
        const ElementGrid grid = element_centers(scn.layers.back());
        std::vector<double> alphas(grid.size());
        for (std::size_t n = 0; n < grid.size(); n++)
            alphas[n] = grid.centers[n][0];
        const CVector e = emission_vector(st, ch, kappa);
        const std::vector<double> mags = pattern_magnitudes(e, alphas, scn.wavelength, angle_grid);
        double peak = 0.0;
        for (double m : mags)
            peak = std::max(peak, m);
        return pattern_db(angle_grid, mags, peak);
    }

    // Ratio (dB) between the pattern peak and the highest sidelobe outside
    // the mainlobe, the mainlobe ending at the first local minima around the
    // peak.
    inline double mainlobe_sidelobe_ratio_db(const std::vector<double> &mags)
    {
        const std::size_t n = mags.size();
        std::size_t peak = 0;
        for (std::size_t i = 1; i < n; i++)
            if (mags[i] > mags[peak])
                peak = i;
        std::size_t lo = peak;
        while (lo > 0 && mags[lo - 1] < mags[lo])
            lo--;
        std::size_t hi = peak;
        while (hi + 1 < n && mags[hi + 1] < mags[hi])
            hi++;
        double side = 0.0;
        for (std::size_t i = 0; i < n; i++)
            if (i < lo || i > hi)
                side = std::max(side, mags[i]);
        if (side == 0.0)
            return std::numeric_limits<double>::infinity();
        return 20.0 * std::log10(mags[peak] / side);
    }

    // One user's cascade as seen by the shared BS combiner.
    struct UserLink
    {
        ChannelSet channels;
        CVector w;
        std::vector<CVector> theta;
    };

    struct SinrResult
    {
        std::vector<double> sinr; // linear, per user
        double sum_rate = 0.0;    // bits/s/Hz
    };

    // Per-user SINR under a shared combiner v: own effective power over the
    // other users' effective power plus combiner-weighted noise; sum rate is
    // sum of log2(1 + SINR_u).
    inline SinrResult sinr_eval(const std::vector<UserLink> &users, const CVector &v, double kappa,
                                double noise_power)
    {
        if (users.empty())
            throw DimensionMismatch("sinr_eval: no users");
        std::vector<double> power(users.size());
        for (std::size_t u = 0; u < users.size(); u++)
        {
            BeamformerState st{users[u].w, users[u].theta, v};
            power[u] = std::norm(effective_scalar(st, users[u].channels, kappa));
        }
        const double noise = v.squaredNorm() * noise_power;
        SinrResult out;
        out.sinr.resize(users.size());
        for (std::size_t u = 0; u < users.size(); u++)
        {
            double interference = 0.0;
            for (std::size_t u2 = 0; u2 < users.size(); u2++)
                if (u2 != u)
                    interference += power[u2];
            out.sinr[u] = power[u] / (interference + noise);
            out.sum_rate += std::log2(1.0 + out.sinr[u]);
        }
        return out;
    }
} // namespace usris

#endif
