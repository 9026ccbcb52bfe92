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

#ifndef USRIS_CHANNEL_HPP
#define USRIS_CHANNEL_HPP

#include <cmath>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "usris/errors.hpp"
#include "usris/geometry.hpp"
#include "usris/quadrature.hpp"
#include "usris/scenario.hpp"
#include "usris/types.hpp"

// Channel synthesis. Two models are used:
//  - far field (RIS->BS and the direct user->BS baseline): Friis amplitude
//    lambda/(4*pi*d) with exact per-pair distances,
//  - near field (user->RIS, RIS->RIS): per-element amplitude is the square
//    root of the free-space gain density integrated over the element's
//    region, and the phase comes from the center-to-center distance.

namespace usris
{
    // Free-space gain density between two points on parallel planes `d`
    // apart, laterally displaced by (offset_x, offset_z) from the evaluation
    // point. Includes the projected-aperture and polarization factors of the
    // exact planar-array gain, so the full-plane integral tends to 1/3, not
    // 1/2.
    struct GainDensityParams
    {
        double depth = 0.0; // d > 0, m
        double offset_x = 0.0;
        double offset_z = 0.0;
    };

    inline double gain_density(const GainDensityParams &p, double px, double pz)
    {
        const double dx = px - p.offset_x;
        const double dz = pz - p.offset_z;
        const double d2 = p.depth * p.depth;
        const double r2 = dx * dx + dz * dz + d2;
        const double r5 = r2 * r2 * std::sqrt(r2);
        return (1.0 / (4.0 * kPi)) * p.depth * (dx * dx + d2) / r5;
    }

    // Power gain collected by a rectangular region of the receiving plane;
    // dimensionless, in (0, 1).
    inline double element_gain(const GainDensityParams &p, const Rect &region,
                               const QuadratureOptions &opt = {1.0e-9, 1'000'000})
    {
        return integrate_rect([&p](double x, double z) { return gain_density(p, x, z); }, region, opt);
    }

    // Near-field channel from a point source to every element of a planar
    // grid: |h_n|^2 is the element-integrated gain, arg(h_n) the plane-wave
    // phase over the center-to-center distance.
    inline CVector near_field_channel(const Position3 &source, const ElementGrid &grid,
                                      double element_size, double wavelength)
    {
        const double depth = std::abs(grid.plane_y - source.y);
        if (!(depth > 0.0))
            throw DegenerateGeometry("near_field_channel: source lies in the target plane");
        const double half = 0.5 * element_size;
        const Rect region{-half, half, -half, half};
        const double k = 2.0 * kPi / wavelength;

        CVector h(static_cast<Eigen::Index>(grid.size()));
        for (std::size_t n = 0; n < grid.size(); n++)
        {
            GainDensityParams p;
            p.depth = depth;
            p.offset_x = grid.centers[n][0] - source.x;
            p.offset_z = grid.centers[n][1] - source.z;
            const double gain = element_gain(p, region);
            const double dist = distance(source, grid.position(n));
            h(static_cast<Eigen::Index>(n)) = std::sqrt(gain) * unit_phasor(-k * dist);
        }
        return h;
    }

    // The three channel families of one scenario. f.front() is N x K
    // (user -> layer 1), the remaining f are N x N layer-to-layer hops, g is
    // N x M (layer L -> BS).
    struct ChannelSet
    {
        std::vector<CMatrix> f;
        CMatrix g;
        double wavelength = 0.0;

        int num_layers() const { return static_cast<int>(f.size()); }
        Eigen::Index n_elements() const { return f.empty() ? 0 : f.front().rows(); }
        Eigen::Index n_user() const { return f.empty() ? 0 : f.front().cols(); }
        Eigen::Index n_bs() const { return g.cols(); }
    };

    inline void validate(const ChannelSet &ch)
    {
        if (ch.f.empty())
            throw DimensionMismatch("channel set: no layers");
        const Eigen::Index n = ch.f.front().rows();
        for (std::size_t l = 1; l < ch.f.size(); l++)
            if (ch.f[l].rows() != n || ch.f[l].cols() != n)
                throw DimensionMismatch("channel set: layer matrix dimensions inconsistent");
        if (ch.g.rows() != n)
            throw DimensionMismatch("channel set: g row count does not match element count");
        for (const auto &m : ch.f)
            if (!m.allFinite())
                throw DimensionMismatch("channel set: non-finite entry");
        if (!ch.g.allFinite())
            throw DimensionMismatch("channel set: non-finite entry");
        double max_mag = 0.0;
        for (const auto &m : ch.f)
            max_mag = std::max(max_mag, m.cwiseAbs().maxCoeff());
        max_mag = std::max(max_mag, ch.g.cwiseAbs().maxCoeff());
        if (max_mag > 1.0)
            throw DimensionMismatch("channel set: passive free-space channel with magnitude > 1");
    }

    namespace detail
    {
        // Far-field Friis coefficient over an exact distance.
        inline Complex friis(double dist, double wavelength)
        {
            return (wavelength / (4.0 * kPi * dist)) * unit_phasor(-2.0 * kPi * dist / wavelength);
        }

        // Layer-to-layer hops repeat the same lateral offsets many times;
        // cache the (slow) element-gain quadrature per distinct offset.
        class ElementGainCache
        {
          public:
            ElementGainCache(double depth, double element_size) : depth_(depth), half_(0.5 * element_size) {}

            double gain(double offset_x, double offset_z)
            {
                const auto key = std::make_pair(quantize(offset_x), quantize(offset_z));
                auto it = cache_.find(key);
                if (it != cache_.end())
                    return it->second;
                GainDensityParams p;
                p.depth = depth_;
                p.offset_x = std::abs(offset_x);
                p.offset_z = std::abs(offset_z);
                const double g = element_gain(p, Rect{-half_, half_, -half_, half_});
                cache_.emplace(key, g);
                return g;
            }

          private:
            // |offset| keys quantized well below the element pitch; the gain
            // is even in both offsets.
            static long long quantize(double v) { return std::llround(std::abs(v) * 1.0e12); }

            double depth_;
            double half_;
            std::map<std::pair<long long, long long>, double> cache_;
        };
    } // namespace detail

    inline ChannelSet assemble_channels(const Scenario &scn)
    {
        validate(scn);
        if (scn.layers.empty())
            throw ConfigError("assemble_channels: scenario has no RIS layers");

        ChannelSet ch;
        ch.wavelength = scn.wavelength;
        const double k = 2.0 * kPi / scn.wavelength;

        std::vector<ElementGrid> grids;
        grids.reserve(scn.layers.size());
        for (const auto &layer : scn.layers)
            grids.push_back(element_centers(layer));

        // f_1: user antennas -> layer 1 elements.
        const std::vector<Position3> user_pos = ula_positions(scn.user);
        const Eigen::Index n1 = static_cast<Eigen::Index>(grids.front().size());
        CMatrix f1(n1, scn.user.count);
        for (int kk = 0; kk < scn.user.count; kk++)
            f1.col(kk) = near_field_channel(user_pos[static_cast<std::size_t>(kk)], grids.front(),
                                            scn.layers.front().element_size, scn.wavelength);
        ch.f.push_back(std::move(f1));

        // f_l (l >= 2): each element of layer l-1 acts as a point source at
        // its center.
        for (std::size_t l = 1; l < scn.layers.size(); l++)
        {
            const ElementGrid &src = grids[l - 1];
            const ElementGrid &dst = grids[l];
            const double depth = std::abs(dst.plane_y - src.plane_y);
            if (!(depth > 0.0))
                throw DegenerateGeometry("assemble_channels: coincident layer planes");
            detail::ElementGainCache cache(depth, scn.layers[l].element_size);
            const Eigen::Index nn = static_cast<Eigen::Index>(dst.size());
            CMatrix fl(nn, static_cast<Eigen::Index>(src.size()));
            for (std::size_t m = 0; m < src.size(); m++)
            {
                const Position3 sp = src.position(m);
                for (std::size_t n = 0; n < dst.size(); n++)
                {
                    const double gain = cache.gain(dst.centers[n][0] - sp.x, dst.centers[n][1] - sp.z);
                    const double dist = distance(sp, dst.position(n));
                    fl(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) =
                        std::sqrt(gain) * unit_phasor(-k * dist);
                }
            }
            ch.f.push_back(std::move(fl));
        }

        // g: layer L elements -> BS antennas, far field.
        const std::vector<Position3> bs_pos = ula_positions(scn.bs);
        const ElementGrid &last = grids.back();
        CMatrix g(static_cast<Eigen::Index>(last.size()), scn.bs.count);
        for (std::size_t n = 0; n < last.size(); n++)
            for (int m = 0; m < scn.bs.count; m++)
                g(static_cast<Eigen::Index>(n), m) =
                    detail::friis(distance(last.position(n), bs_pos[static_cast<std::size_t>(m)]), scn.wavelength);
        ch.g = std::move(g);

        validate(ch);
        return ch;
    }

    // Direct user -> BS far-field channel (the "no RIS" baseline), M x K.
    inline CMatrix direct_channel(const Scenario &scn)
    {
        validate(scn);
        const std::vector<Position3> user_pos = ula_positions(scn.user);
        const std::vector<Position3> bs_pos = ula_positions(scn.bs);
        CMatrix h(scn.bs.count, scn.user.count);
        for (int m = 0; m < scn.bs.count; m++)
            for (int kk = 0; kk < scn.user.count; kk++)
                h(m, kk) = detail::friis(distance(user_pos[static_cast<std::size_t>(kk)],
                                                  bs_pos[static_cast<std::size_t>(m)]),
                                         scn.wavelength);
        return h;
    }
} // namespace usris

#endif
