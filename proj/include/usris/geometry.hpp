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

#ifndef USRIS_GEOMETRY_HPP
#define USRIS_GEOMETRY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

#include "usris/errors.hpp"

// Antenna-array and RIS-layer layouts. All coordinates are meters in a fixed
// right-handed frame: RIS layers are planes of constant y, element centers
// live in (x, z) = (alpha, beta). Pure value types, no hidden state.

namespace usris
{
    struct Position3
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;
    };

    inline double distance(const Position3 &a, const Position3 &b)
    {
        const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }

    // Uniform linear array: `count` antennas spaced `spacing` apart along
    // `axis` (unit vector), centered on `center`.
    struct UlaSpec
    {
        int count = 1;
        double spacing = 0.0;
        Position3 center{};
        Position3 axis{1.0, 0.0, 0.0};
    };

    // One RIS layer: a cols x rows uniform planar array of square elements of
    // side `element_size`, closely packed (pitch equals element size), lying
    // in the plane y = plane_y with its centroid at center_xz.
    struct UpaLayerSpec
    {
        int cols = 1; // along x (alpha)
        int rows = 1; // along z (beta)
        double element_size = 0.0;
        double plane_y = 0.0;
        std::array<double, 2> center_xz{0.0, 0.0};

        int element_count() const { return cols * rows; }
    };

    // Element centers (alpha_n, beta_n) of one layer. Indexing is row-major
    // with x fastest, starting at the most-negative (alpha, beta) corner, so
    // n = row * cols + col.
    struct ElementGrid
    {
        std::vector<std::array<double, 2>> centers;
        double plane_y = 0.0;

        std::size_t size() const { return centers.size(); }

        Position3 position(std::size_t n) const
        {
            return {centers[n][0], plane_y, centers[n][1]};
        }
    };

    inline ElementGrid element_centers(const UpaLayerSpec &layer)
    {
        ElementGrid grid;
        grid.plane_y = layer.plane_y;
        grid.centers.reserve(static_cast<std::size_t>(layer.element_count()));
        const double a = layer.element_size;
        const double x0 = layer.center_xz[0];
        const double z0 = layer.center_xz[1];
        for (int row = 0; row < layer.rows; row++)
        {
            const double beta = (row - 0.5 * (layer.rows - 1)) * a + z0;
            for (int col = 0; col < layer.cols; col++)
            {
                const double alpha = (col - 0.5 * (layer.cols - 1)) * a + x0;
                grid.centers.push_back({alpha, beta});
            }
        }
        return grid;
    }

    inline std::vector<Position3> ula_positions(const UlaSpec &spec)
    {
        std::vector<Position3> out;
        out.reserve(static_cast<std::size_t>(spec.count));
        for (int i = 0; i < spec.count; i++)
        {
            const double t = (i - 0.5 * (spec.count - 1)) * spec.spacing;
            out.push_back({spec.center.x + t * spec.axis.x,
                           spec.center.y + t * spec.axis.y,
                           spec.center.z + t * spec.axis.z});
        }
        return out;
    }

    // One quaternion: indices of the four elements centered at the four sign
    // combinations of a common (|alpha|, |beta|) offset from the grid
    // centroid, ordered (+,+), (-,+), (+,-), (-,-).
    using Quaternion = std::array<std::size_t, 4>;

    // Partitions a mirror-symmetric grid into N/4 disjoint quaternions.
    // Grids with elements on a symmetry axis (odd rows or cols) are rejected
    // rather than silently dropping those elements.
    inline std::vector<Quaternion> quaternion_partition(const ElementGrid &grid)
    {
        const std::size_t n = grid.size();
        if (n == 0)
            throw GridNotSymmetric("quaternion_partition: empty grid");

        double cx = 0.0, cz = 0.0, extent = 0.0;
        for (const auto &c : grid.centers)
        {
            cx += c[0];
            cz += c[1];
        }
        cx /= static_cast<double>(n);
        cz /= static_cast<double>(n);
        for (const auto &c : grid.centers)
            extent = std::max({extent, std::abs(c[0] - cx), std::abs(c[1] - cz)});
        const double tol = 1.0e-9 * std::max(extent, 1.0e-30);

        struct Entry
        {
            double ax, az; // |offset| from centroid
            int sx, sz;    // offset signs
            std::size_t index;
        };
        std::vector<Entry> entries;
        entries.reserve(n);
        for (std::size_t i = 0; i < n; i++)
        {
            const double dx = grid.centers[i][0] - cx;
            const double dz = grid.centers[i][1] - cz;
            if (std::abs(dx) <= tol || std::abs(dz) <= tol)
                throw GridHasAxisElements("quaternion_partition: element center lies on a symmetry axis");
            entries.push_back({std::abs(dx), std::abs(dz), dx > 0.0 ? 1 : -1, dz > 0.0 ? 1 : -1, i});
        }
        if (n % 4 != 0)
            throw GridNotSymmetric("quaternion_partition: element count must be a multiple of 4");

        // Mirror images agree only up to rounding, so cluster each |offset|
        // axis first (gaps below tol merge) and match on cluster ids.
        auto cluster_ids = [tol, n](const std::vector<Entry> &es, bool use_x) {
            std::vector<std::pair<double, std::size_t>> vals(n);
            for (std::size_t i = 0; i < n; i++)
                vals[i] = {use_x ? es[i].ax : es[i].az, i};
            std::sort(vals.begin(), vals.end());
            std::vector<std::size_t> ids(n);
            std::size_t id = 0;
            for (std::size_t i = 0; i < n; i++)
            {
                if (i > 0 && vals[i].first - vals[i - 1].first > tol)
                    id++;
                ids[vals[i].second] = id;
            }
            return ids;
        };
        const std::vector<std::size_t> idx_x = cluster_ids(entries, true);
        const std::vector<std::size_t> idx_z = cluster_ids(entries, false);

        std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < n; i++)
            groups[{idx_x[i], idx_z[i]}].push_back(i);

        std::vector<Quaternion> out;
        out.reserve(n / 4);
        for (const auto &[key, members] : groups)
        {
            if (members.size() != 4)
                throw GridNotSymmetric("quaternion_partition: element lacks a full set of mirror images");
            Quaternion q{};
            bool seen[4] = {false, false, false, false};
            for (std::size_t k : members)
            {
                // slot order: (+,+), (-,+), (+,-), (-,-)
                const int slot = (entries[k].sx > 0 ? 0 : 1) + (entries[k].sz > 0 ? 0 : 2);
                if (seen[slot])
                    throw GridNotSymmetric("quaternion_partition: duplicate mirror image");
                seen[slot] = true;
                q[static_cast<std::size_t>(slot)] = entries[k].index;
            }
            out.push_back(q);
        }
        // Deterministic order: by the smallest element index in each tuple.
        std::sort(out.begin(), out.end(), [](const Quaternion &a, const Quaternion &b) {
            return *std::min_element(a.begin(), a.end()) < *std::min_element(b.begin(), b.end());
        });
        return out;
    }
} // namespace usris

#endif
