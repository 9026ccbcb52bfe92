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

#ifndef USRIS_QUADRATURE_HPP
#define USRIS_QUADRATURE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <vector>

#include "usris/errors.hpp"

// Adaptive 2-D integration over axis-aligned rectangles. Each panel is
// evaluated with a tensor-product Gauss-Kronrod 7/15 rule; the worst panel
// (largest |K15 - G7| estimate) is split into four until the accumulated
// error estimate drops below rel_tol * |integral| or the panel budget runs
// out. Works for real and complex integrands.

namespace usris
{
    struct Rect
    {
        double x_lo = 0.0;
        double x_hi = 0.0;
        double z_lo = 0.0;
        double z_hi = 0.0;

        double area() const { return (x_hi - x_lo) * (z_hi - z_lo); }
    };

    namespace detail
    {
        // Kronrod-15 abscissae on [-1,1] (symmetric; index 7 is the origin)
        // and the matching Kronrod / embedded Gauss-7 weights, as tabulated
        // in QUADPACK's dqk15.
        inline constexpr double kGk15Nodes[15] = {
            -0.991455371120813, -0.949107912342759, -0.864864423359769,
            -0.741531185599394, -0.586087235467691, -0.405845151377397,
            -0.207784955007898, 0.0, 0.207784955007898, 0.405845151377397,
            0.586087235467691, 0.741531185599394, 0.864864423359769,
            0.949107912342759, 0.991455371120813};

        inline constexpr double kGk15Weights[15] = {
            0.022935322010529, 0.063092092629979, 0.104790010322250,
            0.140653259715525, 0.169004726639267, 0.190350578064785,
            0.204432940075298, 0.209482141084728, 0.204432940075298,
            0.190350578064785, 0.169004726639267, 0.140653259715525,
            0.104790010322250, 0.063092092629979, 0.022935322010529};

        // Gauss-7 points are the odd-indexed Kronrod nodes.
        inline constexpr double kG7Weights[15] = {
            0.0, 0.129484966168870, 0.0, 0.279705391489277, 0.0,
            0.381830050505119, 0.0, 0.417959183673469, 0.0,
            0.381830050505119, 0.0, 0.279705391489277, 0.0,
            0.129484966168870, 0.0};

        template <typename T>
        inline double magnitude(const T &v)
        {
            return std::abs(v);
        }

        template <typename T>
        struct PanelResult
        {
            T kronrod{};
            double err = 0.0;
        };

        template <typename T, typename F>
        PanelResult<T> eval_panel(F &&f, const Rect &r)
        {
            const double hx = 0.5 * (r.x_hi - r.x_lo), cx = 0.5 * (r.x_hi + r.x_lo);
            const double hz = 0.5 * (r.z_hi - r.z_lo), cz = 0.5 * (r.z_hi + r.z_lo);
            T vals[15][15];
            for (int i = 0; i < 15; i++)
            {
                const double x = cx + hx * kGk15Nodes[i];
                for (int j = 0; j < 15; j++)
                    vals[i][j] = f(x, cz + hz * kGk15Nodes[j]);
            }
            T kk{}, gg{};
            for (int i = 0; i < 15; i++)
            {
                T row_k{}, row_g{};
                for (int j = 0; j < 15; j++)
                {
                    row_k += kGk15Weights[j] * vals[i][j];
                    row_g += kG7Weights[j] * vals[i][j];
                }
                kk += kGk15Weights[i] * row_k;
                gg += kG7Weights[i] * row_g;
            }
            const double scale = hx * hz;
            PanelResult<T> out;
            out.kronrod = scale * kk;
            out.err = magnitude(T(scale * (kk - gg)));
            return out;
        }

        inline void split_rect(const Rect &r, Rect out[4])
        {
            const double xm = 0.5 * (r.x_lo + r.x_hi);
            const double zm = 0.5 * (r.z_lo + r.z_hi);
            out[0] = {r.x_lo, xm, r.z_lo, zm};
            out[1] = {xm, r.x_hi, r.z_lo, zm};
            out[2] = {r.x_lo, xm, zm, r.z_hi};
            out[3] = {xm, r.x_hi, zm, r.z_hi};
        }
    } // namespace detail

    struct QuadratureOptions
    {
        double rel_tol = 1.0e-9;
        std::size_t max_panels = 1'000'000;
    };

    // Integrates f(x, z) over `region`. T is deduced from the integrand
    // (double or std::complex<double>). Throws QuadratureNotConverged when
    // the panel budget is exhausted before the tolerance is met.
    template <typename F>
    auto integrate_rect(F &&f, const Rect &region, const QuadratureOptions &opt = {})
    {
        using T = decltype(f(0.0, 0.0));
        struct Panel
        {
            Rect rect;
            T value;
            double err;
        };
        struct WorseError
        {
            bool operator()(const Panel &a, const Panel &b) const { return a.err < b.err; }
        };

        std::priority_queue<Panel, std::vector<Panel>, WorseError> heap;
        T total{};
        double total_err = 0.0;
        std::size_t panels = 4;

        // Seed with a 2x2 split so a peak hiding between the nodes of a
        // single coarse panel cannot fake agreement between K15 and G7.
        Rect seed[4];
        detail::split_rect(region, seed);
        for (const Rect &c : seed)
        {
            auto res = detail::eval_panel<T>(f, c);
            heap.push({c, res.kronrod, res.err});
            total += res.kronrod;
            total_err += res.err;
        }

        while (total_err > opt.rel_tol * detail::magnitude(total) && total_err > 0.0)
        {
            if (panels + 4 > opt.max_panels)
                throw QuadratureNotConverged("integrate_rect: panel budget exhausted");
            const Panel worst = heap.top();
            heap.pop();
            total -= worst.value;
            total_err -= worst.err;

            Rect children[4];
            detail::split_rect(worst.rect, children);
            for (const Rect &c : children)
            {
                auto res = detail::eval_panel<T>(f, c);
                heap.push({c, res.kronrod, res.err});
                total += res.kronrod;
                total_err += res.err;
            }
            panels += 4;

            // Rounding in the +/- accumulation can leave a tiny negative
            // residue once all panel errors are essentially zero.
            if (total_err < 0.0)
                total_err = 0.0;
        }
        return total;
    }
} // namespace usris

#endif
