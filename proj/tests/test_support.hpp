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

#ifndef USRIS_TEST_SUPPORT_HPP
#define USRIS_TEST_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <functional>

#include "usris/channel.hpp"
#include "usris/types.hpp"

// Oracles that stay independent of the library's Gauss-Kronrod integrator:
// nested 1-D adaptive Simpson, recursing on the classic |S2 - S1|/15 error
// estimate.

namespace test_support
{
    template <typename T, typename F>
    T simpson_1d(F &&f, double a, double b, double tol, int depth)
    {
        const double m = 0.5 * (a + b);
        const T fa = f(a), fm = f(m), fb = f(b);
        std::function<T(double, double, T, T, T, T, double, int)> rec =
            [&](double lo, double hi, T flo, T fmid, T fhi, T whole, double eps, int d) -> T {
            const double mid = 0.5 * (lo + hi);
            const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
            const T flm = f(lm), frm = f(rm);
            const T left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
            const T right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
            const T delta = left + right - whole;
            if (d <= 0 || std::abs(delta) <= 15.0 * eps)
                return left + right + delta / 15.0;
            return rec(lo, mid, flo, flm, fmid, left, 0.5 * eps, d - 1) +
                   rec(mid, hi, fmid, frm, fhi, right, 0.5 * eps, d - 1);
        };
        const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return rec(a, b, fa, fm, fb, whole, tol, depth);
    }

    // 2-D integral of f(x, z) over [x_lo,x_hi] x [z_lo,z_hi].
    template <typename F>
    auto simpson_2d(F &&f, double x_lo, double x_hi, double z_lo, double z_hi, double tol,
                    int depth = 28)
    {
        using T = decltype(f(0.0, 0.0));
        auto inner = [&](double x) {
            return simpson_1d<T>([&](double z) { return f(x, z); }, z_lo, z_hi, tol, depth);
        };
        return simpson_1d<T>(inner, x_lo, x_hi, tol, depth);
    }

    // Deterministic random complex matrix with entry magnitudes below `scale`.
    inline usris::CMatrix random_cmatrix(usris::Rng &rng, int rows, int cols, double scale = 0.5)
    {
        usris::CMatrix m(rows, cols);
        for (int r = 0; r < rows; r++)
            for (int c = 0; c < cols; c++)
                m(r, c) = scale * std::sqrt(rng.next_unit()) * rng.next_phasor();
        return m;
    }

    inline usris::CVector random_cvector(usris::Rng &rng, int n, double scale = 1.0)
    {
        usris::CVector v(n);
        for (int i = 0; i < n; i++)
            v(i) = scale * std::sqrt(rng.next_unit()) * rng.next_phasor();
        return v;
    }

    inline usris::CVector random_phases(usris::Rng &rng, int n)
    {
        usris::CVector v(n);
        for (int i = 0; i < n; i++)
            v(i) = rng.next_phasor();
        return v;
    }

    // Small random but valid channel set (magnitudes < 1).
    inline usris::ChannelSet random_channels(usris::Rng &rng, int layers, int n, int k, int m)
    {
        usris::ChannelSet ch;
        ch.wavelength = 0.12;
        ch.f.push_back(random_cmatrix(rng, n, k));
        for (int l = 1; l < layers; l++)
            ch.f.push_back(random_cmatrix(rng, n, n));
        ch.g = random_cmatrix(rng, n, m, 0.01);
        return ch;
    }
} // namespace test_support

#endif
