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

#ifndef USRIS_LEMMA1_HPP
#define USRIS_LEMMA1_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "usris/channel.hpp"
#include "usris/errors.hpp"
#include "usris/geometry.hpp"
#include "usris/quadrature.hpp"
#include "usris/types.hpp"

// Numerical verification of the amplitude-range result for a two-layer
// stack fed by a single point source: the signal emitted by one target
// element of the second layer is y = theta2 * sum_j theta1_j * c_j, where
// c_j integrates the product of the two hop channels over first-layer
// element j. Its amplitude is bounded by zeta (a Cauchy-Schwarz-type
// integral bound), can reach sum |c_j| by phase alignment, and can be driven
// to zero by a quaternion construction.

namespace usris
{
    // Two stacked b x b layers of a x a elements, the source on the axis at
    // the origin, the first layer at y = d1, the second at y = d1 + d2;
    // target_index selects the observed second-layer element (row-major).
    struct LemmaScenario
    {
        int b = 2;
        double a = 0.0;
        double d1 = 0.0;
        double d2 = 0.0;
        double wavelength = 0.0;
        int target_index = 0;
    };

    namespace lemma_detail
    {
        inline UpaLayerSpec layer_spec(const LemmaScenario &scn, double plane_y)
        {
            UpaLayerSpec layer;
            layer.cols = scn.b;
            layer.rows = scn.b;
            layer.element_size = scn.a;
            layer.plane_y = plane_y;
            return layer;
        }

        inline void validate(const LemmaScenario &scn)
        {
            if (scn.b < 2 || scn.b % 2 != 0)
                throw ConfigError("lemma scenario: b must be an even integer >= 2");
            if (!(scn.a > 0.0) || !(scn.d1 > 0.0) || !(scn.d2 > 0.0) || !(scn.wavelength > 0.0))
                throw ConfigError("lemma scenario: lengths must be positive");
            if (scn.target_index < 0 || scn.target_index >= scn.b * scn.b)
                throw ConfigError("lemma scenario: target index out of range");
        }

        // Center of the observed second-layer element.
        inline std::array<double, 2> target_center(const LemmaScenario &scn)
        {
            const ElementGrid grid = element_centers(layer_spec(scn, scn.d1 + scn.d2));
            return grid.centers[static_cast<std::size_t>(scn.target_index)];
        }

        // Integral of h1(s_t, p) h2(p, s_r) over one first-layer region, in
        // absolute first-layer coordinates: amplitude is the square root of
        // the product of the two gain densities, phase accumulates both hop
        // distances.
        inline Complex hop_product_integral(const LemmaScenario &scn, const Rect &region,
                                            const std::array<double, 2> &target,
                                            const QuadratureOptions &opt = {1.0e-8, 1'000'000})
        {
            const double k = 2.0 * kPi / scn.wavelength;
            const GainDensityParams rho1{scn.d1, 0.0, 0.0};
            const GainDensityParams rho2{scn.d2, target[0], target[1]};
            const double d1 = scn.d1, d2 = scn.d2;
            const double tx = target[0], tz = target[1];
            auto integrand = [&](double px, double pz) -> Complex {
                const double amp = std::sqrt(gain_density(rho1, px, pz) * gain_density(rho2, px, pz));
                const double path1 = std::sqrt(px * px + pz * pz + d1 * d1);
                const double dx = tx - px, dz = tz - pz;
                const double path2 = std::sqrt(dx * dx + dz * dz + d2 * d2);
                return amp * unit_phasor(-k * (path1 + path2));
            };
            return integrate_rect(integrand, region, opt);
        }
    } // namespace lemma_detail

    // c_j for every first-layer element, row-major.
    inline std::vector<Complex> element_integrals(const LemmaScenario &scn,
                                                  const QuadratureOptions &opt = {1.0e-8, 1'000'000})
    {
        lemma_detail::validate(scn);
        const ElementGrid grid = element_centers(lemma_detail::layer_spec(scn, scn.d1));
        const auto target = lemma_detail::target_center(scn);
        const double half = 0.5 * scn.a;
        std::vector<Complex> c;
        c.reserve(grid.size());
        for (std::size_t j = 0; j < grid.size(); j++)
        {
            const Rect region{grid.centers[j][0] - half, grid.centers[j][0] + half,
                              grid.centers[j][1] - half, grid.centers[j][1] + half};
            c.push_back(lemma_detail::hop_product_integral(scn, region, target, opt));
        }
        return c;
    }

    // y = theta2 * sum_j theta1_j c_j. Rejects non-unit phases.
    inline Complex y_n(const std::vector<Complex> &c, const std::vector<Complex> &theta1, Complex theta2)
    {
        if (c.size() != theta1.size())
            throw DimensionMismatch("y_n: integral/phase vector length mismatch");
        auto check_unit = [](Complex t) {
            if (std::abs(std::abs(t) - 1.0) > 1.0e-9)
                throw NonUnitPhase("y_n: phase entry is not unit modulus");
        };
        check_unit(theta2);
        Complex sum = 0.0;
        for (std::size_t j = 0; j < c.size(); j++)
        {
            check_unit(theta1[j]);
            sum += theta1[j] * c[j];
        }
        return theta2 * sum;
    }

    // Amplitude bound: square root of the integral of |h1|^2 |h2|^2 over the
    // whole first-layer panel [-ab/2, ab/2]^2.
    inline double zeta_n(const LemmaScenario &scn, const QuadratureOptions &opt = {1.0e-8, 1'000'000})
    {
        lemma_detail::validate(scn);
        const auto target = lemma_detail::target_center(scn);
        const GainDensityParams rho1{scn.d1, 0.0, 0.0};
        const GainDensityParams rho2{scn.d2, target[0], target[1]};
        const double half = 0.5 * scn.a * scn.b;
        const double value = integrate_rect(
            [&](double px, double pz) { return gain_density(rho1, px, pz) * gain_density(rho2, px, pz); },
            Rect{-half, half, -half, half}, opt);
        return std::sqrt(value);
    }

    struct BoundReport
    {
        double zeta = 0.0;
        double sum_abs_c = 0.0;     // phase-aligned maximum of |y|
        double max_sampled = 0.0;   // largest |y| over the random draws
        double aligned_ratio = 0.0; // sum_abs_c / zeta, in (0, 1]
        int trials = 0;
        int violations = 0;
    };

    // Monte-Carlo check that no unit-phase configuration pushes |y| past
    // zeta (with 1e-6 slack for quadrature error). Throws BoundViolated when
    // a sample or the aligned maximum lands above the bound.
    inline BoundReport verify_bound(const LemmaScenario &scn, int trials, std::uint64_t seed)
    {
        if (trials < 1)
            throw ConfigError("verify_bound: trials must be >= 1");
        const std::vector<Complex> c = element_integrals(scn);
        BoundReport report;
        report.zeta = zeta_n(scn);
        report.trials = trials;
        for (const Complex &cj : c)
            report.sum_abs_c += std::abs(cj);
        report.aligned_ratio = report.sum_abs_c / report.zeta;

        const double limit = report.zeta * (1.0 + 1.0e-6);
        Rng rng(seed);
        std::vector<Complex> theta(c.size());
        for (int t = 0; t < trials; t++)
        {
            for (auto &th : theta)
                th = rng.next_phasor();
            const double mag = std::abs(y_n(c, theta, Complex(1.0, 0.0)));
            report.max_sampled = std::max(report.max_sampled, mag);
            if (mag > limit)
                report.violations++;
        }
        if (report.sum_abs_c > limit)
            throw BoundViolated("verify_bound: phase-aligned maximum exceeds zeta");
        if (report.violations > 0)
            throw BoundViolated("verify_bound: sampled |y| exceeds zeta");
        return report;
    }

    // Unit-modulus phases with theta[0] c1 + theta[1] c2 = target; target
    // magnitude must lie in [| |c1|-|c2| |, |c1|+|c2|].
    inline std::array<Complex, 2> steer_pair(Complex c1, Complex c2, Complex target)
    {
        const double r1 = std::abs(c1), r2 = std::abs(c2);
        const double t = std::abs(target);
        if (t <= 1.0e-300)
        {
            // Degenerate: cancel the pair along the real axis.
            return {unit_phasor(-std::arg(c1)), unit_phasor(kPi - std::arg(c2))};
        }
        double cos_a = (t * t + r1 * r1 - r2 * r2) / (2.0 * t * r1);
        cos_a = std::clamp(cos_a, -1.0, 1.0);
        const double psi1 = std::arg(target) + std::acos(cos_a);
        const Complex link2 = target - r1 * unit_phasor(psi1);
        const double psi2 = std::arg(link2);
        return {unit_phasor(psi1 - std::arg(c1)), unit_phasor(psi2 - std::arg(c2))};
    }

    // Solves sum_j theta_j c_j = 0 with |theta_j| = 1 by closing the
    // quadrilateral two pairs at a time: both pair resultants are steered to
    // a common magnitude t along +/- the real axis. Boundary-feasible
    // polygons (single-point intersection) are accepted.
    inline std::array<Complex, 4> solve_quaternion(const std::array<Complex, 4> &c)
    {
        const double r1 = std::abs(c[0]), r2 = std::abs(c[1]);
        const double r3 = std::abs(c[2]), r4 = std::abs(c[3]);
        const double lo = std::max(std::abs(r1 - r2), std::abs(r3 - r4));
        const double hi = std::min(r1 + r2, r3 + r4);
        const double slack = 1.0e-12 * (r1 + r2 + r3 + r4);
        if (lo > hi + slack)
            throw PolygonInfeasible("solve_quaternion: pair magnitude intervals do not intersect");
        // Midpoint of the feasible interval; a boundary-only intersection
        // (hi within rounding of lo) collapses to that single point, and
        // steer_pair clamps the residual rounding.
        const double t = 0.5 * (lo + std::max(hi, lo));
        const auto p12 = steer_pair(c[0], c[1], Complex(t, 0.0));
        const auto p34 = steer_pair(c[2], c[3], Complex(-t, 0.0));
        return {p12[0], p12[1], p34[0], p34[1]};
    }

    struct ZeroConstruction
    {
        std::vector<Complex> theta1;
        double residual = 0.0; // |y| with the constructed phases, theta2 = 1
    };

    // Drives y to zero: partitions the first layer into mirror-symmetric
    // quaternions and cancels each one independently.
    inline ZeroConstruction construct_zero(const LemmaScenario &scn)
    {
        lemma_detail::validate(scn);
        const std::vector<Complex> c = element_integrals(scn);
        const ElementGrid grid = element_centers(lemma_detail::layer_spec(scn, scn.d1));
        const std::vector<Quaternion> quaternions = quaternion_partition(grid);

        ZeroConstruction out;
        out.theta1.assign(c.size(), Complex(1.0, 0.0));
        for (std::size_t q = 0; q < quaternions.size(); q++)
        {
            const Quaternion &idx = quaternions[q];
            std::array<Complex, 4> cq{c[idx[0]], c[idx[1]], c[idx[2]], c[idx[3]]};
            std::array<Complex, 4> theta;
            try
            {
                theta = solve_quaternion(cq);
            }
            catch (const PolygonInfeasible &)
            {
                throw PolygonInfeasible("construct_zero: quaternion " + std::to_string(q) +
                                        " cannot close (dominant |c_j|)");
            }
            for (int j = 0; j < 4; j++)
                out.theta1[idx[static_cast<std::size_t>(j)]] = theta[static_cast<std::size_t>(j)];
        }
        out.residual = std::abs(y_n(c, out.theta1, Complex(1.0, 0.0)));
        return out;
    }
} // namespace usris

#endif
