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

#ifndef USRIS_BEAMFORMER_HPP
#define USRIS_BEAMFORMER_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "usris/channel.hpp"
#include "usris/errors.hpp"
#include "usris/scenario.hpp"
#include "usris/types.hpp"

// Cascaded signal model and the alternating SNR maximization. The received
// scalar is v^H g^H (prod_{l=L..1} kappa Theta_l f_l) w; each update below is
// the closed-form optimum of that objective in one variable with the others
// held fixed, so the SNR ascends monotonically.

namespace usris
{
    struct BeamformerState
    {
        CVector w;                  // transmit beamformer, ||w||^2 <= P_max
        std::vector<CVector> theta; // per-layer unit-modulus phase vectors
        CVector v;                  // receive combiner, unit norm after updates
    };

    struct RunTrace
    {
        std::vector<double> snr_per_iteration; // linear SNR after each sweep
        int iterations = 0;
        bool converged = false;
        double tolerance = 0.0;
    };

    // Prefix/suffix cascade products around each layer:
    //   prefix[l] = xi_(l,1) w          (prefix[0] = w),
    //   suffix[l] = xi^H_(L,l+1) g v    (suffix[L] = g v).
    struct CascadeCache
    {
        std::vector<CVector> prefix;
        std::vector<CVector> suffix;
        double kappa = 1.0;
    };

    namespace detail
    {
        inline void check_dimensions(const BeamformerState &st, const ChannelSet &ch)
        {
            const int layers = ch.num_layers();
            if (static_cast<int>(st.theta.size()) != layers)
                throw DimensionMismatch("state/channel layer count mismatch");
            if (st.w.size() != ch.n_user())
                throw DimensionMismatch("w length does not match user antenna count");
            if (st.v.size() != ch.n_bs())
                throw DimensionMismatch("v length does not match BS antenna count");
            for (const auto &t : st.theta)
                if (t.size() != ch.n_elements())
                    throw DimensionMismatch("theta length does not match element count");
        }

        inline std::vector<CVector> prefix_products(const BeamformerState &st, const ChannelSet &ch,
                                                    double kappa)
        {
            std::vector<CVector> pre(st.theta.size() + 1);
            pre[0] = st.w;
            for (std::size_t l = 0; l < st.theta.size(); l++)
                pre[l + 1] = kappa * st.theta[l].cwiseProduct(ch.f[l] * pre[l]);
            return pre;
        }

        inline std::vector<CVector> suffix_products(const BeamformerState &st, const ChannelSet &ch,
                                                    double kappa)
        {
            const std::size_t layers = st.theta.size();
            std::vector<CVector> suf(layers + 1);
            suf[layers] = ch.g * st.v;
            for (std::size_t l = layers; l-- > 0;)
                suf[l] = kappa * (ch.f[l].adjoint() * st.theta[l].conjugate().cwiseProduct(suf[l + 1]));
            return suf;
        }
    } // namespace detail

    inline CascadeCache build_cascade(const BeamformerState &st, const ChannelSet &ch, double kappa)
    {
        detail::check_dimensions(st, ch);
        return {detail::prefix_products(st, ch, kappa), detail::suffix_products(st, ch, kappa), kappa};
    }

    // v^H g^H (prod_{l=L..1} kappa Theta_l f_l) w, evaluated layer 1 first.
    inline Complex effective_scalar(const BeamformerState &st, const ChannelSet &ch, double kappa)
    {
        detail::check_dimensions(st, ch);
        CVector t = st.w;
        for (std::size_t l = 0; l < st.theta.size(); l++)
            t = kappa * st.theta[l].cwiseProduct(ch.f[l] * t);
        return (ch.g * st.v).dot(t);
    }

    // Detection SNR: |effective scalar|^2 / (||v||^2 sigma^2).
    inline double snr(const BeamformerState &st, const ChannelSet &ch, double kappa, double noise_power)
    {
        if (!(noise_power > 0.0))
            throw ConfigError("snr: noise power must be positive");
        const Complex e = effective_scalar(st, ch, kappa);
        return std::norm(e) / (st.v.squaredNorm() * noise_power);
    }

    // Dominant eigenvector of the rank-1 matrix a a^H with a = g^H xi_(L,1) w
    // is a itself, normalized.
    inline CVector update_v(const BeamformerState &st, const ChannelSet &ch, double kappa)
    {
        detail::check_dimensions(st, ch);
        const auto pre = detail::prefix_products(st, ch, kappa);
        const CVector a = ch.g.adjoint() * pre.back();
        const double norm = a.norm();
        if (!(norm > 0.0))
            throw ZeroEffectiveChannel("update_v: zero effective channel");
        return a / norm;
    }

    // Phase-aligns the per-element summands of the effective scalar at layer
    // `layer` (0-based). Each entry of the result has unit modulus.
    inline CVector update_theta(const BeamformerState &st, const ChannelSet &ch, double kappa, int layer)
    {
        detail::check_dimensions(st, ch);
        if (layer < 0 || layer >= static_cast<int>(st.theta.size()))
            throw LayerOutOfRange("update_theta: layer index out of range");
        const auto pre = detail::prefix_products(st, ch, kappa);
        const auto suf = detail::suffix_products(st, ch, kappa);
        const std::size_t l = static_cast<std::size_t>(layer);
        const CVector d = ch.f[l] * pre[l];
        const CVector &u = suf[l + 1];
        CVector theta(d.size());
        for (Eigen::Index n = 0; n < d.size(); n++)
            theta(n) = unit_phasor(std::arg(std::conj(d(n)) * u(n)));
        return theta;
    }

    // Matched filter against the cascade seen from the transmitter, scaled to
    // spend the full power budget: ||w||^2 = p_max exactly.
    inline CVector update_w(const BeamformerState &st, const ChannelSet &ch, double kappa, double p_max)
    {
        detail::check_dimensions(st, ch);
        const auto suf = detail::suffix_products(st, ch, kappa);
        const CVector &b = suf.front();
        const double norm = b.norm();
        if (!(norm > 0.0))
            throw ZeroEffectiveChannel("update_w: zero effective channel");
        return std::sqrt(p_max) * b / norm;
    }

    using IterationObserver = std::function<void(int restart, int iteration, const BeamformerState &)>;

    struct OptimizeConfig
    {
        double tolerance = 1.0e-6; // relative SNR change
        int max_iters = 100;
        std::uint64_t seed = 0;
        int restarts = 1;
        IterationObserver observer; // optional; called after every sweep
    };

    struct OptimizeResult
    {
        BeamformerState state;
        RunTrace trace;
    };

    namespace detail
    {
        inline BeamformerState initial_state(const ChannelSet &ch, std::uint64_t seed)
        {
            BeamformerState st;
            st.w = CVector::Ones(ch.n_user());
            st.v = CVector::Ones(ch.n_bs());
            Rng rng(seed);
            st.theta.resize(static_cast<std::size_t>(ch.num_layers()));
            for (auto &t : st.theta)
            {
                t.resize(ch.n_elements());
                for (Eigen::Index n = 0; n < t.size(); n++)
                    t(n) = rng.next_phasor();
            }
            return st;
        }

        inline OptimizeResult optimize_single(const ChannelSet &ch, double kappa, double noise_power,
                                              double p_max, const OptimizeConfig &cfg, std::uint64_t seed,
                                              int restart_index)
        {
            BeamformerState st = initial_state(ch, seed);
            const std::size_t layers = st.theta.size();

            RunTrace trace;
            trace.tolerance = cfg.tolerance;
            double prev_snr = std::numeric_limits<double>::quiet_NaN();

            for (int iter = 1; iter <= cfg.max_iters; iter++)
            {
                st.v = update_v(st, ch, kappa);

                // Sweep the layers in ascending order, keeping the prefix
                // products consistent with the phases already refreshed this
                // sweep; suffixes see the not-yet-updated later layers.
                CVector pre = st.w;
                for (std::size_t l = 0; l < layers; l++)
                {
                    const auto suf = suffix_products(st, ch, kappa);
                    const CVector d = ch.f[l] * pre;
                    const CVector &u = suf[l + 1];
                    for (Eigen::Index n = 0; n < d.size(); n++)
                        st.theta[l](n) = unit_phasor(std::arg(std::conj(d(n)) * u(n)));
                    pre = kappa * st.theta[l].cwiseProduct(d);
                }

                st.w = update_w(st, ch, kappa, p_max);

                const double s = snr(st, ch, kappa, noise_power);
                trace.snr_per_iteration.push_back(s);
                trace.iterations = iter;
                if (cfg.observer)
                    cfg.observer(restart_index, iter, st);

                if (iter > 1 && std::abs(s - prev_snr) < cfg.tolerance * prev_snr)
                {
                    trace.converged = true;
                    break;
                }
                prev_snr = s;
            }
            return {std::move(st), std::move(trace)};
        }
    } // namespace detail

    // Algorithm: random unit-modulus phase initialization (seeded), w and v
    // all ones, then alternating closed-form updates of v, theta_1..theta_L,
    // and w until the relative SNR change drops below the tolerance. With
    // restarts > 1, independent runs use seeds seed, seed+1, ... and the best
    // final SNR wins.
    inline OptimizeResult optimize(const ChannelSet &ch, double kappa, double noise_power, double p_max,
                                   const OptimizeConfig &cfg = {})
    {
        validate(ch);
        if (!(cfg.tolerance > 0.0))
            throw ConfigError("optimize: tolerance must be positive");
        if (cfg.restarts < 1)
            throw ConfigError("optimize: restarts must be >= 1");
        if (cfg.max_iters < 1)
            throw ConfigError("optimize: max_iters must be >= 1");

        OptimizeResult best;
        double best_snr = -1.0;
        for (int r = 0; r < cfg.restarts; r++)
        {
            OptimizeResult run =
                detail::optimize_single(ch, kappa, noise_power, p_max, cfg, cfg.seed + static_cast<std::uint64_t>(r), r);
            const double s = run.trace.snr_per_iteration.back();
            if (s > best_snr)
            {
                best_snr = s;
                best = std::move(run);
            }
        }
        return best;
    }

    // Optimal SNR of the direct M x K channel: p_max * sigma_max^2 / sigma^2,
    // with sigma_max^2 found by power iteration on direct^H direct.
    inline double no_ris_baseline(const CMatrix &direct, double noise_power, double p_max)
    {
        if (direct.size() == 0 || !(direct.cwiseAbs().maxCoeff() > 0.0))
            throw ZeroEffectiveChannel("no_ris_baseline: zero channel");
        const CMatrix a = direct.adjoint() * direct;

        Rng rng(0xba5eba11u);
        CVector x(a.rows());
        for (Eigen::Index i = 0; i < x.size(); i++)
            x(i) = rng.next_phasor();
        x.normalize();

        double lambda = 0.0;
        for (int iter = 0; iter < 100000; iter++)
        {
            const CVector y = a * x;
            lambda = std::real(x.dot(y));
            if ((y - lambda * x).norm() <= 1.0e-12 * lambda)
                break;
            x = y.normalized();
        }
        return p_max * lambda / noise_power;
    }

    // Single-layer reflective variant: identical geometry and update
    // equations, no penetration loss.
    inline Scenario reflective_variant(const Scenario &scn)
    {
        if (scn.num_layers() != 1)
            throw InvalidForMultiLayer("reflective_variant: requires exactly one layer");
        Scenario out = scn;
        out.kappa = 1.0;
        return out;
    }
} // namespace usris

#endif
