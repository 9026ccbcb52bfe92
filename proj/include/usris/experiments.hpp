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

#ifndef USRIS_EXPERIMENTS_HPP
#define USRIS_EXPERIMENTS_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "usris/beamformer.hpp"
#include "usris/channel.hpp"
#include "usris/config.hpp"
#include "usris/io.hpp"
#include "usris/lemma1.hpp"
#include "usris/metrics.hpp"
#include "usris/types.hpp"

// Scenario-driven experiment runners. Each returns plain data (so tests can
// assert on it) and has a CSV emitter with the standard provenance header.

namespace usris
{
    struct VariantSystem
    {
        RisVariant variant = RisVariant::MultiLayer;
        Scenario scenario;
        ChannelSet channels;
        double kappa_effective = 1.0; // 1.0 for the reflective BSS variant
    };

    // Assembles geometry and channels once per variant; the BSS variant
    // reuses the single-layer channel set with the penetration loss removed.
    inline VariantSystem build_variant(const ExperimentSetup &s, RisVariant variant, double p_max_w)
    {
        VariantSystem sys;
        sys.variant = variant;
        sys.scenario = make_scenario(s, variant, p_max_w);
        if (variant == RisVariant::SingleLayerBss)
        {
            sys.scenario = reflective_variant(sys.scenario);
            sys.kappa_effective = 1.0;
        }
        else
        {
            sys.kappa_effective = sys.scenario.kappa;
        }
        if (variant != RisVariant::None)
            sys.channels = assemble_channels(sys.scenario);
        return sys;
    }

    inline OptimizeConfig optimize_config(const ExperimentSetup &s)
    {
        OptimizeConfig cfg;
        cfg.tolerance = s.tolerance;
        cfg.max_iters = s.max_iters;
        cfg.seed = s.seed;
        cfg.restarts = s.restarts;
        return cfg;
    }

    inline HeaderLines provenance_headers(const ExperimentSetup &s)
    {
        char hash[32];
        std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(s.config_hash));
        return {std::string("tool_version=") + kToolVersion, std::string("config_hash=") + hash,
                "seed=" + std::to_string(s.seed)};
    }

    inline void standard_headers(CsvWriter &csv, const ExperimentSetup &s, const std::string &command)
    {
        char hash[32];
        std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(s.config_hash));
        csv.header(std::string("usris v") + kToolVersion + " " + command);
        csv.header(std::string("config_hash=") + hash);
        csv.header("seed=" + std::to_string(s.seed));
    }

    // ----- SNR sweep ---------------------------------------------------------

    struct SnrSweepRow
    {
        std::string variant;
        double p_max_dbw = 0.0;
        double snr_db = 0.0;
    };

    inline std::vector<SnrSweepRow> run_snr_sweep(const ExperimentSetup &s)
    {
        const RisVariant variants[] = {RisVariant::MultiLayer, RisVariant::SingleLayerUs,
                                       RisVariant::SingleLayerBss, RisVariant::None};
        std::vector<SnrSweepRow> rows;
        for (RisVariant variant : variants)
        {
            VariantSystem sys = build_variant(s, variant, 1.0);
            const CMatrix direct =
                variant == RisVariant::None ? direct_channel(sys.scenario) : CMatrix();
            for (double p_dbw : s.sweep_dbw)
            {
                const double p_w = linear_from_db(p_dbw);
                double snr_linear = 0.0;
                if (variant == RisVariant::None)
                {
                    snr_linear = no_ris_baseline(direct, s.noise_power, p_w);
                }
                else
                {
                    const OptimizeResult res =
                        optimize(sys.channels, sys.kappa_effective, s.noise_power, p_w, optimize_config(s));
                    snr_linear = res.trace.snr_per_iteration.back();
                }
                rows.push_back({variant_name(variant), p_dbw, db_from_linear(snr_linear)});
            }
        }
        std::sort(rows.begin(), rows.end(), [](const SnrSweepRow &a, const SnrSweepRow &b) {
            if (a.variant != b.variant)
                return a.variant < b.variant;
            return a.p_max_dbw < b.p_max_dbw;
        });
        return rows;
    }

    inline void write_snr_sweep(const std::vector<SnrSweepRow> &rows, const ExperimentSetup &s,
                                const std::string &path)
    {
        CsvWriter csv(path);
        standard_headers(csv, s, "snr-sweep");
        csv.row({"variant", "p_max_dbw", "snr_db"});
        for (const auto &r : rows)
            csv.row({r.variant, format_double(r.p_max_dbw), format_double(r.snr_db)});
    }

    // ----- convergence ---------------------------------------------------------

    struct ConvergenceRow
    {
        std::string variant;
        int iteration = 0;
        double snr_db = 0.0;
    };

    struct ConvergenceRun
    {
        std::string variant;
        OptimizeResult result;
    };

    inline std::vector<ConvergenceRun> run_convergence_detailed(const ExperimentSetup &s)
    {
        const RisVariant variants[] = {RisVariant::MultiLayer, RisVariant::SingleLayerUs,
                                       RisVariant::SingleLayerBss};
        const double p_w = linear_from_db(s.p_max_dbw);
        std::vector<ConvergenceRun> runs;
        for (RisVariant variant : variants)
        {
            VariantSystem sys = build_variant(s, variant, p_w);
            runs.push_back({variant_name(variant), optimize(sys.channels, sys.kappa_effective,
                                                            s.noise_power, p_w, optimize_config(s))});
        }
        return runs;
    }

    inline std::vector<ConvergenceRow> run_convergence(const ExperimentSetup &s)
    {
        std::vector<ConvergenceRow> rows;
        for (const ConvergenceRun &run : run_convergence_detailed(s))
            for (std::size_t i = 0; i < run.result.trace.snr_per_iteration.size(); i++)
                rows.push_back({run.variant, static_cast<int>(i + 1),
                                db_from_linear(run.result.trace.snr_per_iteration[i])});
        std::sort(rows.begin(), rows.end(), [](const ConvergenceRow &a, const ConvergenceRow &b) {
            if (a.variant != b.variant)
                return a.variant < b.variant;
            return a.iteration < b.iteration;
        });
        return rows;
    }

    inline void write_convergence(const std::vector<ConvergenceRow> &rows, const ExperimentSetup &s,
                                  const std::string &path)
    {
        CsvWriter csv(path);
        standard_headers(csv, s, "converge");
        csv.row({"variant", "iteration", "snr_db"});
        for (const auto &r : rows)
            csv.row({r.variant, std::to_string(r.iteration), format_double(r.snr_db)});
    }

    // ----- power distribution / EAR -------------------------------------------

    struct PowerDistEntry
    {
        std::string variant;
        int layer = 0; // 0-based
        PowerDistribution distribution;
        EarResult ear;
        int cols = 0;
        int rows = 0;
    };

    struct PowerDistResult
    {
        std::vector<PowerDistEntry> entries;
        double overall_multi_ear = 0.0; // mean of the multi-layer per-layer EARs
    };

    inline PowerDistResult run_power_dist(const ExperimentSetup &s)
    {
        const double p_w = linear_from_db(s.p_max_dbw);
        PowerDistResult out;

        const RisVariant variants[] = {RisVariant::MultiLayer, RisVariant::SingleLayerUs};
        for (RisVariant variant : variants)
        {
            VariantSystem sys = build_variant(s, variant, p_w);
            const OptimizeResult res =
                optimize(sys.channels, sys.kappa_effective, s.noise_power, p_w, optimize_config(s));
            for (int l = 0; l < sys.channels.num_layers(); l++)
            {
                PowerDistEntry entry;
                entry.variant = variant_name(variant);
                entry.layer = l;
                entry.distribution = layer_power(res.state, sys.channels, sys.kappa_effective, l);
                entry.ear = ear(entry.distribution, s.epsilon);
                entry.cols = sys.scenario.layers[static_cast<std::size_t>(l)].cols;
                entry.rows = sys.scenario.layers[static_cast<std::size_t>(l)].rows;
                out.entries.push_back(std::move(entry));
            }
        }

        double acc = 0.0;
        int count = 0;
        for (const auto &e : out.entries)
            if (e.variant == variant_name(RisVariant::MultiLayer))
            {
                acc += e.ear.ratio;
                count++;
            }
        out.overall_multi_ear = count ? acc / count : 0.0;
        return out;
    }

    inline void write_power_dist(const PowerDistResult &res, const ExperimentSetup &s,
                                 const std::string &dist_path, const std::string &ear_path)
    {
        {
            CsvWriter csv(dist_path);
            standard_headers(csv, s, "power-dist");
            csv.row({"variant", "layer", "row", "col", "power_dbw"});
            for (const auto &e : res.entries)
                for (int row = 0; row < e.rows; row++)
                    for (int col = 0; col < e.cols; col++)
                    {
                        const double p = e.distribution.per_element_power[static_cast<std::size_t>(
                            row * e.cols + col)];
                        csv.row({e.variant, std::to_string(e.layer + 1), std::to_string(row),
                                 std::to_string(col), format_double(db_from_linear(p))});
                    }
        }
        {
            CsvWriter csv(ear_path);
            standard_headers(csv, s, "power-dist");
            csv.row({"variant", "layer", "epsilon", "activated", "total", "ratio"});
            for (const auto &e : res.entries)
                csv.row({e.variant, std::to_string(e.layer + 1), format_double(e.ear.epsilon),
                         std::to_string(e.ear.activated_count),
                         std::to_string(e.distribution.per_element_power.size()),
                         format_double(e.ear.ratio)});
            csv.row({"multi-layer", "overall", format_double(s.epsilon), "-", "-",
                     format_double(res.overall_multi_ear)});
        }
    }

    // ----- radiation pattern ----------------------------------------------------

    struct PatternCurve
    {
        std::string label;
        std::vector<double> angles_deg;
        std::vector<double> magnitudes; // linear, shared normalization applied later
    };

    struct PatternResult
    {
        std::vector<PatternCurve> curves;
        double reference = 0.0; // global maximum across curves
    };

    inline PatternResult run_pattern(const ExperimentSetup &s)
    {
        const double p_w = linear_from_db(s.p_max_dbw);
        std::vector<double> angles_deg, angles_rad;
        for (double a = -90.0; a <= 90.0 + 1.0e-9; a += s.pattern_step_deg)
        {
            angles_deg.push_back(a);
            angles_rad.push_back(a * kPi / 180.0);
        }

        PatternResult out;
        auto add_curve = [&](const std::string &label, const CVector &emission,
                             const std::vector<double> &alphas, double wavelength) {
            PatternCurve curve;
            curve.label = label;
            curve.angles_deg = angles_deg;
            curve.magnitudes = pattern_magnitudes(emission, alphas, wavelength, angles_rad);
            out.curves.push_back(std::move(curve));
        };

        const RisVariant variants[] = {RisVariant::MultiLayer, RisVariant::SingleLayerUs,
                                       RisVariant::SingleLayerBss};
        for (RisVariant variant : variants)
        {
            VariantSystem sys = build_variant(s, variant, p_w);
            const OptimizeResult res =
                optimize(sys.channels, sys.kappa_effective, s.noise_power, p_w, optimize_config(s));
            const auto pre = detail::prefix_products(res.state, sys.channels, sys.kappa_effective);
            for (int l = 0; l < sys.channels.num_layers(); l++)
            {
                const ElementGrid grid = element_centers(sys.scenario.layers[static_cast<std::size_t>(l)]);
                std::vector<double> alphas(grid.size());
                for (std::size_t n = 0; n < grid.size(); n++)
                    alphas[n] = grid.centers[n][0];
                std::string label = variant_name(variant);
                if (sys.channels.num_layers() > 1)
                    label += "-layer" + std::to_string(l + 1);
                add_curve(label, pre[static_cast<std::size_t>(l) + 1], alphas, s.wavelength);
            }
        }

        for (const auto &curve : out.curves)
            for (double m : curve.magnitudes)
                out.reference = std::max(out.reference, m);
        return out;
    }

    inline void write_pattern(const PatternResult &res, const ExperimentSetup &s, const std::string &path)
    {
        CsvWriter csv(path);
        standard_headers(csv, s, "pattern");
        csv.row({"variant", "angle_deg", "gain_db"});
        std::vector<const PatternCurve *> curves;
        for (const auto &c : res.curves)
            curves.push_back(&c);
        std::sort(curves.begin(), curves.end(),
                  [](const PatternCurve *a, const PatternCurve *b) { return a->label < b->label; });
        for (const PatternCurve *c : curves)
            for (std::size_t i = 0; i < c->angles_deg.size(); i++)
                csv.row({c->label, format_double(c->angles_deg[i]),
                         format_double(20.0 * std::log10(c->magnitudes[i] / res.reference))});
    }

    // ----- lemma 1 ---------------------------------------------------------------

    struct Lemma1Result
    {
        LemmaScenario scenario;
        std::vector<Complex> integrals;
        BoundReport bound;
        ZeroConstruction zero;
    };

    inline Lemma1Result run_lemma1(const ExperimentSetup &s)
    {
        Lemma1Result out;
        out.scenario = s.lemma;
        out.integrals = element_integrals(s.lemma);
        out.bound = verify_bound(s.lemma, s.lemma_trials, s.seed);
        out.zero = construct_zero(s.lemma);
        return out;
    }

    inline void write_lemma1(const Lemma1Result &res, const ExperimentSetup &s,
                             const std::string &elements_path, const std::string &summary_path)
    {
        {
            CsvWriter csv(elements_path);
            standard_headers(csv, s, "lemma1");
            csv.row({"element", "row", "col", "abs_c", "arg_c"});
            for (std::size_t j = 0; j < res.integrals.size(); j++)
                csv.row({std::to_string(j), std::to_string(j / static_cast<std::size_t>(res.scenario.b)),
                         std::to_string(j % static_cast<std::size_t>(res.scenario.b)),
                         format_double(std::abs(res.integrals[j])),
                         format_double(std::arg(res.integrals[j]))});
        }
        {
            CsvWriter csv(summary_path);
            standard_headers(csv, s, "lemma1");
            csv.row({"quantity", "value"});
            csv.row({"b", std::to_string(res.scenario.b)});
            csv.row({"a_m", format_double(res.scenario.a)});
            csv.row({"d1_m", format_double(res.scenario.d1)});
            csv.row({"d2_m", format_double(res.scenario.d2)});
            csv.row({"target_index", std::to_string(res.scenario.target_index)});
            csv.row({"zeta", format_double(res.bound.zeta)});
            csv.row({"sum_abs_c", format_double(res.bound.sum_abs_c)});
            csv.row({"max_sampled_abs_y", format_double(res.bound.max_sampled)});
            csv.row({"aligned_ratio", format_double(res.bound.aligned_ratio)});
            csv.row({"trials", std::to_string(res.bound.trials)});
            csv.row({"violations", std::to_string(res.bound.violations)});
            csv.row({"zero_residual", format_double(res.zero.residual)});
            csv.row({"zero_residual_over_zeta", format_double(res.zero.residual / res.bound.zeta)});
        }
    }

    // ----- multi-user SINR evaluation --------------------------------------------
    //
    // Each user gets its own laterally shifted copy of the multi-layer stack,
    // its link is optimized independently, and the shared combiner is the one
    // matched to the first user.

    struct SinrEvalResult
    {
        std::vector<double> sinr_db;
        double sum_rate = 0.0;
    };

    inline SinrEvalResult run_sinr_eval(const ExperimentSetup &s)
    {
        if (s.sinr_user_offsets_x.empty())
            throw ConfigError("sinr-eval: no users configured");
        const double p_w = linear_from_db(s.p_max_dbw);

        std::vector<UserLink> users;
        CVector shared_v;
        for (std::size_t u = 0; u < s.sinr_user_offsets_x.size(); u++)
        {
            ExperimentSetup su = s;
            su.user_center.x += s.sinr_user_offsets_x[u];
            VariantSystem sys = build_variant(su, RisVariant::MultiLayer, p_w);
            const OptimizeResult res =
                optimize(sys.channels, sys.kappa_effective, s.noise_power, p_w, optimize_config(s));
            if (u == 0)
                shared_v = res.state.v;
            users.push_back({std::move(sys.channels), res.state.w, res.state.theta});
        }

        const SinrResult eval = sinr_eval(users, shared_v, s.kappa, s.noise_power);
        SinrEvalResult out;
        out.sum_rate = eval.sum_rate;
        for (double v : eval.sinr)
            out.sinr_db.push_back(db_from_linear(v));
        return out;
    }

    inline void write_sinr_eval(const SinrEvalResult &res, const ExperimentSetup &s,
                                const std::string &path)
    {
        CsvWriter csv(path);
        standard_headers(csv, s, "sinr-eval");
        csv.header("sum_rate_bps_hz=" + format_double(res.sum_rate));
        csv.row({"user", "sinr_db", "rate_bps_hz"});
        for (std::size_t u = 0; u < res.sinr_db.size(); u++)
            csv.row({std::to_string(u + 1), format_double(res.sinr_db[u]),
                     format_double(std::log2(1.0 + linear_from_db(res.sinr_db[u])))});
    }
} // namespace usris

#endif
