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

// Experiment runner: reproduces the figure-level experiments as CSV files.
// Every run is deterministic given the same config file and seed.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <algorithm>
#include <string>
#include <vector>

#include "usris/experiments.hpp"
#include "usris/io.hpp"

namespace fs = std::filesystem;

namespace
{
    struct CommonArgs
    {
        std::string config_path;
        std::string out_dir = "out";
        std::uint64_t seed = 0;
        bool seed_set = false;
        int restarts = 0;
        bool dump_channels = false;
    };

    void add_common(CLI::App *cmd, CommonArgs &args)
    {
        cmd->add_option("--config", args.config_path, "Path to the experiment config file")->required();
        cmd->add_option("--out", args.out_dir, "Output directory for CSV files");
        cmd->add_option("--seed", args.seed, "Override the config seed")->each([&args](const std::string &) {
            args.seed_set = true;
        });
        cmd->add_option("--restarts", args.restarts, "Override the optimizer restart count");
    }

    usris::ExperimentSetup load_setup(const CommonArgs &args)
    {
        const usris::Config cfg = usris::Config::load(args.config_path);
        usris::ExperimentSetup setup = usris::experiment_from_config(cfg);
        if (args.seed_set)
            setup.seed = args.seed;
        if (args.restarts > 0)
            setup.restarts = args.restarts;
        fs::create_directories(args.out_dir);
        return setup;
    }

    std::string out_path(const CommonArgs &args, const std::string &name)
    {
        return (fs::path(args.out_dir) / name).string();
    }

    void dump_variant_channels(const usris::ExperimentSetup &setup, const CommonArgs &args)
    {
        using usris::RisVariant;
        for (RisVariant variant : {RisVariant::MultiLayer, RisVariant::SingleLayerUs})
        {
            const usris::VariantSystem sys = usris::build_variant(setup, variant, 1.0);
            const std::string name = std::string("channels_") + usris::variant_name(variant) + ".csv";
            usris::save_channel_set(sys.channels, out_path(args, name),
                                    usris::provenance_headers(setup));
            std::cout << "wrote " << out_path(args, name) << "\n";
        }
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"usris: multi-layer user-side RIS uplink beamforming experiments"};
    app.require_subcommand(1);

    CommonArgs args;

    CLI::App *snr = app.add_subcommand("snr-sweep", "Detection SNR versus transmit power per RIS variant");
    add_common(snr, args);
    snr->add_flag("--dump-channels", args.dump_channels, "Also write the assembled channel matrices");

    CLI::App *conv = app.add_subcommand("converge", "Per-iteration SNR traces of the alternating optimizer");
    add_common(conv, args);
    bool dump_states = false;
    conv->add_flag("--dump-states", dump_states, "Also write per-variant trace and final state files");

    CLI::App *power = app.add_subcommand("power-dist", "Per-layer incident power maps and EAR summary");
    add_common(power, args);

    CLI::App *pattern = app.add_subcommand("pattern", "Azimuth radiation patterns of the RIS variants");
    add_common(pattern, args);

    CLI::App *lemma = app.add_subcommand("lemma1", "Amplitude-range bound verification report");
    add_common(lemma, args);

    CLI::App *sinr = app.add_subcommand("sinr-eval", "Multi-user SINR and sum-rate evaluation");
    add_common(sinr, args);

    CLI11_PARSE(app, argc, argv);

    try
    {
        const usris::ExperimentSetup setup = load_setup(args);

        if (snr->parsed())
        {
            const auto rows = usris::run_snr_sweep(setup);
            usris::write_snr_sweep(rows, setup, out_path(args, "snr_sweep.csv"));
            std::cout << "wrote " << out_path(args, "snr_sweep.csv") << "\n";
            if (args.dump_channels)
                dump_variant_channels(setup, args);
        }
        else if (conv->parsed())
        {
            const auto runs = usris::run_convergence_detailed(setup);
            std::vector<usris::ConvergenceRow> rows;
            for (const auto &run : runs)
                for (std::size_t i = 0; i < run.result.trace.snr_per_iteration.size(); i++)
                    rows.push_back({run.variant, static_cast<int>(i + 1),
                                    usris::db_from_linear(run.result.trace.snr_per_iteration[i])});
            std::sort(rows.begin(), rows.end(),
                      [](const usris::ConvergenceRow &a, const usris::ConvergenceRow &b) {
                          return a.variant != b.variant ? a.variant < b.variant
                                                        : a.iteration < b.iteration;
                      });
            usris::write_convergence(rows, setup, out_path(args, "convergence.csv"));
            std::cout << "wrote " << out_path(args, "convergence.csv") << "\n";
            if (dump_states)
                for (const auto &run : runs)
                {
                    usris::save_run_trace(run.result.trace, out_path(args, "trace_" + run.variant + ".csv"),
                                          usris::provenance_headers(setup));
                    usris::save_beamformer_state(run.result.state,
                                                 out_path(args, "state_" + run.variant + ".csv"),
                                                 usris::provenance_headers(setup));
                    std::cout << "wrote " << out_path(args, "trace_" + run.variant + ".csv") << "\n";
                    std::cout << "wrote " << out_path(args, "state_" + run.variant + ".csv") << "\n";
                }
        }
        else if (power->parsed())
        {
            const auto res = usris::run_power_dist(setup);
            usris::write_power_dist(res, setup, out_path(args, "power_dist.csv"),
                                    out_path(args, "ear_summary.csv"));
            std::cout << "wrote " << out_path(args, "power_dist.csv") << "\n";
            std::cout << "wrote " << out_path(args, "ear_summary.csv") << "\n";
        }
        else if (pattern->parsed())
        {
            const auto res = usris::run_pattern(setup);
            usris::write_pattern(res, setup, out_path(args, "pattern.csv"));
            std::cout << "wrote " << out_path(args, "pattern.csv") << "\n";
        }
        else if (lemma->parsed())
        {
            const auto res = usris::run_lemma1(setup);
            usris::write_lemma1(res, setup, out_path(args, "lemma1_elements.csv"),
                                out_path(args, "lemma1_summary.csv"));
            std::cout << "wrote " << out_path(args, "lemma1_elements.csv") << "\n";
            std::cout << "wrote " << out_path(args, "lemma1_summary.csv") << "\n";
        }
        else if (sinr->parsed())
        {
            const auto res = usris::run_sinr_eval(setup);
            usris::write_sinr_eval(res, setup, out_path(args, "sinr.csv"));
            std::cout << "wrote " << out_path(args, "sinr.csv") << "\n";
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
