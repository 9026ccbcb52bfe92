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

#ifndef USRIS_CONFIG_HPP
#define USRIS_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "usris/errors.hpp"
#include "usris/geometry.hpp"
#include "usris/io.hpp"
#include "usris/lemma1.hpp"
#include "usris/scenario.hpp"
#include "usris/types.hpp"

namespace usris
{
    // ----- key-value config file -------------------------------------------
    //
    // TOML-style sections of scalar keys:
    //   [section]
    //   key = 1.5            # numbers (scientific notation ok)
    //   name = "text"        # quoted strings
    //   flag = true
    //   list = [0.02, 0.02]  # numeric arrays
    // Only this subset is parsed; '#' starts a comment.

    struct ConfigValue
    {
        enum class Kind
        {
            Number,
            String,
            Bool,
            List
        };
        Kind kind = Kind::Number;
        double number = 0.0;
        std::string text;
        bool flag = false;
        std::vector<double> list;
    };

    class Config
    {
      public:
        static Config parse(const std::string &content, const std::string &origin = "<string>")
        {
            Config cfg;
            cfg.raw_ = content;
            std::istringstream in(content);
            std::string line, section;
            int lineno = 0;
            while (std::getline(in, line))
            {
                lineno++;
                const std::string stripped = strip(line);
                if (stripped.empty())
                    continue;
                if (stripped.front() == '[')
                {
                    const auto close = stripped.find(']');
                    if (close == std::string::npos)
                        throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section");
                    section = strip(stripped.substr(1, close - 1));
                    continue;
                }
                const auto eq = stripped.find('=');
                if (eq == std::string::npos)
                    throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
                const std::string key = strip(stripped.substr(0, eq));
                const std::string value = strip(stripped.substr(eq + 1));
                if (key.empty() || value.empty())
                    throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key or value");
                cfg.values_[section.empty() ? key : section + "." + key] =
                    parse_value(value, origin, lineno);
            }
            return cfg;
        }

        static Config load(const std::string &path)
        {
            std::ifstream in(path, std::ios::binary);
            if (!in)
                throw ConfigError("cannot open config: " + path);
            std::ostringstream ss;
            ss << in.rdbuf();
            return parse(ss.str(), path);
        }

        bool has(const std::string &key) const { return values_.count(key) != 0; }

        double number(const std::string &key) const
        {
            return require(key, ConfigValue::Kind::Number).number;
        }

        double number_or(const std::string &key, double fallback) const
        {
            return has(key) ? number(key) : fallback;
        }

        long long integer(const std::string &key) const
        {
            const double v = number(key);
            const long long i = static_cast<long long>(v);
            if (static_cast<double>(i) != v)
                throw ConfigError("config key is not an integer: " + key);
            return i;
        }

        long long integer_or(const std::string &key, long long fallback) const
        {
            return has(key) ? integer(key) : fallback;
        }

        std::string text(const std::string &key) const
        {
            return require(key, ConfigValue::Kind::String).text;
        }

        std::vector<double> list(const std::string &key) const
        {
            return require(key, ConfigValue::Kind::List).list;
        }

        const std::string &raw() const { return raw_; }
        std::uint64_t hash() const { return fnv1a64(raw_); }

      private:
        static std::string strip(const std::string &s)
        {
            std::string out;
            bool quoted = false;
            for (char c : s)
            {
                if (c == '"')
                    quoted = !quoted;
                if (c == '#' && !quoted)
                    break;
                out += c;
            }
            const auto b = out.find_first_not_of(" \t\r\n");
            if (b == std::string::npos)
                return "";
            const auto e = out.find_last_not_of(" \t\r\n");
            return out.substr(b, e - b + 1);
        }

        static double parse_number(const std::string &text, const std::string &origin, int lineno)
        {
            std::size_t used = 0;
            double v = 0.0;
            try
            {
                v = std::stod(text, &used);
            }
            catch (const std::exception &)
            {
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": not a number: " + text);
            }
            if (used != text.size())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": trailing junk in number: " + text);
            return v;
        }

        static ConfigValue parse_value(const std::string &text, const std::string &origin, int lineno)
        {
            ConfigValue v;
            if (text.front() == '"')
            {
                if (text.size() < 2 || text.back() != '"')
                    throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated string");
                v.kind = ConfigValue::Kind::String;
                v.text = text.substr(1, text.size() - 2);
                return v;
            }
            if (text == "true" || text == "false")
            {
                v.kind = ConfigValue::Kind::Bool;
                v.flag = (text == "true");
                return v;
            }
            if (text.front() == '[')
            {
                if (text.back() != ']')
                    throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated array");
                v.kind = ConfigValue::Kind::List;
                std::istringstream ls(text.substr(1, text.size() - 2));
                std::string item;
                while (std::getline(ls, item, ','))
                {
                    const std::string entry = strip(item);
                    if (entry.empty())
                        continue;
                    v.list.push_back(parse_number(entry, origin, lineno));
                }
                return v;
            }
            v.kind = ConfigValue::Kind::Number;
            v.number = parse_number(text, origin, lineno);
            return v;
        }

        const ConfigValue &require(const std::string &key, ConfigValue::Kind kind) const
        {
            auto it = values_.find(key);
            if (it == values_.end())
                throw ConfigError("missing config key: " + key);
            if (it->second.kind != kind)
                throw ConfigError("config key has wrong type: " + key);
            return it->second;
        }

        std::map<std::string, ConfigValue> values_;
        std::string raw_;
    };

    // ----- experiment setup --------------------------------------------------

    enum class RisVariant
    {
        MultiLayer,
        SingleLayerUs,
        SingleLayerBss,
        None
    };

    inline const char *variant_name(RisVariant v)
    {
        switch (v)
        {
        case RisVariant::MultiLayer:
            return "multi-layer";
        case RisVariant::SingleLayerUs:
            return "single-layer-us";
        case RisVariant::SingleLayerBss:
            return "single-layer-bss";
        case RisVariant::None:
            return "none";
        }
        return "?";
    }

    struct MultiLayerRis
    {
        int layers = 2;
        int cols = 8;
        int rows = 12;
        std::vector<double> depths; // gap to the previous plane, per layer
    };

    struct SingleLayerRis
    {
        int cols = 12;
        int rows = 16;
        double depth = 0.02;
    };

    // Everything one experiment run needs, resolved from a config file plus
    // command-line overrides.
    struct ExperimentSetup
    {
        double frequency_hz = 2.5e9;
        double wavelength = 0.0;
        double noise_power = 1.0e-6;
        double kappa = 0.8;
        Position3 user_center{0.0, 0.0, 0.0};
        Position3 bs_center{0.0, 20.0, 0.0};
        int user_antennas = 2;
        int bs_antennas = 8;
        double antenna_spacing = 0.0; // defaults to lambda/2
        double element_size = 0.0;    // defaults to lambda/2

        MultiLayerRis multi;
        SingleLayerRis single;

        std::uint64_t seed = 1;
        int restarts = 8;
        double tolerance = 1.0e-6;
        int max_iters = 100;
        double p_max_dbw = 0.0;
        std::vector<double> sweep_dbw;
        double epsilon = 1.0 / 6.0;
        double pattern_step_deg = 0.25;

        LemmaScenario lemma;
        int lemma_trials = 1000;

        std::vector<double> sinr_user_offsets_x;

        std::uint64_t config_hash = 0;
    };

    inline ExperimentSetup experiment_from_config(const Config &cfg)
    {
        ExperimentSetup s;
        s.frequency_hz = cfg.number_or("scenario.frequency_hz", 2.5e9);
        s.wavelength = kSpeedOfLight / s.frequency_hz;
        s.noise_power = cfg.number_or("scenario.noise_power_w", 1.0e-6);
        s.kappa = cfg.number_or("scenario.kappa", 0.8);
        s.user_antennas = static_cast<int>(cfg.integer_or("scenario.user_antennas", 2));
        s.bs_antennas = static_cast<int>(cfg.integer_or("scenario.bs_antennas", 8));
        if (cfg.has("scenario.user_center"))
        {
            const auto v = cfg.list("scenario.user_center");
            if (v.size() != 3)
                throw ConfigError("scenario.user_center must have 3 entries");
            s.user_center = {v[0], v[1], v[2]};
        }
        if (cfg.has("scenario.bs_center"))
        {
            const auto v = cfg.list("scenario.bs_center");
            if (v.size() != 3)
                throw ConfigError("scenario.bs_center must have 3 entries");
            s.bs_center = {v[0], v[1], v[2]};
        }
        s.antenna_spacing = cfg.number_or("scenario.antenna_spacing_m", 0.5 * s.wavelength);
        s.element_size = cfg.number_or("scenario.element_size_m", 0.5 * s.wavelength);

        s.multi.layers = static_cast<int>(cfg.integer_or("multi_layer.layers", 2));
        s.multi.cols = static_cast<int>(cfg.integer_or("multi_layer.cols", 8));
        s.multi.rows = static_cast<int>(cfg.integer_or("multi_layer.rows", 12));
        if (cfg.has("multi_layer.depths"))
            s.multi.depths = cfg.list("multi_layer.depths");
        else
            s.multi.depths.assign(static_cast<std::size_t>(s.multi.layers), 0.02);
        if (static_cast<int>(s.multi.depths.size()) != s.multi.layers)
            throw ConfigError("multi_layer.depths length must equal multi_layer.layers");

        s.single.cols = static_cast<int>(cfg.integer_or("single_layer.cols", 12));
        s.single.rows = static_cast<int>(cfg.integer_or("single_layer.rows", 16));
        s.single.depth = cfg.number_or("single_layer.depth", 0.02);

        s.seed = static_cast<std::uint64_t>(cfg.integer_or("run.seed", 1));
        s.restarts = static_cast<int>(cfg.integer_or("run.restarts", 8));
        s.tolerance = cfg.number_or("run.tolerance", 1.0e-6);
        s.max_iters = static_cast<int>(cfg.integer_or("run.max_iters", 100));
        s.p_max_dbw = cfg.number_or("run.p_max_dbw", 0.0);
        if (cfg.has("run.sweep_start_dbw"))
        {
            const double start = cfg.number("run.sweep_start_dbw");
            const double stop = cfg.number_or("run.sweep_stop_dbw", start);
            const double step = cfg.number_or("run.sweep_step_db", 2.0);
            if (!(step > 0.0))
                throw ConfigError("run.sweep_step_db must be positive");
            for (double p = start; p <= stop + 1.0e-9; p += step)
                s.sweep_dbw.push_back(p);
        }
        else
        {
            s.sweep_dbw.push_back(s.p_max_dbw);
        }
        s.epsilon = cfg.number_or("run.epsilon", 1.0 / 6.0);
        s.pattern_step_deg = cfg.number_or("run.pattern_step_deg", 0.25);

        s.lemma.b = static_cast<int>(cfg.integer_or("lemma.b", 4));
        s.lemma.a = cfg.number_or("lemma.a", 0.06);
        s.lemma.d1 = cfg.number_or("lemma.d1", 0.02);
        s.lemma.d2 = cfg.number_or("lemma.d2", 0.02);
        s.lemma.wavelength = cfg.number_or("lemma.wavelength_m", s.wavelength);
        s.lemma.target_index = static_cast<int>(
            cfg.integer_or("lemma.target_index", (s.lemma.b / 2) * s.lemma.b + s.lemma.b / 2));
        s.lemma_trials = static_cast<int>(cfg.integer_or("lemma.trials", 1000));

        if (cfg.has("sinr.user_offsets_x"))
            s.sinr_user_offsets_x = cfg.list("sinr.user_offsets_x");
        else
            s.sinr_user_offsets_x = {-1.0, 1.0};

        s.config_hash = cfg.hash();
        return s;
    }

    // Builds the physical scenario for one variant; p_max in watts. The BSS
    // variant shares the single-layer US geometry (its kappa is removed by
    // reflective_variant at run time).
    inline Scenario make_scenario(const ExperimentSetup &s, RisVariant variant, double p_max_w)
    {
        Scenario scn;
        scn.wavelength = s.wavelength;
        scn.kappa = s.kappa;
        scn.noise_power = s.noise_power;
        scn.p_max = p_max_w;
        scn.user = UlaSpec{s.user_antennas, s.antenna_spacing, s.user_center, {1.0, 0.0, 0.0}};
        scn.bs = UlaSpec{s.bs_antennas, s.antenna_spacing, s.bs_center, {1.0, 0.0, 0.0}};

        auto add_layer = [&](int cols, int rows, double plane_y) {
            UpaLayerSpec layer;
            layer.cols = cols;
            layer.rows = rows;
            layer.element_size = s.element_size;
            layer.plane_y = plane_y;
            layer.center_xz = {s.user_center.x, s.user_center.z};
            scn.layers.push_back(layer);
        };

        switch (variant)
        {
        case RisVariant::MultiLayer:
        {
            double y = s.user_center.y;
            for (int l = 0; l < s.multi.layers; l++)
            {
                y += s.multi.depths[static_cast<std::size_t>(l)];
                add_layer(s.multi.cols, s.multi.rows, y);
            }
            break;
        }
        case RisVariant::SingleLayerUs:
        case RisVariant::SingleLayerBss:
            add_layer(s.single.cols, s.single.rows, s.user_center.y + s.single.depth);
            break;
        case RisVariant::None:
            break;
        }
        validate(scn);
        return scn;
    }
} // namespace usris

#endif
