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

#ifndef USRIS_IO_HPP
#define USRIS_IO_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "usris/beamformer.hpp"
#include "usris/channel.hpp"
#include "usris/errors.hpp"
#include "usris/types.hpp"

namespace usris
{
    inline constexpr const char *kToolVersion = "0.1.0";

    // FNV-1a 64-bit, used to stamp output files with a hash of the config
    // they were produced from.
    inline std::uint64_t fnv1a64(const std::string &data)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : data)
        {
            h ^= c;
            h *= 0x00000100000001b3ULL;
        }
        return h;
    }

    // Shortest round-trippable decimal representation of a double.
    inline std::string format_double(double v)
    {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

    // CSV with '#'-prefixed header lines; rows are written as-is, so callers
    // control ordering (and therefore byte-level determinism).
    class CsvWriter
    {
      public:
        explicit CsvWriter(const std::string &path) : out_(path, std::ios::binary)
        {
            if (!out_)
                throw IoError("cannot open for writing: " + path);
        }

        void header(const std::string &line) { out_ << "# " << line << "\n"; }

        void row(const std::vector<std::string> &cells)
        {
            for (std::size_t i = 0; i < cells.size(); i++)
            {
                if (i)
                    out_ << ",";
                out_ << cells[i];
            }
            out_ << "\n";
        }

      private:
        std::ofstream out_;
    };

    // --- ChannelSet serialization ------------------------------------------
    //
    // Text format, one file per channel set:
    //   # usris channelset v1
    //   # wavelength=<w>
    //   # matrices=<count>
    //   # matrix <name> rows=<r> cols=<c>
    //   re,im,re,im,...          (one matrix row per line, row-major)
    // Values are %.17g so a save/load round trip is bit-exact.

    namespace detail
    {
        inline void write_matrix(std::ofstream &out, const std::string &name, const CMatrix &m)
        {
            out << "# matrix " << name << " rows=" << m.rows() << " cols=" << m.cols() << "\n";
            for (Eigen::Index r = 0; r < m.rows(); r++)
            {
                for (Eigen::Index c = 0; c < m.cols(); c++)
                {
                    if (c)
                        out << ",";
                    out << format_double(m(r, c).real()) << "," << format_double(m(r, c).imag());
                }
                out << "\n";
            }
        }

        inline CMatrix read_matrix(std::istream &in, std::string &name)
        {
            std::string line;
            if (!std::getline(in, line) || line.rfind("# matrix ", 0) != 0)
                throw IoError("complex matrix data: missing matrix header");
            Eigen::Index rows = 0, cols = 0;
            {
                std::istringstream hs(line.substr(9));
                std::string rows_kv, cols_kv;
                hs >> name >> rows_kv >> cols_kv;
                if (rows_kv.rfind("rows=", 0) != 0 || cols_kv.rfind("cols=", 0) != 0)
                    throw IoError("complex matrix data: malformed matrix header");
                rows = std::stol(rows_kv.substr(5));
                cols = std::stol(cols_kv.substr(5));
            }
            CMatrix m(rows, cols);
            for (Eigen::Index r = 0; r < rows; r++)
            {
                if (!std::getline(in, line))
                    throw IoError("complex matrix data: truncated");
                std::istringstream ls(line);
                std::string cell;
                for (Eigen::Index c = 0; c < cols; c++)
                {
                    if (!std::getline(ls, cell, ','))
                        throw IoError("complex matrix data: short row");
                    const double re = std::stod(cell);
                    if (!std::getline(ls, cell, ','))
                        throw IoError("complex matrix data: short row");
                    const double im = std::stod(cell);
                    m(r, c) = Complex(re, im);
                }
            }
            return m;
        }
    } // namespace detail

    using HeaderLines = std::vector<std::string>;

    inline void save_channel_set(const ChannelSet &ch, const std::string &path,
                                 const HeaderLines &extra = {})
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw IoError("cannot open for writing: " + path);
        out << "# usris channelset v1\n";
        for (const std::string &h : extra)
            out << "# " << h << "\n";
        out << "# wavelength=" << format_double(ch.wavelength) << "\n";
        out << "# matrices=" << (ch.f.size() + 1) << "\n";
        for (std::size_t l = 0; l < ch.f.size(); l++)
            detail::write_matrix(out, "f" + std::to_string(l + 1), ch.f[l]);
        detail::write_matrix(out, "g", ch.g);
    }

    inline ChannelSet load_channel_set(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError("cannot open for reading: " + path);
        std::string line;
        if (!std::getline(in, line) || line != "# usris channelset v1")
            throw IoError("not a usris channelset file: " + path);

        ChannelSet ch;
        std::size_t matrices = 0;
        bool have_wavelength = false, have_count = false;
        // provenance headers are skipped; the two structural ones are required
        while (in.peek() == '#' && std::getline(in, line))
        {
            if (line.rfind("# wavelength=", 0) == 0)
            {
                ch.wavelength = std::stod(line.substr(13));
                have_wavelength = true;
            }
            else if (line.rfind("# matrices=", 0) == 0)
            {
                matrices = static_cast<std::size_t>(std::stoul(line.substr(11)));
                have_count = true;
                break;
            }
        }
        if (!have_wavelength || !have_count)
            throw IoError("channelset: missing wavelength or matrix count header");

        for (std::size_t i = 0; i < matrices; i++)
        {
            std::string name;
            CMatrix m = detail::read_matrix(in, name);
            if (name == "g")
                ch.g = std::move(m);
            else
                ch.f.push_back(std::move(m));
        }
        validate(ch);
        return ch;
    }

    // --- Beamformer run artifacts --------------------------------------------

    // Per-iteration trace: iteration, snr_linear, snr_db.
    inline void save_run_trace(const RunTrace &trace, const std::string &path,
                               const HeaderLines &extra = {})
    {
        CsvWriter csv(path);
        csv.header(std::string("usris v") + kToolVersion + " run trace");
        for (const std::string &h : extra)
            csv.header(h);
        csv.header("converged=" + std::to_string(trace.converged ? 1 : 0));
        csv.header("tolerance=" + format_double(trace.tolerance));
        csv.row({"iteration", "snr_linear", "snr_db"});
        for (std::size_t i = 0; i < trace.snr_per_iteration.size(); i++)
        {
            const double s = trace.snr_per_iteration[i];
            csv.row({std::to_string(i + 1), format_double(s),
                     format_double(10.0 * std::log10(s))});
        }
    }

    // Final state in the complex-matrix block format: w, theta_1..theta_L, v.
    inline void save_beamformer_state(const BeamformerState &st, const std::string &path,
                                      const HeaderLines &extra = {})
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw IoError("cannot open for writing: " + path);
        out << "# usris beamformer-state v1\n";
        for (const std::string &h : extra)
            out << "# " << h << "\n";
        out << "# matrices=" << (st.theta.size() + 2) << "\n";
        detail::write_matrix(out, "w", st.w);
        for (std::size_t l = 0; l < st.theta.size(); l++)
            detail::write_matrix(out, "theta" + std::to_string(l + 1), st.theta[l]);
        detail::write_matrix(out, "v", st.v);
    }

    inline BeamformerState load_beamformer_state(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError("cannot open for reading: " + path);
        std::string line;
        if (!std::getline(in, line) || line != "# usris beamformer-state v1")
            throw IoError("not a usris beamformer-state file: " + path);
        std::size_t matrices = 0;
        bool have_count = false;
        while (in.peek() == '#' && std::getline(in, line))
            if (line.rfind("# matrices=", 0) == 0)
            {
                matrices = static_cast<std::size_t>(std::stoul(line.substr(11)));
                have_count = true;
                break;
            }
        if (!have_count)
            throw IoError("beamformer-state: missing matrix count header");
        BeamformerState st;
        for (std::size_t i = 0; i < matrices; i++)
        {
            std::string name;
            CMatrix m = detail::read_matrix(in, name);
            if (name == "w")
                st.w = m.col(0);
            else if (name == "v")
                st.v = m.col(0);
            else
                st.theta.push_back(m.col(0));
        }
        return st;
    }
} // namespace usris

#endif
