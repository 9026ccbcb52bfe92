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

#ifndef USRIS_ERRORS_HPP
#define USRIS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace usris
{
    // Base class for every error raised by the library.
    struct Error : std::runtime_error
    {
        explicit Error(const std::string &msg) : std::runtime_error(msg) {}
    };

    struct DimensionMismatch : Error
    {
        using Error::Error;
    };

    struct DegenerateGeometry : Error
    {
        using Error::Error;
    };

    struct GridNotSymmetric : Error
    {
        using Error::Error;
    };

    struct GridHasAxisElements : Error
    {
        using Error::Error;
    };

    struct QuadratureNotConverged : Error
    {
        using Error::Error;
    };

    struct ZeroEffectiveChannel : Error
    {
        using Error::Error;
    };

    struct LayerOutOfRange : Error
    {
        using Error::Error;
    };

    struct InvalidForMultiLayer : Error
    {
        using Error::Error;
    };

    struct EmptyDistribution : Error
    {
        using Error::Error;
    };

    struct ZeroEmission : Error
    {
        using Error::Error;
    };

    struct NonUnitPhase : Error
    {
        using Error::Error;
    };

    struct BoundViolated : Error
    {
        using Error::Error;
    };

    struct PolygonInfeasible : Error
    {
        using Error::Error;
    };

    struct ConfigError : Error
    {
        using Error::Error;
    };

    struct IoError : Error
    {
        using Error::Error;
    };
} // namespace usris

#endif
