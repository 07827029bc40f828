// SPDX-License-Identifier: Apache-2.0
//
// modeforge - beamforming codebooks for multi-port multi-mode antennas
// Copyright (C) 2026 The modeforge authors
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

#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"

namespace modeforge {

/// Feeding-network architecture constraining the port weight vector.
enum class Scheme
{
    digital,   ///< free complex weights, unit norm
    hybrid,    ///< on/off per port, active ports share magnitude 1/sqrt(N_C)
    analog,    ///< all ports active at magnitude 1/sqrt(M), free phases
    selection  ///< exactly one port, weight 1
};

/// Figure of merit a codebook is optimized for.
enum class Criterion
{
    gain, ///< realized gain towards the target
    ef,   ///< element factor: gain relative to the pattern's own peak
    gef   ///< gain-element-factor product
};

inline const char *to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::digital: return "digital";
    case Scheme::hybrid: return "hybrid";
    case Scheme::analog: return "analog";
    case Scheme::selection: return "selection";
    }
    return "?";
}

inline const char *to_string(Criterion c)
{
    switch (c)
    {
    case Criterion::gain: return "gain";
    case Criterion::ef: return "ef";
    case Criterion::gef: return "gef";
    }
    return "?";
}

inline Scheme scheme_from_string(const std::string &s)
{
    if (s == "digital") return Scheme::digital;
    if (s == "hybrid") return Scheme::hybrid;
    if (s == "analog") return Scheme::analog;
    if (s == "selection") return Scheme::selection;
    throw std::invalid_argument("unknown scheme '" + s + "' (expected digital, hybrid, analog or selection)");
}

inline Criterion criterion_from_string(const std::string &s)
{
    if (s == "gain") return Criterion::gain;
    if (s == "ef") return Criterion::ef;
    if (s == "gef") return Criterion::gef;
    throw std::invalid_argument("unknown criterion '" + s + "' (expected gain, ef or gef)");
}

/// Port weight vector together with the scheme it claims to satisfy.
struct CoefficientVector
{
    /// Magnitudes at or below this count as "port off".
    static constexpr double zero_tolerance = 1.0e-12;
    /// Norm / magnitude checks accept this absolute slack.
    static constexpr double norm_tolerance = 1.0e-9;

    std::vector<cdouble> weights;
    Scheme scheme = Scheme::digital;

    std::size_t size() const { return weights.size(); }

    int active_ports() const
    {
        int n = 0;
        for (cdouble w : weights)
            if (std::abs(w) > zero_tolerance)
                ++n;
        return n;
    }

    double norm2() const
    {
        double s = 0.0;
        for (cdouble w : weights)
            s += mag2(w);
        return s;
    }

    /// Throws std::invalid_argument when the weights violate the scheme.
    void validate() const
    {
        if (weights.empty())
            throw std::invalid_argument("coefficient vector is empty");
        const double n2 = norm2();
        if (std::abs(std::sqrt(n2) - 1.0) > norm_tolerance)
        {
            std::ostringstream os;
            os << "coefficient vector is not unit norm (|c| = " << std::sqrt(n2) << ")";
            throw std::invalid_argument(os.str());
        }
        switch (scheme)
        {
        case Scheme::digital:
            break;
        case Scheme::selection:
        {
            int on = 0;
            for (cdouble w : weights)
            {
                const double a = std::abs(w);
                if (a <= zero_tolerance)
                    continue;
                ++on;
                if (std::abs(a - 1.0) > norm_tolerance)
                    throw std::invalid_argument("selection weight must have magnitude 1");
            }
            if (on != 1)
                throw std::invalid_argument("selection vector must drive exactly one port");
            break;
        }
        case Scheme::analog:
        {
            const double want = 1.0 / std::sqrt(static_cast<double>(weights.size()));
            for (std::size_t m = 0; m < weights.size(); ++m)
                if (std::abs(std::abs(weights[m]) - want) > norm_tolerance)
                {
                    std::ostringstream os;
                    os << "analog weights must all have magnitude 1/sqrt(" << weights.size() << "); port " << m + 1
                       << " has " << std::abs(weights[m]);
                    throw std::invalid_argument(os.str());
                }
            break;
        }
        case Scheme::hybrid:
        {
            const int on = active_ports();
            if (on < 1)
                throw std::invalid_argument("hybrid vector must drive at least one port");
            const double want = 1.0 / std::sqrt(static_cast<double>(on));
            for (std::size_t m = 0; m < weights.size(); ++m)
            {
                const double a = std::abs(weights[m]);
                if (a <= zero_tolerance)
                    continue;
                if (std::abs(a - want) > norm_tolerance)
                {
                    std::ostringstream os;
                    os << "hybrid weights must share magnitude 1/sqrt(" << on << "); port " << m + 1 << " has " << a;
                    throw std::invalid_argument(os.str());
                }
            }
            break;
        }
        }
    }
};

/// One-hot selection vector driving `port` (0-based).
inline CoefficientVector selection_vector(int m_count, int port)
{
    if (m_count < 1 || port < 0 || port >= m_count)
        throw std::invalid_argument("selection_vector: port out of range");
    CoefficientVector c;
    c.scheme = Scheme::selection;
    c.weights.assign(static_cast<std::size_t>(m_count), cdouble(0.0, 0.0));
    c.weights[static_cast<std::size_t>(port)] = cdouble(1.0, 0.0);
    return c;
}

} // namespace modeforge
