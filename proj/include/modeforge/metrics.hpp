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
#include <vector>

#include "coefficients.hpp"
#include "pattern_set.hpp"

namespace modeforge {

/// Stacked far-field matrix F at one angle: row 1 holds f_phi of every
/// port, row 2 holds f_theta. Combined fields are F * c.
struct PatternMatrix
{
    std::vector<cdouble> f_phi;   // row 1, one entry per port
    std::vector<cdouble> f_theta; // row 2, one entry per port

    int num_ports() const { return static_cast<int>(f_phi.size()); }

    /// Combined field components (sum_m c_m * f_m) for weight vector c.
    /// Ports whose weight is exactly zero are skipped; because adding a
    /// zero product is an exact no-op this matches the full sum bit for
    /// bit, and it is what makes sparse schemes cheap.
    std::pair<cdouble, cdouble> project(const std::vector<cdouble> &weights) const
    {
        cdouble ap(0.0, 0.0), at(0.0, 0.0);
        for (std::size_t m = 0; m < weights.size(); ++m)
        {
            const cdouble w = weights[m];
            if (w.real() == 0.0 && w.imag() == 0.0)
                continue;
            ap += w * f_phi[m];
            at += w * f_theta[m];
        }
        return {ap, at};
    }
};

namespace detail {

/// Gain from combined field components; the single arithmetic expression
/// shared by every gain path so that equal fields give equal bits.
inline double gain_from_fields(double z0_ohm, cdouble f_phi, cdouble f_theta)
{
    return gain_scale(z0_ohm) * (mag2(f_phi) + mag2(f_theta));
}

inline std::size_t locate_sample(const PatternSet &set, const Direction &angle)
{
    auto idx = set.grid().find_sample(angle);
    if (!idx)
        throw std::invalid_argument(set.grid().nearest_samples_message(angle));
    return *idx;
}

inline void require_normalized(const PatternSet &set, const char *op)
{
    if (!set.normalized())
        throw std::invalid_argument(std::string(op) + " requires a normalized pattern set (gain is undefined otherwise)");
}

inline void check_weights(const PatternSet &set, const CoefficientVector &c)
{
    if (static_cast<int>(c.size()) != set.num_ports())
    {
        std::ostringstream os;
        os << "coefficient vector has " << c.size() << " weights, pattern set has " << set.num_ports() << " ports";
        throw std::invalid_argument(os.str());
    }
    const double norm = std::sqrt(c.norm2());
    if (std::abs(norm - 1.0) > CoefficientVector::norm_tolerance)
    {
        std::ostringstream os;
        os << "coefficient vector is not unit norm (|c| = " << norm << ")";
        throw std::invalid_argument(os.str());
    }
}

/// Combined gain at grid sample i (ascending-port accumulation, exact-zero
/// weights skipped; see PatternMatrix::project for why that is bit-safe).
inline double combined_sample_gain(const PatternSet &set, const std::vector<cdouble> &weights, std::size_t i)
{
    cdouble ap(0.0, 0.0), at(0.0, 0.0);
    for (std::size_t m = 0; m < weights.size(); ++m)
    {
        const cdouble w = weights[m];
        if (w.real() == 0.0 && w.imag() == 0.0)
            continue;
        ap += w * set.f_phi(static_cast<int>(m))[i];
        at += w * set.f_theta(static_cast<int>(m))[i];
    }
    return gain_from_fields(set.z0_ohm(), ap, at);
}

} // namespace detail

/// Far-field matrix at a grid sample. The angle must hit a sample within
/// the grid's angle tolerance; there is no interpolation.
inline PatternMatrix pattern_matrix(const PatternSet &set, const Direction &angle)
{
    const std::size_t i = detail::locate_sample(set, angle);
    PatternMatrix f;
    f.f_phi.reserve(static_cast<std::size_t>(set.num_ports()));
    f.f_theta.reserve(static_cast<std::size_t>(set.num_ports()));
    for (int m = 0; m < set.num_ports(); ++m)
    {
        f.f_phi.push_back(set.f_phi(m)[i]);
        f.f_theta.push_back(set.f_theta(m)[i]);
    }
    return f;
}

/// Linear gain of a single port towards `angle`.
inline double port_gain(const PatternSet &set, int m, const Direction &angle)
{
    detail::require_normalized(set, "port_gain");
    if (m < 0 || m >= set.num_ports())
        throw std::invalid_argument("port_gain: port index out of range");
    const std::size_t i = detail::locate_sample(set, angle);
    return detail::gain_from_fields(set.z0_ohm(), set.f_phi(m)[i], set.f_theta(m)[i]);
}

/// Peak gain of a single port over all grid samples. With unit input
/// power the EIRP in watts equals this linear gain.
inline double eirp(const PatternSet &set, int m)
{
    detail::require_normalized(set, "eirp");
    if (m < 0 || m >= set.num_ports())
        throw std::invalid_argument("eirp: port index out of range");
    double best = 0.0;
    for (std::size_t i = 0; i < set.grid().size(); ++i)
    {
        const double g = detail::gain_from_fields(set.z0_ohm(), set.f_phi(m)[i], set.f_theta(m)[i]);
        if (g > best)
            best = g;
    }
    return best;
}

/// Linear gain of the weighted port combination towards `angle`.
inline double combined_gain(const PatternSet &set, const CoefficientVector &c, const Direction &angle)
{
    detail::require_normalized(set, "combined_gain");
    detail::check_weights(set, c);
    const std::size_t i = detail::locate_sample(set, angle);
    return detail::combined_sample_gain(set, c.weights, i);
}

struct PatternPeak
{
    std::size_t sample = 0; ///< grid sample index of the maximum
    Direction direction;    ///< its angle
    double gain = 0.0;      ///< linear gain there
};

/// Global maximum of the combined gain over the full sphere. Ties keep the
/// lowest sample index, which makes downstream ratios reproducible.
inline PatternPeak combined_pattern_peak(const PatternSet &set, const CoefficientVector &c)
{
    detail::require_normalized(set, "combined_pattern_peak");
    detail::check_weights(set, c);
    if (set.grid().kind() != GridKind::full_sphere)
        throw std::invalid_argument("combined_pattern_peak requires a full-sphere grid (a cut cannot see power "
                                    "radiated outside the cut plane)");
    PatternPeak peak;
    peak.gain = -1.0;
    for (std::size_t i = 0; i < set.grid().size(); ++i)
    {
        const double g = detail::combined_sample_gain(set, c.weights, i);
        if (g > peak.gain)
        {
            peak.gain = g;
            peak.sample = i;
        }
    }
    peak.direction = set.grid().direction(peak.sample);
    return peak;
}

/// Element factor in [0, 1]: gain towards `angle` relative to the
/// pattern's own global peak.
inline double element_factor(const PatternSet &set, const CoefficientVector &c, const Direction &angle)
{
    const PatternPeak peak = combined_pattern_peak(set, c);
    if (!(peak.gain > 0.0))
        throw std::invalid_argument("element_factor: combined pattern radiates no power");
    return combined_gain(set, c, angle) / peak.gain;
}

/// Gain-by-element-factor: G * EF = G^2 / peak. Penalizes weight vectors
/// that buy gain towards the target with strong lobes elsewhere.
inline double gef(const PatternSet &set, const CoefficientVector &c, const Direction &angle)
{
    const PatternPeak peak = combined_pattern_peak(set, c);
    if (!(peak.gain > 0.0))
        throw std::invalid_argument("gef: combined pattern radiates no power");
    const double g = combined_gain(set, c, angle);
    return g * (g / peak.gain);
}

} // namespace modeforge
