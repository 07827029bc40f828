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

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "metrics.hpp"

namespace modeforge {

/// Search-space description for the quantized exhaustive search.
///
/// Phases are drawn from {2*pi*k/P : 0 <= k < P}. Amplitude levels apply to
/// the digital scheme only; the other schemes have their magnitudes fixed
/// by construction. With fix_global_phase the first active port's phase is
/// pinned to 0 — every figure of merit is invariant under a global phase
/// rotation, so this shrinks each activation pattern's phase space by a
/// factor P without losing any optimum.
struct CombinerSpec
{
    Scheme scheme = Scheme::digital;
    Criterion criterion = Criterion::gain;
    int phase_levels = 16;
    std::vector<double> amp_levels = {0.0, 0.25, 0.5, 0.75, 1.0};
    bool fix_global_phase = true;

    /// Throws std::invalid_argument on out-of-contract parameters.
    void validate() const
    {
        if (scheme != Scheme::selection && phase_levels < 2)
            throw std::invalid_argument("phase_levels must be at least 2");
        if (scheme == Scheme::digital)
        {
            if (amp_levels.empty())
                throw std::invalid_argument("amplitude level set is empty");
            for (std::size_t i = 0; i < amp_levels.size(); ++i)
            {
                if (!(amp_levels[i] >= 0.0 && amp_levels[i] <= 1.0))
                    throw std::invalid_argument("amplitude levels must lie in [0, 1]");
                if (i > 0 && !(amp_levels[i] > amp_levels[i - 1]))
                    throw std::invalid_argument("amplitude levels must be strictly increasing");
            }
            if (amp_levels.front() != 0.0 || amp_levels.back() != 1.0)
                throw std::invalid_argument("amplitude levels must include 0 and 1");
        }
    }

    /// Defaults per scheme/criterion: P = 16 phases, amplitudes
    /// {0, 1/4, 1/2, 3/4, 1}; element-factor criteria drop to P = 8 because
    /// each of their candidates costs a full-pattern pass.
    static CombinerSpec defaults_for(Scheme s, Criterion c)
    {
        CombinerSpec spec;
        spec.scheme = s;
        spec.criterion = c;
        spec.phase_levels = c == Criterion::gain ? 16 : 8;
        return spec;
    }
};

namespace detail {

/// Calls fn(mags, active) for every distinct unit-norm magnitude pattern of
/// the scheme: `mags` has one nonnegative magnitude per port, `active`
/// lists the ports with nonzero magnitude in ascending order.
///
/// Order (and thus candidate enumeration order) is deterministic:
///   selection — ports ascending;
///   analog    — the single all-on pattern;
///   hybrid    — activation masks as ascending binary numbers, port 0 the
///               least significant bit;
///   digital   — amplitude-index odometer, last port cycling fastest, with
///               proportional amplitude vectors deduplicated keeping the
///               first occurrence. Proportional vectors are detected by the
///               key a_i / a_max: equal real ratios round to equal doubles,
///               so the comparison is exact.
template <typename Fn>
inline void for_each_magnitude_pattern(const CombinerSpec &spec, int m_count, Fn &&fn)
{
    const auto m = static_cast<std::size_t>(m_count);
    std::vector<double> mags(m, 0.0);
    std::vector<int> active;

    switch (spec.scheme)
    {
    case Scheme::selection:
        for (int port = 0; port < m_count; ++port)
        {
            std::fill(mags.begin(), mags.end(), 0.0);
            mags[static_cast<std::size_t>(port)] = 1.0;
            active.assign(1, port);
            fn(mags, active);
        }
        return;

    case Scheme::analog:
    {
        const double mag = 1.0 / std::sqrt(static_cast<double>(m_count));
        std::fill(mags.begin(), mags.end(), mag);
        active.resize(m);
        for (int port = 0; port < m_count; ++port)
            active[static_cast<std::size_t>(port)] = port;
        fn(mags, active);
        return;
    }

    case Scheme::hybrid:
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m_count); ++mask)
        {
            active.clear();
            for (int port = 0; port < m_count; ++port)
                if (mask & (std::uint64_t{1} << port))
                    active.push_back(port);
            const double mag = 1.0 / std::sqrt(static_cast<double>(active.size()));
            std::fill(mags.begin(), mags.end(), 0.0);
            for (int port : active)
                mags[static_cast<std::size_t>(port)] = mag;
            fn(mags, active);
        }
        return;

    case Scheme::digital:
    {
        const std::vector<double> &levels = spec.amp_levels;
        std::map<std::vector<double>, bool> seen_rays;
        std::vector<std::size_t> idx(m, 0);
        std::vector<double> amps(m), key(m);
        for (;;)
        {
            // advance odometer at the end of the loop body; start at all-zero
            // which is skipped below
            bool all_zero = true;
            for (std::size_t p = 0; p < m; ++p)
            {
                amps[p] = levels[idx[p]];
                if (amps[p] > 0.0)
                    all_zero = false;
            }
            if (!all_zero)
            {
                double amax = 0.0;
                for (double a : amps)
                    amax = std::max(amax, a);
                for (std::size_t p = 0; p < m; ++p)
                    key[p] = amps[p] / amax;
                if (seen_rays.emplace(key, true).second)
                {
                    double sum2 = 0.0;
                    for (double a : amps)
                        sum2 += a * a;
                    const double inv_norm = 1.0 / std::sqrt(sum2);
                    active.clear();
                    for (std::size_t p = 0; p < m; ++p)
                    {
                        mags[p] = amps[p] * inv_norm;
                        if (amps[p] > 0.0)
                            active.push_back(static_cast<int>(p));
                    }
                    fn(mags, active);
                }
            }
            std::size_t pos = m;
            while (pos > 0)
            {
                if (++idx[pos - 1] < levels.size())
                    break;
                idx[pos - 1] = 0;
                --pos;
            }
            if (pos == 0)
                return;
        }
    }
    }
}

} // namespace detail

/// Streams every candidate of the search space exactly once, in a fixed
/// deterministic order, as fn(candidate, enumeration_index). The candidate
/// reference points into a reused buffer — copy it to keep it.
///
/// Phase assignments per magnitude pattern run in ascending lexicographic
/// order with the earlier active port more significant; with
/// fix_global_phase the first active port stays at phase 0.
template <typename Fn>
inline void for_each_candidate(const CombinerSpec &spec, int m_count, Fn &&fn)
{
    if (m_count < 1)
        throw std::invalid_argument("candidate enumeration needs at least one port");
    spec.validate();

    CoefficientVector cand;
    cand.scheme = spec.scheme;
    cand.weights.assign(static_cast<std::size_t>(m_count), cdouble(0.0, 0.0));
    std::size_t index = 0;

    const int P = spec.phase_levels;
    std::vector<int> phase_idx;

    detail::for_each_magnitude_pattern(spec, m_count, [&](const std::vector<double> &mags,
                                                          const std::vector<int> &active) {
        if (spec.scheme == Scheme::selection)
        {
            std::fill(cand.weights.begin(), cand.weights.end(), cdouble(0.0, 0.0));
            cand.weights[static_cast<std::size_t>(active[0])] = cdouble(1.0, 0.0);
            fn(static_cast<const CoefficientVector &>(cand), index++);
            return;
        }
        const std::size_t pinned = spec.fix_global_phase ? 1 : 0;
        const std::size_t n_free = active.size() - pinned;
        phase_idx.assign(n_free, 0);
        for (;;)
        {
            std::fill(cand.weights.begin(), cand.weights.end(), cdouble(0.0, 0.0));
            for (std::size_t a = 0; a < active.size(); ++a)
            {
                const double mag = mags[static_cast<std::size_t>(active[a])];
                if (a < pinned || phase_idx[a - pinned] == 0)
                {
                    cand.weights[static_cast<std::size_t>(active[a])] = cdouble(mag, 0.0);
                }
                else
                {
                    const double alpha = 2.0 * pi * static_cast<double>(phase_idx[a - pinned]) / static_cast<double>(P);
                    cand.weights[static_cast<std::size_t>(active[a])] = mag * cdouble(std::cos(alpha), std::sin(alpha));
                }
            }
            fn(static_cast<const CoefficientVector &>(cand), index++);

            std::size_t pos = n_free;
            while (pos > 0)
            {
                if (++phase_idx[pos - 1] < P)
                    break;
                phase_idx[pos - 1] = 0;
                --pos;
            }
            if (pos == 0)
                break;
        }
    });

    if (index == 0)
        throw std::invalid_argument("candidate set is empty");
}

/// Materialized candidate list (testing / small spaces).
inline std::vector<CoefficientVector> enumerate_candidates(const CombinerSpec &spec, int m_count)
{
    std::vector<CoefficientVector> out;
    for_each_candidate(spec, m_count, [&](const CoefficientVector &c, std::size_t) { out.push_back(c); });
    return out;
}

/// Number of candidates for_each_candidate will emit.
inline std::uint64_t candidate_count(const CombinerSpec &spec, int m_count)
{
    if (m_count < 1)
        throw std::invalid_argument("candidate enumeration needs at least one port");
    spec.validate();
    std::uint64_t total = 0;
    detail::for_each_magnitude_pattern(spec, m_count, [&](const std::vector<double> &, const std::vector<int> &active) {
        if (spec.scheme == Scheme::selection)
        {
            ++total;
            return;
        }
        const std::size_t n_free = active.size() - (spec.fix_global_phase ? 1 : 0);
        std::uint64_t n = 1;
        for (std::size_t i = 0; i < n_free; ++i)
            n *= static_cast<std::uint64_t>(spec.phase_levels);
        total += n;
    });
    return total;
}

/// Result of an optimizer: the winning weights and the achieved value of
/// the optimized figure of merit (linear units; gain/GEF include the
/// 4*pi/2Z0 scale, EF is the unitless ratio).
struct CombinerResult
{
    CoefficientVector c;
    double value = 0.0;
};

/// Closed-form gain maximizer for unconstrained unit-norm weights.
///
/// |F c|^2 is the Rayleigh quotient of the M×M matrix F^H F; its maximum is
/// the dominant eigenvalue, attained at the dominant eigenvector. Because F
/// has only two rows, the nonzero spectrum lives in the 2×2 Gram matrix
/// G2 = F F^H: take its dominant eigenvector u (analytic eigensolve) and
/// map back with c = F^H u / |F^H u|.
///
/// The achieved value is |F c|^2 recomputed from the returned c, in raw
/// stored-field units (multiply by gain_scale(z0) for linear gain). The
/// returned c is phase-fixed so its first nonzero entry is real positive.
inline CombinerResult optimize_digital_gain(const PatternMatrix &f)
{
    const int m_count = f.num_ports();
    if (m_count < 1)
        throw std::invalid_argument("pattern matrix has no ports");

    // G2 = F F^H
    double g11 = 0.0, g22 = 0.0;
    cdouble g12(0.0, 0.0);
    for (int m = 0; m < m_count; ++m)
    {
        const cdouble a = f.f_phi[static_cast<std::size_t>(m)];
        const cdouble b = f.f_theta[static_cast<std::size_t>(m)];
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || !std::isfinite(b.real()) ||
            !std::isfinite(b.imag()))
            throw std::invalid_argument("pattern matrix has non-finite entries");
        g11 += mag2(a);
        g22 += mag2(b);
        g12 += a * std::conj(b);
    }
    if (g11 + g22 <= 0.0)
        throw std::invalid_argument("pattern matrix is all-zero: no port radiates toward this angle");

    // dominant eigenpair of [[g11, g12], [conj(g12), g22]]
    const double half_diff = 0.5 * (g11 - g22);
    const double radius = std::sqrt(half_diff * half_diff + mag2(g12));
    const double lambda = 0.5 * (g11 + g22) + radius;

    // Two algebraically equivalent eigenvector forms; pick the better
    // conditioned one. Both collapse to zero only when G2 is a multiple of
    // the identity, where the first basis vector is used (any u is optimal).
    cdouble u1, u2;
    const double r1 = mag2(g12) + (lambda - g11) * (lambda - g11);
    const double r2 = (lambda - g22) * (lambda - g22) + mag2(g12);
    if (r1 >= r2)
    {
        u1 = g12;
        u2 = cdouble(lambda - g11, 0.0);
    }
    else
    {
        u1 = cdouble(lambda - g22, 0.0);
        u2 = std::conj(g12);
    }
    double un = std::sqrt(mag2(u1) + mag2(u2));
    if (!(un > 0.0) || un <= 1.0e-15 * lambda)
    {
        u1 = cdouble(1.0, 0.0);
        u2 = cdouble(0.0, 0.0);
        un = 1.0;
    }
    u1 /= un;
    u2 /= un;

    // c = F^H u, normalized
    CombinerResult res;
    res.c.scheme = Scheme::digital;
    res.c.weights.resize(static_cast<std::size_t>(m_count));
    double cn2 = 0.0;
    for (int m = 0; m < m_count; ++m)
    {
        const cdouble w = std::conj(f.f_phi[static_cast<std::size_t>(m)]) * u1 +
                          std::conj(f.f_theta[static_cast<std::size_t>(m)]) * u2;
        res.c.weights[static_cast<std::size_t>(m)] = w;
        cn2 += mag2(w);
    }
    const double cn = std::sqrt(cn2);
    if (!(cn > 0.0))
        throw std::invalid_argument("pattern matrix is all-zero: no port radiates toward this angle");
    for (auto &w : res.c.weights)
        w /= cn;

    // pin the first nonzero entry's phase to 0
    for (const cdouble w : res.c.weights)
    {
        const double a = std::abs(w);
        if (a > CoefficientVector::zero_tolerance)
        {
            const cdouble rot = std::conj(w) / a;
            for (auto &v : res.c.weights)
                v *= rot;
            break;
        }
    }

    const auto [fp, ft] = f.project(res.c.weights);
    res.value = mag2(fp) + mag2(ft);
    return res;
}

/// Quantized exhaustive search over the scheme's candidate set, maximizing
/// the chosen criterion towards `target`. Ties keep the earliest candidate
/// in enumeration order, so results are reproducible across runs.
inline CombinerResult optimize_search(const PatternSet &set, const Direction &target, const CombinerSpec &spec)
{
    detail::require_normalized(set, "optimize_search");
    spec.validate();
    const std::size_t target_idx = detail::locate_sample(set, target);
    const bool needs_peak = spec.criterion != Criterion::gain;
    if (needs_peak && set.grid().kind() != GridKind::full_sphere)
        throw std::invalid_argument("element-factor criteria need a full-sphere grid: the pattern peak can lie "
                                    "outside a cut plane");

    const PatternMatrix f = pattern_matrix(set, target);
    const double z0 = set.z0_ohm();
    const std::size_t samples = set.grid().size();

    CombinerResult best;
    best.value = -1.0;
    for_each_candidate(spec, set.num_ports(), [&](const CoefficientVector &cand, std::size_t) {
        double value;
        if (!needs_peak)
        {
            const auto [fp, ft] = f.project(cand.weights);
            value = detail::gain_from_fields(z0, fp, ft);
        }
        else
        {
            const double g = detail::combined_sample_gain(set, cand.weights, target_idx);
            double peak = 0.0;
            for (std::size_t i = 0; i < samples; ++i)
            {
                const double gi = detail::combined_sample_gain(set, cand.weights, i);
                if (gi > peak)
                    peak = gi;
            }
            if (!(peak > 0.0))
                return; // candidate radiates nothing; cannot win
            value = spec.criterion == Criterion::ef ? g / peak : g * (g / peak);
        }
        if (value > best.value)
        {
            best.value = value;
            best.c = cand;
        }
    });
    if (best.value < 0.0)
        throw std::invalid_argument("candidate set is empty");
    return best;
}

/// One-hot weight vector at the port with the largest gain towards
/// `target` (ties keep the lowest port index).
inline CoefficientVector mode_selection(const PatternSet &set, const Direction &target)
{
    detail::require_normalized(set, "mode_selection");
    const std::size_t i = detail::locate_sample(set, target);
    int best_port = -1;
    double best_gain = 0.0;
    for (int m = 0; m < set.num_ports(); ++m)
    {
        const double g = detail::gain_from_fields(set.z0_ohm(), set.f_phi(m)[i], set.f_theta(m)[i]);
        if (g > best_gain)
        {
            best_gain = g;
            best_port = m;
        }
    }
    if (best_port < 0)
        throw std::invalid_argument("mode_selection: every port is null towards the target");
    return selection_vector(set.num_ports(), best_port);
}

} // namespace modeforge
