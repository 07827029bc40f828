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

#include <cmath>
#include <complex>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "angular_grid.hpp"
#include "core.hpp"

namespace modeforge {

/// Far-field patterns of the M ports of a multi-mode antenna, sampled on a
/// shared angular grid. Stores the two transverse field components per port
/// and sample. Immutable after construction; operations return new sets.
///
/// When `normalized` is set, each port radiates unit power:
/// sum_i w_i * (|f_phi_i|^2 + |f_theta_i|^2) / (2 * Z0) == 1, so the gain of
/// a weighted combination is gain_scale(z0) * |sum_m c_m f_m|^2.
class PatternSet
{
  public:
    static PatternSet from_fields(AngularGrid grid, std::vector<std::vector<cdouble>> f_phi,
                                  std::vector<std::vector<cdouble>> f_theta, bool normalized)
    {
        if (f_phi.empty() || f_phi.size() != f_theta.size())
            throw std::invalid_argument("pattern set needs M >= 1 ports with both field components");
        const std::size_t samples = grid.size();
        for (std::size_t m = 0; m < f_phi.size(); ++m)
        {
            if (f_phi[m].size() != samples || f_theta[m].size() != samples)
            {
                std::ostringstream os;
                os << "port " << m + 1 << ": field arrays have " << f_phi[m].size() << "/" << f_theta[m].size()
                   << " samples, grid has " << samples;
                throw std::invalid_argument(os.str());
            }
            for (std::size_t i = 0; i < samples; ++i)
            {
                if (!std::isfinite(f_phi[m][i].real()) || !std::isfinite(f_phi[m][i].imag()) ||
                    !std::isfinite(f_theta[m][i].real()) || !std::isfinite(f_theta[m][i].imag()))
                {
                    std::ostringstream os;
                    os << "non-finite field value at port " << m + 1 << ", sample " << i;
                    throw std::invalid_argument(os.str());
                }
            }
        }
        PatternSet s;
        s.grid_ = std::move(grid);
        s.f_phi_ = std::move(f_phi);
        s.f_theta_ = std::move(f_theta);
        s.normalized_ = normalized;
        return s;
    }

    const AngularGrid &grid() const { return grid_; }
    int num_ports() const { return static_cast<int>(f_phi_.size()); }
    bool normalized() const { return normalized_; }
    double z0_ohm() const { return free_space_impedance_ohm; }

    std::span<const cdouble> f_phi(int port) const { return f_phi_[check_port(port)]; }
    std::span<const cdouble> f_theta(int port) const { return f_theta_[check_port(port)]; }

  private:
    std::size_t check_port(int port) const
    {
        if (port < 0 || port >= num_ports())
            throw std::invalid_argument("port index out of range");
        return static_cast<std::size_t>(port);
    }

    AngularGrid grid_{make_cut_grid(2)}; // replaced by from_fields
    std::vector<std::vector<cdouble>> f_phi_, f_theta_;
    bool normalized_ = false;

    PatternSet() = default;
};

/// Power inner product of two ports over the full sphere:
/// (1 / 2*Z0) * sum_i w_i * (f_phi_p * conj(f_phi_q) + f_theta_p * conj(f_theta_q)).
inline cdouble power_inner_product(const PatternSet &set, int p, int q)
{
    if (set.grid().kind() != GridKind::full_sphere)
        throw std::invalid_argument("power inner product requires a full-sphere grid");
    auto fpp = set.f_phi(p), fpq = set.f_phi(q);
    auto ftp = set.f_theta(p), ftq = set.f_theta(q);
    const auto &w = set.grid().quad_weights();
    cdouble acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        acc += w[i] * (fpp[i] * std::conj(fpq[i]) + ftp[i] * std::conj(ftq[i]));
    return acc / (2.0 * free_space_impedance_ohm);
}

/// Radiated power of one port relative to unit input power.
inline double port_power(const PatternSet &set, int m) { return power_inner_product(set, m, m).real(); }

/// Scales every port to unit radiated power. Rejects plane cuts (no
/// quadrature) and ports with zero total power.
inline PatternSet normalize(const PatternSet &set)
{
    if (set.grid().kind() != GridKind::full_sphere)
        throw std::invalid_argument("normalize requires a full-sphere grid (plane cuts carry no quadrature)");
    const int m_count = set.num_ports();
    std::vector<std::vector<cdouble>> f_phi(static_cast<std::size_t>(m_count)), f_theta(static_cast<std::size_t>(m_count));
    for (int m = 0; m < m_count; ++m)
    {
        const double p = port_power(set, m);
        if (!(p > 0.0) || !std::isfinite(p))
        {
            std::ostringstream os;
            os << "port " << m + 1 << " has zero radiated power, cannot normalize";
            throw std::invalid_argument(os.str());
        }
        const double scale = 1.0 / std::sqrt(p);
        auto fp = set.f_phi(m);
        auto ft = set.f_theta(m);
        auto &op = f_phi[static_cast<std::size_t>(m)];
        auto &ot = f_theta[static_cast<std::size_t>(m)];
        op.resize(fp.size());
        ot.resize(ft.size());
        for (std::size_t i = 0; i < fp.size(); ++i)
        {
            op[i] = fp[i] * scale;
            ot[i] = ft[i] * scale;
        }
    }
    return PatternSet::from_fields(set.grid(), std::move(f_phi), std::move(f_theta), true);
}

/// Gram-Schmidt in port order under the power inner product. The result has
/// an identity Gram matrix (ports uncoupled, each at unit power). Throws
/// when a port is linearly dependent on its predecessors (residual norm
/// below 1e-9).
inline PatternSet orthonormalize(const PatternSet &set)
{
    if (set.grid().kind() != GridKind::full_sphere)
        throw std::invalid_argument("orthonormalize requires a full-sphere grid");
    constexpr double rank_tolerance = 1.0e-9;
    const int m_count = set.num_ports();
    const std::size_t samples = set.grid().size();
    const auto &w = set.grid().quad_weights();
    const double inv_2z0 = 1.0 / (2.0 * free_space_impedance_ohm);

    std::vector<std::vector<cdouble>> u_phi(static_cast<std::size_t>(m_count)), u_theta(static_cast<std::size_t>(m_count));
    for (int m = 0; m < m_count; ++m)
    {
        std::vector<cdouble> vp(set.f_phi(m).begin(), set.f_phi(m).end());
        std::vector<cdouble> vt(set.f_theta(m).begin(), set.f_theta(m).end());
        // modified Gram-Schmidt, one extra pass for numerical safety
        for (int pass = 0; pass < 2; ++pass)
        {
            for (int k = 0; k < m; ++k)
            {
                const auto &up = u_phi[static_cast<std::size_t>(k)];
                const auto &ut = u_theta[static_cast<std::size_t>(k)];
                cdouble proj = 0.0;
                for (std::size_t i = 0; i < samples; ++i)
                    proj += w[i] * (vp[i] * std::conj(up[i]) + vt[i] * std::conj(ut[i]));
                proj *= inv_2z0;
                for (std::size_t i = 0; i < samples; ++i)
                {
                    vp[i] -= proj * up[i];
                    vt[i] -= proj * ut[i];
                }
            }
        }
        double norm2 = 0.0;
        for (std::size_t i = 0; i < samples; ++i)
            norm2 += w[i] * (mag2(vp[i]) + mag2(vt[i]));
        norm2 *= inv_2z0;
        const double norm = std::sqrt(std::max(norm2, 0.0));
        if (norm < rank_tolerance)
        {
            std::ostringstream os;
            os << "port " << m + 1 << " is linearly dependent on earlier ports (Gram-Schmidt residual " << norm << ")";
            throw std::invalid_argument(os.str());
        }
        const double inv = 1.0 / norm;
        for (std::size_t i = 0; i < samples; ++i)
        {
            vp[i] *= inv;
            vt[i] *= inv;
        }
        u_phi[static_cast<std::size_t>(m)] = std::move(vp);
        u_theta[static_cast<std::size_t>(m)] = std::move(vt);
    }
    return PatternSet::from_fields(set.grid(), std::move(u_phi), std::move(u_theta), true);
}

namespace detail {

/// Uniform double in [0, 1) from the raw engine stream; avoids
/// implementation-defined std::uniform_real_distribution so that seeds give
/// identical patterns on every platform.
inline double uniform01(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform_range(std::mt19937_64 &rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

struct Vec3
{
    double x, y, z;
};

inline Vec3 unit_vector(double theta, double phi)
{
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

inline double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

} // namespace detail

/// Deterministic stand-in for measured multi-mode patterns: M tilted
/// cos^q lobes with distinct main-beam directions spread across the upper
/// hemisphere, alternating phi/theta polarization, a seed-driven phase
/// gradient per port, then orthonormalized. The result is normalized by
/// construction.
inline PatternSet synthesize_prototype_patterns(int m_count, const AngularGrid &grid, std::uint64_t seed)
{
    if (m_count < 1)
        throw std::invalid_argument("need at least one port");
    if (grid.kind() != GridKind::full_sphere)
        throw std::invalid_argument("pattern synthesis requires a full-sphere grid (cannot normalize on a cut)");

    std::mt19937_64 rng(seed);
    const std::size_t samples = grid.size();
    std::vector<std::vector<cdouble>> f_phi(static_cast<std::size_t>(m_count)), f_theta(static_cast<std::size_t>(m_count));

    std::vector<detail::Vec3> dirs(samples);
    for (std::size_t i = 0; i < samples; ++i)
        dirs[i] = detail::unit_vector(grid.theta(i), grid.phi(i));

    for (int m = 0; m < m_count; ++m)
    {
        // Ports alternate polarization. Each polarization class clusters
        // around its own side of the cut (phi-polarized ports near -45 deg,
        // theta-polarized near +45 deg), members fanned slightly along the
        // cut and tilted to alternating sides of the cut plane. Same-row
        // fields then stay comparable over a broad stretch of the cut,
        // which is what lets weighted combinations beat any single port
        // there — the broad, mutually overlapping modes of a real
        // multi-mode radiator behave the same way.
        const int k = m / 2;                       // index within the class
        const int class_size = (m_count + 1 - m % 2) / 2;
        const double center = m_count == 1 ? 0.0 : (m % 2 == 0 ? -40.0 : 40.0);
        const double base_cut = center + 30.0 * (k - 0.5 * (class_size - 1));
        const double cut_deg = base_cut + detail::uniform_range(rng, -10.0, 10.0);
        const double tilt_deg = (k % 2 == 0 ? 1.0 : -1.0) * detail::uniform_range(rng, 18.0, 28.0);
        const double axis_theta = deg_to_rad(std::min(std::abs(cut_deg), 89.0));
        const double axis_phi = deg_to_rad((cut_deg >= 0.0 ? 90.0 : 270.0) + tilt_deg);
        const detail::Vec3 axis = detail::unit_vector(axis_theta, axis_phi);

        // lobe sharpness in [1, 4], biased toward broad lobes
        const double u = detail::uniform01(rng);
        const double q = 1.0 + 3.0 * u * u;
        // phase-center offset in wavelengths; gives each lobe a smooth
        // seed-driven phase gradient
        const double off_theta = std::acos(1.0 - 2.0 * detail::uniform01(rng));
        const double off_phi = detail::uniform_range(rng, 0.0, 2.0 * pi);
        const double off_len = detail::uniform_range(rng, 0.15, 0.6);
        const detail::Vec3 offset = {off_len * std::sin(off_theta) * std::cos(off_phi),
                                     off_len * std::sin(off_theta) * std::sin(off_phi),
                                     off_len * std::cos(off_theta)};

        std::vector<cdouble> field(samples);
        for (std::size_t i = 0; i < samples; ++i)
        {
            const double c = detail::dot(dirs[i], axis);
            const double amp = c > 0.0 ? std::pow(c, q) : 0.0;
            const double phase = 2.0 * pi * detail::dot(dirs[i], offset);
            field[i] = amp * cdouble(std::cos(phase), std::sin(phase));
        }
        const std::size_t mi = static_cast<std::size_t>(m);
        if (m % 2 == 0)
        {
            f_phi[mi] = std::move(field);
            f_theta[mi].assign(samples, 0.0);
        }
        else
        {
            f_theta[mi] = std::move(field);
            f_phi[mi].assign(samples, 0.0);
        }
    }
    return orthonormalize(PatternSet::from_fields(grid, std::move(f_phi), std::move(f_theta), false));
}

/// Content hash over grid geometry and field data; codebooks carry it so
/// that results from different pattern sets cannot be mixed.
inline std::string pattern_fingerprint(const PatternSet &set)
{
    detail::Fnv1a64 h;
    h.add(std::string(to_string(set.grid().kind())));
    if (set.grid().kind() == GridKind::full_sphere)
    {
        h.add(static_cast<std::uint64_t>(set.grid().theta_axis_deg().size()));
        for (double v : set.grid().theta_axis_deg())
            h.add(v);
        h.add(static_cast<std::uint64_t>(set.grid().phi_axis_deg().size()));
        for (double v : set.grid().phi_axis_deg())
            h.add(v);
    }
    else
    {
        h.add(static_cast<std::uint64_t>(set.grid().cut_angles_deg().size()));
        for (double v : set.grid().cut_angles_deg())
            h.add(v);
    }
    h.add(static_cast<std::uint64_t>(set.num_ports()));
    h.add(static_cast<std::uint64_t>(set.normalized() ? 1 : 0));
    for (int m = 0; m < set.num_ports(); ++m)
    {
        for (cdouble v : set.f_phi(m))
        {
            h.add(v.real());
            h.add(v.imag());
        }
        for (cdouble v : set.f_theta(m))
        {
            h.add(v.real());
            h.add(v.imag());
        }
    }
    return h.hex();
}

} // namespace modeforge
