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

#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "core.hpp"

namespace modeforge {

enum class GridKind
{
    full_sphere, ///< tensor grid theta x phi with solid-angle weights
    plane_cut    ///< 1-D slice through the y-z plane, no quadrature
};

inline const char *to_string(GridKind k)
{
    return k == GridKind::full_sphere ? "full_sphere" : "plane_cut";
}

/// Maps a signed y-z-plane cut angle (radians, [-pi/2, +pi/2]) onto the
/// sphere: theta = |alpha|, phi = 90 deg for alpha >= 0 and 270 deg for
/// alpha < 0.
inline Direction cut_direction(double alpha_rad)
{
    return {std::abs(alpha_rad), alpha_rad >= 0.0 ? pi / 2.0 : 3.0 * pi / 2.0};
}

/// Angular sampling of the far field. Immutable after construction.
///
/// A full_sphere grid is the tensor product of a theta axis ([0, pi],
/// strictly increasing) and a phi axis ([0, 2*pi), strictly increasing).
/// Samples are addressed row-major, theta outer and phi inner, and each
/// carries a solid-angle quadrature weight; the weights are required to sum
/// to 4*pi within 0.1% relative, which rejects grids too coarse to
/// integrate radiated power.
///
/// A plane_cut grid holds signed cut angles in [-pi/2, +pi/2] through the
/// y-z plane (the abscissa used for codebook targets). Cuts carry zero
/// quadrature weights and are rejected by every integral-dependent
/// operation.
class AngularGrid
{
  public:
    static constexpr double angle_tolerance_rad = 1.0e-9;
    static constexpr double solid_angle_rel_tolerance = 1.0e-3;

    GridKind kind() const { return kind_; }

    /// Number of samples (n_theta * n_phi on spheres, n on cuts).
    std::size_t size() const { return weights_.size(); }

    double theta(std::size_t i) const { return kind_ == GridKind::full_sphere ? theta_rad_[i / phi_rad_.size()] : std::abs(cut_rad_[i]); }
    double phi(std::size_t i) const { return kind_ == GridKind::full_sphere ? phi_rad_[i % phi_rad_.size()] : cut_direction(cut_rad_[i]).phi; }
    double weight(std::size_t i) const { return weights_[i]; }
    Direction direction(std::size_t i) const { return {theta(i), phi(i)}; }

    /// Sphere axes (radians / degrees as generated or loaded).
    const std::vector<double> &theta_axis() const { return theta_rad_; }
    const std::vector<double> &phi_axis() const { return phi_rad_; }
    const std::vector<double> &theta_axis_deg() const { return theta_deg_; }
    const std::vector<double> &phi_axis_deg() const { return phi_deg_; }

    /// Signed cut angles (plane_cut only).
    const std::vector<double> &cut_angles() const { return cut_rad_; }
    const std::vector<double> &cut_angles_deg() const { return cut_deg_; }

    const std::vector<double> &quad_weights() const { return weights_; }

    double solid_angle() const
    {
        double s = 0.0;
        for (double w : weights_)
            s += w;
        return s;
    }

    /// Index of the sample matching (theta, phi) within angle_tolerance_rad,
    /// or nullopt when the direction is not sampled.
    std::optional<std::size_t> find_sample(const Direction &dir) const
    {
        if (kind_ == GridKind::full_sphere)
        {
            auto it = axis_lookup(theta_rad_, dir.theta);
            auto ip = axis_lookup(phi_rad_, dir.phi);
            if (!it || !ip)
                return std::nullopt;
            return *it * phi_rad_.size() + *ip;
        }
        for (std::size_t i = 0; i < cut_rad_.size(); ++i)
        {
            Direction d = cut_direction(cut_rad_[i]);
            if (std::abs(d.theta - dir.theta) <= angle_tolerance_rad &&
                std::abs(d.phi - dir.phi) <= angle_tolerance_rad)
                return i;
        }
        return std::nullopt;
    }

    /// Human-readable hint used in off-grid errors.
    std::string nearest_samples_message(const Direction &dir) const
    {
        std::ostringstream os;
        os << "direction (theta=" << rad_to_deg(dir.theta) << " deg, phi=" << rad_to_deg(dir.phi)
           << " deg) is not a grid sample";
        if (kind_ == GridKind::full_sphere)
        {
            os << "; nearest theta samples: " << nearest_two(theta_deg_, rad_to_deg(dir.theta))
               << "; nearest phi samples: " << nearest_two(phi_deg_, rad_to_deg(dir.phi));
        }
        else
        {
            double alpha = dir.phi > pi ? -rad_to_deg(dir.theta) : rad_to_deg(dir.theta);
            os << "; nearest cut angles: " << nearest_two(cut_deg_, alpha);
        }
        return os.str();
    }

    friend AngularGrid make_grid(int n_theta, int n_phi);
    friend AngularGrid make_cut_grid(int n);
    friend AngularGrid sphere_grid_from_axes_deg(std::vector<double> theta_deg, std::vector<double> phi_deg);
    friend AngularGrid cut_grid_from_angles_deg(std::vector<double> alpha_deg);

  private:
    AngularGrid() = default;

    static std::optional<std::size_t> axis_lookup(const std::vector<double> &axis, double value)
    {
        auto it = std::lower_bound(axis.begin(), axis.end(), value - angle_tolerance_rad);
        if (it == axis.end() || std::abs(*it - value) > angle_tolerance_rad)
            return std::nullopt;
        return static_cast<std::size_t>(it - axis.begin());
    }

    static std::string nearest_two(const std::vector<double> &axis_deg, double v)
    {
        double best = axis_deg.front(), second = axis_deg.back();
        double bd = std::abs(best - v), sd = std::abs(second - v);
        if (bd > sd)
        {
            std::swap(best, second);
            std::swap(bd, sd);
        }
        for (double a : axis_deg)
        {
            double d = std::abs(a - v);
            if (d < bd)
            {
                second = best;
                sd = bd;
                best = a;
                bd = d;
            }
            else if (d < sd && a != best)
            {
                second = a;
                sd = d;
            }
        }
        std::ostringstream os;
        os << best << " deg, " << second << " deg";
        return os.str();
    }

    GridKind kind_ = GridKind::full_sphere;
    std::vector<double> theta_deg_, phi_deg_; // sphere axes, degrees (serialization source)
    std::vector<double> theta_rad_, phi_rad_; // sphere axes, radians
    std::vector<double> cut_deg_, cut_rad_;   // signed cut angles (plane_cut)
    std::vector<double> weights_;             // per-sample solid angle, steradians
};

namespace detail {

inline void require_strictly_increasing(const std::vector<double> &v, const char *what)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1]))
            throw std::invalid_argument(std::string(what) + " samples must be strictly increasing without duplicates");
}

/// Cell widths around axis samples, cells clamped to [lo, hi]. For a
/// periodic axis the first/last cells wrap around instead.
inline std::vector<double> cell_widths(const std::vector<double> &x, double lo, double hi, bool periodic)
{
    const std::size_t n = x.size();
    std::vector<double> w(n);
    if (n == 1)
    {
        w[0] = hi - lo;
        return w;
    }
    for (std::size_t i = 0; i < n; ++i)
    {
        double left, right;
        if (i == 0)
            left = periodic ? 0.5 * (x[0] + (x[n - 1] - (hi - lo))) : std::max(lo, x[0] - 0.5 * (x[1] - x[0]));
        else
            left = 0.5 * (x[i - 1] + x[i]);
        if (i + 1 == n)
            right = periodic ? 0.5 * (x[n - 1] + (x[0] + (hi - lo))) : std::min(hi, x[n - 1] + 0.5 * (x[n - 1] - x[n - 2]));
        else
            right = 0.5 * (x[i] + x[i + 1]);
        w[i] = right - left;
    }
    return w;
}

} // namespace detail

/// Builds an equiangular full-sphere grid: theta from 0 to 180 deg
/// inclusive (n_theta samples), phi from 0 stepping 360/n_phi deg
/// (n_phi samples, 360 excluded). Weights are sin(theta) * dtheta * dphi.
inline AngularGrid sphere_grid_from_axes_deg(std::vector<double> theta_deg, std::vector<double> phi_deg)
{
    if (theta_deg.size() < 2 || phi_deg.empty())
        throw std::invalid_argument("sphere grid needs at least 2 theta samples and 1 phi sample");
    detail::require_strictly_increasing(theta_deg, "theta");
    detail::require_strictly_increasing(phi_deg, "phi");
    if (theta_deg.front() < 0.0 || theta_deg.back() > 180.0)
        throw std::invalid_argument("theta samples must lie in [0, 180] deg");
    if (phi_deg.front() < 0.0 || phi_deg.back() >= 360.0)
        throw std::invalid_argument("phi samples must lie in [0, 360) deg");

    AngularGrid g;
    g.kind_ = GridKind::full_sphere;
    g.theta_deg_ = std::move(theta_deg);
    g.phi_deg_ = std::move(phi_deg);
    g.theta_rad_.reserve(g.theta_deg_.size());
    for (double d : g.theta_deg_)
        g.theta_rad_.push_back(deg_to_rad(d));
    g.phi_rad_.reserve(g.phi_deg_.size());
    for (double d : g.phi_deg_)
        g.phi_rad_.push_back(deg_to_rad(d));

    const auto dtheta = detail::cell_widths(g.theta_rad_, 0.0, pi, false);
    const auto dphi = detail::cell_widths(g.phi_rad_, 0.0, 2.0 * pi, true);
    g.weights_.resize(g.theta_rad_.size() * g.phi_rad_.size());
    double sum = 0.0;
    for (std::size_t it = 0; it < g.theta_rad_.size(); ++it)
    {
        const double row = std::sin(g.theta_rad_[it]) * dtheta[it];
        for (std::size_t ip = 0; ip < g.phi_rad_.size(); ++ip)
        {
            double w = row * dphi[ip];
            if (w < 0.0)
                w = 0.0;
            g.weights_[it * g.phi_rad_.size() + ip] = w;
            sum += w;
        }
    }
    const double target = 4.0 * pi;
    if (std::abs(sum - target) > AngularGrid::solid_angle_rel_tolerance * target)
    {
        std::ostringstream os;
        os << "grid too coarse to integrate: quadrature weights sum to " << sum << " sr instead of 4*pi (" << target
           << " sr, tolerance 0.1%)";
        throw std::invalid_argument(os.str());
    }
    return g;
}

/// Equiangular full-sphere grid with n_theta x n_phi samples.
inline AngularGrid make_grid(int n_theta, int n_phi)
{
    if (n_theta < 2 || n_phi < 1)
        throw std::invalid_argument("make_grid requires n_theta >= 2 and n_phi >= 1");
    std::vector<double> theta_deg(static_cast<std::size_t>(n_theta));
    for (int i = 0; i < n_theta; ++i)
        theta_deg[static_cast<std::size_t>(i)] = 180.0 * static_cast<double>(i) / static_cast<double>(n_theta - 1);
    std::vector<double> phi_deg(static_cast<std::size_t>(n_phi));
    for (int j = 0; j < n_phi; ++j)
        phi_deg[static_cast<std::size_t>(j)] = 360.0 * static_cast<double>(j) / static_cast<double>(n_phi);
    return sphere_grid_from_axes_deg(std::move(theta_deg), std::move(phi_deg));
}

/// Cut grid from explicit signed angles (degrees, [-90, +90]).
inline AngularGrid cut_grid_from_angles_deg(std::vector<double> alpha_deg)
{
    if (alpha_deg.size() < 2)
        throw std::invalid_argument("plane cut needs at least 2 angles");
    detail::require_strictly_increasing(alpha_deg, "cut");
    if (alpha_deg.front() < -90.0 || alpha_deg.back() > 90.0)
        throw std::invalid_argument("cut angles must lie in [-90, +90] deg");
    AngularGrid g;
    g.kind_ = GridKind::plane_cut;
    g.cut_deg_ = std::move(alpha_deg);
    g.cut_rad_.reserve(g.cut_deg_.size());
    for (double d : g.cut_deg_)
        g.cut_rad_.push_back(deg_to_rad(d));
    g.weights_.assign(g.cut_deg_.size(), 0.0);
    return g;
}

/// n equidistant target angles across the y-z-plane cut, endpoints -90 and
/// +90 deg inclusive.
inline AngularGrid make_cut_grid(int n)
{
    if (n < 2)
        throw std::invalid_argument("make_cut_grid requires n >= 2");
    std::vector<double> alpha(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        alpha[static_cast<std::size_t>(i)] = -90.0 + 180.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    return cut_grid_from_angles_deg(std::move(alpha));
}

} // namespace modeforge
