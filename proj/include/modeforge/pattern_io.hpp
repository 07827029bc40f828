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

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pattern_set.hpp"

namespace modeforge {

/// Pattern file layout (angles in degrees, field samples row-major with
/// theta outer and phi inner):
///
///   { "grid": { "kind": "full_sphere", "theta_deg": [...], "phi_deg": [...] },
///     "z0_ohm": 376.730313668,
///     "normalized": true,
///     "ports": [ { "f_phi_re": [...], "f_phi_im": [...],
///                  "f_theta_re": [...], "f_theta_im": [...] }, ... ] }
///
/// For full_sphere grids theta_deg/phi_deg are the two axes; for plane_cut
/// grids they are per-sample lists of equal length.

inline nlohmann::ordered_json patterns_to_json(const PatternSet &set)
{
    nlohmann::ordered_json grid;
    grid["kind"] = to_string(set.grid().kind());
    if (set.grid().kind() == GridKind::full_sphere)
    {
        grid["theta_deg"] = set.grid().theta_axis_deg();
        grid["phi_deg"] = set.grid().phi_axis_deg();
    }
    else
    {
        std::vector<double> theta_deg, phi_deg;
        for (std::size_t i = 0; i < set.grid().size(); ++i)
        {
            theta_deg.push_back(std::abs(set.grid().cut_angles_deg()[i]));
            phi_deg.push_back(set.grid().cut_angles_deg()[i] >= 0.0 ? 90.0 : 270.0);
        }
        grid["theta_deg"] = theta_deg;
        grid["phi_deg"] = phi_deg;
    }

    nlohmann::ordered_json root;
    root["grid"] = std::move(grid);
    root["z0_ohm"] = set.z0_ohm();
    root["normalized"] = set.normalized();
    auto &ports = root["ports"] = nlohmann::ordered_json::array();
    for (int m = 0; m < set.num_ports(); ++m)
    {
        nlohmann::ordered_json port;
        std::vector<double> re, im;
        re.reserve(set.grid().size());
        im.reserve(set.grid().size());
        for (cdouble v : set.f_phi(m))
        {
            re.push_back(v.real());
            im.push_back(v.imag());
        }
        port["f_phi_re"] = re;
        port["f_phi_im"] = im;
        re.clear();
        im.clear();
        for (cdouble v : set.f_theta(m))
        {
            re.push_back(v.real());
            im.push_back(v.imag());
        }
        port["f_theta_re"] = re;
        port["f_theta_im"] = im;
        ports.push_back(std::move(port));
    }
    return root;
}

namespace detail {

inline std::vector<double> double_array(const nlohmann::json &j, const char *key)
{
    if (!j.contains(key) || !j[key].is_array())
        throw std::runtime_error(std::string("pattern file: missing or invalid array '") + key + "'");
    std::vector<double> out;
    out.reserve(j[key].size());
    for (const auto &v : j[key])
    {
        if (!v.is_number())
            throw std::runtime_error(std::string("pattern file: non-numeric entry in '") + key + "'");
        out.push_back(v.get<double>());
    }
    return out;
}

inline std::vector<cdouble> complex_array(const nlohmann::json &port, const char *re_key, const char *im_key,
                                          std::size_t expected, int port_index)
{
    auto re = double_array(port, re_key);
    auto im = double_array(port, im_key);
    if (re.size() != expected || im.size() != expected)
    {
        std::ostringstream os;
        os << "pattern file: port " << port_index + 1 << " field '" << re_key << "' has " << re.size() << "/"
           << im.size() << " samples, grid has " << expected;
        throw std::runtime_error(os.str());
    }
    std::vector<cdouble> out(expected);
    for (std::size_t i = 0; i < expected; ++i)
    {
        if (!std::isfinite(re[i]) || !std::isfinite(im[i]))
        {
            std::ostringstream os;
            os << "pattern file: non-finite value at port " << port_index + 1 << ", sample " << i;
            throw std::runtime_error(os.str());
        }
        out[i] = cdouble(re[i], im[i]);
    }
    return out;
}

} // namespace detail

inline PatternSet patterns_from_json(const nlohmann::json &root)
{
    if (!root.is_object() || !root.contains("grid") || !root.contains("ports"))
        throw std::runtime_error("pattern file: expected object with 'grid' and 'ports'");
    const auto &jgrid = root["grid"];
    const std::string kind = jgrid.value("kind", "");
    auto theta_deg = detail::double_array(jgrid, "theta_deg");
    auto phi_deg = detail::double_array(jgrid, "phi_deg");

    AngularGrid grid = [&]() {
        try
        {
            if (kind == "full_sphere")
                return sphere_grid_from_axes_deg(std::move(theta_deg), std::move(phi_deg));
            if (kind == "plane_cut")
            {
                if (theta_deg.size() != phi_deg.size())
                    throw std::invalid_argument("per-sample theta_deg/phi_deg lengths differ");
                std::vector<double> alpha(theta_deg.size());
                for (std::size_t i = 0; i < theta_deg.size(); ++i)
                {
                    const double phi = phi_deg[i];
                    if (std::abs(phi - 90.0) > 1.0e-9 && std::abs(phi - 270.0) > 1.0e-9)
                        throw std::invalid_argument("plane-cut samples must lie at phi = 90 or 270 deg");
                    alpha[i] = std::abs(phi - 270.0) <= 1.0e-9 ? -theta_deg[i] : theta_deg[i];
                }
                return cut_grid_from_angles_deg(std::move(alpha));
            }
            throw std::invalid_argument("unknown grid kind '" + kind + "'");
        }
        catch (const std::invalid_argument &e)
        {
            throw std::runtime_error(std::string("pattern file: invalid grid: ") + e.what());
        }
    }();

    const double z0 = root.value("z0_ohm", 0.0);
    if (std::abs(z0 - free_space_impedance_ohm) > 1.0e-6)
        throw std::runtime_error("pattern file: unsupported z0_ohm (expected 376.730313668)");
    const bool normalized = root.value("normalized", false);

    const auto &jports = root["ports"];
    if (!jports.is_array() || jports.empty())
        throw std::runtime_error("pattern file: 'ports' must be a non-empty array");
    std::vector<std::vector<cdouble>> f_phi, f_theta;
    for (std::size_t m = 0; m < jports.size(); ++m)
    {
        f_phi.push_back(detail::complex_array(jports[m], "f_phi_re", "f_phi_im", grid.size(), static_cast<int>(m)));
        f_theta.push_back(detail::complex_array(jports[m], "f_theta_re", "f_theta_im", grid.size(), static_cast<int>(m)));
    }
    try
    {
        return PatternSet::from_fields(std::move(grid), std::move(f_phi), std::move(f_theta), normalized);
    }
    catch (const std::invalid_argument &e)
    {
        throw std::runtime_error(std::string("pattern file: ") + e.what());
    }
}

inline void save_patterns(const PatternSet &set, const std::string &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << patterns_to_json(set).dump(1, '\t') << '\n';
    if (!out.good())
        throw std::runtime_error("write failed for '" + path + "'");
}

inline PatternSet load_patterns(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open pattern file '" + path + "'");
    nlohmann::json root;
    try
    {
        in >> root;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw std::runtime_error("pattern file '" + path + "' is not valid JSON: " + e.what());
    }
    return patterns_from_json(root);
}

} // namespace modeforge
