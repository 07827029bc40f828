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

#include <catch2/catch_amalgamated.hpp>

#include <modeforge/angular_grid.hpp>

using namespace modeforge;

TEST_CASE("make_grid rejects degenerate sizes")
{
    CHECK_THROWS_AS(make_grid(1, 10), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(10, 0), std::invalid_argument);
    // (2, 1) builds a formally valid axis pair but cannot integrate the
    // sphere, so the quadrature gate rejects it
    CHECK_THROWS_WITH(make_grid(2, 1), Catch::Matchers::ContainsSubstring("too coarse"));
}

TEST_CASE("equiangular grids integrate the sphere")
{
    // oracle: independent direct summation of sin(theta)*dtheta*dphi
    for (auto [nt, np] : {std::pair{181, 360}, std::pair{91, 180}})
    {
        const AngularGrid g = make_grid(nt, np);
        REQUIRE(g.kind() == GridKind::full_sphere);
        REQUIRE(g.size() == static_cast<std::size_t>(nt) * np);
        double sum = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
        {
            CHECK(g.weight(i) >= 0.0);
            sum += g.weight(i);
        }
        CHECK(std::abs(sum / (4.0 * pi) - 1.0) < 1.0e-3);
        CHECK(sum == Catch::Approx(g.solid_angle()));
    }
}

TEST_CASE("grid samples are theta-major")
{
    const AngularGrid g = make_grid(31, 24);
    // sample index i = i_theta * n_phi + i_phi
    CHECK(g.theta(0) == 0.0);
    CHECK(g.phi(0) == 0.0);
    CHECK(g.theta(24) == Catch::Approx(deg_to_rad(6.0)));
    CHECK(g.phi(24) == 0.0);
    CHECK(g.phi(25) == Catch::Approx(deg_to_rad(15.0)));
    CHECK(g.theta_axis_deg().front() == 0.0);
    CHECK(g.theta_axis_deg().back() == 180.0);
    CHECK(g.phi_axis_deg().back() == 345.0); // 360 excluded
}

TEST_CASE("find_sample locates exact directions only")
{
    const AngularGrid g = make_grid(31, 24);
    auto hit = g.find_sample({deg_to_rad(12.0), deg_to_rad(90.0)});
    REQUIRE(hit.has_value());
    CHECK(*hit == 2u * 24u + 6u);
    CHECK_FALSE(g.find_sample({deg_to_rad(12.5), deg_to_rad(90.0)}).has_value());
    CHECK_FALSE(g.find_sample({deg_to_rad(12.0), deg_to_rad(91.0)}).has_value());
    // error text lists the nearest axis samples
    const std::string msg = g.nearest_samples_message({deg_to_rad(12.5), deg_to_rad(91.0)});
    CHECK(msg.find("12") != std::string::npos);
    CHECK(msg.find("not a grid sample") != std::string::npos);
}

TEST_CASE("cut grids cover -90..+90 with equidistant angles")
{
    SECTION("37 angles give exactly 5 degree spacing")
    {
        const AngularGrid cut = make_cut_grid(37);
        REQUIRE(cut.kind() == GridKind::plane_cut);
        REQUIRE(cut.size() == 37u);
        CHECK(cut.cut_angles_deg().front() == -90.0);
        CHECK(cut.cut_angles_deg().back() == 90.0);
        for (std::size_t i = 1; i < 37; ++i)
            CHECK(cut.cut_angles_deg()[i] - cut.cut_angles_deg()[i - 1] == Catch::Approx(5.0).margin(1e-12));
        for (std::size_t i = 0; i < 37; ++i)
            CHECK(cut.weight(i) == 0.0);
    }
    SECTION("2 angles are the endpoints")
    {
        const AngularGrid cut = make_cut_grid(2);
        CHECK(cut.cut_angles_deg() == std::vector<double>{-90.0, 90.0});
    }
    SECTION("181 angles give 1 degree spacing")
    {
        const AngularGrid cut = make_cut_grid(181);
        CHECK(cut.cut_angles_deg()[91] == Catch::Approx(1.0).margin(1e-12));
    }
    CHECK_THROWS_AS(make_cut_grid(1), std::invalid_argument);
}

TEST_CASE("cut angles map onto the y-z plane")
{
    // alpha >= 0 -> phi = 90 deg, alpha < 0 -> phi = 270 deg, theta = |alpha|
    const Direction up = cut_direction(deg_to_rad(30.0));
    CHECK(up.theta == Catch::Approx(deg_to_rad(30.0)));
    CHECK(up.phi == Catch::Approx(deg_to_rad(90.0)));
    const Direction down = cut_direction(deg_to_rad(-30.0));
    CHECK(down.theta == Catch::Approx(deg_to_rad(30.0)));
    CHECK(down.phi == Catch::Approx(deg_to_rad(270.0)));
    const Direction zenith = cut_direction(0.0);
    CHECK(zenith.theta == 0.0);
    CHECK(zenith.phi == Catch::Approx(deg_to_rad(90.0)));
}

TEST_CASE("cut samples resolve against sphere-style directions")
{
    const AngularGrid cut = make_cut_grid(37);
    auto hit = cut.find_sample(cut_direction(deg_to_rad(-45.0)));
    REQUIRE(hit.has_value());
    CHECK(*hit == 9u);
    CHECK_FALSE(cut.find_sample({deg_to_rad(45.0), deg_to_rad(0.0)}).has_value());
}

TEST_CASE("axis validation")
{
    CHECK_THROWS_WITH(sphere_grid_from_axes_deg({0.0, 0.0, 180.0}, {0.0}),
                      Catch::Matchers::ContainsSubstring("strictly increasing"));
    CHECK_THROWS_WITH(sphere_grid_from_axes_deg({0.0, 190.0}, {0.0}),
                      Catch::Matchers::ContainsSubstring("[0, 180]"));
    CHECK_THROWS_WITH(sphere_grid_from_axes_deg({0.0, 90.0, 180.0}, {0.0, 360.0}),
                      Catch::Matchers::ContainsSubstring("[0, 360)"));
    CHECK_THROWS_AS(cut_grid_from_angles_deg({-91.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(cut_grid_from_angles_deg({0.0, 0.0}), std::invalid_argument);
}
