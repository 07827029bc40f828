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

#include <random>

#include <modeforge/combiners.hpp>
#include <modeforge/pattern_set.hpp>

using namespace modeforge;

namespace {

PatternMatrix matrix(std::vector<cdouble> f_phi, std::vector<cdouble> f_theta)
{
    PatternMatrix f;
    f.f_phi = std::move(f_phi);
    f.f_theta = std::move(f_theta);
    return f;
}

/// Independent oracle for the gain optimum: largest root of the
/// characteristic polynomial of the 2x2 Gram matrix F F^H.
double dominant_eigenvalue_oracle(const PatternMatrix &f)
{
    double g11 = 0.0, g22 = 0.0;
    cdouble g12(0.0, 0.0);
    for (int m = 0; m < f.num_ports(); ++m)
    {
        g11 += mag2(f.f_phi[static_cast<std::size_t>(m)]);
        g22 += mag2(f.f_theta[static_cast<std::size_t>(m)]);
        g12 += f.f_phi[static_cast<std::size_t>(m)] * std::conj(f.f_theta[static_cast<std::size_t>(m)]);
    }
    const double tr = g11 + g22;
    const double det = g11 * g22 - mag2(g12);
    return 0.5 * (tr + std::sqrt(std::max(tr * tr - 4.0 * det, 0.0)));
}

double projected_power(const PatternMatrix &f, const std::vector<cdouble> &w)
{
    cdouble ap(0.0, 0.0), at(0.0, 0.0);
    for (std::size_t m = 0; m < w.size(); ++m)
    {
        ap += w[m] * f.f_phi[m];
        at += w[m] * f.f_theta[m];
    }
    return mag2(ap) + mag2(at);
}

} // namespace

TEST_CASE("optimize_digital_gain on hand-checkable matrices")
{
    SECTION("single radiating port takes everything")
    {
        const auto res = optimize_digital_gain(matrix({cdouble(1.0, 0.0), cdouble(0.0, 0.0)},
                                                      {cdouble(0.0, 0.0), cdouble(0.0, 0.0)}));
        CHECK(std::abs(res.c.weights[0] - cdouble(1.0, 0.0)) < 1.0e-12);
        CHECK(std::abs(res.c.weights[1]) < 1.0e-12);
        CHECK(res.value == Catch::Approx(1.0).epsilon(1.0e-12));
    }
    SECTION("coherent combining doubles the power of two equal ports")
    {
        const double h = 1.0 / std::sqrt(2.0);
        const auto res = optimize_digital_gain(matrix({cdouble(h, 0.0), cdouble(h, 0.0)},
                                                      {cdouble(0.0, 0.0), cdouble(0.0, 0.0)}));
        CHECK(res.value == Catch::Approx(1.0).epsilon(1.0e-12));       // = 2x the 0.5 of one port
        CHECK(std::abs(res.c.weights[0] - cdouble(h, 0.0)) < 1.0e-12); // equal split, phase 0
        CHECK(std::abs(res.c.weights[1] - cdouble(h, 0.0)) < 1.0e-12);
        const double single = mag2(cdouble(h, 0.0));
        CHECK(10.0 * std::log10(res.value / single) == Catch::Approx(3.0103).margin(1.0e-3));
    }
    SECTION("degenerate Gram matrix resolves deterministically")
    {
        // F F^H is the identity: every direction is optimal, the first
        // basis vector must be chosen
        const auto res = optimize_digital_gain(matrix({cdouble(1.0, 0.0), cdouble(0.0, 0.0)},
                                                      {cdouble(0.0, 0.0), cdouble(1.0, 0.0)}));
        CHECK(res.c.weights[0] == cdouble(1.0, 0.0));
        CHECK(res.c.weights[1] == cdouble(0.0, 0.0));
        CHECK(res.value == Catch::Approx(1.0).epsilon(1.0e-12));
    }
    SECTION("all-zero matrices are rejected")
    {
        CHECK_THROWS_WITH(optimize_digital_gain(matrix({cdouble(0.0, 0.0)}, {cdouble(0.0, 0.0)})),
                          Catch::Matchers::ContainsSubstring("all-zero"));
    }
}

TEST_CASE("optimize_digital_gain reaches the dominant eigenvalue on random matrices")
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial)
    {
        PatternMatrix f;
        for (int m = 0; m < 4; ++m)
        {
            f.f_phi.push_back(cdouble(detail::uniform01(rng) - 0.5, detail::uniform01(rng) - 0.5));
            f.f_theta.push_back(cdouble(detail::uniform01(rng) - 0.5, detail::uniform01(rng) - 0.5));
        }
        const auto res = optimize_digital_gain(f);
        const double oracle = dominant_eigenvalue_oracle(f);
        REQUIRE(oracle > 0.0);
        CHECK(std::abs(res.value - oracle) <= 1.0e-9 * oracle);

        // returned weights are unit norm, phase-pinned, and reproduce value
        CHECK(std::abs(std::sqrt(res.c.norm2()) - 1.0) < 1.0e-12);
        CHECK(res.c.weights[0].imag() == Catch::Approx(0.0).margin(1.0e-12));
        CHECK(res.c.weights[0].real() > 0.0);
        CHECK(projected_power(f, res.c.weights) == res.value);

        // no unit vector can beat it
        for (int probe = 0; probe < 20; ++probe)
        {
            std::vector<cdouble> w(4);
            double n2 = 0.0;
            for (auto &v : w)
            {
                v = cdouble(detail::uniform01(rng) - 0.5, detail::uniform01(rng) - 0.5);
                n2 += mag2(v);
            }
            for (auto &v : w)
                v /= std::sqrt(n2);
            CHECK(projected_power(f, w) <= res.value * (1.0 + 1.0e-9));
        }
    }
}

TEST_CASE("candidate enumeration sizes and validity")
{
    SECTION("selection: one candidate per port, ascending")
    {
        CombinerSpec spec;
        spec.scheme = Scheme::selection;
        const auto cands = enumerate_candidates(spec, 4);
        REQUIRE(cands.size() == 4u);
        CHECK(candidate_count(spec, 4) == 4u);
        for (std::size_t k = 0; k < 4; ++k)
        {
            cands[k].validate();
            CHECK(cands[k].weights[k] == cdouble(1.0, 0.0));
            CHECK(cands[k].active_ports() == 1);
        }
    }
    SECTION("hybrid with two ports and four phases gives six candidates")
    {
        CombinerSpec spec;
        spec.scheme = Scheme::hybrid;
        spec.phase_levels = 4;
        const auto cands = enumerate_candidates(spec, 2);
        REQUIRE(cands.size() == 6u);
        CHECK(candidate_count(spec, 2) == 6u);
        for (const auto &c : cands)
            c.validate();
        // masks ascend: {port 0}, {port 1}, then the pair with 4 phases
        CHECK(cands[0].weights[0] == cdouble(1.0, 0.0));
        CHECK(cands[1].weights[1] == cdouble(1.0, 0.0));
        const double h = 1.0 / std::sqrt(2.0);
        for (std::size_t k = 2; k < 6; ++k)
        {
            CHECK(std::abs(cands[k].weights[0] - cdouble(h, 0.0)) < 1.0e-15);
            CHECK(std::abs(std::abs(cands[k].weights[1]) - h) < 1.0e-15);
        }
        CHECK(std::abs(cands[3].weights[1] - h * cdouble(0.0, 1.0)) < 1.0e-15); // 90 deg
        CHECK(std::abs(cands[4].weights[1] - h * cdouble(-1.0, 0.0)) < 1.0e-15);
    }
    SECTION("analog: phases of all but the pinned port")
    {
        CombinerSpec spec;
        spec.scheme = Scheme::analog;
        spec.phase_levels = 2;
        const auto cands = enumerate_candidates(spec, 3);
        REQUIRE(cands.size() == 4u); // 2^(3-1)
        CHECK(candidate_count(spec, 3) == 4u);
        for (const auto &c : cands)
        {
            c.validate();
            CHECK(c.active_ports() == 3);
        }
    }
    SECTION("digital deduplicates proportional amplitude vectors")
    {
        CombinerSpec spec;
        spec.scheme = Scheme::digital;
        spec.phase_levels = 2;
        spec.amp_levels = {0.0, 0.5, 1.0};
        const auto cands = enumerate_candidates(spec, 2);
        // 5 distinct rays: (0,1) (1,0) (1,1) (.5,1) (1,.5); two-port rays
        // carry 2 phases each
        REQUIRE(cands.size() == 8u);
        CHECK(candidate_count(spec, 2) == 8u);
        for (const auto &c : cands)
            c.validate();
        for (std::size_t a = 0; a < cands.size(); ++a)
            for (std::size_t b = a + 1; b < cands.size(); ++b)
                CHECK((cands[a].weights[0] != cands[b].weights[0] || cands[a].weights[1] != cands[b].weights[1]));
    }
    SECTION("spec validation rejects broken parameter sets")
    {
        CombinerSpec spec;
        spec.scheme = Scheme::digital;
        spec.amp_levels = {};
        CHECK_THROWS_WITH(spec.validate(), Catch::Matchers::ContainsSubstring("empty"));
        spec.amp_levels = {0.0, 0.5};
        CHECK_THROWS_WITH(spec.validate(), Catch::Matchers::ContainsSubstring("include 0 and 1"));
        spec.amp_levels = {0.0, 0.5, 0.5, 1.0};
        CHECK_THROWS_WITH(spec.validate(), Catch::Matchers::ContainsSubstring("strictly increasing"));
        spec.amp_levels = {0.0, 1.0};
        spec.phase_levels = 1;
        CHECK_THROWS_WITH(spec.validate(), Catch::Matchers::ContainsSubstring("phase_levels"));
    }
    SECTION("defaults")
    {
        CHECK(CombinerSpec::defaults_for(Scheme::digital, Criterion::gain).phase_levels == 16);
        CHECK(CombinerSpec::defaults_for(Scheme::hybrid, Criterion::ef).phase_levels == 8);
        CHECK(CombinerSpec::defaults_for(Scheme::analog, Criterion::gef).phase_levels == 8);
        CHECK(CombinerSpec::defaults_for(Scheme::digital, Criterion::gain).amp_levels ==
              std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    }
}

TEST_CASE("global-phase pinning shrinks the set without losing the optimum")
{
    const AngularGrid grid = make_grid(31, 24);
    const PatternSet set = synthesize_prototype_patterns(3, grid, 0);
    const Direction target = cut_direction(deg_to_rad(30.0));

    CombinerSpec pinned;
    pinned.scheme = Scheme::analog;
    pinned.phase_levels = 8;
    CombinerSpec free = pinned;
    free.fix_global_phase = false;

    CHECK(candidate_count(free, 3) == 8u * candidate_count(pinned, 3));
    const double a = optimize_search(set, target, pinned).value;
    const double b = optimize_search(set, target, free).value;
    CHECK(std::abs(a - b) <= 1.0e-12 * std::max(a, b));
}

TEST_CASE("phase refinement never loses ground")
{
    // the P = 4 phase set is a subset of the P = 8 one, so the coarse best
    // cannot beat the fine best
    const AngularGrid grid = make_grid(31, 24);
    const PatternSet set = synthesize_prototype_patterns(3, grid, 1);
    CombinerSpec coarse;
    coarse.scheme = Scheme::hybrid;
    coarse.phase_levels = 4;
    CombinerSpec fine = coarse;
    fine.phase_levels = 8;
    for (double angle_deg : {-48.0, 0.0, 30.0})
    {
        const Direction target = cut_direction(deg_to_rad(angle_deg));
        CHECK(optimize_search(set, target, fine).value >= optimize_search(set, target, coarse).value);
    }
}

TEST_CASE("optimize_search honors the scheme hierarchy")
{
    const AngularGrid grid = make_grid(31, 24);
    const PatternSet set = synthesize_prototype_patterns(3, grid, 0);
    for (double angle_deg : {-48.0, -6.0, 30.0, 66.0})
    {
        const Direction target = cut_direction(deg_to_rad(angle_deg));
        CombinerSpec spec; // digital defaults
        const double digital = optimize_search(set, target, spec).value;
        spec.scheme = Scheme::hybrid;
        const double hybrid = optimize_search(set, target, spec).value;
        spec.scheme = Scheme::analog;
        const double analog = optimize_search(set, target, spec).value;
        spec.scheme = Scheme::selection;
        const double selection = optimize_search(set, target, spec).value;

        // each step up literally contains the previous candidate set
        CHECK(hybrid >= selection);
        CHECK(hybrid >= analog);
        CHECK(digital >= hybrid);

        // and the quantized digital search cannot beat the closed form
        const double closed = gain_scale(set.z0_ohm()) * optimize_digital_gain(pattern_matrix(set, target)).value;
        CHECK(digital <= closed * (1.0 + 1.0e-12));
    }
}

TEST_CASE("selection search equals the explicit per-port argmax")
{
    const AngularGrid grid = make_grid(31, 24);
    const PatternSet set = synthesize_prototype_patterns(4, grid, 3);
    CombinerSpec spec;
    spec.scheme = Scheme::selection;
    for (double angle_deg : {-60.0, -12.0, 42.0})
    {
        const Direction target = cut_direction(deg_to_rad(angle_deg));
        int best_port = 0;
        double best = -1.0;
        for (int m = 0; m < 4; ++m)
        {
            const double g = port_gain(set, m, target);
            if (g > best)
            {
                best = g;
                best_port = m;
            }
        }
        const auto res = optimize_search(set, target, spec);
        CHECK(res.value == best);
        CHECK(res.c.weights[static_cast<std::size_t>(best_port)] == cdouble(1.0, 0.0));

        const CoefficientVector sel = mode_selection(set, target);
        for (std::size_t m = 0; m < 4; ++m)
            CHECK(sel.weights[m] == res.c.weights[m]);
    }
}

TEST_CASE("mode_selection corner cases")
{
    const AngularGrid grid = make_grid(31, 24);
    SECTION("a single port is always chosen")
    {
        const PatternSet set = synthesize_prototype_patterns(1, grid, 0);
        const CoefficientVector c = mode_selection(set, cut_direction(deg_to_rad(-42.0)));
        REQUIRE(c.size() == 1u);
        CHECK(c.weights[0] == cdouble(1.0, 0.0));
    }
    SECTION("an all-null direction is rejected")
    {
        // every synthesized lobe points into the upper hemisphere, so the
        // antipode radiates nothing
        const PatternSet set = synthesize_prototype_patterns(3, grid, 0);
        CHECK_THROWS_WITH(mode_selection(set, Direction{pi, 0.0}),
                          Catch::Matchers::ContainsSubstring("null"));
    }
}

TEST_CASE("element-factor criteria insist on a full sphere")
{
    const AngularGrid cut = make_cut_grid(31);
    std::vector<cdouble> f(cut.size(), cdouble(1.0, 0.0)), z(cut.size(), cdouble(0.0, 0.0));
    const PatternSet cut_set = PatternSet::from_fields(cut, {f}, {z}, true);
    CombinerSpec spec;
    spec.scheme = Scheme::hybrid;
    spec.criterion = Criterion::ef;
    CHECK_THROWS_WITH(optimize_search(cut_set, cut_direction(0.0), spec),
                      Catch::Matchers::ContainsSubstring("full-sphere"));
}

TEST_CASE("element-factor search prefers clean patterns over raw gain")
{
    const AngularGrid grid = make_grid(31, 24);
    const PatternSet set = synthesize_prototype_patterns(3, grid, 0);
    const Direction target = cut_direction(deg_to_rad(24.0));

    CombinerSpec spec;
    spec.scheme = Scheme::hybrid;
    spec.phase_levels = 8;
    spec.criterion = Criterion::ef;
    const auto best_ef = optimize_search(set, target, spec);
    CHECK(best_ef.value >= 0.0);
    CHECK(best_ef.value <= 1.0);

    spec.criterion = Criterion::gain;
    const auto best_gain = optimize_search(set, target, spec);
    const double ef_of_gain_winner = element_factor(set, best_gain.c, target);
    CHECK(best_ef.value >= ef_of_gain_winner - 1.0e-15);

    spec.criterion = Criterion::gef;
    const auto best_gef = optimize_search(set, target, spec);
    const double gef_of_gain_winner = gef(set, best_gain.c, target);
    CHECK(best_gef.value >= gef_of_gain_winner - 1.0e-15);
}
