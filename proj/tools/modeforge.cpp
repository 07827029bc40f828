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
//
// Command-line front end: synthesize pattern sets, build codebooks, report
// port-usage statistics and emit plot-ready metric tables.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <modeforge/modeforge.hpp>

namespace {

using namespace modeforge;

std::pair<int, int> parse_grid_size(const std::string &s)
{
    const auto x = s.find_first_of("xX");
    if (x == std::string::npos || x == 0 || x + 1 == s.size())
        throw std::runtime_error("--grid expects THETAxPHI, e.g. 181x360");
    int n_theta = 0, n_phi = 0;
    try
    {
        std::size_t used = 0;
        n_theta = std::stoi(s.substr(0, x), &used);
        if (used != x)
            throw std::invalid_argument(s);
        n_phi = std::stoi(s.substr(x + 1), &used);
        if (used != s.size() - x - 1)
            throw std::invalid_argument(s);
    }
    catch (const std::exception &)
    {
        throw std::runtime_error("--grid expects THETAxPHI, e.g. 181x360");
    }
    return {n_theta, n_phi};
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void print_column_summary(const char *name, const std::vector<double> &v)
{
    std::cout << "  " << name << ": min " << *std::min_element(v.begin(), v.end()) << ", median " << median(v)
              << ", max " << *std::max_element(v.begin(), v.end()) << '\n';
}

void print_codebook_summary(const Codebook &cb)
{
    std::vector<double> gain_db, ef, gef_db;
    for (const CodebookEntry &e : cb.entries)
    {
        gain_db.push_back(to_db(e.gain));
        ef.push_back(e.ef);
        gef_db.push_back(to_db(e.gef));
    }
    std::cout << cb.entries.size() << " entries, scheme " << to_string(cb.spec.scheme) << ", criterion "
              << to_string(cb.spec.criterion) << '\n';
    print_column_summary("gain_dbi", gain_db);
    print_column_summary("ef      ", ef);
    print_column_summary("gef_dbi ", gef_db);
}

std::string stem_of(const std::string &path)
{
    return std::filesystem::path(path).stem().string();
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"modeforge - beamforming codebooks for multi-port multi-mode antennas"};
    app.require_subcommand(1);

    // ---- synth ----------------------------------------------------------
    int synth_ports = 4;
    std::string synth_grid = "181x360";
    std::uint64_t synth_seed = 0;
    std::string synth_out;
    auto *synth = app.add_subcommand("synth", "Synthesize an orthonormal multi-port pattern set");
    synth->add_option("-M,--ports", synth_ports, "Number of antenna ports")->required()->check(CLI::Range(1, 16));
    synth->add_option("--grid", synth_grid, "Sphere sampling THETAxPHI")->capture_default_str();
    synth->add_option("--seed", synth_seed, "Synthesis seed")->capture_default_str();
    synth->add_option("-o,--output", synth_out, "Output pattern file (JSON)")->required();
    synth->callback([&]() {
        const auto [n_theta, n_phi] = parse_grid_size(synth_grid);
        const AngularGrid grid = make_grid(n_theta, n_phi);
        const PatternSet set = synthesize_prototype_patterns(synth_ports, grid, synth_seed);
        save_patterns(set, synth_out);
        std::cout << "wrote '" << synth_out << "': " << set.num_ports() << " ports on a " << n_theta << "x" << n_phi
                  << " grid, fingerprint " << pattern_fingerprint(set) << '\n';
    });

    // ---- codebook -------------------------------------------------------
    std::string cb_in, cb_out, cb_scheme = "digital", cb_criterion = "gain";
    int cb_phase_levels = 0, cb_targets = 37;
    std::vector<double> cb_amp_levels;
    auto *cbk = app.add_subcommand("codebook", "Optimize weights for every target angle of the y-z cut");
    cbk->add_option("-i,--input", cb_in, "Pattern file (JSON)")->required();
    cbk->add_option("-o,--output", cb_out, "Output codebook file (JSON)")->required();
    cbk->add_option("--scheme", cb_scheme, "digital | hybrid | analog | selection")->capture_default_str();
    cbk->add_option("--criterion", cb_criterion, "gain | ef | gef")->capture_default_str();
    auto *cb_p_opt = cbk->add_option("--phase-levels", cb_phase_levels, "Phase quantization P (default 16, 8 for ef/gef)");
    auto *cb_a_opt = cbk->add_option("--amp-levels", cb_amp_levels, "Digital amplitude levels (comma separated)")
                         ->delimiter(',');
    cbk->add_option("--targets", cb_targets, "Number of equidistant cut targets")->capture_default_str()
        ->check(CLI::Range(2, 100000));
    cbk->callback([&]() {
        const PatternSet set = load_patterns(cb_in);
        CombinerSpec spec = CombinerSpec::defaults_for(scheme_from_string(cb_scheme), criterion_from_string(cb_criterion));
        if (cb_p_opt->count())
            spec.phase_levels = cb_phase_levels;
        if (cb_a_opt->count())
            spec.amp_levels = cb_amp_levels;
        const Codebook cb = build_codebook(set, make_cut_grid(cb_targets), spec);
        save_codebook(cb, cb_out);
        std::cout << "wrote '" << cb_out << "': ";
        print_codebook_summary(cb);
    });

    // ---- stats ----------------------------------------------------------
    std::string st_in, st_out, st_patterns;
    double st_threshold = UsageStats::default_threshold;
    auto *stats = app.add_subcommand("stats", "Port-usage statistics of a codebook");
    stats->add_option("-i,--input", st_in, "Codebook file (JSON)")->required();
    stats->add_option("-o,--output", st_out, "Output CSV prefix (writes <prefix>_incidence.csv and <prefix>_active_counts.csv)");
    stats->add_option("--patterns", st_patterns, "Pattern file to cross-check the codebook against");
    stats->add_option("--threshold", st_threshold, "|c|^2 activity threshold")->capture_default_str();
    stats->callback([&]() {
        const Codebook cb = load_codebook(st_in);
        if (!st_patterns.empty())
        {
            const PatternSet set = load_patterns(st_patterns);
            if (pattern_fingerprint(set) != cb.pattern_fingerprint)
                throw std::runtime_error("codebook '" + st_in + "' was not built from pattern set '" + st_patterns +
                                         "' (fingerprint mismatch)");
        }
        const UsageStats st = usage_stats(cb, st_threshold);
        std::cout << "port incidence (active iff |c|^2 > " << st.activity_threshold << "):\n";
        for (std::size_t p = 0; p < st.incidence.size(); ++p)
            std::cout << "  port " << p + 1 << ": " << st.incidence[p] << " %\n";
        std::cout << "targets driving exactly k ports:\n";
        for (std::size_t k = 0; k < st.active_count_hist.size(); ++k)
            std::cout << "  k=" << k << ": " << st.active_count_hist[k] << " %\n";
        if (st.active_count_hist[0] > 0.0)
            std::cout << "warning: " << st.active_count_hist[0] << " % of entries drive no port above the threshold\n";
        if (!st_out.empty())
        {
            write_incidence_csv(st, st_out + "_incidence.csv");
            write_active_count_csv(st, st_out + "_active_counts.csv");
            std::cout << "wrote '" << st_out << "_incidence.csv' and '" << st_out << "_active_counts.csv'\n";
        }
    });

    // ---- sweep ----------------------------------------------------------
    std::vector<std::string> sw_in;
    std::string sw_out, sw_patterns;
    auto *sweep = app.add_subcommand("sweep", "Long-form metric table across codebooks (plot input)");
    sweep->add_option("-i,--input", sw_in, "Codebook files (repeatable)")->required()->expected(-1);
    sweep->add_option("--patterns", sw_patterns, "Pattern file the codebooks were built from")->required();
    sweep->add_option("-o,--output", sw_out, "Output CSV")->required();
    sweep->callback([&]() {
        const PatternSet set = load_patterns(sw_patterns);
        std::vector<Codebook> cbs;
        std::vector<std::string> labels;
        for (const std::string &path : sw_in)
        {
            cbs.push_back(load_codebook(path));
            labels.push_back(stem_of(path));
        }
        const auto rows = sweep_metrics(set, cbs, labels);
        write_metric_csv(rows, sw_out);
        std::cout << "wrote '" << sw_out << "': " << rows.size() << " rows from " << cbs.size() << " codebook(s)\n";
    });

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
