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

#include <charconv>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "combiners.hpp"
#include "pattern_io.hpp"

namespace modeforge {

/// One codebook row: the winning weights for a target angle plus all three
/// figures of merit for those weights (linear units).
struct CodebookEntry
{
    double target_deg = 0.0; ///< signed y-z-cut angle
    CoefficientVector weights;
    double gain = 0.0; ///< linear gain towards the target
    double ef = 0.0;   ///< element factor at the target
    double gef = 0.0;  ///< gain-by-element-factor at the target (linear)
};

/// Lookup table from steering angle to weights. All three metrics are
/// recorded for every entry regardless of the optimized criterion, so
/// cross-criterion comparisons need no re-optimization.
struct Codebook
{
    CombinerSpec spec;
    std::string pattern_fingerprint;
    std::vector<CodebookEntry> entries;
};

/// Builds one entry per target of the cut. The digital scheme with the
/// gain criterion uses the closed form; every other scheme/criterion pair
/// runs the quantized exhaustive search. Targets are processed
/// independently (possibly concurrently); output order follows the cut.
///
/// The pattern set must live on a full-sphere grid: every entry records
/// the element factor, whose peak search must see the whole sphere.
inline Codebook build_codebook(const PatternSet &set, const AngularGrid &targets, const CombinerSpec &spec)
{
    detail::require_normalized(set, "build_codebook");
    spec.validate();
    if (targets.kind() != GridKind::plane_cut)
        throw std::invalid_argument("build_codebook expects a plane-cut target grid");
    if (targets.size() == 0)
        throw std::invalid_argument("build_codebook: empty target list");
    if (set.grid().kind() != GridKind::full_sphere)
        throw std::invalid_argument("build_codebook requires a full-sphere pattern grid (every entry records the "
                                    "element factor, whose peak search must see the whole sphere)");

    Codebook cb;
    cb.spec = spec;
    cb.pattern_fingerprint = pattern_fingerprint(set);
    cb.entries.resize(targets.size());

    std::mutex err_mutex;
    std::exception_ptr err;
    parallel_for(targets.size(), [&](std::size_t i) {
        try
        {
            const Direction dir = cut_direction(targets.cut_angles()[i]);
            CodebookEntry entry;
            entry.target_deg = targets.cut_angles_deg()[i];
            if (spec.scheme == Scheme::digital && spec.criterion == Criterion::gain)
                entry.weights = optimize_digital_gain(pattern_matrix(set, dir)).c;
            else
                entry.weights = optimize_search(set, dir, spec).c;
            entry.weights.validate();

            entry.gain = combined_gain(set, entry.weights, dir);
            const PatternPeak peak = combined_pattern_peak(set, entry.weights);
            if (!(peak.gain > 0.0))
                throw std::invalid_argument("combined pattern radiates no power");
            entry.ef = entry.gain / peak.gain;
            entry.gef = entry.gain * entry.ef;
            cb.entries[i] = std::move(entry);
        }
        catch (const std::exception &e)
        {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!err)
            {
                std::ostringstream os;
                os << "target " << targets.cut_angles_deg()[i] << " deg: " << e.what();
                err = std::make_exception_ptr(std::runtime_error(os.str()));
            }
        }
    });
    if (err)
        std::rethrow_exception(err);
    return cb;
}

/// Port-usage statistics of a codebook (how often each port is driven and
/// how many ports entries drive at once).
struct UsageStats
{
    /// Default |c_m|^2 cutoff that counts a port as active. Digital
    /// weights are rarely exactly zero, so "employed" needs a threshold.
    static constexpr double default_threshold = 1.0e-3;

    double activity_threshold = default_threshold;
    std::vector<double> incidence;         ///< per port, percent of targets
    std::vector<double> active_count_hist; ///< index k = 0..M, percent of targets driving exactly k ports

    int num_ports() const { return static_cast<int>(incidence.size()); }
};

/// Counts a port as active at a target iff |c_m|^2 > threshold. The
/// histogram includes a k = 0 bucket: a threshold of 1/M or more can
/// declare every port of an equal-split entry inactive, and the histogram
/// must still sum to 100%.
inline UsageStats usage_stats(const Codebook &cb, double threshold = UsageStats::default_threshold)
{
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("activity threshold must lie in (0, 1)");
    if (cb.entries.empty())
        throw std::invalid_argument("usage_stats: codebook has no entries");
    const std::size_t m = cb.entries.front().weights.size();

    UsageStats st;
    st.activity_threshold = threshold;
    st.incidence.assign(m, 0.0);
    st.active_count_hist.assign(m + 1, 0.0);
    for (const CodebookEntry &e : cb.entries)
    {
        if (e.weights.size() != m)
            throw std::invalid_argument("usage_stats: entries disagree on the port count");
        std::size_t active = 0;
        for (std::size_t p = 0; p < m; ++p)
            if (mag2(e.weights.weights[p]) > threshold)
            {
                ++active;
                st.incidence[p] += 1.0;
            }
        st.active_count_hist[active] += 1.0;
    }
    // multiply before dividing: integer counts times 100 are exact, so
    // round shares (50%, 100%, ...) come out as exact doubles
    const auto n = static_cast<double>(cb.entries.size());
    for (double &v : st.incidence)
        v = v * 100.0 / n;
    for (double &v : st.active_count_hist)
        v = v * 100.0 / n;
    return st;
}

/// One row of the long-form metric table used for plotting.
struct MetricRow
{
    double angle_deg = 0.0;
    std::string codebook; ///< codebook label
    std::string metric;   ///< gain_dbi | ef | gef_dbi
    double value = 0.0;   ///< dBi for gain/GEF, unitless for EF
};

/// Flattens codebooks into (angle, codebook, metric, value) rows. All
/// codebooks must stem from `set` (fingerprint check) and share the target
/// list. Labels default to "<scheme>-<criterion>".
inline std::vector<MetricRow> sweep_metrics(const PatternSet &set, const std::vector<Codebook> &codebooks,
                                            std::vector<std::string> labels = {})
{
    if (codebooks.empty())
        throw std::invalid_argument("sweep_metrics: no codebooks given");
    if (!labels.empty() && labels.size() != codebooks.size())
        throw std::invalid_argument("sweep_metrics: one label per codebook required");
    const std::string fp = pattern_fingerprint(set);
    for (std::size_t k = 0; k < codebooks.size(); ++k)
    {
        if (codebooks[k].pattern_fingerprint != fp)
        {
            std::ostringstream os;
            os << "codebook " << k + 1 << " was built from a different pattern set (fingerprint "
               << codebooks[k].pattern_fingerprint << ", expected " << fp << ")";
            throw std::invalid_argument(os.str());
        }
        if (codebooks[k].entries.size() != codebooks[0].entries.size())
            throw std::invalid_argument("sweep_metrics: codebooks disagree on the number of targets");
        for (std::size_t i = 0; i < codebooks[k].entries.size(); ++i)
            if (codebooks[k].entries[i].target_deg != codebooks[0].entries[i].target_deg)
                throw std::invalid_argument("sweep_metrics: codebooks disagree on the target angles");
    }

    std::vector<MetricRow> rows;
    rows.reserve(codebooks.size() * codebooks[0].entries.size() * 3);
    for (std::size_t k = 0; k < codebooks.size(); ++k)
    {
        const std::string label = labels.empty() ? std::string(to_string(codebooks[k].spec.scheme)) + "-" +
                                                       to_string(codebooks[k].spec.criterion)
                                                 : labels[k];
        for (const CodebookEntry &e : codebooks[k].entries)
        {
            rows.push_back({e.target_deg, label, "gain_dbi", to_db(e.gain)});
            rows.push_back({e.target_deg, label, "ef", e.ef});
            rows.push_back({e.target_deg, label, "gef_dbi", to_db(e.gef)});
        }
    }
    return rows;
}

namespace detail {

/// Shortest round-trip decimal form (deterministic across runs).
inline std::string format_double(double v)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::ofstream open_output(const std::string &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

} // namespace detail

inline void write_metric_csv(const std::vector<MetricRow> &rows, const std::string &path)
{
    auto out = detail::open_output(path);
    out << "angle_deg,codebook,metric,value\n";
    for (const MetricRow &r : rows)
        out << detail::format_double(r.angle_deg) << ',' << r.codebook << ',' << r.metric << ','
            << detail::format_double(r.value) << '\n';
    if (!out.good())
        throw std::runtime_error("write failed for '" + path + "'");
}

inline void write_incidence_csv(const UsageStats &st, const std::string &path)
{
    auto out = detail::open_output(path);
    out << "port,incidence_pct\n";
    for (std::size_t p = 0; p < st.incidence.size(); ++p)
        out << p + 1 << ',' << detail::format_double(st.incidence[p]) << '\n';
    if (!out.good())
        throw std::runtime_error("write failed for '" + path + "'");
}

inline void write_active_count_csv(const UsageStats &st, const std::string &path)
{
    auto out = detail::open_output(path);
    out << "k,percent\n";
    for (std::size_t k = 0; k < st.active_count_hist.size(); ++k)
        out << k << ',' << detail::format_double(st.active_count_hist[k]) << '\n';
    if (!out.good())
        throw std::runtime_error("write failed for '" + path + "'");
}

inline nlohmann::ordered_json codebook_to_json(const Codebook &cb)
{
    nlohmann::ordered_json spec;
    spec["scheme"] = to_string(cb.spec.scheme);
    spec["criterion"] = to_string(cb.spec.criterion);
    spec["phase_levels"] = cb.spec.phase_levels;
    spec["amp_levels"] = cb.spec.amp_levels;
    spec["fix_global_phase"] = cb.spec.fix_global_phase;

    nlohmann::ordered_json root;
    root["spec"] = std::move(spec);
    root["pattern_fingerprint"] = cb.pattern_fingerprint;
    auto &entries = root["entries"] = nlohmann::ordered_json::array();
    for (const CodebookEntry &e : cb.entries)
    {
        nlohmann::ordered_json je;
        je["target_deg"] = e.target_deg;
        std::vector<double> re, im;
        re.reserve(e.weights.size());
        im.reserve(e.weights.size());
        for (cdouble w : e.weights.weights)
        {
            re.push_back(w.real());
            im.push_back(w.imag());
        }
        je["weights_re"] = re;
        je["weights_im"] = im;
        je["gain_dbi"] = to_db(e.gain);
        je["ef"] = e.ef;
        je["gef_dbi"] = to_db(e.gef);
        entries.push_back(std::move(je));
    }
    return root;
}

inline Codebook codebook_from_json(const nlohmann::json &root)
{
    if (!root.is_object() || !root.contains("spec") || !root.contains("entries"))
        throw std::runtime_error("codebook file: expected object with 'spec' and 'entries'");
    const auto &jspec = root["spec"];
    Codebook cb;
    try
    {
        cb.spec.scheme = scheme_from_string(jspec.value("scheme", ""));
        cb.spec.criterion = criterion_from_string(jspec.value("criterion", ""));
    }
    catch (const std::invalid_argument &e)
    {
        throw std::runtime_error(std::string("codebook file: ") + e.what());
    }
    cb.spec.phase_levels = jspec.value("phase_levels", 16);
    if (jspec.contains("amp_levels"))
        cb.spec.amp_levels = detail::double_array(jspec, "amp_levels");
    cb.spec.fix_global_phase = jspec.value("fix_global_phase", true);
    cb.pattern_fingerprint = root.value("pattern_fingerprint", "");

    const auto &jentries = root["entries"];
    if (!jentries.is_array() || jentries.empty())
        throw std::runtime_error("codebook file: 'entries' must be a non-empty array");
    double prev_target = 0.0;
    for (std::size_t i = 0; i < jentries.size(); ++i)
    {
        const auto &je = jentries[i];
        CodebookEntry e;
        e.target_deg = je.value("target_deg", 0.0);
        if (i > 0 && !(e.target_deg > prev_target))
            throw std::runtime_error("codebook file: target angles must be strictly increasing");
        prev_target = e.target_deg;
        auto re = detail::double_array(je, "weights_re");
        auto im = detail::double_array(je, "weights_im");
        if (re.size() != im.size() || re.empty())
            throw std::runtime_error("codebook file: weight arrays are empty or of unequal length");
        e.weights.scheme = cb.spec.scheme;
        e.weights.weights.resize(re.size());
        for (std::size_t p = 0; p < re.size(); ++p)
        {
            if (!std::isfinite(re[p]) || !std::isfinite(im[p]))
                throw std::runtime_error("codebook file: non-finite weight");
            e.weights.weights[p] = cdouble(re[p], im[p]);
        }
        try
        {
            e.weights.validate();
        }
        catch (const std::invalid_argument &ex)
        {
            std::ostringstream os;
            os << "codebook file: entry " << i + 1 << ": " << ex.what();
            throw std::runtime_error(os.str());
        }
        e.gain = from_db(je.value("gain_dbi", -400.0));
        e.ef = je.value("ef", 0.0);
        e.gef = from_db(je.value("gef_dbi", -400.0));
        cb.entries.push_back(std::move(e));
    }
    return cb;
}

inline void save_codebook(const Codebook &cb, const std::string &path)
{
    auto out = detail::open_output(path);
    out << codebook_to_json(cb).dump(1, '\t') << '\n';
    if (!out.good())
        throw std::runtime_error("write failed for '" + path + "'");
}

inline Codebook load_codebook(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open codebook file '" + path + "'");
    nlohmann::json root;
    try
    {
        in >> root;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw std::runtime_error("codebook file '" + path + "' is not valid JSON: " + e.what());
    }
    return codebook_from_json(root);
}

} // namespace modeforge
