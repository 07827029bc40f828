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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

namespace modeforge {

using cdouble = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Free-space wave impedance in Ohm.
inline constexpr double free_space_impedance_ohm = 376.730313668;

/// Scale factor turning |f_phi|^2 + |f_theta|^2 (stored field units) into
/// unitless linear gain.
inline constexpr double gain_scale(double z0_ohm) { return 4.0 * pi / (2.0 * z0_ohm); }

inline constexpr double deg_to_rad(double deg) { return deg * pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / pi; }

/// |z|^2 without the sqrt/overflow handling of std::abs.
inline double mag2(cdouble z) { return z.real() * z.real() + z.imag() * z.imag(); }

/// Linear-to-dB at the presentation boundary. Floored so that serialized
/// values stay finite (non-radiating directions map to -400 dB).
inline double to_db(double linear)
{
    if (!(linear > 1.0e-40))
        return -400.0;
    return 10.0 * std::log10(linear);
}

inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

/// Direction on the sphere, radians. theta is elevation from the +z axis
/// in [0, pi], phi is azimuth in [0, 2*pi).
struct Direction
{
    double theta = 0.0;
    double phi = 0.0;
};

/// Number of workers used by angle sweeps. MODEFORGE_THREADS caps the
/// hardware concurrency; unset or invalid values fall back to the hardware
/// count. Always at least 1.
inline unsigned worker_count()
{
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0)
        hw = 1;
    if (const char *env = std::getenv("MODEFORGE_THREADS"))
    {
        char *end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1)
            return static_cast<unsigned>(std::min<long>(v, hw));
    }
    return hw;
}

/// Runs fn(i) for i in [0, n). Work items must be independent; the caller
/// owns any ordering of results (write into per-index slots).
template <typename Fn>
inline void parallel_for(std::size_t n, Fn &&fn)
{
    unsigned workers = worker_count();
    if (workers <= 1 || n <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back([&]() {
            for (;;)
            {
                std::size_t i = next.fetch_add(1);
                if (i >= n)
                    return;
                fn(i);
            }
        });
    for (auto &th : pool)
        th.join();
}

namespace detail {

/// FNV-1a over raw bytes; used for content fingerprints.
struct Fnv1a64
{
    std::uint64_t state = 0xcbf29ce484222325ull;

    void add_bytes(const void *data, std::size_t n)
    {
        const auto *p = static_cast<const unsigned char *>(data);
        for (std::size_t i = 0; i < n; ++i)
        {
            state ^= p[i];
            state *= 0x100000001b3ull;
        }
    }
    void add(double v)
    {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        add_bytes(&bits, sizeof(bits));
    }
    void add(std::uint64_t v) { add_bytes(&v, sizeof(v)); }
    void add(const std::string &s) { add_bytes(s.data(), s.size()); }

    std::string hex() const
    {
        static const char digits[] = "0123456789abcdef";
        std::string out(16, '0');
        std::uint64_t v = state;
        for (int i = 15; i >= 0; --i, v >>= 4)
            out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        return out;
    }
};

} // namespace detail

} // namespace modeforge
