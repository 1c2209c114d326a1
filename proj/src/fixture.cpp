/*
 * Copyright 2026 The fuzzdiag Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fuzzdiag/fixture.hpp"

#include <array>
#include <cmath>
#include <ctime>
#include <numbers>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "fuzzdiag/intervalgebra.hpp"

namespace fuzzdiag::fixture {

using vibdata::SensorFrame;
using vibdata::StateIntervals;
using vibdata::StateIntervalTable;

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

private:
    std::mt19937_64 engine_;
};

double round6(double x) {
    if (x == 0.0 || !std::isfinite(x)) return x;
    return std::stod(fmt::format("{:.6g}", x));
}

// Velocity intervals 3 in 4 and 6 in 7; acceleration intervals 2, 3, 4 in 1
// and 6, 7 in 5. Neighbouring survivors overlap.
constexpr std::array<std::array<double, 4>, kStateCount> kPlant = {{
    {0.5, 2.0, 0.2, 1.8},
    {1.6, 3.2, 0.4, 1.2},
    {3.0, 4.0, 0.6, 1.5},
    {2.6, 4.6, 0.9, 1.7},
    {4.2, 6.0, 1.5, 3.5},
    {6.2, 7.0, 2.0, 3.0},
    {5.6, 7.6, 2.4, 3.4},
}};

StateIntervalTable from_rows(const std::array<std::array<double, 4>, kStateCount>& rows, std::size_t count) {
    StateIntervalTable table;
    for (std::size_t i = 0; i < count; ++i) {
        table.emplace(kAllStates[i], StateIntervals{Interval(rows[i][0], rows[i][1]), Interval(rows[i][2], rows[i][3])});
    }
    return table;
}

using Signature = std::pair<intervalgebra::IicResult, intervalgebra::IicResult>;

bool same(const intervalgebra::IicResult& a, const intervalgebra::IicResult& b) {
    return a.survivors == b.survivors && a.home == b.home;
}

Signature signature(const StateIntervalTable& table) {
    return {intervalgebra::reduce_iic(intervalgebra::velocity_intervals(table)),
            intervalgebra::reduce_iic(intervalgebra::acceleration_intervals(table))};
}

std::vector<double> spectrum(Rng& rng, std::size_t bins, double target_rms) {
    std::vector<double> s(bins);
    for (double& x : s) x = 0.25 + rng.uniform();
    const double scale = target_rms / vibdata::rms(s);
    for (double& x : s) x = round6(x * scale);
    return s;
}

std::vector<double> waveform(Rng& rng, std::size_t samples, double g_rms) {
    std::vector<double> w(samples);
    const double amplitude = g_rms * std::numbers::sqrt2;
    const double cycles = 3.0 + std::floor(8.0 * rng.uniform());
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    for (std::size_t t = 0; t < samples; ++t) {
        const double angle = 2.0 * std::numbers::pi * cycles * static_cast<double>(t) / static_cast<double>(samples);
        w[t] = round6(amplitude * std::sin(angle + phase) + 0.05 * amplitude * (rng.uniform() - 0.5));
    }
    return w;
}

std::string window_start(std::size_t slot) {
    // 2021-06-01T00:00:00Z plus four hours per polling slot.
    const std::time_t t = 1622505600 + static_cast<std::time_t>(slot) * 4 * 3600;
    std::tm tm{};
    gmtime_r(&t, &tm);
    return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                       tm.tm_hour, tm.tm_min, tm.tm_sec);
}

}  // namespace

StateIntervalTable canonical_intervals(Geometry geometry) {
    switch (geometry) {
        case Geometry::Plant:
            return from_rows(kPlant, kStateCount);
        case Geometry::SingleState:
            return from_rows(kPlant, 1);
        case Geometry::Disjoint: {
            std::array<std::array<double, 4>, kStateCount> rows{};
            for (std::size_t i = 0; i < kStateCount; ++i) {
                const double k = static_cast<double>(i);
                rows[i] = {1.0 + 2.0 * k, 2.0 + 2.0 * k, 0.5 + k, 1.0 + k};
            }
            return from_rows(rows, kStateCount);
        }
    }
    throw std::invalid_argument("unknown fixture geometry");
}

StateIntervalTable design_intervals(const FixtureOptions& options) {
    StateIntervalTable base = canonical_intervals(options.geometry);
    if (options.jitter == 0.0) {
        return base;
    }
    if (!(options.jitter > 0.0) || !(options.jitter < 0.25)) {
        throw std::invalid_argument("fixture jitter must lie in [0, 0.25)");
    }
    const Signature wanted = signature(base);
    Rng rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        StateIntervalTable table;
        bool valid = true;
        auto perturb = [&](const Interval& iv) {
            const double lo = round6(iv.lo() + rng.uniform(-options.jitter, options.jitter) * iv.width());
            const double hi = round6(iv.hi() + rng.uniform(-options.jitter, options.jitter) * iv.width());
            if (!(lo > 0.0) || !(lo < hi)) {
                valid = false;
                return iv;
            }
            return Interval(lo, hi);
        };
        for (const auto& [state, row] : base) {
            const Interval v = perturb(row.v);
            const Interval g = perturb(row.g);
            table.emplace(state, StateIntervals{v, g});
        }
        if (!valid) continue;
        const Signature got = signature(table);
        if (same(got.first, wanted.first) && same(got.second, wanted.second)) {
            return table;
        }
    }
    throw std::runtime_error("could not jitter the fixture layout without changing its inclusion structure");
}

std::vector<SensorFrame> generate_frames(const FixtureOptions& options) {
    const StateIntervalTable design = design_intervals(options);
    if (options.spectrum_bins == 0 || options.waveform_samples == 0) {
        throw std::invalid_argument("fixture frames need samples");
    }
    if (!(options.normal_fraction > 0.0) || !(options.normal_fraction <= 1.0)) {
        throw std::invalid_argument("normal fraction must lie in (0, 1]");
    }

    std::vector<MachineState> states;
    for (const auto& [state, row] : design) states.push_back(state);

    // Per-state frame counts: the normal share first, the rest spread evenly.
    std::vector<std::size_t> counts(states.size(), 0);
    if (states.size() == 1) {
        counts[0] = options.frames;
    } else {
        counts[0] = static_cast<std::size_t>(std::lround(options.normal_fraction * static_cast<double>(options.frames)));
        const std::size_t rest = options.frames - std::min(counts[0], options.frames);
        const std::size_t faults = states.size() - 1;
        for (std::size_t i = 1; i < states.size(); ++i) {
            counts[i] = rest / faults + (i - 1 < rest % faults ? 1 : 0);
        }
    }
    for (std::size_t c : counts) {
        if (c < 2) {
            throw std::invalid_argument("too few frames: every state needs at least two");
        }
    }

    std::vector<std::size_t> order;
    order.reserve(options.frames);
    for (std::size_t i = 0; i < states.size(); ++i) order.insert(order.end(), counts[i], i);

    Rng rng(options.seed);
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.below(i)]);
    }

    std::vector<std::size_t> seen(states.size(), 0);
    std::vector<SensorFrame> frames;
    frames.reserve(order.size());
    for (std::size_t n = 0; n < order.size(); ++n) {
        const std::size_t s = order[n];
        const StateIntervals& target = design.at(states[s]);
        const std::size_t k = seen[s]++;
        // The first two frames of every state sit on the interval ends.
        double v = 0.0;
        double g = 0.0;
        if (k == 0) {
            v = target.v.lo();
            g = target.g.lo();
        } else if (k == 1) {
            v = target.v.hi();
            g = target.g.hi();
        } else {
            v = rng.uniform(target.v.lo(), target.v.hi());
            g = rng.uniform(target.g.lo(), target.g.hi());
        }
        SensorFrame frame;
        frame.position = fmt::format("P{}", n % 4 + 1);
        frame.window_start = window_start(n / 4);
        frame.state = states[s];
        frame.fft_v = spectrum(rng, options.spectrum_bins, v);
        frame.fft_g = spectrum(rng, options.spectrum_bins, g);
        frame.g = waveform(rng, options.waveform_samples, g);
        frames.push_back(std::move(frame));
    }
    return frames;
}

}  // namespace fuzzdiag::fixture
