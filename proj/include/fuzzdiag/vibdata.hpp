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

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fuzzdiag/interval.hpp"
#include "fuzzdiag/machine_state.hpp"

namespace fuzzdiag::vibdata {

/// One polling window from one sensor position, labeled by the expert state.
struct SensorFrame {
    std::string position;      // "P1".."P4"
    std::string window_start;  // ISO-8601
    std::vector<double> g;     // acceleration waveform
    std::vector<double> fft_v; // velocity spectrum magnitudes
    std::vector<double> fft_g; // acceleration spectrum magnitudes
    MachineState state = MachineState::Normal;
};

/// Throws DataError (tagged with `row` when given) if a sample sequence is
/// empty, holds a non-finite value, or a spectrum holds a negative magnitude.
void validate_frame(const SensorFrame& frame, std::optional<std::size_t> row = std::nullopt);

/// Root mean square. Throws std::invalid_argument on empty or non-finite input.
double rms(std::span<const double> samples);

struct FrameSummary {
    double v_rms = 0.0;
    double g_rms = 0.0;
};

FrameSummary summarize_frame(const SensorFrame& frame);

struct StateIntervals {
    Interval v;
    Interval g;

    friend bool operator==(const StateIntervals&, const StateIntervals&) = default;
};

/// Per-state RMS intervals; iteration order is severity order.
using StateIntervalTable = std::map<MachineState, StateIntervals>;

/// Streaming per-state min/max over frame summaries. Accumulators merge
/// associatively, so partial results from disjoint frame ranges combine.
class IntervalAccumulator {
public:
    void add(MachineState state, const FrameSummary& summary);
    void merge(const IntervalAccumulator& other);

    bool empty() const noexcept { return total_ == 0; }
    std::size_t total() const noexcept { return total_; }
    std::size_t count(MachineState state) const noexcept { return slots_[state_index(state)].count; }

    StateIntervalTable table() const;
    std::map<MachineState, double> distribution() const;

private:
    struct Slot {
        std::size_t count = 0;
        double v_lo = 0.0, v_hi = 0.0, g_lo = 0.0, g_hi = 0.0;
    };
    std::array<Slot, kStateCount> slots_{};
    std::size_t total_ = 0;
};

/// Pools all positions. Throws std::invalid_argument on empty input.
StateIntervalTable extract_intervals(std::span<const SensorFrame> frames);

/// One table per sensor position, keyed by position id.
std::map<std::string, StateIntervalTable> extract_intervals_by_position(std::span<const SensorFrame> frames);

/// Fraction of frames per state. Throws std::invalid_argument on empty input.
std::map<MachineState, double> class_distribution(std::span<const SensorFrame> frames);

}  // namespace fuzzdiag::vibdata
