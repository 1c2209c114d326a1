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

#include "fuzzdiag/vibdata.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fuzzdiag/errors.hpp"

namespace fuzzdiag::vibdata {

namespace {

void check_sequence(std::span<const double> samples, const char* name, bool non_negative,
                    std::optional<std::size_t> row) {
    if (samples.empty()) {
        throw DataError(std::string(name) + " is empty", row);
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i])) {
            throw DataError(std::string(name) + "[" + std::to_string(i) + "] is not finite", row);
        }
        if (non_negative && samples[i] < 0.0) {
            throw DataError(std::string(name) + "[" + std::to_string(i) + "] is negative", row);
        }
    }
}

}  // namespace

void validate_frame(const SensorFrame& frame, std::optional<std::size_t> row) {
    check_sequence(frame.g, "g", false, row);
    check_sequence(frame.fft_v, "fft_v", true, row);
    check_sequence(frame.fft_g, "fft_g", true, row);
}

double rms(std::span<const double> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("rms of an empty sequence");
    }
    // Scale by the largest magnitude so squares neither overflow nor underflow.
    double scale = 0.0;
    for (double x : samples) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("rms of a non-finite sample");
        }
        scale = std::max(scale, std::abs(x));
    }
    if (scale == 0.0) {
        return 0.0;
    }
    double sum = 0.0;
    for (double x : samples) {
        const double r = x / scale;
        sum += r * r;
    }
    return scale * std::sqrt(sum / static_cast<double>(samples.size()));
}

FrameSummary summarize_frame(const SensorFrame& frame) { return {rms(frame.fft_v), rms(frame.fft_g)}; }

void IntervalAccumulator::add(MachineState state, const FrameSummary& summary) {
    Slot& slot = slots_[state_index(state)];
    if (slot.count == 0) {
        slot.v_lo = slot.v_hi = summary.v_rms;
        slot.g_lo = slot.g_hi = summary.g_rms;
    } else {
        slot.v_lo = std::min(slot.v_lo, summary.v_rms);
        slot.v_hi = std::max(slot.v_hi, summary.v_rms);
        slot.g_lo = std::min(slot.g_lo, summary.g_rms);
        slot.g_hi = std::max(slot.g_hi, summary.g_rms);
    }
    ++slot.count;
    ++total_;
}

void IntervalAccumulator::merge(const IntervalAccumulator& other) {
    for (std::size_t i = 0; i < kStateCount; ++i) {
        const Slot& theirs = other.slots_[i];
        if (theirs.count == 0) {
            continue;
        }
        Slot& mine = slots_[i];
        if (mine.count == 0) {
            mine = theirs;
            continue;
        }
        mine.v_lo = std::min(mine.v_lo, theirs.v_lo);
        mine.v_hi = std::max(mine.v_hi, theirs.v_hi);
        mine.g_lo = std::min(mine.g_lo, theirs.g_lo);
        mine.g_hi = std::max(mine.g_hi, theirs.g_hi);
        mine.count += theirs.count;
    }
    total_ += other.total_;
}

StateIntervalTable IntervalAccumulator::table() const {
    StateIntervalTable table;
    for (MachineState s : kAllStates) {
        const Slot& slot = slots_[state_index(s)];
        if (slot.count > 0) {
            table.emplace(s, StateIntervals{Interval(slot.v_lo, slot.v_hi), Interval(slot.g_lo, slot.g_hi)});
        }
    }
    return table;
}

std::map<MachineState, double> IntervalAccumulator::distribution() const {
    std::map<MachineState, double> fractions;
    if (total_ == 0) {
        return fractions;
    }
    for (MachineState s : kAllStates) {
        const std::size_t n = slots_[state_index(s)].count;
        if (n > 0) {
            fractions.emplace(s, static_cast<double>(n) / static_cast<double>(total_));
        }
    }
    return fractions;
}

StateIntervalTable extract_intervals(std::span<const SensorFrame> frames) {
    if (frames.empty()) {
        throw std::invalid_argument("cannot extract intervals from zero frames");
    }
    IntervalAccumulator acc;
    for (const SensorFrame& frame : frames) {
        acc.add(frame.state, summarize_frame(frame));
    }
    return acc.table();
}

std::map<std::string, StateIntervalTable> extract_intervals_by_position(std::span<const SensorFrame> frames) {
    if (frames.empty()) {
        throw std::invalid_argument("cannot extract intervals from zero frames");
    }
    std::map<std::string, IntervalAccumulator> by_position;
    for (const SensorFrame& frame : frames) {
        by_position[frame.position].add(frame.state, summarize_frame(frame));
    }
    std::map<std::string, StateIntervalTable> tables;
    for (const auto& [position, acc] : by_position) {
        tables.emplace(position, acc.table());
    }
    return tables;
}

std::map<MachineState, double> class_distribution(std::span<const SensorFrame> frames) {
    if (frames.empty()) {
        throw std::invalid_argument("class distribution of zero frames");
    }
    IntervalAccumulator acc;
    for (const SensorFrame& frame : frames) {
        acc.add(frame.state, {});
    }
    return acc.distribution();
}

}  // namespace fuzzdiag::vibdata
