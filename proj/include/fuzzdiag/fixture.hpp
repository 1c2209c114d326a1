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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fuzzdiag/vibdata.hpp"

namespace fuzzdiag::fixture {

/// Interval layouts the synthetic generator can reproduce.
enum class Geometry {
    /// Seven states; velocity intervals reduce to five terms and acceleration
    /// intervals to two under inclusion reduction.
    Plant,
    /// Seven pairwise disjoint states.
    Disjoint,
    /// Normal state only.
    SingleState,
};

struct FixtureOptions {
    std::uint64_t seed = 1;
    std::size_t frames = 1000;
    Geometry geometry = Geometry::Plant;
    double normal_fraction = 0.6374;
    /// Maximum endpoint perturbation as a fraction of interval width. Jittered
    /// layouts keep the unperturbed layout's inclusion structure.
    double jitter = 0.0;
    std::size_t waveform_samples = 256;
    std::size_t spectrum_bins = 64;
};

/// The unperturbed interval layout.
vibdata::StateIntervalTable canonical_intervals(Geometry geometry);

/// The layout the generator targets for these options (canonical when jitter is 0).
vibdata::StateIntervalTable design_intervals(const FixtureOptions& options);

/// Labeled frames whose per-state RMS extremes land on the designed interval
/// endpoints. Samples are rounded to 6 significant digits. Deterministic in
/// the options. Throws std::invalid_argument if there are too few frames to
/// give every state two.
std::vector<vibdata::SensorFrame> generate_frames(const FixtureOptions& options);

}  // namespace fuzzdiag::fixture
