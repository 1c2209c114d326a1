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
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fuzzdiag/diagharness.hpp"
#include "fuzzdiag/fuzzcore.hpp"
#include "fuzzdiag/intervalgebra.hpp"
#include "fuzzdiag/vibdata.hpp"

namespace fuzzdiag::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kIntervalSchema = "ittflm-intervals/1";
inline constexpr const char* kRuleBaseSchema = "ittflm-rulebase/1";
inline constexpr const char* kReportSchema = "ittflm-report/1";
inline constexpr const char* kBenchSchema = "ittflm-bench/1";

/// Rounds to `digits` significant decimal digits; non-finite values pass through.
double round_significant(double value, int digits = 6);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& json);

enum class FrameFormat { Ndjson, Csv };

/// CSV when the path ends in ".csv", NDJSON otherwise.
FrameFormat detect_format(const std::filesystem::path& path);

using FrameSink = std::function<void(vibdata::SensorFrame&&, std::size_t row)>;

/// Streams validated frames to `sink`, one at a time. Blank lines are skipped;
/// a CSV header line is required. Throws DataError naming the 1-based line.
void read_frames(std::istream& in, FrameFormat format, const FrameSink& sink);

std::vector<vibdata::SensorFrame> read_frames(std::istream& in, FrameFormat format);

void write_frames(std::ostream& out, std::span<const vibdata::SensorFrame> frames, FrameFormat format);

Json table_to_json(const vibdata::StateIntervalTable& table);

/// Adds a "positions" array of per-position tables next to the pooled rows.
Json table_to_json(const vibdata::StateIntervalTable& pooled,
                   const std::map<std::string, vibdata::StateIntervalTable>& by_position);

/// Throws SchemaError on a missing field, unknown state or invalid interval.
vibdata::StateIntervalTable table_from_json(const Json& json);

/// A rule base together with the membership family it was compiled for.
struct CompiledRuleBase {
    intervalgebra::RuleBase rules;
    fuzzcore::MembershipFamilySpec family;
    std::size_t grid_points = fuzzcore::OutputUniverse::kDefaultGridPoints;
};

Json rulebase_to_json(const CompiledRuleBase& compiled);
CompiledRuleBase rulebase_from_json(const Json& json);

Json experiment_to_json(std::span<const diagharness::ExperimentResult> results, bool with_latency = false);

Json bench_to_json(const diagharness::LatencyStats& stats);

/// Reads and parses a JSON file. Throws SchemaError on unreadable or malformed input.
Json load_json(const std::filesystem::path& path);

}  // namespace fuzzdiag::io
