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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fuzzdiag/fuzzcore.hpp"
#include "fuzzdiag/vibdata.hpp"

namespace fuzzdiag::diagharness {

enum class Endpoint { NearMin, NearMax };

/// A crisp test input placed just inside one end of a state's intervals.
struct Probe {
    std::size_t id = 0;  // 1-based, in (state, endpoint) order
    MachineState state = MachineState::Normal;
    Endpoint end = Endpoint::NearMin;
    double x_v = 0.0;
    double x_g = 0.0;
};

/// Two probes per state: (v_lo + d_v, g_lo + d_g) and (v_hi - d_v, g_hi - d_g)
/// where d is `offset_fraction` of the respective interval width.
std::vector<Probe> make_probes(const vibdata::StateIntervalTable& table, double offset_fraction = 0.01);

/// "V3-min" / "g3-max" style label for a probe coordinate.
std::string probe_label(const Probe& probe, char variable);

enum class Grade { Excellent, Good, Average, Poor, Bad };

inline constexpr std::size_t kGradeCount = 5;

std::string_view to_string(Grade grade) noexcept;
/// Abbreviation used in report tables ("Exc", "Ave", ...).
std::string_view short_label(Grade grade) noexcept;

/// Grades a decomposition by the share it gives the expected state:
/// >= 90 Excellent, [50, 90) Good, [10, 50) Average, below 10 Poor, and Bad
/// when nothing was diagnosed.
Grade grade_accuracy(MachineState expected, const fuzzcore::Decomposition& decomposition) noexcept;

struct Diagnosis {
    std::optional<double> score;
    fuzzcore::Decomposition decomposition;
    double latency_us = 0.0;
};

/// Two-decimal score, "NaN" when undefined. Never renders a negative zero.
std::string format_score(const std::optional<double>& score);

/// One infer + defuzzify + decompose cycle, timed.
Diagnosis diagnose(const fuzzcore::InferenceEngine& engine, double x_v, double x_g);

struct DiagnosisReport {
    Probe probe;
    std::optional<double> score;
    fuzzcore::Decomposition decomposition;
    Grade grade = Grade::Bad;
    double latency_us = 0.0;
};

struct ExperimentSummary {
    std::size_t probes = 0;
    std::size_t undefined = 0;
    std::array<std::size_t, kGradeCount> grade_counts{};
    double excellent_rate = 0.0;      // Excellent
    double detection_rate = 0.0;      // Excellent or Good
    double usable_rate = 0.0;         // Excellent, Good or Average
    double mean_expected_share = 0.0; // mean percent given to the expected state

    std::size_t count(Grade g) const noexcept { return grade_counts[static_cast<std::size_t>(g)]; }
};

ExperimentSummary summarize(std::span<const DiagnosisReport> reports);

struct ExperimentConfig {
    fuzzcore::FamilyOptions family;
    std::size_t grid_points = fuzzcore::OutputUniverse::kDefaultGridPoints;
    double probe_offset = 0.01;
};

struct ExperimentResult {
    fuzzcore::FamilyKind kind = fuzzcore::FamilyKind::Triangular;
    std::vector<DiagnosisReport> reports;
    ExperimentSummary summary;
};

/// Evaluates the given probes against an already compiled engine.
ExperimentResult run_probes(const fuzzcore::InferenceEngine& engine, std::span<const Probe> probes);

/// Compiles the table's rule base with the given family and runs all probes.
ExperimentResult run_experiment(const vibdata::StateIntervalTable& table, fuzzcore::FamilyKind kind,
                                const ExperimentConfig& config = {});

/// Runs every family and ranks by detection rate, then mean expected-state
/// share, then usable rate.
std::vector<ExperimentResult> compare_families(const vibdata::StateIntervalTable& table,
                                               const ExperimentConfig& config = {});

struct LatencyStats {
    std::size_t iterations = 0;
    double median_us = 0.0;
    double p99_us = 0.0;
    double mean_us = 0.0;
    double min_us = 0.0;
    double max_us = 0.0;
};

/// Times single diagnoses, cycling through `inputs`, after `warmup` untimed
/// cycles. Throws std::invalid_argument if iterations < 1000 or inputs is empty.
LatencyStats bench_diagnose(const fuzzcore::InferenceEngine& engine,
                            std::span<const std::pair<double, double>> inputs, std::size_t iterations,
                            std::size_t warmup = 100);

/// Per-family Markdown table with the probe, expected state, score, state
/// split and grade columns, followed by a summary table.
std::string render_markdown(std::span<const ExperimentResult> results, bool with_latency = false);

}  // namespace fuzzdiag::diagharness
