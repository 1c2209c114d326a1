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

#include "fuzzdiag/diagharness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <stdexcept>

#include <fmt/format.h>

#include "fuzzdiag/intervalgebra.hpp"

namespace fuzzdiag::diagharness {

using fuzzcore::Decomposition;
using fuzzcore::FamilyKind;
using fuzzcore::InferenceEngine;

std::vector<Probe> make_probes(const vibdata::StateIntervalTable& table, double offset_fraction) {
    if (!(offset_fraction >= 0.0) || !(offset_fraction < 0.5)) {
        throw std::invalid_argument("probe offset must lie in [0, 0.5)");
    }
    std::vector<Probe> probes;
    probes.reserve(2 * table.size());
    for (const auto& [state, row] : table) {
        const double dv = offset_fraction * row.v.width();
        const double dg = offset_fraction * row.g.width();
        probes.push_back({probes.size() + 1, state, Endpoint::NearMin, row.v.lo() + dv, row.g.lo() + dg});
        probes.push_back({probes.size() + 1, state, Endpoint::NearMax, row.v.hi() - dv, row.g.hi() - dg});
    }
    return probes;
}

std::string probe_label(const Probe& probe, char variable) {
    return fmt::format("{}{}-{}", variable, severity_level(probe.state) + 1,
                       probe.end == Endpoint::NearMin ? "min" : "max");
}

std::string_view to_string(Grade grade) noexcept {
    switch (grade) {
        case Grade::Excellent:
            return "Excellent";
        case Grade::Good:
            return "Good";
        case Grade::Average:
            return "Average";
        case Grade::Poor:
            return "Poor";
        case Grade::Bad:
            return "Bad";
    }
    return "?";
}

std::string_view short_label(Grade grade) noexcept {
    switch (grade) {
        case Grade::Excellent:
            return "Exc";
        case Grade::Good:
            return "Good";
        case Grade::Average:
            return "Ave";
        case Grade::Poor:
            return "Poor";
        case Grade::Bad:
            return "Bad";
    }
    return "?";
}

Grade grade_accuracy(MachineState expected, const Decomposition& decomposition) noexcept {
    if (decomposition.empty()) {
        return Grade::Bad;
    }
    const int share = fuzzcore::share_of(decomposition, expected);
    if (share >= 90) return Grade::Excellent;
    if (share >= 50) return Grade::Good;
    if (share >= 10) return Grade::Average;
    return Grade::Poor;
}

std::string format_score(const std::optional<double>& score) {
    if (!score) return "NaN";
    // Adding zero turns -0.0 into +0.0.
    return fmt::format("{:.2f}", std::round(*score * 100.0) / 100.0 + 0.0);
}

Diagnosis diagnose(const InferenceEngine& engine, double x_v, double x_g) {
    const auto start = std::chrono::steady_clock::now();
    Diagnosis d;
    d.score = fuzzcore::defuzzify(engine.infer(x_v, x_g));
    d.decomposition = fuzzcore::decompose_score(d.score, engine.universe());
    const auto stop = std::chrono::steady_clock::now();
    d.latency_us = std::chrono::duration<double, std::micro>(stop - start).count();
    return d;
}

ExperimentSummary summarize(std::span<const DiagnosisReport> reports) {
    ExperimentSummary s;
    s.probes = reports.size();
    double share_total = 0.0;
    for (const DiagnosisReport& r : reports) {
        ++s.grade_counts[static_cast<std::size_t>(r.grade)];
        if (!r.score) ++s.undefined;
        share_total += fuzzcore::share_of(r.decomposition, r.probe.state);
    }
    if (s.probes > 0) {
        const auto n = static_cast<double>(s.probes);
        const std::size_t exc = s.count(Grade::Excellent);
        const std::size_t good = s.count(Grade::Good);
        const std::size_t ave = s.count(Grade::Average);
        s.excellent_rate = static_cast<double>(exc) / n;
        s.detection_rate = static_cast<double>(exc + good) / n;
        s.usable_rate = static_cast<double>(exc + good + ave) / n;
        s.mean_expected_share = share_total / n;
    }
    return s;
}

ExperimentResult run_probes(const InferenceEngine& engine, std::span<const Probe> probes) {
    ExperimentResult result;
    result.kind = engine.family().kind;
    result.reports.reserve(probes.size());
    for (const Probe& probe : probes) {
        Diagnosis d = diagnose(engine, probe.x_v, probe.x_g);
        const Grade grade = grade_accuracy(probe.state, d.decomposition);
        result.reports.push_back({probe, d.score, std::move(d.decomposition), grade, d.latency_us});
    }
    result.summary = summarize(result.reports);
    return result;
}

ExperimentResult run_experiment(const vibdata::StateIntervalTable& table, FamilyKind kind,
                                const ExperimentConfig& config) {
    const auto rules = intervalgebra::compile_rules(table);
    auto family = fuzzcore::build_family(rules, kind, config.family);
    const InferenceEngine engine(rules, std::move(family),
                                 std::make_shared<const fuzzcore::OutputUniverse>(config.grid_points));
    const auto probes = make_probes(table, config.probe_offset);
    return run_probes(engine, probes);
}

std::vector<ExperimentResult> compare_families(const vibdata::StateIntervalTable& table,
                                               const ExperimentConfig& config) {
    std::vector<ExperimentResult> results;
    for (FamilyKind kind : fuzzcore::kAllFamilies) {
        results.push_back(run_experiment(table, kind, config));
    }
    std::stable_sort(results.begin(), results.end(), [](const ExperimentResult& a, const ExperimentResult& b) {
        const auto& x = a.summary;
        const auto& y = b.summary;
        if (x.detection_rate != y.detection_rate) return x.detection_rate > y.detection_rate;
        if (x.mean_expected_share != y.mean_expected_share) return x.mean_expected_share > y.mean_expected_share;
        return x.usable_rate > y.usable_rate;
    });
    return results;
}

LatencyStats bench_diagnose(const InferenceEngine& engine, std::span<const std::pair<double, double>> inputs,
                            std::size_t iterations, std::size_t warmup) {
    if (iterations < 1000) {
        throw std::invalid_argument("benchmark needs at least 1000 iterations");
    }
    if (inputs.empty()) {
        throw std::invalid_argument("benchmark needs at least one input");
    }
    volatile double sink = 0.0;
    auto cycle = [&](std::size_t i) {
        const auto& [xv, xg] = inputs[i % inputs.size()];
        const auto score = fuzzcore::defuzzify(engine.infer(xv, xg));
        const auto parts = fuzzcore::decompose_score(score, engine.universe());
        sink = sink + score.value_or(0.0) + static_cast<double>(parts.size());
    };
    for (std::size_t i = 0; i < warmup; ++i) {
        cycle(i);
    }

    std::vector<double> samples(iterations);
    for (std::size_t i = 0; i < iterations; ++i) {
        const auto start = std::chrono::steady_clock::now();
        cycle(i);
        const auto stop = std::chrono::steady_clock::now();
        samples[i] = std::chrono::duration<double, std::micro>(stop - start).count();
    }

    LatencyStats stats;
    stats.iterations = iterations;
    double total = 0.0;
    for (double s : samples) total += s;
    stats.mean_us = total / static_cast<double>(iterations);
    std::sort(samples.begin(), samples.end());
    stats.min_us = samples.front();
    stats.max_us = samples.back();
    stats.median_us = iterations % 2 == 1
                          ? samples[iterations / 2]
                          : 0.5 * (samples[iterations / 2 - 1] + samples[iterations / 2]);
    const auto p99_rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(iterations)));
    stats.p99_us = samples[std::max<std::size_t>(p99_rank, 1) - 1];
    return stats;
}

namespace {

std::string percent(double rate) { return fmt::format("{:.2f}%", 100.0 * rate); }

}  // namespace

std::string render_markdown(std::span<const ExperimentResult> results, bool with_latency) {
    std::string out;
    for (const ExperimentResult& result : results) {
        out += fmt::format("## {}\n\n", fuzzcore::to_string(result.kind));
        out += "| N° | fft_v | fft_g | ExpS | Score | State | Accuracy |";
        out += with_latency ? " Latency (us) |\n" : "\n";
        out += "|---:|---|---|---|---:|---|---|";
        out += with_latency ? "---:|\n" : "\n";
        for (const DiagnosisReport& r : result.reports) {
            out += fmt::format("| {} | {} | {} | {} | {} | {} | {} |", r.probe.id, probe_label(r.probe, 'V'),
                               probe_label(r.probe, 'g'), state_code(r.probe.state), format_score(r.score),
                               fuzzcore::format_decomposition(r.decomposition), short_label(r.grade));
            out += with_latency ? fmt::format(" {:.1f} |\n", r.latency_us) : "\n";
        }
        out += "\n";
    }

    out += "## Summary\n\n";
    out += "| Rank | Family | Exc | Good | Ave | Poor | Bad | NaN | Exc rate | Detection | Usable | Mean share |\n";
    out += "|---:|---|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n";
    std::size_t rank = 1;
    for (const ExperimentResult& result : results) {
        const auto& s = result.summary;
        out += fmt::format("| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {:.1f}% |\n", rank++,
                           fuzzcore::to_string(result.kind), s.count(Grade::Excellent), s.count(Grade::Good),
                           s.count(Grade::Average), s.count(Grade::Poor), s.count(Grade::Bad), s.undefined,
                           percent(s.excellent_rate), percent(s.detection_rate), percent(s.usable_rate),
                           s.mean_expected_share);
    }
    return out;
}

}  // namespace fuzzdiag::diagharness
