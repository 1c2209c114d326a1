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

// fuzzdiag: interval extraction, rule compilation, diagnosis, experiments and
// latency benchmarks over labeled vibration spectra.
//
// Exit codes: 0 success (including "no rule fired"), 1 usage error,
// 2 data or schema error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fuzzdiag/diagharness.hpp"
#include "fuzzdiag/errors.hpp"
#include "fuzzdiag/fixture.hpp"
#include "fuzzdiag/fuzzcore.hpp"
#include "fuzzdiag/intervalgebra.hpp"
#include "fuzzdiag/io.hpp"
#include "fuzzdiag/vibdata.hpp"

namespace fs = std::filesystem;
using namespace fuzzdiag;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PipelineConfig {
    std::string kind = "trapezoidal";
    double sigma_divisor = 6.0;
    double shoulder = 0.25;
    double gauss_cutoff = 0.05;
    std::size_t grid_points = fuzzcore::OutputUniverse::kDefaultGridPoints;
    double probe_offset = 0.01;

    fuzzcore::FamilyKind family_kind() const {
        const auto k = fuzzcore::parse_family_kind(kind);
        if (!k) throw UsageError("unknown membership family '" + kind + "'");
        return *k;
    }

    fuzzcore::FamilyOptions family_options() const {
        fuzzcore::FamilyOptions o{sigma_divisor, shoulder, gauss_cutoff};
        try {
            o.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        return o;
    }

    diagharness::ExperimentConfig experiment() const {
        if (grid_points < 2) throw UsageError("grid resolution must be at least 2 points");
        if (!(probe_offset > 0.0) || !(probe_offset < 0.5)) throw UsageError("probe offset must lie in (0, 0.5)");
        return {family_options(), grid_points, probe_offset};
    }
};

/// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << text;
}

struct Format {
    std::string value = "md";
    bool json() const { return value == "json"; }
};

int cmd_gen_fixture(const fixture::FixtureOptions& options, const std::string& out_path, const std::string& format) {
    const auto frames = fixture::generate_frames(options);
    io::FrameFormat fmt = io::FrameFormat::Ndjson;
    if (format == "csv" || (format.empty() && !out_path.empty() && io::detect_format(out_path) == io::FrameFormat::Csv)) {
        fmt = io::FrameFormat::Csv;
    }
    std::ostringstream text;
    io::write_frames(text, frames, fmt);
    emit(out_path, text.str());
    return 0;
}

int cmd_extract(const std::string& data_path, const std::string& out_path, bool per_position) {
    std::ifstream in(data_path, std::ios::binary);
    if (!in) throw DataError("cannot read " + data_path);

    vibdata::IntervalAccumulator pooled;
    std::map<std::string, vibdata::IntervalAccumulator> by_position;
    io::read_frames(in, io::detect_format(data_path), [&](vibdata::SensorFrame&& frame, std::size_t) {
        const auto summary = vibdata::summarize_frame(frame);
        pooled.add(frame.state, summary);
        if (per_position) by_position[frame.position].add(frame.state, summary);
    });
    if (pooled.empty()) throw DataError(data_path + " holds no frames");

    const auto table = pooled.table();
    io::Json json;
    if (per_position) {
        std::map<std::string, vibdata::StateIntervalTable> tables;
        for (const auto& [position, acc] : by_position) tables.emplace(position, acc.table());
        json = io::table_to_json(table, tables);
    } else {
        json = io::table_to_json(table);
    }
    emit(out_path, io::dump(json));

    std::ostream& log = (out_path.empty() || out_path == "-") ? std::cerr : std::cout;
    log << fmt::format("{} frames, {} states\n", pooled.total(), table.size());
    for (const auto& [state, fraction] : pooled.distribution()) {
        log << fmt::format("{}: {:.1f}%\n", state_code(state), 100.0 * fraction);
    }
    return 0;
}

int cmd_compile(const std::string& table_path, const PipelineConfig& config, const std::string& out_path) {
    const auto table = io::table_from_json(io::load_json(table_path));
    const auto kind = config.family_kind();
    const auto options = config.family_options();
    if (config.grid_points < 2) throw UsageError("grid resolution must be at least 2 points");

    io::CompiledRuleBase compiled;
    compiled.rules = intervalgebra::compile_rules(table);
    compiled.family = fuzzcore::build_family(compiled.rules, kind, options);
    compiled.grid_points = config.grid_points;
    emit(out_path, io::dump(io::rulebase_to_json(compiled)));

    std::ostream& log = (out_path.empty() || out_path == "-") ? std::cerr : std::cout;
    log << intervalgebra::format_diagnostics(intervalgebra::analyze_table(table));
    log << fmt::format("{} rules, {} v-terms, {} g-terms ({})\n", compiled.rules.rules.size(),
                       compiled.rules.v_terms.size(), compiled.rules.g_terms.size(), fuzzcore::to_string(kind));
    return 0;
}

fuzzcore::InferenceEngine load_engine(const std::string& rulebase_path) {
    auto compiled = io::rulebase_from_json(io::load_json(rulebase_path));
    return fuzzcore::InferenceEngine(compiled.rules, std::move(compiled.family),
                                     std::make_shared<const fuzzcore::OutputUniverse>(compiled.grid_points));
}

int cmd_diagnose(const std::string& rulebase_path, double x_v, double x_g) {
    if (!std::isfinite(x_v) || !std::isfinite(x_g)) throw UsageError("inputs must be finite");
    const auto engine = load_engine(rulebase_path);
    const auto d = diagharness::diagnose(engine, x_v, x_g);
    if (!d.score) {
        std::cout << fmt::format("no rule fired latency_us={:.1f}\n", d.latency_us);
    } else {
        std::cout << fmt::format("score={} {} latency_us={:.1f}\n", diagharness::format_score(d.score),
                                 fuzzcore::format_decomposition(d.decomposition), d.latency_us);
    }
    return 0;
}

int cmd_experiment(const std::string& table_path, const PipelineConfig& config, const std::string& only_kind,
                   const Format& format, bool with_latency, const std::string& out_path) {
    const auto table = io::table_from_json(io::load_json(table_path));
    const auto experiment = config.experiment();
    std::vector<diagharness::ExperimentResult> results;
    if (only_kind.empty()) {
        results = diagharness::compare_families(table, experiment);
    } else {
        PipelineConfig single = config;
        single.kind = only_kind;
        results.push_back(diagharness::run_experiment(table, single.family_kind(), experiment));
    }
    emit(out_path, format.json() ? io::dump(io::experiment_to_json(results, with_latency))
                                 : diagharness::render_markdown(results, with_latency));
    return 0;
}

int cmd_bench(const std::string& rulebase_path, std::size_t iterations, const Format& format,
              const std::string& out_path) {
    if (iterations < 1000) throw UsageError("benchmark needs at least 1000 iterations");
    auto compiled = io::rulebase_from_json(io::load_json(rulebase_path));
    std::vector<std::pair<double, double>> inputs;
    for (const auto& rule : compiled.rules.rules) {
        inputs.emplace_back(compiled.rules.v_terms[rule.v_term].interval.midpoint(),
                            compiled.rules.g_terms[rule.g_term].interval.midpoint());
    }
    const fuzzcore::InferenceEngine engine(compiled.rules, std::move(compiled.family),
                                           std::make_shared<const fuzzcore::OutputUniverse>(compiled.grid_points));
    const auto stats = diagharness::bench_diagnose(engine, inputs, iterations);
    if (format.json()) {
        emit(out_path, io::dump(io::bench_to_json(stats)));
    } else {
        emit(out_path, fmt::format("| rules | iterations | median (us) | p99 (us) | mean (us) |\n"
                                   "|---:|---:|---:|---:|---:|\n| {} | {} | {:.2f} | {:.2f} | {:.2f} |\n",
                                   engine.rule_count(), stats.iterations, stats.median_us, stats.p99_us,
                                   stats.mean_us));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fuzzy rule compilation and machine state diagnosis from vibration spectra"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file with pipeline settings; flags override it");

    const CLI::Validator family_name(
        [](const std::string& text) {
            return fuzzcore::parse_family_kind(text) ? std::string() : "unknown membership family '" + text + "'";
        },
        "FAMILY");

    PipelineConfig config;
    app.add_option("--kind", config.kind, "Membership family: triangular, trapezoidal or gaussian")
        ->check(family_name)
        ->capture_default_str();
    app.add_option("--sigma-divisor", config.sigma_divisor, "Gaussian sigma = interval width / divisor")
        ->capture_default_str();
    app.add_option("--shoulder", config.shoulder, "Trapezoid plateau inset as a fraction of width")
        ->capture_default_str();
    app.add_option("--gauss-cutoff", config.gauss_cutoff, "Gaussian degrees below this count as zero")
        ->capture_default_str();
    app.add_option("--grid-points", config.grid_points, "Output universe resolution")->capture_default_str();
    app.add_option("--probe-offset", config.probe_offset, "Probe inset as a fraction of interval width")
        ->capture_default_str();

    fixture::FixtureOptions fixture_options;
    std::string geometry = "plant";
    std::string gen_out;
    std::string gen_format;
    auto* gen = app.add_subcommand("gen-fixture", "Emit a synthetic labeled dataset");
    gen->add_option("--seed", fixture_options.seed)->capture_default_str();
    gen->add_option("--frames", fixture_options.frames)->capture_default_str();
    gen->add_option("--geometry", geometry, "plant, disjoint or single")
        ->check(CLI::IsMember({"plant", "disjoint", "single"}))
        ->capture_default_str();
    gen->add_option("--jitter", fixture_options.jitter, "Endpoint perturbation as a fraction of width")
        ->capture_default_str();
    gen->add_option("--normal-fraction", fixture_options.normal_fraction)->capture_default_str();
    gen->add_option("--bins", fixture_options.spectrum_bins, "Spectrum length")->capture_default_str();
    gen->add_option("--samples", fixture_options.waveform_samples, "Waveform length")->capture_default_str();
    gen->add_option("-o,--out", gen_out, "Output file (default stdout)");
    gen->add_option("--format", gen_format, "ndjson or csv (default from extension)")
        ->check(CLI::IsMember({"ndjson", "csv"}));

    std::string data_path;
    std::string extract_out;
    bool per_position = false;
    auto* extract = app.add_subcommand("extract", "Build the per-state interval table from labeled frames");
    extract->add_option("data", data_path, "NDJSON or CSV frames")->required();
    extract->add_option("-o,--out", extract_out, "Interval table JSON (default stdout)");
    extract->add_flag("--per-position", per_position, "Also emit one table per sensor position");

    std::string table_path;
    std::string compile_out;
    auto* compile = app.add_subcommand("compile", "Compile an interval table into a rule base");
    compile->add_option("table", table_path, "Interval table JSON")->required();
    compile->add_option("-o,--out", compile_out, "Rule base JSON (default stdout)");

    std::string rulebase_path;
    double x_v = 0.0;
    double x_g = 0.0;
    auto* diag = app.add_subcommand("diagnose", "Diagnose one (fft_v, fft_g) reading");
    diag->add_option("rulebase", rulebase_path, "Rule base JSON")->required();
    diag->add_option("x_v", x_v, "Velocity spectrum RMS")->required();
    diag->add_option("x_g", x_g, "Acceleration spectrum RMS")->required();

    std::string experiment_table;
    std::string only_kind;
    Format experiment_format;
    bool with_latency = false;
    std::string experiment_out;
    auto* experiment = app.add_subcommand("experiment", "Run the probe protocol for every membership family");
    experiment->add_option("table", experiment_table, "Interval table JSON")->required();
    experiment->add_option("--only", only_kind, "Run a single family")->check(family_name);
    experiment->add_option("--format", experiment_format.value, "md or json")
        ->check(CLI::IsMember({"md", "json"}))
        ->capture_default_str();
    experiment->add_flag("--with-latency", with_latency, "Include per-probe wall time");
    experiment->add_option("-o,--out", experiment_out, "Report file (default stdout)");

    std::string bench_rulebase;
    std::size_t iterations = 10000;
    Format bench_format{"json"};
    std::string bench_out;
    auto* bench = app.add_subcommand("bench", "Measure single-diagnosis latency");
    bench->add_option("rulebase", bench_rulebase, "Rule base JSON")->required();
    bench->add_option("-n,--iterations", iterations)->capture_default_str();
    bench->add_option("--format", bench_format.value, "md or json")
        ->check(CLI::IsMember({"md", "json"}))
        ->capture_default_str();
    bench->add_option("-o,--out", bench_out, "Report file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*gen) {
            fixture_options.geometry = geometry == "disjoint" ? fixture::Geometry::Disjoint
                                       : geometry == "single" ? fixture::Geometry::SingleState
                                                              : fixture::Geometry::Plant;
            return cmd_gen_fixture(fixture_options, gen_out, gen_format);
        }
        if (*extract) return cmd_extract(data_path, extract_out, per_position);
        if (*compile) return cmd_compile(table_path, config, compile_out);
        if (*diag) return cmd_diagnose(rulebase_path, x_v, x_g);
        if (*experiment) {
            return cmd_experiment(experiment_table, config, only_kind, experiment_format, with_latency,
                                  experiment_out);
        }
        if (*bench) return cmd_bench(bench_rulebase, iterations, bench_format, bench_out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
