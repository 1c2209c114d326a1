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

#include "fuzzdiag/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>

#include <fmt/format.h>

#include "fuzzdiag/errors.hpp"

namespace fuzzdiag::io {

using fuzzcore::FamilyKind;
using intervalgebra::RuleBase;
using intervalgebra::Term;
using vibdata::SensorFrame;
using vibdata::StateIntervalTable;

double round_significant(double value, int digits) {
    if (!std::isfinite(value) || value == 0.0) {
        return value;
    }
    return std::stod(fmt::format("{:.{}g}", value, digits));
}

std::string dump(const Json& json) { return json.dump(2) + "\n"; }

FrameFormat detect_format(const std::filesystem::path& path) {
    return path.extension() == ".csv" ? FrameFormat::Csv : FrameFormat::Ndjson;
}

namespace {

bool blank(std::string_view line) { return line.find_first_not_of(" \t\r") == std::string_view::npos; }

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

MachineState state_field(std::string_view text, std::size_t row) {
    const auto state = parse_state(trim(text));
    if (!state) {
        throw DataError("unknown machine state '" + std::string(text) + "'", row);
    }
    return *state;
}

std::vector<double> number_array(const Json& json, const char* key, std::size_t row) {
    const auto it = json.find(key);
    if (it == json.end() || !it->is_array()) {
        throw DataError(std::string("missing array field '") + key + "'", row);
    }
    std::vector<double> values;
    values.reserve(it->size());
    for (const Json& v : *it) {
        if (!v.is_number()) {
            throw DataError(std::string("non-numeric entry in '") + key + "'", row);
        }
        values.push_back(v.get<double>());
    }
    return values;
}

std::string string_field(const Json& json, const char* key, std::size_t row) {
    const auto it = json.find(key);
    if (it == json.end() || !it->is_string()) {
        throw DataError(std::string("missing string field '") + key + "'", row);
    }
    return it->get<std::string>();
}

SensorFrame frame_from_json_line(const std::string& line, std::size_t row) {
    Json json;
    try {
        json = Json::parse(line);
    } catch (const Json::parse_error& e) {
        throw DataError(std::string("malformed JSON: ") + e.what(), row);
    }
    if (!json.is_object()) {
        throw DataError("expected a JSON object", row);
    }
    SensorFrame frame;
    frame.position = string_field(json, "position", row);
    frame.window_start = string_field(json, "window_start", row);
    frame.g = number_array(json, "g", row);
    frame.fft_v = number_array(json, "fft_v", row);
    frame.fft_g = number_array(json, "fft_g", row);
    frame.state = state_field(string_field(json, "state", row), row);
    return frame;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::vector<double> packed_list(std::string_view field, const char* name, std::size_t row) {
    std::vector<double> values;
    field = trim(field);
    if (field.empty()) {
        return values;
    }
    for (std::string_view token : split(field, ';')) {
        token = trim(token);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc() || ptr != token.data() + token.size()) {
            throw DataError(std::string("bad number '") + std::string(token) + "' in " + name, row);
        }
        values.push_back(value);
    }
    return values;
}

constexpr std::array<std::string_view, 6> kCsvColumns = {"position", "window_start", "g", "fft_v", "fft_g", "state"};

}  // namespace

void read_frames(std::istream& in, FrameFormat format, const FrameSink& sink) {
    std::string line;
    std::size_t row = 0;
    std::array<std::size_t, kCsvColumns.size()> column{};
    bool have_header = false;
    while (std::getline(in, line)) {
        ++row;
        if (blank(line)) {
            continue;
        }
        if (format == FrameFormat::Ndjson) {
            SensorFrame frame = frame_from_json_line(line, row);
            vibdata::validate_frame(frame, row);
            sink(std::move(frame), row);
            continue;
        }

        const auto fields = split(line, ',');
        if (!have_header) {
            for (std::size_t c = 0; c < kCsvColumns.size(); ++c) {
                bool found = false;
                for (std::size_t f = 0; f < fields.size(); ++f) {
                    if (trim(fields[f]) == kCsvColumns[c]) {
                        column[c] = f;
                        found = true;
                    }
                }
                if (!found) {
                    throw DataError("CSV header lacks column '" + std::string(kCsvColumns[c]) + "'", row);
                }
            }
            have_header = true;
            continue;
        }
        for (std::size_t c : column) {
            if (c >= fields.size()) {
                throw DataError("too few CSV fields", row);
            }
        }
        SensorFrame frame;
        frame.position = std::string(trim(fields[column[0]]));
        frame.window_start = std::string(trim(fields[column[1]]));
        frame.g = packed_list(fields[column[2]], "g", row);
        frame.fft_v = packed_list(fields[column[3]], "fft_v", row);
        frame.fft_g = packed_list(fields[column[4]], "fft_g", row);
        frame.state = state_field(fields[column[5]], row);
        vibdata::validate_frame(frame, row);
        sink(std::move(frame), row);
    }
}

std::vector<SensorFrame> read_frames(std::istream& in, FrameFormat format) {
    std::vector<SensorFrame> frames;
    read_frames(in, format, [&](SensorFrame&& frame, std::size_t) { frames.push_back(std::move(frame)); });
    return frames;
}

void write_frames(std::ostream& out, std::span<const SensorFrame> frames, FrameFormat format) {
    if (format == FrameFormat::Ndjson) {
        for (const SensorFrame& f : frames) {
            Json json;
            json["position"] = f.position;
            json["window_start"] = f.window_start;
            json["g"] = f.g;
            json["fft_v"] = f.fft_v;
            json["fft_g"] = f.fft_g;
            json["state"] = state_code(f.state);
            out << json.dump() << '\n';
        }
        return;
    }
    out << "position,window_start,g,fft_v,fft_g,state\n";
    for (const SensorFrame& f : frames) {
        out << fmt::format("{},{},{},{},{},{}\n", f.position, f.window_start, fmt::join(f.g, ";"),
                           fmt::join(f.fft_v, ";"), fmt::join(f.fft_g, ";"), state_code(f.state));
    }
}

namespace {

Json interval_pair(const Interval& iv) { return Json::array({round_significant(iv.lo()), round_significant(iv.hi())}); }

Json state_rows(const StateIntervalTable& table) {
    Json rows = Json::array();
    for (const auto& [state, row] : table) {
        Json r;
        r["state"] = state_code(state);
        r["iv"] = interval_pair(row.v);
        r["ig"] = interval_pair(row.g);
        rows.push_back(std::move(r));
    }
    return rows;
}

const Json& require(const Json& json, const char* key) {
    if (!json.is_object()) {
        throw SchemaError(std::string("expected an object holding '") + key + "'");
    }
    const auto it = json.find(key);
    if (it == json.end()) {
        throw SchemaError(std::string("missing field '") + key + "'");
    }
    return *it;
}

double require_number(const Json& json, const char* key) {
    const Json& v = require(json, key);
    if (!v.is_number()) {
        throw SchemaError(std::string("field '") + key + "' must be a number");
    }
    return v.get<double>();
}

std::string require_string(const Json& json, const char* key) {
    const Json& v = require(json, key);
    if (!v.is_string()) {
        throw SchemaError(std::string("field '") + key + "' must be a string");
    }
    return v.get<std::string>();
}

void check_schema(const Json& json, const char* expected) {
    const std::string schema = require_string(json, "schema");
    if (schema != expected) {
        throw SchemaError("unsupported schema '" + schema + "', expected '" + expected + "'");
    }
}

Interval interval_from(const Json& json, const char* key) {
    const Json& v = require(json, key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw SchemaError(std::string("field '") + key + "' must be a [lo, hi] pair");
    }
    try {
        return Interval(v[0].get<double>(), v[1].get<double>());
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("field '") + key + "': " + e.what());
    }
}

MachineState state_from(const Json& json, const char* key) {
    const std::string text = require_string(json, key);
    const auto state = parse_state(text);
    if (!state) {
        throw SchemaError("unknown machine state '" + text + "'");
    }
    return *state;
}

}  // namespace

Json table_to_json(const StateIntervalTable& table) {
    Json json;
    json["schema"] = kIntervalSchema;
    json["states"] = state_rows(table);
    return json;
}

Json table_to_json(const StateIntervalTable& pooled, const std::map<std::string, StateIntervalTable>& by_position) {
    Json json = table_to_json(pooled);
    Json positions = Json::array();
    for (const auto& [position, table] : by_position) {
        Json p;
        p["position"] = position;
        p["states"] = state_rows(table);
        positions.push_back(std::move(p));
    }
    json["positions"] = std::move(positions);
    return json;
}

StateIntervalTable table_from_json(const Json& json) {
    check_schema(json, kIntervalSchema);
    const Json& rows = require(json, "states");
    if (!rows.is_array() || rows.empty()) {
        throw SchemaError("'states' must be a non-empty array");
    }
    StateIntervalTable table;
    for (const Json& row : rows) {
        const MachineState state = state_from(row, "state");
        if (!table.emplace(state, vibdata::StateIntervals{interval_from(row, "iv"), interval_from(row, "ig")}).second) {
            throw SchemaError("state '" + std::string(state_code(state)) + "' listed twice");
        }
    }
    return table;
}

namespace {

Json terms_json(const std::vector<Term>& terms) {
    Json out = Json::array();
    for (const Term& t : terms) {
        Json j;
        j["id"] = t.id;
        j["lo"] = round_significant(t.interval.lo());
        j["hi"] = round_significant(t.interval.hi());
        out.push_back(std::move(j));
    }
    return out;
}

std::vector<Term> terms_from(const Json& json, const char* key) {
    const Json& arr = require(json, key);
    if (!arr.is_array() || arr.empty()) {
        throw SchemaError(std::string("'") + key + "' must be a non-empty array");
    }
    std::vector<Term> terms;
    for (const Json& j : arr) {
        try {
            terms.push_back({require_string(j, "id"), Interval(require_number(j, "lo"), require_number(j, "hi"))});
        } catch (const std::invalid_argument& e) {
            throw SchemaError(std::string("term in '") + key + "': " + e.what());
        }
    }
    return terms;
}

std::size_t term_index(const std::vector<Term>& terms, const std::string& id) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].id == id) return i;
    }
    throw SchemaError("rule references unknown term '" + id + "'");
}

}  // namespace

Json rulebase_to_json(const CompiledRuleBase& compiled) {
    const RuleBase& base = compiled.rules;
    Json json;
    json["schema"] = kRuleBaseSchema;
    json["v_terms"] = terms_json(base.v_terms);
    json["g_terms"] = terms_json(base.g_terms);
    Json rules = Json::array();
    for (const auto& rule : base.rules) {
        Json r;
        r["iv"] = base.v_terms.at(rule.v_term).id;
        r["ig"] = base.g_terms.at(rule.g_term).id;
        r["then"] = state_code(rule.consequent);
        rules.push_back(std::move(r));
    }
    json["rules"] = std::move(rules);

    const auto& family = compiled.family;
    Json fam;
    fam["kind"] = fuzzcore::to_string(family.kind);
    fam["sigma_divisor"] = round_significant(family.options.sigma_divisor);
    fam["shoulder"] = round_significant(family.options.shoulder);
    fam["gauss_cutoff"] = round_significant(family.options.gauss_cutoff);
    Json terms = Json::array();
    for (const auto& t : family.terms) {
        Json j;
        j["id"] = t.id;
        Json params = Json::array();
        for (std::size_t i = 0; i < t.function.arity(); ++i) {
            params.push_back(round_significant(t.function.params[i]));
        }
        j["params"] = std::move(params);
        terms.push_back(std::move(j));
    }
    fam["terms"] = std::move(terms);
    json["families"] = std::move(fam);

    Json output;
    output["levels"] = kStateCount;
    output["domain"] = Json::array({-1.0, 7.0});
    output["grid_points"] = compiled.grid_points;
    json["output"] = std::move(output);
    return json;
}

CompiledRuleBase rulebase_from_json(const Json& json) {
    check_schema(json, kRuleBaseSchema);
    CompiledRuleBase out;
    out.rules.v_terms = terms_from(json, "v_terms");
    out.rules.g_terms = terms_from(json, "g_terms");

    const Json& rules = require(json, "rules");
    if (!rules.is_array()) {
        throw SchemaError("'rules' must be an array");
    }
    for (const Json& r : rules) {
        out.rules.rules.push_back({term_index(out.rules.v_terms, require_string(r, "iv")),
                                   term_index(out.rules.g_terms, require_string(r, "ig")), state_from(r, "then")});
    }
    intervalgebra::validate(out.rules);

    const Json& fam = require(json, "families");
    const std::string kind_text = require_string(fam, "kind");
    const auto kind = fuzzcore::parse_family_kind(kind_text);
    if (!kind) {
        throw SchemaError("unknown membership family '" + kind_text + "'");
    }
    out.family.kind = *kind;
    out.family.options.sigma_divisor = require_number(fam, "sigma_divisor");
    out.family.options.shoulder = require_number(fam, "shoulder");
    out.family.options.gauss_cutoff = require_number(fam, "gauss_cutoff");
    try {
        out.family.options.validate();
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("family options: ") + e.what());
    }
    const Json& terms = require(fam, "terms");
    if (!terms.is_array()) {
        throw SchemaError("'families.terms' must be an array");
    }
    std::set<std::string> ids;
    for (const Json& t : terms) {
        fuzzcore::NamedMembership m{require_string(t, "id"), {*kind, {}}};
        const Json& params = require(t, "params");
        if (!params.is_array() || params.size() != m.function.arity()) {
            throw SchemaError("term '" + m.id + "' has the wrong number of parameters");
        }
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (!params[i].is_number()) {
                throw SchemaError("term '" + m.id + "' has a non-numeric parameter");
            }
            m.function.params[i] = params[i].get<double>();
        }
        if (!m.function.well_formed()) {
            throw SchemaError("term '" + m.id + "' has ill-ordered parameters");
        }
        ids.insert(m.id);
        out.family.terms.push_back(std::move(m));
    }
    for (const auto* set : {&out.rules.v_terms, &out.rules.g_terms}) {
        for (const Term& t : *set) {
            if (!ids.count(t.id)) {
                throw SchemaError("term '" + t.id + "' has no membership function");
            }
        }
    }

    if (json.contains("output")) {
        const double points = require_number(json["output"], "grid_points");
        if (!(points >= 2.0) || points != std::floor(points)) {
            throw SchemaError("output grid needs an integral number of points >= 2");
        }
        out.grid_points = static_cast<std::size_t>(points);
    }
    return out;
}

Json experiment_to_json(std::span<const diagharness::ExperimentResult> results, bool with_latency) {
    using diagharness::Grade;
    Json json;
    json["schema"] = kReportSchema;
    Json families = Json::array();
    std::size_t rank = 1;
    for (const auto& result : results) {
        Json fam;
        fam["rank"] = rank++;
        fam["kind"] = fuzzcore::to_string(result.kind);
        const auto& s = result.summary;
        Json summary;
        summary["probes"] = s.probes;
        summary["undefined"] = s.undefined;
        Json counts;
        for (Grade g : {Grade::Excellent, Grade::Good, Grade::Average, Grade::Poor, Grade::Bad}) {
            counts[std::string(diagharness::to_string(g))] = s.count(g);
        }
        summary["grades"] = std::move(counts);
        summary["excellent_rate"] = round_significant(s.excellent_rate);
        summary["detection_rate"] = round_significant(s.detection_rate);
        summary["usable_rate"] = round_significant(s.usable_rate);
        summary["mean_expected_share"] = round_significant(s.mean_expected_share);
        fam["summary"] = std::move(summary);

        Json probes = Json::array();
        for (const auto& r : result.reports) {
            Json p;
            p["n"] = r.probe.id;
            p["fft_v"] = diagharness::probe_label(r.probe, 'V');
            p["fft_g"] = diagharness::probe_label(r.probe, 'g');
            p["x_v"] = round_significant(r.probe.x_v);
            p["x_g"] = round_significant(r.probe.x_g);
            p["expected"] = state_code(r.probe.state);
            p["score"] = r.score ? Json(round_significant(*r.score)) : Json(nullptr);
            p["state"] = fuzzcore::format_decomposition(r.decomposition);
            Json shares = Json::array();
            for (const auto& share : r.decomposition) {
                Json sh;
                sh["state"] = state_code(share.state);
                sh["percent"] = share.percent;
                shares.push_back(std::move(sh));
            }
            p["shares"] = std::move(shares);
            p["grade"] = diagharness::to_string(r.grade);
            if (with_latency) {
                p["latency_us"] = round_significant(r.latency_us);
            }
            probes.push_back(std::move(p));
        }
        fam["probes"] = std::move(probes);
        families.push_back(std::move(fam));
    }
    json["families"] = std::move(families);
    return json;
}

Json bench_to_json(const diagharness::LatencyStats& stats) {
    Json json;
    json["schema"] = kBenchSchema;
    json["median_us"] = round_significant(stats.median_us);
    json["p99_us"] = round_significant(stats.p99_us);
    json["mean_us"] = round_significant(stats.mean_us);
    json["min_us"] = round_significant(stats.min_us);
    json["max_us"] = round_significant(stats.max_us);
    json["iterations"] = stats.iterations;
    return json;
}

Json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw SchemaError("cannot read " + path.string());
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw SchemaError(path.string() + ": malformed JSON: " + e.what());
    }
}

}  // namespace fuzzdiag::io
