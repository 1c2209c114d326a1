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
#include <span>
#include <string>
#include <vector>

#include "fuzzdiag/interval.hpp"
#include "fuzzdiag/machine_state.hpp"
#include "fuzzdiag/vibdata.hpp"

namespace fuzzdiag::intervalgebra {

struct LabeledInterval {
    std::string label;
    Interval interval;
};

/// Outcome of inclusion reduction over an indexed interval set.
struct IicResult {
    /// Indices (into the input) of intervals that survive, in input order.
    std::vector<std::size_t> survivors;
    /// For every input index, the input index of the surviving interval that
    /// now stands for it (itself when it survived).
    std::vector<std::size_t> home;
};

/// Removes every interval included in another interval of the set.
///
/// The removal set is computed against the original set before anything is
/// removed, so the result does not depend on scan order. Of several exact
/// duplicates only the first (lowest index) survives. A removed interval is
/// re-homed to its narrowest surviving superset, ties going to the lower index.
/// Throws std::invalid_argument on an empty set.
IicResult reduce_iic(std::span<const LabeledInterval> intervals);

/// Convenience form returning the surviving intervals themselves.
std::vector<LabeledInterval> surviving_intervals(std::span<const LabeledInterval> intervals);

enum class Relation { Inclusion, Intersection };

/// For Inclusion, `inner` is included in `outer`. For Intersection the pair
/// overlaps without either including the other, and inner < outer by index.
struct IntervalRelation {
    std::size_t inner;
    std::size_t outer;
    Relation kind;
};

std::vector<IntervalRelation> find_relations(std::span<const LabeledInterval> intervals);

struct TruthRow {
    std::size_t iv_index;  // which state's velocity interval
    std::size_t ig_index;  // which state's acceleration interval
    std::array<bool, kStateCount> flags{};
};

struct TruthTable {
    std::vector<TruthRow> rows;
};

/// Enumerates every (velocity interval, acceleration interval, state)
/// candidate under conjunction and keeps the rows where some state flag holds.
/// Indices refer to the table's rows in severity order.
TruthTable build_truth_table(const vibdata::StateIntervalTable& table);

struct Term {
    std::string id;
    Interval interval;

    friend bool operator==(const Term&, const Term&) = default;
};

struct FuzzyRule {
    std::size_t v_term;
    std::size_t g_term;
    MachineState consequent;

    friend bool operator==(const FuzzyRule&, const FuzzyRule&) = default;
};

/// Minimized conjunctive rules `if x_v is V and x_g is G then state`.
struct RuleBase {
    std::vector<Term> v_terms;
    std::vector<Term> g_terms;
    std::vector<FuzzyRule> rules;

    friend bool operator==(const RuleBase&, const RuleBase&) = default;
};

/// Throws SchemaError if a rule references a missing term or duplicates another.
void validate(const RuleBase& rules);

/// "Iv3" / "Ig3" style ids: the owning state's severity level plus one.
std::string velocity_term_id(MachineState s);
std::string acceleration_term_id(MachineState s);

std::vector<LabeledInterval> velocity_intervals(const vibdata::StateIntervalTable& table);
std::vector<LabeledInterval> acceleration_intervals(const vibdata::StateIntervalTable& table);

/// Truth table, then inclusion reduction on each input variable, then one
/// rule per state in severity order over the surviving terms.
RuleBase compile_rules(const vibdata::StateIntervalTable& table);

struct TableDiagnostics {
    std::vector<LabeledInterval> v_intervals;
    std::vector<LabeledInterval> g_intervals;
    std::vector<IntervalRelation> v_relations;
    std::vector<IntervalRelation> g_relations;
};

TableDiagnostics analyze_table(const vibdata::StateIntervalTable& table);

/// Human-readable listing of inclusions and intersections.
std::string format_diagnostics(const TableDiagnostics& diagnostics);

}  // namespace fuzzdiag::intervalgebra
