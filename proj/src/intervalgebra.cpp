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

#include "fuzzdiag/intervalgebra.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "fuzzdiag/errors.hpp"

namespace fuzzdiag::intervalgebra {

IicResult reduce_iic(std::span<const LabeledInterval> intervals) {
    const std::size_t n = intervals.size();
    if (n == 0) {
        throw std::invalid_argument("inclusion reduction needs at least one interval");
    }

    // Decide every removal against the untouched set.
    std::vector<bool> removed(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const Interval& a = intervals[i].interval;
        for (std::size_t j = 0; j < n && !removed[i]; ++j) {
            if (i == j) {
                continue;
            }
            const Interval& b = intervals[j].interval;
            if (includes(a, b) && (a != b || j < i)) {
                removed[i] = true;
            }
        }
    }

    IicResult result;
    result.home.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!removed[i]) {
            result.survivors.push_back(i);
            result.home[i] = i;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!removed[i]) {
            continue;
        }
        std::size_t best = n;
        double best_width = std::numeric_limits<double>::infinity();
        for (std::size_t j : result.survivors) {
            const Interval& sup = intervals[j].interval;
            if (includes(intervals[i].interval, sup) && sup.width() < best_width) {
                best = j;
                best_width = sup.width();
            }
        }
        // Inclusion is transitive, so a removed interval always has a surviving superset.
        result.home[i] = best;
    }
    return result;
}

std::vector<LabeledInterval> surviving_intervals(std::span<const LabeledInterval> intervals) {
    const IicResult r = reduce_iic(intervals);
    std::vector<LabeledInterval> out;
    out.reserve(r.survivors.size());
    for (std::size_t i : r.survivors) {
        out.push_back(intervals[i]);
    }
    return out;
}

std::vector<IntervalRelation> find_relations(std::span<const LabeledInterval> intervals) {
    std::vector<IntervalRelation> relations;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        for (std::size_t j = i + 1; j < intervals.size(); ++j) {
            const Interval& a = intervals[i].interval;
            const Interval& b = intervals[j].interval;
            if (includes(b, a)) {
                relations.push_back({j, i, Relation::Inclusion});
            } else if (includes(a, b)) {
                relations.push_back({i, j, Relation::Inclusion});
            } else if (intersects(a, b)) {
                relations.push_back({i, j, Relation::Intersection});
            }
        }
    }
    return relations;
}

TruthTable build_truth_table(const vibdata::StateIntervalTable& table) {
    std::vector<MachineState> states;
    for (const auto& [state, row] : table) {
        states.push_back(state);
    }

    // A candidate (i, j) asserts state s when x_v in I_v(s_i) and x_g in I_g(s_j)
    // are exactly the intervals extracted for s.
    TruthTable truth;
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = 0; j < states.size(); ++j) {
            TruthRow row{i, j, {}};
            bool any = false;
            for (std::size_t s = 0; s < states.size(); ++s) {
                const bool holds = (i == s) && (j == s);
                row.flags[state_index(states[s])] = holds;
                any = any || holds;
            }
            if (any) {
                truth.rows.push_back(row);
            }
        }
    }
    return truth;
}

std::string velocity_term_id(MachineState s) { return "Iv" + std::to_string(severity_level(s) + 1); }

std::string acceleration_term_id(MachineState s) { return "Ig" + std::to_string(severity_level(s) + 1); }

std::vector<LabeledInterval> velocity_intervals(const vibdata::StateIntervalTable& table) {
    std::vector<LabeledInterval> out;
    for (const auto& [state, row] : table) {
        out.push_back({velocity_term_id(state), row.v});
    }
    return out;
}

std::vector<LabeledInterval> acceleration_intervals(const vibdata::StateIntervalTable& table) {
    std::vector<LabeledInterval> out;
    for (const auto& [state, row] : table) {
        out.push_back({acceleration_term_id(state), row.g});
    }
    return out;
}

namespace {

/// Surviving terms plus, per input index, the index of the term standing for it.
std::pair<std::vector<Term>, std::vector<std::size_t>> reduce_to_terms(std::span<const LabeledInterval> intervals) {
    const IicResult r = reduce_iic(intervals);
    std::vector<Term> terms;
    std::vector<std::size_t> term_of_input(intervals.size());
    std::vector<std::size_t> term_of_survivor(intervals.size());
    for (std::size_t i : r.survivors) {
        term_of_survivor[i] = terms.size();
        terms.push_back({intervals[i].label, intervals[i].interval});
    }
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        term_of_input[i] = term_of_survivor[r.home[i]];
    }
    return {std::move(terms), std::move(term_of_input)};
}

}  // namespace

RuleBase compile_rules(const vibdata::StateIntervalTable& table) {
    if (table.empty()) {
        throw std::invalid_argument("cannot compile rules from an empty interval table");
    }
    const auto v_intervals = velocity_intervals(table);
    const auto g_intervals = acceleration_intervals(table);
    auto [v_terms, v_home] = reduce_to_terms(v_intervals);
    auto [g_terms, g_home] = reduce_to_terms(g_intervals);

    RuleBase base;
    base.v_terms = std::move(v_terms);
    base.g_terms = std::move(g_terms);

    const TruthTable truth = build_truth_table(table);
    for (const TruthRow& row : truth.rows) {
        for (MachineState s : kAllStates) {
            if (row.flags[state_index(s)]) {
                base.rules.push_back({v_home[row.iv_index], g_home[row.ig_index], s});
            }
        }
    }
    // Truth rows come out in severity order already; keep rules in that order.
    std::stable_sort(base.rules.begin(), base.rules.end(),
                     [](const FuzzyRule& a, const FuzzyRule& b) { return a.consequent < b.consequent; });
    return base;
}

void validate(const RuleBase& rules) {
    if (rules.rules.empty()) {
        throw SchemaError("rule base has no rules");
    }
    std::set<std::tuple<std::size_t, std::size_t, MachineState>> seen;
    for (const FuzzyRule& rule : rules.rules) {
        if (rule.v_term >= rules.v_terms.size() || rule.g_term >= rules.g_terms.size()) {
            throw SchemaError("rule references a missing term");
        }
        if (!seen.insert({rule.v_term, rule.g_term, rule.consequent}).second) {
            throw SchemaError("duplicate rule for state " + std::string(state_code(rule.consequent)));
        }
    }
}

TableDiagnostics analyze_table(const vibdata::StateIntervalTable& table) {
    TableDiagnostics d;
    d.v_intervals = velocity_intervals(table);
    d.g_intervals = acceleration_intervals(table);
    d.v_relations = find_relations(d.v_intervals);
    d.g_relations = find_relations(d.g_intervals);
    return d;
}

std::string format_diagnostics(const TableDiagnostics& diagnostics) {
    std::ostringstream out;
    std::size_t inclusions = 0;
    std::size_t overlaps = 0;
    auto emit = [&](const std::vector<LabeledInterval>& set, const std::vector<IntervalRelation>& relations) {
        for (const IntervalRelation& r : relations) {
            const std::string& inner = set[r.inner].label;
            const std::string& outer = set[r.outer].label;
            if (r.kind == Relation::Inclusion) {
                out << "inclusion: " << inner << " in " << outer << '\n';
                ++inclusions;
            } else {
                out << "intersection: " << inner << " & " << outer << '\n';
                ++overlaps;
            }
        }
    };
    emit(diagnostics.v_intervals, diagnostics.v_relations);
    emit(diagnostics.g_intervals, diagnostics.g_relations);
    if (inclusions == 0) {
        out << "no inclusions detected\n";
    }
    if (overlaps == 0) {
        out << "no intersections detected\n";
    }
    return out.str();
}

}  // namespace fuzzdiag::intervalgebra
