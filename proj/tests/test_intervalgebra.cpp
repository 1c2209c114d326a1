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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fuzzdiag/errors.hpp"
#include "fuzzdiag/fixture.hpp"
#include "fuzzdiag/intervalgebra.hpp"
#include "fuzzdiag/io.hpp"
#include "oracles.hpp"

using namespace fuzzdiag;
using namespace fuzzdiag::intervalgebra;

namespace {

std::vector<LabeledInterval> labeled(const std::vector<oracle::Bounds>& set) {
    std::vector<LabeledInterval> out;
    for (std::size_t i = 0; i < set.size(); ++i) {
        out.push_back({"A" + std::to_string(i), Interval(set[i].lo, set[i].hi)});
    }
    return out;
}

// Endpoints on a coarse grid so inclusions and exact duplicates are common.
std::vector<oracle::Bounds> random_set(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> point(0, 12);
    std::vector<oracle::Bounds> set;
    for (std::size_t i = 0; i < n; ++i) {
        int a = point(rng), b = point(rng);
        if (a > b) std::swap(a, b);
        set.push_back({a * 0.5, b * 0.5});
    }
    return set;
}

vibdata::StateIntervalTable random_table(std::mt19937_64& rng, std::size_t states) {
    vibdata::StateIntervalTable table;
    auto v = random_set(rng, states);
    auto g = random_set(rng, states);
    for (std::size_t i = 0; i < states; ++i) {
        table.emplace(kAllStates[i], vibdata::StateIntervals{Interval(v[i].lo, v[i].hi), Interval(g[i].lo, g[i].hi)});
    }
    return table;
}

}  // namespace

TEST_CASE("includes") {
    CHECK(includes(Interval(2, 3), Interval(1, 4)));
    CHECK_FALSE(includes(Interval(1, 4), Interval(2, 3)));
    CHECK(includes(Interval(1, 2), Interval(1, 2)));
}

TEST_CASE("intersects") {
    CHECK(intersects(Interval(0, 2), Interval(1, 3)));
    CHECK_FALSE(intersects(Interval(0, 1), Interval(2, 3)));
    CHECK(intersects(Interval(0, 1), Interval(1, 2)));
}

TEST_CASE("interval construction rejects invalid bounds") {
    CHECK_THROWS_AS(Interval(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(Interval(0, std::numeric_limits<double>::infinity()), std::invalid_argument);
    CHECK_NOTHROW(Interval(1, 1));
}

TEST_CASE("reduce_iic examples") {
    const std::vector<LabeledInterval> nested = {{"a", Interval(2, 3)}, {"b", Interval(1, 4)}};
    const auto r = reduce_iic(nested);
    CHECK(r.survivors == std::vector<std::size_t>{1});
    CHECK(r.home == std::vector<std::size_t>{1, 1});

    const std::vector<LabeledInterval> disjoint = {{"a", Interval(0, 1)}, {"b", Interval(2, 3)}};
    CHECK(reduce_iic(disjoint).survivors == std::vector<std::size_t>{0, 1});

    CHECK_THROWS_AS(reduce_iic(std::vector<LabeledInterval>{}), std::invalid_argument);
}

TEST_CASE("reduce_iic keeps the first of exact duplicates") {
    const std::vector<LabeledInterval> dups = {{"a", Interval(1, 2)}, {"b", Interval(0, 5)}, {"c", Interval(0, 5)}};
    const auto r = reduce_iic(dups);
    CHECK(r.survivors == std::vector<std::size_t>{1});
    CHECK(r.home == std::vector<std::size_t>{1, 1, 1});

    const std::vector<LabeledInterval> twins = {{"a", Interval(1, 2)}, {"b", Interval(1, 2)}};
    CHECK(reduce_iic(twins).survivors == std::vector<std::size_t>{0});
}

TEST_CASE("reduce_iic re-homes to the narrowest superset, lower index on ties") {
    const std::vector<LabeledInterval> set = {
        {"wide", Interval(0, 10)}, {"inner", Interval(4, 5)}, {"narrow", Interval(3, 6)}, {"other", Interval(-1, 4.5)}};
    // "inner" sits in both wide (10) and narrow (3); "narrow" itself is inside wide.
    const auto r = reduce_iic(set);
    CHECK(r.survivors == std::vector<std::size_t>{0, 3});
    CHECK(r.home[1] == 0);

    const std::vector<LabeledInterval> tie = {{"x", Interval(0, 4)}, {"y", Interval(1, 3)}, {"z", Interval(1, 5)}};
    // y is inside x and z, both width 4.
    CHECK(reduce_iic(tie).home[1] == 0);
}

TEST_CASE("reduce_iic on random nested chains keeps the outermost") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> step(0.01, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<oracle::Bounds> chain;
        double lo = 0.0, hi = 0.0;
        for (int i = 0; i < 7; ++i) {
            lo -= step(rng);
            hi += step(rng);
            chain.push_back({lo, hi});
        }
        std::shuffle(chain.begin(), chain.end(), rng);
        const auto r = reduce_iic(labeled(chain));
        CHECK(r.survivors == oracle::antichain(chain));
        REQUIRE(r.survivors.size() == 1);
        CHECK(chain[r.survivors[0]].lo == lo);
        CHECK(chain[r.survivors[0]].hi == hi);
    }
}

TEST_CASE("reduce_iic agrees with the brute-force antichain and its invariants") {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<std::size_t> size(1, 12);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto set = random_set(rng, size(rng));
        const auto input = labeled(set);
        const auto r = reduce_iic(input);
        const auto expected = oracle::antichain(set);
        REQUIRE(r.survivors == expected);

        for (std::size_t i = 0; i < set.size(); ++i) {
            CHECK(r.home[i] == oracle::narrowest_superset(set, expected, i));
        }

        // Idempotent.
        const auto once = surviving_intervals(input);
        const auto twice = surviving_intervals(once);
        REQUIRE(once.size() == twice.size());
        for (std::size_t i = 0; i < once.size(); ++i) CHECK(once[i].interval == twice[i].interval);

        // No surviving pair nests.
        for (std::size_t a = 0; a < once.size(); ++a) {
            for (std::size_t b = 0; b < once.size(); ++b) {
                if (a != b) CHECK_FALSE(includes(once[a].interval, once[b].interval));
            }
        }

        // Union coverage on every endpoint and midpoint.
        for (const auto& iv : set) {
            for (double x : {iv.lo, iv.hi, 0.5 * (iv.lo + iv.hi)}) {
                bool covered = false;
                for (const auto& s : once) covered = covered || s.interval.contains(x);
                CHECK(covered);
            }
        }
    }
}

TEST_CASE("find_relations reports inclusions and intersections") {
    const std::vector<LabeledInterval> set = {{"a", Interval(0, 2)}, {"b", Interval(1, 3)}, {"c", Interval(1.5, 1.8)},
                                              {"d", Interval(5, 6)}};
    const auto rel = find_relations(set);
    REQUIRE(rel.size() == 3);
    CHECK(rel[0].kind == Relation::Intersection);
    CHECK((rel[0].inner == 0 && rel[0].outer == 1));
    CHECK(rel[1].kind == Relation::Inclusion);
    CHECK((rel[1].inner == 2 && rel[1].outer == 0));
    CHECK(rel[2].kind == Relation::Inclusion);
    CHECK((rel[2].inner == 2 && rel[2].outer == 1));

    const auto text = format_diagnostics(analyze_table(fixture::canonical_intervals(fixture::Geometry::Disjoint)));
    CHECK(text.find("no inclusions detected") != std::string::npos);
}

TEST_CASE("truth table keeps the diagonal") {
    const auto seven = build_truth_table(fixture::canonical_intervals(fixture::Geometry::Plant));
    REQUIRE(seven.rows.size() == 7);
    for (std::size_t k = 0; k < 7; ++k) {
        CHECK(seven.rows[k].iv_index == k);
        CHECK(seven.rows[k].ig_index == k);
        CHECK(std::count(seven.rows[k].flags.begin(), seven.rows[k].flags.end(), true) == 1);
        CHECK(seven.rows[k].flags[k]);
    }
    CHECK(build_truth_table(fixture::canonical_intervals(fixture::Geometry::SingleState)).rows.size() == 1);
}

TEST_CASE("truth table equals exhaustive enumeration on random 3-state tables") {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        vibdata::StateIntervalTable table;
        std::vector<oracle::Bounds> v, g;
        for (std::size_t s = 0; s < 3; ++s) {
            double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
            v.push_back({std::min(a, b), std::max(a, b)});
            g.push_back({std::min(c, d), std::max(c, d)});
            table.emplace(kAllStates[s],
                          vibdata::StateIntervals{Interval(v[s].lo, v[s].hi), Interval(g[s].lo, g[s].hi)});
        }
        std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> expected;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                for (std::size_t s = 0; s < 3; ++s)
                    if (v[i] == v[s] && g[j] == g[s]) expected.emplace_back(i, j, s);

        std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> got;
        for (const auto& row : build_truth_table(table).rows)
            for (std::size_t s = 0; s < kStateCount; ++s)
                if (row.flags[s]) got.emplace_back(row.iv_index, row.ig_index, s);
        CHECK(got == expected);
    }
}

TEST_CASE("compile_rules on the plant layout") {
    const auto base = compile_rules(fixture::canonical_intervals(fixture::Geometry::Plant));
    std::vector<std::string> v_ids, g_ids;
    for (const auto& t : base.v_terms) v_ids.push_back(t.id);
    for (const auto& t : base.g_terms) g_ids.push_back(t.id);
    CHECK(v_ids == std::vector<std::string>{"Iv1", "Iv2", "Iv4", "Iv5", "Iv7"});
    CHECK(g_ids == std::vector<std::string>{"Ig1", "Ig5"});
    REQUIRE(base.rules.size() == 7);

    const std::vector<std::pair<std::string, std::string>> expected = {
        {"Iv1", "Ig1"}, {"Iv2", "Ig1"}, {"Iv4", "Ig1"}, {"Iv4", "Ig1"}, {"Iv5", "Ig5"}, {"Iv7", "Ig5"}, {"Iv7", "Ig5"}};
    for (std::size_t k = 0; k < 7; ++k) {
        CHECK(base.rules[k].consequent == kAllStates[k]);
        CHECK(base.v_terms[base.rules[k].v_term].id == expected[k].first);
        CHECK(base.g_terms[base.rules[k].g_term].id == expected[k].second);
    }
    CHECK_NOTHROW(validate(base));
}

TEST_CASE("compile_rules without inclusions keeps every term") {
    const auto base = compile_rules(fixture::canonical_intervals(fixture::Geometry::Disjoint));
    CHECK(base.rules.size() == 7);
    CHECK(base.v_terms.size() == 7);
    CHECK(base.g_terms.size() == 7);
    const auto single = compile_rules(fixture::canonical_intervals(fixture::Geometry::SingleState));
    CHECK(single.rules.size() == 1);
}

TEST_CASE("compile_rules antecedents match a brute-force remap on random 4-state tables") {
    std::mt19937_64 rng(4444);
    for (int trial = 0; trial < 300; ++trial) {
        const auto table = random_table(rng, 4);
        const auto base = compile_rules(table);
        REQUIRE(base.rules.size() == 4);

        std::vector<oracle::Bounds> v, g;
        for (const auto& [s, row] : table) {
            v.push_back({row.v.lo(), row.v.hi()});
            g.push_back({row.g.lo(), row.g.hi()});
        }
        const auto v_keep = oracle::antichain(v);
        const auto g_keep = oracle::antichain(g);
        std::set<MachineState> consequents;
        for (std::size_t s = 0; s < 4; ++s) {
            const auto& rule = base.rules[s];
            consequents.insert(rule.consequent);
            CHECK(base.v_terms[rule.v_term].id == "Iv" + std::to_string(oracle::narrowest_superset(v, v_keep, s) + 1));
            CHECK(base.g_terms[rule.g_term].id == "Ig" + std::to_string(oracle::narrowest_superset(g, g_keep, s) + 1));
        }
        CHECK(consequents.size() == 4);
    }
}

TEST_CASE("rule compilation serializes deterministically") {
    const auto table = fixture::design_intervals({.seed = 3, .jitter = 0.03});
    const io::CompiledRuleBase a{compile_rules(table), {}, 1201};
    const io::CompiledRuleBase b{compile_rules(table), {}, 1201};
    auto with_family = [](io::CompiledRuleBase c) {
        c.family = fuzzcore::build_family(c.rules, fuzzcore::FamilyKind::Trapezoidal);
        return c;
    };
    CHECK(io::dump(io::rulebase_to_json(with_family(a))) == io::dump(io::rulebase_to_json(with_family(b))));
}

TEST_CASE("validate rejects broken rule bases") {
    RuleBase base = compile_rules(fixture::canonical_intervals(fixture::Geometry::Plant));
    RuleBase dup = base;
    dup.rules.push_back(dup.rules.front());
    CHECK_THROWS_AS(validate(dup), SchemaError);
    RuleBase dangling = base;
    dangling.rules[0].v_term = 99;
    CHECK_THROWS_AS(validate(dangling), SchemaError);
    CHECK_THROWS_AS(validate(RuleBase{}), SchemaError);
}
