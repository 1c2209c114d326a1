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

#include <cmath>
#include <numeric>
#include <random>

#include "fuzzdiag/fixture.hpp"
#include "fuzzdiag/fuzzcore.hpp"
#include "oracles.hpp"

using namespace fuzzdiag;
using namespace fuzzdiag::fuzzcore;
using intervalgebra::Term;

namespace {

std::shared_ptr<const OutputUniverse> universe() { return std::make_shared<const OutputUniverse>(); }

InferenceEngine plant_engine(FamilyKind kind) {
    const auto rules = intervalgebra::compile_rules(fixture::canonical_intervals(fixture::Geometry::Plant));
    return InferenceEngine(rules, build_family(rules, kind), universe());
}

FuzzySet clipped(const OutputUniverse& u, std::vector<std::pair<std::size_t, double>> clips) {
    FuzzySet set{u.shared_grid(), std::vector<double>(u.grid().size(), 0.0)};
    for (const auto& [level, alpha] : clips) {
        const auto term = u.term(level);
        for (std::size_t k = 0; k < term.size(); ++k) set.degrees[k] = std::max(set.degrees[k], std::min(alpha, term[k]));
    }
    return set;
}

}  // namespace

TEST_CASE("build_family parameters") {
    const std::vector<Term> terms = {{"T", Interval(0, 4)}};
    const auto tri = build_family(terms, FamilyKind::Triangular).terms[0].function;
    CHECK(tri.params[0] == 0.0);
    CHECK(tri.params[1] == 2.0);
    CHECK(tri.params[2] == 4.0);

    const auto trap = build_family(terms, FamilyKind::Trapezoidal).terms[0].function;
    CHECK(trap.params == std::array<double, 4>{0.0, 1.0, 3.0, 4.0});

    const auto gauss = build_family(terms, FamilyKind::Gaussian).terms[0].function;
    CHECK(gauss.params[0] == 2.0);
    CHECK(gauss.params[1] == doctest::Approx(2.0 / 3.0));
    CHECK(gauss(0.0) < 0.015);
    CHECK(gauss(4.0) < 0.015);

    CHECK_THROWS_AS(build_family(std::vector<Term>{}, FamilyKind::Triangular), std::invalid_argument);
    CHECK_THROWS_AS(build_family(terms, FamilyKind::Trapezoidal, {.shoulder = 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(build_family(terms, FamilyKind::Gaussian, {.sigma_divisor = 0.0}), std::invalid_argument);
}

TEST_CASE("zero-width intervals still fire at their point") {
    const std::vector<Term> point = {{"P", Interval(3, 3)}};
    for (FamilyKind kind : kAllFamilies) {
        const auto f = build_family(point, kind).terms[0].function;
        CHECK(f.well_formed());
        CHECK(f(3.0) == doctest::Approx(1.0));
        CHECK(f(3.1) == doctest::Approx(0.0));
    }
}

TEST_CASE("membership evaluation") {
    const MembershipFunction tri{FamilyKind::Triangular, {0, 2, 4, 0}};
    CHECK(tri(2.0) == 1.0);
    CHECK(tri(1.0) == 0.5);
    CHECK(tri(-1.0) == 0.0);
    CHECK(tri(5.0) == 0.0);

    const MembershipFunction trap{FamilyKind::Trapezoidal, {0, 1, 3, 4}};
    CHECK(trap(2.0) == 1.0);
    CHECK(trap(0.5) == 0.5);
    CHECK(trap(3.5) == 0.5);

    const MembershipFunction gauss{FamilyKind::Gaussian, {2, 2.0 / 3.0, 0, 0}};
    CHECK(gauss(2.0) == 1.0);
    CHECK(gauss(4.0) == doctest::Approx(std::exp(-4.5)).epsilon(1e-12));
    CHECK(gauss(4.0) == doctest::Approx(0.0111).epsilon(0.01));
}

TEST_CASE("gaussian cutoff applies at fuzzification only") {
    const std::vector<Term> terms = {{"T", Interval(0, 4)}};
    const auto spec = build_family(terms, FamilyKind::Gaussian);
    CHECK(membership(spec, 0, 4.0) == doctest::Approx(std::exp(-4.5)));
    CHECK(fuzzify(spec, 0, 4.0) == 0.0);
    CHECK(fuzzify(spec, 0, 2.0) == 1.0);
    const auto loose = build_family(terms, FamilyKind::Gaussian, {.gauss_cutoff = 0.0});
    CHECK(fuzzify(loose, 0, 4.0) > 0.0);
    const auto trap = build_family(terms, FamilyKind::Trapezoidal);
    CHECK(fuzzify(trap, 0, 0.04) == doctest::Approx(0.04));
}

TEST_CASE("membership properties on random intervals") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int trial = 0; trial < 500; ++trial) {
        double a = u(rng), b = u(rng);
        if (a > b) std::swap(a, b);
        if (a == b) continue;
        const Interval iv(a, b);
        const auto tri = shape_for(iv, FamilyKind::Triangular);
        const auto trap = shape_for(iv, FamilyKind::Trapezoidal);
        const auto gauss = shape_for(iv, FamilyKind::Gaussian);
        CHECK(tri(iv.midpoint()) == 1.0);
        CHECK(gauss(iv.midpoint()) == 1.0);
        CHECK(trap(iv.midpoint()) >= 1.0 - 1e-12);
        for (int k = 0; k < 40; ++k) {
            const double x = a - 1.0 + (b - a + 2.0) * k / 39.0;
            CHECK(trap(x) >= tri(x) - 1e-12);
            for (const auto* f : {&tri, &trap, &gauss}) {
                const double m = (*f)(x);
                CHECK(m >= 0.0);
                CHECK(m <= 1.0);
            }
        }
    }
}

TEST_CASE("output universe geometry") {
    const OutputUniverse u;
    REQUIRE(u.grid().size() == 1201);
    CHECK(u.grid().front() == -1.0);
    CHECK(u.grid().back() == 7.0);
    CHECK(u.grid()[150] == 0.0);
    for (std::size_t level = 0; level + 1 < 7; ++level) {
        CHECK(OutputUniverse::level_membership(level, level + 0.5) == 0.5);
        CHECK(OutputUniverse::level_membership(level + 1, level + 0.5) == 0.5);
    }
    for (double x : u.grid()) {
        if (x < 0.0 || x > 6.0) continue;
        double best = 0.0;
        for (std::size_t level = 0; level < 7; ++level) best = std::max(best, OutputUniverse::level_membership(level, x));
        CHECK(best >= 0.5);
    }
    CHECK_THROWS_AS(OutputUniverse(1), std::invalid_argument);
}

TEST_CASE("infer with a single full activation") {
    const auto engine = plant_engine(FamilyKind::Triangular);
    // Midpoints of Iv1 and Ig1 only touch rule 1.
    const auto set = engine.infer(1.25, 1.0);
    const auto strengths = engine.firing_strengths(1.25, 1.0);
    CHECK(strengths[0] == 1.0);
    for (std::size_t r = 1; r < strengths.size(); ++r) CHECK(strengths[r] == 0.0);
    const auto term = engine.universe().term(0);
    for (std::size_t k = 0; k < term.size(); ++k) CHECK(set.degrees[k] == term[k]);
}

TEST_CASE("equal activation of adjacent levels is symmetric") {
    const auto engine = plant_engine(FamilyKind::Trapezoidal);
    // Rules 3 and 4 share antecedents Iv4 / Ig1.
    const auto strengths = engine.firing_strengths(3.6, 1.0);
    CHECK(strengths[2] == strengths[3]);
    CHECK(strengths[2] > 0.0);
    const auto set = engine.infer(3.6, 1.0);
    // Grid index k maps to -1 + k/150, so the mirror about 2.5 is 1050 - k.
    for (std::size_t k = 0; k <= 1050; ++k) CHECK(set.degrees[k] == doctest::Approx(set.degrees[1050 - k]));
    CHECK(*defuzzify(set) == doctest::Approx(2.5).epsilon(1e-9));
}

TEST_CASE("infer matches a brute-force max-of-clipped-terms loop") {
    intervalgebra::RuleBase base;
    base.v_terms = {{"Iv1", Interval(0, 2)}, {"Iv2", Interval(1, 4)}};
    base.g_terms = {{"Ig1", Interval(0, 1)}, {"Ig2", Interval(0.5, 3)}};
    base.rules = {{0, 0, MachineState::Normal}, {1, 0, MachineState::Misalignment}, {1, 1, MachineState::GearFault}};

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> xv(-0.5, 4.5), xg(-0.2, 3.2);
    for (FamilyKind kind : kAllFamilies) {
        const InferenceEngine engine(base, build_family(base, kind, {.gauss_cutoff = 0.0}), universe());
        auto mf = [kind](const Interval& iv, double x) {
            const double lo = iv.lo(), hi = iv.hi(), w = hi - lo;
            switch (kind) {
                case FamilyKind::Triangular:
                    return oracle::tri(x, lo, (lo + hi) / 2, hi);
                case FamilyKind::Trapezoidal:
                    return oracle::trap(x, lo, lo + w / 4, hi - w / 4, hi);
                case FamilyKind::Gaussian:
                    return oracle::gauss(x, (lo + hi) / 2, w / 6);
            }
            return 0.0;
        };
        for (int trial = 0; trial < 50; ++trial) {
            const double v = xv(rng), g = xg(rng);
            const auto set = engine.infer(v, g);
            for (std::size_t k = 0; k < 1201; ++k) {
                const double y = -1.0 + 8.0 * k / 1200.0;
                double expected = 0.0;
                for (const auto& rule : base.rules) {
                    const double fire = std::min(mf(base.v_terms[rule.v_term].interval, v),
                                                 mf(base.g_terms[rule.g_term].interval, g));
                    const double level = severity_level(rule.consequent);
                    expected = std::max(expected, std::min(fire, std::max(0.0, 1.0 - std::abs(y - level))));
                }
                CHECK(set.degrees[k] == doctest::Approx(expected).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("defuzzify anchors") {
    const OutputUniverse u;
    CHECK(*defuzzify(clipped(u, {{2, 1.0}})) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(*defuzzify(clipped(u, {{2, 0.4}, {3, 0.4}})) == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(std::abs(*defuzzify(clipped(u, {{0, 1.0}}))) < 1e-9);
    CHECK(*defuzzify(clipped(u, {{6, 1.0}})) == doctest::Approx(6.0).epsilon(1e-9));
    CHECK_FALSE(defuzzify(clipped(u, {})).has_value());
}

TEST_CASE("decompose_score") {
    const OutputUniverse u;
    CHECK(decompose_score(2.5, u) == Decomposition{{MachineState::StructuralFault, 50}, {MachineState::Misalignment, 50}});
    CHECK(decompose_score(0.0, u) == Decomposition{{MachineState::Normal, 100}});
    CHECK(decompose_score(2.0, u) == Decomposition{{MachineState::StructuralFault, 100}});
    CHECK(decompose_score(2.3, u) == Decomposition{{MachineState::StructuralFault, 70}, {MachineState::Misalignment, 30}});
    CHECK(decompose_score(std::nullopt, u).empty());
    CHECK(format_decomposition(decompose_score(2.5, u)) == "St 50% & Mi 50%");
    CHECK(format_decomposition({}) == "NaN");
    // Sub-percent shares are dropped.
    CHECK(decompose_score(2.004, u) == Decomposition{{MachineState::StructuralFault, 100}});
}

TEST_CASE("decomposition percentages sum to 100 within rounding") {
    const OutputUniverse u;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> score(-0.99, 6.99);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto d = decompose_score(score(rng), u);
        int total = 0;
        for (const auto& s : d) total += s.percent;
        CHECK(std::abs(total - 100) <= 1);
    }
}

TEST_CASE("centroid lies within the support") {
    const auto engine = plant_engine(FamilyKind::Trapezoidal);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> xv(0.0, 8.0), xg(0.0, 4.0);
    for (int trial = 0; trial < 300; ++trial) {
        const auto set = engine.infer(xv(rng), xg(rng));
        const auto score = defuzzify(set);
        if (!score) continue;
        double lo = 1e9, hi = -1e9;
        for (std::size_t k = 0; k < set.degrees.size(); ++k) {
            if (set.degrees[k] > 0.0) {
                lo = std::min(lo, set.points()[k]);
                hi = std::max(hi, set.points()[k]);
            }
        }
        CHECK(*score >= lo);
        CHECK(*score <= hi);
    }
}

TEST_CASE("raising one firing strength never lowers the aggregate") {
    const auto engine = plant_engine(FamilyKind::Triangular);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, engine.rule_count() - 1);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> strengths(engine.rule_count());
        for (double& s : strengths) s = u(rng) < 0.3 ? 0.0 : u(rng);
        const auto before = engine.aggregate(strengths);
        const std::size_t r = pick(rng);
        strengths[r] = std::min(1.0, strengths[r] + u(rng));
        const auto after = engine.aggregate(strengths);
        for (std::size_t k = 0; k < before.degrees.size(); ++k) CHECK(after.degrees[k] >= before.degrees[k]);
    }
}

TEST_CASE("gaussian terms leave sparse regions inside the input hull") {
    const auto rules = intervalgebra::compile_rules(fixture::canonical_intervals(fixture::Geometry::Plant));
    const auto spec = build_family(rules.v_terms, FamilyKind::Gaussian);
    double lo = 1e9, hi = -1e9;
    for (const auto& t : rules.v_terms) {
        lo = std::min(lo, t.interval.lo());
        hi = std::max(hi, t.interval.hi());
    }
    bool sparse = false;
    for (int k = 0; k <= 1000; ++k) {
        const double x = lo + (hi - lo) * k / 1000.0;
        double best = 0.0;
        for (std::size_t t = 0; t < spec.terms.size(); ++t) best = std::max(best, membership(spec, t, x));
        sparse = sparse || best < 0.05;
    }
    CHECK(sparse);
}

TEST_CASE("engine rejects rule terms without membership functions") {
    auto rules = intervalgebra::compile_rules(fixture::canonical_intervals(fixture::Geometry::Plant));
    auto family = build_family(rules.v_terms, FamilyKind::Triangular);
    CHECK_THROWS_AS(InferenceEngine(rules, family, universe()), std::invalid_argument);
}

TEST_CASE("family kind names") {
    for (FamilyKind k : kAllFamilies) CHECK(parse_family_kind(to_string(k)) == k);
    CHECK(parse_family_kind("trapMF") == FamilyKind::Trapezoidal);
    CHECK_FALSE(parse_family_kind("bell").has_value());
}
