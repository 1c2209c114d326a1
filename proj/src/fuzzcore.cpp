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

#include "fuzzdiag/fuzzcore.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace fuzzdiag::fuzzcore {

std::string_view to_string(FamilyKind kind) noexcept {
    switch (kind) {
        case FamilyKind::Triangular:
            return "triangular";
        case FamilyKind::Trapezoidal:
            return "trapezoidal";
        case FamilyKind::Gaussian:
            return "gaussian";
    }
    return "unknown";
}

std::optional<FamilyKind> parse_family_kind(std::string_view text) noexcept {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "triangular" || lower == "tri" || lower == "trimf") return FamilyKind::Triangular;
    if (lower == "trapezoidal" || lower == "trap" || lower == "trapmf") return FamilyKind::Trapezoidal;
    if (lower == "gaussian" || lower == "gauss" || lower == "gaussmf") return FamilyKind::Gaussian;
    return std::nullopt;
}

void FamilyOptions::validate() const {
    if (!(sigma_divisor > 0.0) || !std::isfinite(sigma_divisor)) {
        throw std::invalid_argument("sigma divisor must be positive");
    }
    if (!(shoulder > 0.0) || !(shoulder < 0.5)) {
        throw std::invalid_argument("trapezoid shoulder fraction must lie in (0, 0.5)");
    }
    if (!(gauss_cutoff >= 0.0) || !(gauss_cutoff < 1.0)) {
        throw std::invalid_argument("gaussian cutoff must lie in [0, 1)");
    }
}

double MembershipFunction::operator()(double x) const noexcept {
    switch (kind) {
        case FamilyKind::Triangular: {
            const auto [a, m, b, unused] = params;
            if (x < a || x > b) return 0.0;
            if (x == m) return 1.0;
            return x < m ? (x - a) / (m - a) : (b - x) / (b - m);
        }
        case FamilyKind::Trapezoidal: {
            const auto [a, b, c, d] = params;
            if (x < a || x > d) return 0.0;
            if (x < b) return (x - a) / (b - a);
            if (x <= c) return 1.0;
            return (d - x) / (d - c);
        }
        case FamilyKind::Gaussian: {
            const double z = (x - params[0]) / params[1];
            return std::exp(-0.5 * z * z);
        }
    }
    return 0.0;
}

std::size_t MembershipFunction::arity() const noexcept {
    switch (kind) {
        case FamilyKind::Triangular:
            return 3;
        case FamilyKind::Trapezoidal:
            return 4;
        case FamilyKind::Gaussian:
            return 2;
    }
    return 0;
}

bool MembershipFunction::well_formed() const noexcept {
    for (std::size_t i = 0; i < arity(); ++i) {
        if (!std::isfinite(params[i])) return false;
    }
    switch (kind) {
        case FamilyKind::Triangular:
            return params[0] < params[2] && params[0] <= params[1] && params[1] <= params[2];
        case FamilyKind::Trapezoidal:
            return params[0] < params[3] && params[0] <= params[1] && params[1] <= params[2] &&
                   params[2] <= params[3];
        case FamilyKind::Gaussian:
            return params[1] > 0.0;
    }
    return false;
}

MembershipFunction shape_for(const Interval& interval, FamilyKind kind, const FamilyOptions& options) {
    double lo = interval.lo();
    double hi = interval.hi();
    const double mid = interval.midpoint();
    if (interval.width() == 0.0) {
        const double eps = 1e-9 * std::max(1.0, std::abs(lo));
        lo -= eps;
        hi += eps;
    }
    const double w = hi - lo;
    switch (kind) {
        case FamilyKind::Triangular:
            return {kind, {lo, mid, hi, 0.0}};
        case FamilyKind::Trapezoidal: {
            if (interval.width() == 0.0) {
                return {kind, {lo, mid, mid, hi}};
            }
            return {kind, {lo, lo + options.shoulder * w, hi - options.shoulder * w, hi}};
        }
        case FamilyKind::Gaussian:
            return {kind, {mid, w / options.sigma_divisor, 0.0, 0.0}};
    }
    throw std::invalid_argument("unknown membership family");
}

const NamedMembership* MembershipFamilySpec::find(std::string_view id) const noexcept {
    for (const NamedMembership& t : terms) {
        if (t.id == id) return &t;
    }
    return nullptr;
}

MembershipFamilySpec build_family(std::span<const intervalgebra::Term> terms, FamilyKind kind,
                                  const FamilyOptions& options) {
    if (terms.empty()) {
        throw std::invalid_argument("membership family needs at least one term");
    }
    options.validate();
    MembershipFamilySpec spec{kind, options, {}};
    spec.terms.reserve(terms.size());
    for (const intervalgebra::Term& term : terms) {
        spec.terms.push_back({term.id, shape_for(term.interval, kind, options)});
    }
    return spec;
}

MembershipFamilySpec build_family(const intervalgebra::RuleBase& rules, FamilyKind kind,
                                  const FamilyOptions& options) {
    std::vector<intervalgebra::Term> all = rules.v_terms;
    all.insert(all.end(), rules.g_terms.begin(), rules.g_terms.end());
    return build_family(all, kind, options);
}

double membership(const MembershipFamilySpec& spec, std::size_t term_index, double x) {
    return spec.terms.at(term_index).function(x);
}

double fuzzify(const MembershipFamilySpec& spec, std::size_t term_index, double x) {
    const double degree = membership(spec, term_index, x);
    return degree < spec.cutoff() ? 0.0 : degree;
}

OutputUniverse::OutputUniverse(std::size_t grid_points, std::size_t levels, double domain_lo, double domain_hi)
    : levels_(levels), lo_(domain_lo), hi_(domain_hi) {
    if (grid_points < 2) {
        throw std::invalid_argument("output universe needs at least two grid points");
    }
    if (levels == 0 || !(domain_lo < domain_hi)) {
        throw std::invalid_argument("output universe needs levels and a non-empty domain");
    }
    auto grid = std::make_shared<std::vector<double>>(grid_points);
    const double span = domain_hi - domain_lo;
    const double last = static_cast<double>(grid_points - 1);
    for (std::size_t k = 0; k < grid_points; ++k) {
        (*grid)[k] = domain_lo + span * static_cast<double>(k) / last;
    }
    terms_.resize(levels);
    for (std::size_t level = 0; level < levels; ++level) {
        terms_[level].reserve(grid_points);
        for (double x : *grid) {
            terms_[level].push_back(level_membership(level, x));
        }
    }
    grid_ = std::move(grid);
}

double OutputUniverse::level_membership(std::size_t level, double x) noexcept {
    return std::max(0.0, 1.0 - std::abs(x - static_cast<double>(level)));
}

std::span<const double> OutputUniverse::term(std::size_t level) const noexcept { return terms_[level]; }

InferenceEngine::InferenceEngine(const intervalgebra::RuleBase& rules, MembershipFamilySpec family,
                                 std::shared_ptr<const OutputUniverse> universe)
    : family_(std::move(family)), universe_(std::move(universe)) {
    if (!universe_) {
        throw std::invalid_argument("inference engine needs an output universe");
    }
    auto resolve = [this](const std::string& id) {
        for (std::size_t i = 0; i < family_.terms.size(); ++i) {
            if (family_.terms[i].id == id) return i;
        }
        throw std::invalid_argument("no membership function for term " + id);
    };
    rules_.reserve(rules.rules.size());
    for (const intervalgebra::FuzzyRule& rule : rules.rules) {
        if (rule.v_term >= rules.v_terms.size() || rule.g_term >= rules.g_terms.size()) {
            throw std::invalid_argument("rule references a missing term");
        }
        const auto level = state_index(rule.consequent);
        if (level >= universe_->levels()) {
            throw std::invalid_argument("rule consequent outside the output universe");
        }
        rules_.push_back({resolve(rules.v_terms[rule.v_term].id), resolve(rules.g_terms[rule.g_term].id), level});
    }
}

std::vector<double> InferenceEngine::firing_strengths(double x_v, double x_g) const {
    std::vector<double> strengths;
    strengths.reserve(rules_.size());
    for (const CompiledRule& rule : rules_) {
        strengths.push_back(std::min(fuzzify(family_, rule.v_term, x_v), fuzzify(family_, rule.g_term, x_g)));
    }
    return strengths;
}

FuzzySet InferenceEngine::aggregate(std::span<const double> strengths) const {
    if (strengths.size() != rules_.size()) {
        throw std::invalid_argument("one firing strength per rule expected");
    }
    FuzzySet out{universe_->shared_grid(), std::vector<double>(universe_->grid().size(), 0.0)};
    for (std::size_t r = 0; r < rules_.size(); ++r) {
        const double alpha = strengths[r];
        if (!(alpha > 0.0)) {
            continue;
        }
        const auto term = universe_->term(rules_[r].level);
        for (std::size_t k = 0; k < term.size(); ++k) {
            out.degrees[k] = std::max(out.degrees[k], std::min(alpha, term[k]));
        }
    }
    return out;
}

FuzzySet InferenceEngine::infer(double x_v, double x_g) const { return aggregate(firing_strengths(x_v, x_g)); }

FuzzySet infer(double x_v, double x_g, const intervalgebra::RuleBase& rules, const MembershipFamilySpec& family,
               const OutputUniverse& universe) {
    const InferenceEngine engine(rules, family, std::make_shared<const OutputUniverse>(universe));
    return engine.infer(x_v, x_g);
}

std::optional<double> defuzzify(const FuzzySet& set) {
    const auto grid = set.points();
    double mass = 0.0;
    double moment = 0.0;
    for (std::size_t k = 0; k < set.degrees.size(); ++k) {
        mass += set.degrees[k];
        moment += grid[k] * set.degrees[k];
    }
    if (mass == 0.0) {
        return std::nullopt;
    }
    return moment / mass;
}

Decomposition decompose_score(std::optional<double> score, const OutputUniverse& universe) {
    Decomposition out;
    if (!score || !std::isfinite(*score)) {
        return out;
    }
    const std::size_t levels = std::min(universe.levels(), kStateCount);
    std::vector<double> degrees(levels);
    double total = 0.0;
    for (std::size_t level = 0; level < levels; ++level) {
        degrees[level] = OutputUniverse::level_membership(level, *score);
        total += degrees[level];
    }
    if (total == 0.0) {
        return out;
    }
    for (std::size_t level = 0; level < levels; ++level) {
        const auto percent = static_cast<int>(std::lround(100.0 * degrees[level] / total));
        if (degrees[level] > 0.0 && percent >= 1) {
            out.push_back({kAllStates[level], percent});
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const StateShare& a, const StateShare& b) { return a.percent > b.percent; });
    return out;
}

std::string format_decomposition(const Decomposition& decomposition) {
    if (decomposition.empty()) {
        return "NaN";
    }
    std::string out;
    for (const StateShare& share : decomposition) {
        if (!out.empty()) out += " & ";
        out += state_code(share.state);
        out += ' ';
        out += std::to_string(share.percent);
        out += '%';
    }
    return out;
}

int share_of(const Decomposition& decomposition, MachineState state) noexcept {
    for (const StateShare& share : decomposition) {
        if (share.state == state) return share.percent;
    }
    return 0;
}

}  // namespace fuzzdiag::fuzzcore
