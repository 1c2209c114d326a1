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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzdiag/intervalgebra.hpp"
#include "fuzzdiag/machine_state.hpp"

namespace fuzzdiag::fuzzcore {

enum class FamilyKind { Triangular, Trapezoidal, Gaussian };

inline constexpr std::array<FamilyKind, 3> kAllFamilies = {FamilyKind::Trapezoidal, FamilyKind::Triangular,
                                                           FamilyKind::Gaussian};

std::string_view to_string(FamilyKind kind) noexcept;
std::optional<FamilyKind> parse_family_kind(std::string_view text) noexcept;

/// Knobs for deriving membership parameters from an interval.
struct FamilyOptions {
    double sigma_divisor = 6.0;  // gaussian sigma = width / sigma_divisor
    double shoulder = 0.25;      // trapezoid plateau starts this fraction of the width in
    double gauss_cutoff = 0.05;  // gaussian degrees below this fuzzify to zero

    /// Throws std::invalid_argument unless all knobs are positive (cutoff may
    /// be zero), shoulder < 0.5 and cutoff < 1.
    void validate() const;
};

/// A single membership function. Parameter layout by kind:
/// triangular (a, m, b), trapezoidal (a, b, c, d), gaussian (mean, sigma).
struct MembershipFunction {
    FamilyKind kind = FamilyKind::Triangular;
    std::array<double, 4> params{};

    double operator()(double x) const noexcept;

    std::size_t arity() const noexcept;

    /// Checks the ordering constraints of the parameters.
    bool well_formed() const noexcept;

    friend bool operator==(const MembershipFunction&, const MembershipFunction&) = default;
};

/// Shape derived from a closed interval. Zero-width intervals get a narrow
/// spike of half-width 1e-9 * max(1, |lo|) so singleton states still fire.
MembershipFunction shape_for(const Interval& interval, FamilyKind kind, const FamilyOptions& options = {});

struct NamedMembership {
    std::string id;
    MembershipFunction function;

    friend bool operator==(const NamedMembership&, const NamedMembership&) = default;
};

struct MembershipFamilySpec {
    FamilyKind kind = FamilyKind::Triangular;
    FamilyOptions options;
    std::vector<NamedMembership> terms;

    const NamedMembership* find(std::string_view id) const noexcept;

    /// Degree below which fuzzification reports zero (gaussian only).
    double cutoff() const noexcept { return kind == FamilyKind::Gaussian ? options.gauss_cutoff : 0.0; }
};

/// Throws std::invalid_argument on an empty term set.
MembershipFamilySpec build_family(std::span<const intervalgebra::Term> terms, FamilyKind kind,
                                  const FamilyOptions& options = {});

/// Family over both input variables of a rule base.
MembershipFamilySpec build_family(const intervalgebra::RuleBase& rules, FamilyKind kind,
                                  const FamilyOptions& options = {});

/// Raw membership degree of `x` in the term at `term_index`.
double membership(const MembershipFamilySpec& spec, std::size_t term_index, double x);

/// Membership after the family's cutoff is applied; this is what inference sees.
double fuzzify(const MembershipFamilySpec& spec, std::size_t term_index, double x);

/// Output variable: one triangular term per severity level (peak at the level,
/// feet one level either side) sampled on a uniform grid over a padded domain.
class OutputUniverse {
public:
    static constexpr std::size_t kDefaultGridPoints = 1201;

    explicit OutputUniverse(std::size_t grid_points = kDefaultGridPoints, std::size_t levels = kStateCount,
                            double domain_lo = -1.0, double domain_hi = 7.0);

    std::span<const double> grid() const noexcept { return *grid_; }
    std::shared_ptr<const std::vector<double>> shared_grid() const noexcept { return grid_; }
    std::size_t levels() const noexcept { return levels_; }
    double domain_lo() const noexcept { return lo_; }
    double domain_hi() const noexcept { return hi_; }

    /// Membership of `x` in the output term centred on `level`.
    static double level_membership(std::size_t level, double x) noexcept;

    /// Sampled degrees of the output term for `level` over the grid.
    std::span<const double> term(std::size_t level) const noexcept;

private:
    std::size_t levels_;
    double lo_;
    double hi_;
    std::shared_ptr<const std::vector<double>> grid_;
    std::vector<std::vector<double>> terms_;
};

/// Discrete fuzzy set over a sampled domain.
struct FuzzySet {
    std::shared_ptr<const std::vector<double>> grid;
    std::vector<double> degrees;

    std::span<const double> points() const noexcept { return *grid; }
};

/// Mamdani inference over a fixed rule base: min conjunction, min
/// implication, max aggregation. Term ids are resolved once at construction.
class InferenceEngine {
public:
    /// Throws std::invalid_argument if a rule term has no membership function
    /// or a consequent level lies outside the output universe.
    InferenceEngine(const intervalgebra::RuleBase& rules, MembershipFamilySpec family,
                    std::shared_ptr<const OutputUniverse> universe);

    std::size_t rule_count() const noexcept { return rules_.size(); }
    const OutputUniverse& universe() const noexcept { return *universe_; }
    const MembershipFamilySpec& family() const noexcept { return family_; }

    /// Firing strength of every rule, in rule order.
    std::vector<double> firing_strengths(double x_v, double x_g) const;

    /// Clips each rule's consequent at its strength and takes the pointwise max.
    FuzzySet aggregate(std::span<const double> strengths) const;

    FuzzySet infer(double x_v, double x_g) const;

private:
    struct CompiledRule {
        std::size_t v_term;  // index into family_.terms
        std::size_t g_term;
        std::size_t level;
    };

    MembershipFamilySpec family_;
    std::shared_ptr<const OutputUniverse> universe_;
    std::vector<CompiledRule> rules_;
};

FuzzySet infer(double x_v, double x_g, const intervalgebra::RuleBase& rules, const MembershipFamilySpec& family,
               const OutputUniverse& universe);

/// Centroid of the set; nullopt when no grid point carries any degree.
std::optional<double> defuzzify(const FuzzySet& set);

struct StateShare {
    MachineState state;
    int percent;

    friend bool operator==(const StateShare&, const StateShare&) = default;
};

/// Ordered by descending share, then by severity.
using Decomposition = std::vector<StateShare>;

/// Splits a crisp score into state shares by evaluating every output term at
/// the score and normalizing. Shares under 1% are dropped. An undefined score
/// decomposes to nothing.
Decomposition decompose_score(std::optional<double> score, const OutputUniverse& universe);

/// "St 50% & Mi 50%"; empty decomposition renders as "NaN".
std::string format_decomposition(const Decomposition& decomposition);

/// Share of `state` in the decomposition, 0 when absent.
int share_of(const Decomposition& decomposition, MachineState state) noexcept;

}  // namespace fuzzdiag::fuzzcore
