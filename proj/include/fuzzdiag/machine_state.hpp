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
#include <cstdint>
#include <optional>
#include <string_view>

namespace fuzzdiag {

/// The seven machine state classes, numbered by severity level.
enum class MachineState : std::uint8_t {
    Normal = 0,
    Imbalance = 1,
    StructuralFault = 2,
    Misalignment = 3,
    MechanicalLooseness = 4,
    BearingLubrication = 5,
    GearFault = 6,
};

inline constexpr std::size_t kStateCount = 7;

inline constexpr std::array<MachineState, kStateCount> kAllStates = {
    MachineState::Normal,          MachineState::Imbalance,           MachineState::StructuralFault,
    MachineState::Misalignment,    MachineState::MechanicalLooseness, MachineState::BearingLubrication,
    MachineState::GearFault,
};

constexpr int severity_level(MachineState s) noexcept { return static_cast<int>(s); }

constexpr std::size_t state_index(MachineState s) noexcept { return static_cast<std::size_t>(s); }

/// Two-letter code used in tables and reports ("Nr", "Im", ...).
std::string_view state_code(MachineState s) noexcept;

std::string_view state_name(MachineState s) noexcept;

/// Failure cause class recorded alongside the state by the expert analysis.
std::string_view cause_label(MachineState s) noexcept;

/// Accepts the two-letter code (case-insensitive) or the full state name.
std::optional<MachineState> parse_state(std::string_view text) noexcept;

std::optional<MachineState> state_from_level(int level) noexcept;

}  // namespace fuzzdiag
