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

#include "fuzzdiag/machine_state.hpp"

#include <algorithm>
#include <cctype>

namespace fuzzdiag {

namespace {

struct StateInfo {
    std::string_view code;
    std::string_view name;
    std::string_view cause;
};

constexpr std::array<StateInfo, kStateCount> kInfo = {{
    {"Nr", "Normal", "Normal"},
    {"Im", "Imbalance", "Rotor"},
    {"St", "Structural fault", "Frame"},
    {"Mi", "Misalignment", "Link"},
    {"Ml", "Mechanical looseness", "Looseness"},
    {"Bl", "Bearing lubrication", "Lubrication fault"},
    {"Gf", "Gear fault", "Gear"},
}};

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

}  // namespace

std::string_view state_code(MachineState s) noexcept { return kInfo[state_index(s)].code; }

std::string_view state_name(MachineState s) noexcept { return kInfo[state_index(s)].name; }

std::string_view cause_label(MachineState s) noexcept { return kInfo[state_index(s)].cause; }

std::optional<MachineState> parse_state(std::string_view text) noexcept {
    for (MachineState s : kAllStates) {
        const auto& info = kInfo[state_index(s)];
        if (iequals(text, info.code) || iequals(text, info.name)) {
            return s;
        }
    }
    return std::nullopt;
}

std::optional<MachineState> state_from_level(int level) noexcept {
    if (level < 0 || level >= static_cast<int>(kStateCount)) {
        return std::nullopt;
    }
    return static_cast<MachineState>(level);
}

}  // namespace fuzzdiag
