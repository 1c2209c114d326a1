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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace fuzzdiag {

/// Malformed or invalid input data. Carries the 1-based record (line) number
/// when the failure can be pinned to one.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what, std::optional<std::size_t> row = std::nullopt)
        : std::runtime_error(row ? "row " + std::to_string(*row) + ": " + what : what), row_(row) {}

    std::optional<std::size_t> row() const noexcept { return row_; }

private:
    std::optional<std::size_t> row_;
};

/// A persisted artifact (table, rule base) does not match its schema.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fuzzdiag
