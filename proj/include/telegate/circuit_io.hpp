// Copyright 2026 The Telegate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "telegate/circuit.hpp"

namespace telegate {

inline constexpr std::string_view kCircuitFormat = "telegate-circuit/1";

/// Throws ValidationError listing every violation when `c` is invalid.
nlohmann::json circuit_to_json(const Circuit &c);
std::string serialize(const Circuit &c);

/// Throws ParseError (with line and column) on malformed text or schema
/// mismatches. Semantic problems are left to validate().
Circuit circuit_from_json(const nlohmann::json &j);
Circuit deserialize(std::string_view text);

/// Complex numbers are [re, im] pairs; matrices are row lists.
nlohmann::json complex_to_json(cplx z);
cplx complex_from_json(const nlohmann::json &j);
nlohmann::json matrix_to_json(const Matrix &m);
Matrix matrix_from_json(const nlohmann::json &j);
nlohmann::json vector_to_json(std::span<const cplx> v);
std::vector<cplx> vector_from_json(const nlohmann::json &j);

/// Matrix file: either {"matrix": rows} or a bare row list.
Matrix parse_matrix_text(std::string_view text);

}  // namespace telegate
