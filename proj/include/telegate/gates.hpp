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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "telegate/linalg.hpp"

namespace telegate {

/// Standard gate library. Canonical names: I X Y Z H S S† T T† CNOT CZ SWAP
/// CS CS† TOFFOLI Q Q† CH. ASCII aliases ("Sdg", "CX", "CCX", ...) are accepted
/// on input and mapped to the canonical spelling. Q = S† H S.
struct NamedGate {
    std::string name;
    int arity = 1;

    /// Throws ParseError for unknown names.
    static NamedGate lookup(std::string_view name);

    Matrix matrix() const;
    bool is_clifford() const;
};

bool is_known_gate(std::string_view name);
std::string canonical_gate_name(std::string_view name);
Matrix gate_matrix(std::string_view name);

/// Canonical names in library order.
const std::vector<std::string> &gate_library();

/// diag(1, e^{i angle}).
Matrix phase_gate(double angle);

/// diag(1, e^{2 pi i / 2^k}); lies in C_k \ C_{k-1}.
Matrix hierarchy_rotation(int k);

/// Lambda_c(m): m applied to the last qubits iff all `controls` leading qubits are 1.
Matrix multi_controlled(const Matrix &m, int controls);

/// Tensor product of single-qubit matrices, qubit 0 first.
Matrix tensor(std::span<const Matrix> factors);

/// Matrix of a gate placed on `targets` within an n-qubit register.
Matrix gate_on(std::string_view name, std::span<const int> targets, int n);

}  // namespace telegate
