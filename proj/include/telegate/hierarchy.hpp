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

#include <optional>
#include <string>

#include "telegate/linalg.hpp"

namespace telegate {

/// Outcome of a Clifford-hierarchy classification.
struct HierarchyVerdict {
    /// Smallest k <= k_max with u in C_k; empty means "exceeds k_max".
    std::optional<int> level;
    bool diagonal = false;
    /// True iff level k was certified and membership in C_{k-1} was refuted.
    bool strict = false;

    bool exceeds() const { return !level.has_value(); }
    std::string describe(int k_max) const;
};

struct HierarchyOptions {
    int k_max = 6;
    /// Recognition tolerance for the top-level tests.
    double tol = 1e-9;
    /// Tolerance floor for nested conjugation tests, where rounding compounds.
    double nested_tol = 1e-8;
};

/// Minimal Clifford-hierarchy level of u (projective: global phase ignored).
/// Throws ValidationError for non-unitary input and WidthOverflow above
/// kMaxQubits.
HierarchyVerdict hierarchy_level(const Matrix &u, const HierarchyOptions &opts = {});
HierarchyVerdict hierarchy_level(const Matrix &u, int k_max, double tol);

/// Same verdict, with `diagonal` reporting F_k membership (all off-diagonal
/// entries below tol).
HierarchyVerdict diagonal_hierarchy_level(const Matrix &u, const HierarchyOptions &opts = {});

/// Level that diag(1, e^{i 2 pi / 2^k}) is predicted to occupy (k itself).
/// The pi/2^k single-qubit rotation V^k = diag(1, e^{i pi/2^k}) equals
/// the 2 pi / 2^{k+1} form and is therefore predicted at level k + 1.
inline int predicted_level_two_pi_form(int k) { return k; }
inline int predicted_level_pi_form(int k) { return k + 1; }

/// Number of cached membership answers (tests and diagnostics).
std::size_t hierarchy_memo_size();
void clear_hierarchy_memo();

}  // namespace telegate
