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
#include <vector>

#include "json.hpp"
#include "telegate/circuit.hpp"
#include "telegate/clifford.hpp"
#include "telegate/pauli.hpp"
#include "telegate/simulator.hpp"

namespace telegate {

enum class TeleportKind { X, Z };

/// Per-qubit choice between X- and Z-teleportation.
///   X: A = H, B = I, D = X, E = CNOT(ancilla -> data)
///   Z: A = I, B = H, D = Z, E = CNOT(data -> ancilla)
struct TeleportPlan {
    std::vector<TeleportKind> kinds;
    /// Set for the Clifford-conjugated X-teleport variant.
    std::optional<CliffordTableau> generalized_g;

    int num_qubits() const { return static_cast<int>(kinds.size()); }
    std::string a_gate(int i) const { return kinds.at(i) == TeleportKind::X ? "H" : "I"; }
    std::string b_gate(int i) const { return kinds.at(i) == TeleportKind::X ? "I" : "H"; }
    std::string d_gate(int i) const { return kinds.at(i) == TeleportKind::X ? "X" : "Z"; }
    /// "X,X,Z"
    std::string describe() const;

    static TeleportPlan all(int n, TeleportKind k);
    bool operator==(const TeleportPlan &) const = default;
};

/// Register layout shared by every teleport construction: data qubits
/// 0..n-1 (symbolic input), ancillas n..2n-1, cbit i records data qubit i.
struct TeleportLayout {
    int n = 0;
    std::vector<int> data() const;
    std::vector<int> ancillas() const;
};

/// Plain one-bit teleportation of n independent qubits.
Circuit build_one_bit_teleport(TeleportKind kind, int n);

/// Teleports G|psi> through X-teleportation and undoes G on the far side.
/// Identity stages are elided, so g = I gives build_one_bit_teleport(X, n).
Circuit build_generalized_teleport(const CliffordTableau &g);

/// E operator of a plan on 2n qubits (data first, then ancillas).
Matrix plan_entangler(const TeleportPlan &plan);

/// True iff (I_data (x) u_anc) commutes with the plan's E, entrywise within tol.
bool plan_commutes(const Matrix &u, const TeleportPlan &plan, double tol);

/// First commuting plan in tie-break order (fewest Z assignments, then
/// lexicographic with X before Z, scanning qubits left to right).
/// Throws WidthOverflow above 4 qubits and ValidationError for non-unitary u.
std::optional<TeleportPlan> plan_teleportation(const Matrix &u, double tol = 1e-9);

/// All 2^n plans in tie-break order.
std::vector<TeleportPlan> enumerate_plans(int n);

enum class CorrectionClass { Pauli, Clifford, DiagonalPauli, Other };
std::string_view to_string(CorrectionClass c);

struct Correction {
    int qubit = 0;
    /// U D_i U^dagger with its exact phase.
    Matrix op;
    /// op = phase * canonical; the canonical part is what the circuit applies.
    cplx phase{1, 0};
    Matrix canonical;
    CorrectionClass cls = CorrectionClass::Other;
    /// Hierarchy level of the diagonal residue R = op D_i, for DiagonalPauli.
    std::optional<int> residue_level;
    std::string label;
};

/// Classifies a correction for data qubit `qubit` whose Pauli is d.
/// `k` is the level of the teleported gate.
Correction classify_correction(int qubit, const Matrix &op, const Matrix &d, int k, double tol = 1e-9);

/// Short display name for a canonical operator ("X", "S·X", "CNOT", ...), or
/// `fallback` when none is found.
std::string operator_label(const Matrix &canonical, const std::string &fallback);

struct SynthesisResult {
    Circuit circuit;
    StateVector ancilla;
    std::vector<Correction> corrections;
    TeleportPlan plan;
    int level = 0;
    TeleportLayout layout;
    EquivalenceReport verification;
};

/// Teleported form of u: inject U A|0..0>, entangle, measure, correct with
/// U D_i U^dagger. Throws SynthesisError when the plan does not commute, u
/// exceeds k_hint, a correction is unclassifiable, or verification fails.
SynthesisResult synthesize_teleported_gate(const Matrix &u, const TeleportPlan &plan, int k_hint,
                                           double tol = 1e-10);

/// u = G_b V G_a with Clifford G's and diagonal V: X-teleport G_a|psi> into
/// the ancilla V H^n|0..0>, then apply G_b and the corrections
/// G_b V X_i V^dagger G_b^dagger. The decomposition is checked up to global phase.
SynthesisResult synthesize_sandwiched(const Matrix &u, const Matrix &g_a, const Matrix &v, const Matrix &g_b,
                                      double tol = 1e-10);
SynthesisResult synthesize_sandwiched(const Matrix &u, const CliffordTableau &g_a, const Matrix &v,
                                      const CliffordTableau &g_b, double tol = 1e-10);

/// U A|0..0> by gate-by-gate simulation (independent of the matrix path).
StateVector simulate_ancilla(const Matrix &u, const TeleportPlan &plan);

/// Sidecar report: {"ancilla":[...], "corrections":[{"qubit":i,"class":...,"name"|"matrix":...,"phase":[re,im]}]}.
nlohmann::json synthesis_sidecar(const SynthesisResult &r);

}  // namespace telegate
