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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "telegate/circuit.hpp"
#include "telegate/pauli.hpp"
#include "telegate/simulator.hpp"
#include "telegate/teleport.hpp"

namespace telegate {

/// A stabilizer M of the target together with an anticommuting partner Q.
struct StabilizerPair {
    Matrix m;
    Matrix q;
    /// Hierarchy levels (informational; empty means above the search limit).
    std::optional<int> m_level;
    std::optional<int> q_level;
};

struct StabilizerSpec {
    StateVector target;
    std::vector<StabilizerPair> pairs;
    /// Non-fatal findings, e.g. a stabilizer outside C_2.
    std::vector<std::string> warnings;
};

/// Checks M_i^2 = I, M_i target = target, {M_i, Q_i} = 0, [M_i, Q_j] = 0 and
/// [M_i, M_j] = 0 for i != j. Throws ValidationError naming the failed condition.
StabilizerSpec make_stabilizer_spec(StateVector target, std::vector<StabilizerPair> pairs, double tol = 1e-10);

/// M_i = U A Z_i A^dagger U^dagger and Q_i = U A X_i A^dagger U^dagger for the
/// per-qubit A of the plan (H for X-teleport, I for Z-teleport).
StabilizerSpec derive_stabilizers(const Matrix &u, const TeleportPlan &plan, double tol = 1e-10);

/// Trace of prod_{j != skip} (I + M_j)/2: the dimension of the space left
/// stabilized once pair `skip` is dropped (2 for an independent set).
double stabilized_dimension(const StabilizerSpec &spec, std::size_t skip);

struct MeasurementBranch {
    int outcome = 0;  // 0 for the +1 eigenvalue, 1 for -1
    double probability = 0;
    std::optional<StateVector> state;
};

/// Measures the involution m on s through one control qubit (H, controlled-m,
/// H, measure). Throws ValidationError when m^2 != I.
std::array<MeasurementBranch, 2> measure_operator(const StateVector &s, const Matrix &m, double tol = 1e-10);

struct PreparationStep {
    Matrix measure;
    Matrix correct;
    std::string measure_label;
    std::string correct_label;
};

struct PreparationScript {
    StateVector initial;
    std::vector<PreparationStep> steps;
    StateVector expected_final;
    /// Shortcut scripts only: the intermediate is a product state, with the
    /// single-qubit stabilizer of each factor ("Z_1", "X_2", ...).
    std::optional<bool> product_intermediate;
    std::vector<std::string> intermediate_stabilizers;
    std::vector<std::string> warnings;
};

/// Measure every M_i in order, applying Q_i after a -1 outcome.
PreparationScript build_preparation(const StabilizerSpec &spec, const StateVector &initial);
PreparationScript build_preparation(const StabilizerSpec &spec);

/// Starts from (I + Q_i) target (normalized) and measures only M_i.
PreparationScript shortcut_preparation(const StabilizerSpec &spec, std::size_t i);

/// Circuit form: system qubits 0..n-1 (initial state injected), one control
/// qubit per step after them, cbit j for step j.
Circuit preparation_circuit(const PreparationScript &script);

struct PreparationBranch {
    std::string bits;
    double probability = 0;
    double fidelity = 0;
    /// Worst |<M_i> - 1| over the stabilizers, on this branch.
    double stabilizer_error = 0;
};

struct PreparationReport {
    bool pass = false;
    double worst_fidelity = 1;
    std::vector<PreparationBranch> branches;
};

/// Exhaustive execution of the script's circuit.
PreparationReport run_preparation(const PreparationScript &script, const StabilizerSpec &spec, double tol = 1e-10);

/// Rank-1 test across every contiguous cut.
bool is_product_state(const StateVector &s, double tol = 1e-10);

/// Single-qubit factors of a product state, qubit 0 first; nullopt if entangled.
std::optional<std::vector<StateVector>> product_factors(const StateVector &s, double tol = 1e-10);

/// The signed Pauli among +-X, +-Y, +-Z stabilizing a one-qubit state, if any.
std::optional<PauliOperator> single_qubit_stabilizer(const StateVector &s, double tol = 1e-10);

/// Replaces the ancilla Inject op of a synthesized circuit by the script's
/// preparation, so both forms can be verified against the same gate.
/// Data qubits keep indices 0..n-1, ancillas n..2n-1, controls follow.
Circuit with_prepared_ancilla(const SynthesisResult &r, const PreparationScript &script);

nlohmann::json script_to_json(const PreparationScript &script);

}  // namespace telegate
