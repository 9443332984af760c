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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "telegate/ancilla.hpp"
#include "telegate/circuit.hpp"
#include "telegate/linalg.hpp"
#include "telegate/simulator.hpp"
#include "telegate/teleport.hpp"

namespace telegate {

/// Widest gate and highest level the recursive constructions accept.
inline constexpr int kRecursiveMaxWidth = 3;
inline constexpr int kRecursiveMaxLevel = 5;

/// Description of a diagonal gate. V^l = diag(1, e^{i pi / 2^l}) and
/// Lambda_n(V^l) applies V^l to qubit n iff qubits 0..n-1 are all 1.
struct GateSpec {
    enum class Kind { Rotation, ControlledRotation, Product, Diagonal };

    Kind kind = Kind::Diagonal;
    int controls = 0;
    int power = 0;
    /// Product: factor j acts on factor_qubits[j] of a `width`-qubit register.
    int width = 0;
    std::vector<GateSpec> factors;
    std::vector<std::vector<int>> factor_qubits;
    /// Diagonal: the explicit matrix.
    Matrix matrix_value;

    static GateSpec rotation(int power);
    static GateSpec controlled_rotation(int controls, int power);
    static GateSpec product(int width, std::vector<GateSpec> factors, std::vector<std::vector<int>> qubits);
    static GateSpec diagonal(Matrix m);

    /// Spec whose classifier level is `level`: "V" is a single-qubit rotation,
    /// "CV" and "CCV" put one or two controls on it. Any other name is looked
    /// up in the gate library.
    static GateSpec from_name(const std::string &name, std::optional<int> level);

    Matrix matrix() const;
    int num_qubits() const;
    std::string describe() const;
};

struct RecursiveNode;

/// A correction whose diagonal residue is realized by a lower-level
/// teleportation. The child runs after op `after_op` of the parent circuit,
/// iff cbit `on_cbit` is 1, on the parent output qubits `targets`.
struct ChildLink {
    int on_cbit = 0;
    std::size_t after_op = 0;
    std::vector<int> targets;
    std::vector<RecursiveNode> child;  // exactly one element
};

/// One teleportation (or, at level <= 2, one direct gate).
/// Teleport layout: data 0..w-1 symbolic, ancillas w..2w-1 output, cbit i
/// measures data qubit i. Recursive corrections appear in `circuit` as the
/// cX part only; the residue is supplied by the linked child.
struct RecursiveNode {
    Matrix gate;
    int level = 0;
    Circuit circuit;
    std::vector<int> outputs;
    std::vector<Correction> corrections;
    std::vector<ChildLink> children;

    bool is_teleport() const { return circuit.num_cbits() > 0; }
    int width() const { return qubit_count(gate); }
};

struct ResourceReport {
    int ancilla_qubits = 0;
    int measurements = 0;
    /// Classically controlled gates keyed by the hierarchy level of the gate.
    std::map<int, int> cgates_by_level;
    int depth = 0;
};

/// One branch of the tree-form channel. Bits use the preorder cbit numbering
/// shared with the flattened circuit; '-' marks a child that did not run.
struct TreeBranch {
    std::string bits;
    double probability = 0;
    /// Unnormalized Kraus operator, output qubits by input qubits.
    Matrix op;
};

struct RecursiveCircuit {
    GateSpec spec;
    Matrix gate;
    int level = 0;
    RecursiveNode root;
    ResourceReport resources;
    /// Descent invariant: residues at tree depth d classify at level <= k - d.
    bool descent_ok = false;
    EquivalenceReport verification;
    std::optional<Circuit> flattened;
    /// Output qubits of the flattened circuit, in gate-qubit order.
    std::vector<int> flattened_outputs;
    std::optional<EquivalenceReport> flattened_verification;
};

/// X-teleportation at every level, recursing on each correction residue
/// above level 2. Throws ValidationError for non-diagonal gates,
/// WidthOverflow beyond width 3, level 5 or a 12-qubit flattened form, and
/// SynthesisError when verification fails.
RecursiveCircuit synth_recursive(const GateSpec &g, bool flatten, double tol = 1e-9);

/// Exact resource counts by walking the tree.
ResourceReport resource_report(const RecursiveNode &root);

/// All branches of the tree, composing child Kraus operators into the parent.
std::vector<TreeBranch> tree_branch_operators(const RecursiveNode &root);

/// Flattened single circuit: children are always present, their entangling
/// CNOTs run only when the parent bit is set and become SWAPs otherwise, so
/// the output location is branch-independent.
Circuit flatten_tree(const RecursiveNode &root, std::vector<int> *outputs = nullptr);

/// Total cbits of the tree (the preorder numbering range).
int tree_cbits(const RecursiveNode &root);

/// Per-branch projective check of tree branches against u.
EquivalenceReport verify_tree(const std::vector<TreeBranch> &branches, const Matrix &u, double tol);

nlohmann::json tree_to_json(const RecursiveNode &root);
nlohmann::json resources_to_json(const ResourceReport &r);

struct RecursivePrepNode;

/// Quantum-controlled diagonal w on some targets. Base level (<= 2) is a
/// single controlled gate; otherwise a controlled teleportation through a
/// recursively prepared ancilla with recursive controlled corrections.
struct ControlledNode {
    Matrix op;
    std::optional<int> level;
    bool base = true;
    std::vector<RecursivePrepNode> ancilla;  // empty for base, else one element
    std::vector<ControlledNode> corrections;
    /// Levels of the outcome-dependent phase gates on the control qubit.
    std::vector<std::optional<int>> phase_fix_levels;
};

/// Preparation of u H^n|0..0> by measuring M_i = u X_i u^dagger with Q_i = Z_i.
struct RecursivePrepNode {
    Matrix u;
    int level = 0;
    std::vector<StabilizerPair> pairs;
    /// Controlled realization of the residue u_x of each M_i = u_x X_i.
    std::vector<ControlledNode> controlled;
};

struct RecursivePreparation {
    GateSpec spec;
    Matrix u;
    int level = 0;
    StateVector target;
    RecursivePrepNode root;
    Circuit circuit;
    std::vector<int> system;
    PreparationReport report;
};

/// Builds and exhaustively runs the recursive preparation of u H^n|0..0>.
/// Throws like synth_recursive; a failed run throws SynthesisError.
RecursivePreparation recursive_ancilla_prep(const GateSpec &g, double tol = 1e-9);

nlohmann::json prep_tree_to_json(const RecursivePrepNode &node);

}  // namespace telegate
