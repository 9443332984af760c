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
#include <string_view>
#include <variant>
#include <vector>

#include "telegate/linalg.hpp"

namespace telegate {

/// How a qubit starts: part of the symbolic input, fixed |0>, or supplied
/// later by an Inject op.
enum class InputTag { Symbolic, Zero, Injected };

/// Provenance tag linking an op to its role in the teleportation structure.
enum class Role { None, A, B, D, E, U, AncillaPrep };

std::string_view to_string(InputTag t);
std::string_view to_string(Role r);
InputTag input_tag_from_string(std::string_view s);
Role role_from_string(std::string_view s);

/// A library gate by canonical name, or a custom matrix with an optional
/// display label.
struct GateRef {
    std::string name;
    Matrix matrix;
    std::string label;

    static GateRef named(std::string_view name);
    static GateRef custom(Matrix m, std::string label = {});

    bool is_named() const { return !name.empty(); }
    Matrix resolve() const;
    int arity() const;
    std::string display() const;

    bool operator==(const GateRef &) const = default;
};

struct GateOp {
    GateRef gate;
    std::vector<int> targets;
    bool operator==(const GateOp &) const = default;
};

/// Z-basis measurement of one qubit into one classical bit.
struct MeasureOp {
    int qubit = 0;
    int cbit = 0;
    bool operator==(const MeasureOp &) const = default;
};

/// Gate applied iff cbits[k] == equals[k] for every k.
struct ConditionalOp {
    std::vector<int> cbits;
    std::vector<int> equals;
    GateRef gate;
    std::vector<int> targets;
    bool operator==(const ConditionalOp &) const = default;
};

/// Replaces fresh (or measured and retired) qubits with a known state,
/// given by amplitudes or by a registered label.
struct InjectOp {
    std::string label;
    std::vector<cplx> amplitudes;
    std::vector<int> targets;
    bool operator==(const InjectOp &) const = default;
};

using OpVariant = std::variant<GateOp, MeasureOp, ConditionalOp, InjectOp>;

struct CircuitOp {
    OpVariant op;
    Role role = Role::None;
    bool operator==(const CircuitOp &) const = default;
};

/// Amplitudes for a registered state label ("zero", "one", "plus", "epr",
/// "T-ancilla", "CS-ancilla", "TOFFOLI-ancilla"); nullopt when unknown.
std::optional<std::vector<cplx>> state_for_label(std::string_view label);

/// Inject amplitudes, resolving the label when no explicit amplitudes are stored.
std::vector<cplx> inject_amplitudes(const InjectOp &op);

/// Immutable circuit value; assemble with CircuitBuilder.
class Circuit {
  public:
    Circuit() = default;

    int num_qubits() const { return static_cast<int>(inputs_.size()); }
    int num_cbits() const { return n_cbits_; }
    const std::vector<InputTag> &inputs() const { return inputs_; }
    const std::vector<CircuitOp> &ops() const { return ops_; }

    /// Qubits tagged Symbolic, in index order.
    std::vector<int> symbolic_qubits() const;

    bool operator==(const Circuit &) const = default;

  private:
    friend class CircuitBuilder;
    int n_cbits_ = 0;
    std::vector<InputTag> inputs_;
    std::vector<CircuitOp> ops_;
};

class CircuitBuilder {
  public:
    CircuitBuilder() = default;
    CircuitBuilder(int n_qubits, int n_cbits, InputTag default_tag = InputTag::Zero);
    static CircuitBuilder from(const Circuit &c);

    int add_qubit(InputTag tag);
    int add_cbit();
    CircuitBuilder &set_input(int qubit, InputTag tag);

    CircuitBuilder &gate(std::string_view name, std::vector<int> targets, Role role = Role::None);
    CircuitBuilder &gate(GateRef g, std::vector<int> targets, Role role = Role::None);
    CircuitBuilder &measure(int qubit, int cbit, Role role = Role::None);
    CircuitBuilder &cgate(std::vector<int> cbits, std::vector<int> equals, GateRef g, std::vector<int> targets,
                          Role role = Role::None);
    CircuitBuilder &inject_label(std::string label, std::vector<int> targets, Role role = Role::AncillaPrep);
    CircuitBuilder &inject(std::vector<cplx> amplitudes, std::vector<int> targets, Role role = Role::AncillaPrep,
                           std::string label = {});
    CircuitBuilder &append(CircuitOp op);
    CircuitBuilder &append(const Circuit &other);
    CircuitBuilder &replace(std::size_t index, CircuitOp op);

    int num_qubits() const { return static_cast<int>(circuit_.inputs_.size()); }
    int num_cbits() const { return circuit_.n_cbits_; }
    std::size_t num_ops() const { return circuit_.ops_.size(); }
    const CircuitOp &op(std::size_t i) const { return circuit_.ops_.at(i); }

    Circuit build() const { return circuit_; }

  private:
    Circuit circuit_;
};

struct Violation {
    /// Index of the offending op; empty for circuit-level problems.
    std::optional<std::size_t> op_index;
    std::string rule;
    std::string message;
};

std::string describe(const Violation &v);

/// Checks every structural invariant. Never throws; an empty result means the
/// circuit is valid.
std::vector<Violation> validate(const Circuit &c);

/// Qubits that end the circuit unmeasured (or re-injected after measurement).
std::vector<int> live_qubits(const Circuit &c);

/// Text-art rendering, one wire per qubit, time left to right.
std::string render_text(const Circuit &c);

/// One-line human description of an op, e.g. "cgate [c0=1] X q2".
std::string describe(const CircuitOp &op);

}  // namespace telegate
