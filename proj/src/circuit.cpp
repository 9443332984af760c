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

#include "telegate/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "telegate/errors.hpp"
#include "telegate/gates.hpp"

namespace telegate {

std::string_view to_string(InputTag t) {
    switch (t) {
        case InputTag::Symbolic: return "input";
        case InputTag::Zero: return "zero";
        case InputTag::Injected: return "inject";
    }
    return "?";
}

std::string_view to_string(Role r) {
    switch (r) {
        case Role::None: return "";
        case Role::A: return "A";
        case Role::B: return "B";
        case Role::D: return "D";
        case Role::E: return "E";
        case Role::U: return "U";
        case Role::AncillaPrep: return "ancilla-prep";
    }
    return "?";
}

InputTag input_tag_from_string(std::string_view s) {
    if (s == "input") return InputTag::Symbolic;
    if (s == "zero") return InputTag::Zero;
    if (s == "inject") return InputTag::Injected;
    throw ParseError("unknown input tag '" + std::string(s) + "'");
}

Role role_from_string(std::string_view s) {
    for (Role r : {Role::None, Role::A, Role::B, Role::D, Role::E, Role::U, Role::AncillaPrep}) {
        if (to_string(r) == s) return r;
    }
    throw ParseError("unknown role tag '" + std::string(s) + "'");
}

GateRef GateRef::named(std::string_view name) {
    GateRef g;
    g.name = canonical_gate_name(name);
    return g;
}

GateRef GateRef::custom(Matrix m, std::string label) {
    GateRef g;
    g.matrix = std::move(m);
    g.label = std::move(label);
    return g;
}

Matrix GateRef::resolve() const { return is_named() ? gate_matrix(name) : matrix; }

int GateRef::arity() const {
    if (is_named()) return NamedGate::lookup(name).arity;
    return qubit_count(matrix);
}

std::string GateRef::display() const {
    if (is_named()) return name;
    return label.empty() ? std::string("U") : label;
}

std::optional<std::vector<cplx>> state_for_label(std::string_view label) {
    const double r = std::numbers::sqrt2 / 2;
    if (label == "zero") return std::vector<cplx>{1, 0};
    if (label == "one") return std::vector<cplx>{0, 1};
    if (label == "plus") return std::vector<cplx>{r, r};
    if (label == "minus") return std::vector<cplx>{r, -r};
    if (label == "epr") return std::vector<cplx>{r, 0, 0, r};
    if (label == "T-ancilla") return std::vector<cplx>{r, std::polar(r, std::numbers::pi / 4)};
    if (label == "CS-ancilla") {
        // Lambda_1(S) applied to |++>.
        return std::vector<cplx>{0.5, 0.5, 0.5, cplx(0, 0.5)};
    }
    if (label == "TOFFOLI-ancilla") {
        // TOFFOLI (H (x) H (x) I)|000>.
        std::vector<cplx> v(8, 0);
        v[0b000] = 0.5;
        v[0b010] = 0.5;
        v[0b100] = 0.5;
        v[0b111] = 0.5;
        return v;
    }
    return std::nullopt;
}

std::vector<cplx> inject_amplitudes(const InjectOp &op) {
    if (!op.amplitudes.empty()) return op.amplitudes;
    auto s = state_for_label(op.label);
    if (!s) throw ValidationError("unknown inject label '" + op.label + "'");
    return *s;
}

std::vector<int> Circuit::symbolic_qubits() const {
    std::vector<int> out;
    for (int q = 0; q < num_qubits(); ++q) {
        if (inputs_[q] == InputTag::Symbolic) out.push_back(q);
    }
    return out;
}

CircuitBuilder::CircuitBuilder(int n_qubits, int n_cbits, InputTag default_tag) {
    if (n_qubits < 0 || n_cbits < 0) throw DimensionError("negative register size");
    circuit_.inputs_.assign(n_qubits, default_tag);
    circuit_.n_cbits_ = n_cbits;
}

CircuitBuilder CircuitBuilder::from(const Circuit &c) {
    CircuitBuilder b;
    b.circuit_ = c;
    return b;
}

int CircuitBuilder::add_qubit(InputTag tag) {
    circuit_.inputs_.push_back(tag);
    return num_qubits() - 1;
}

int CircuitBuilder::add_cbit() { return circuit_.n_cbits_++; }

CircuitBuilder &CircuitBuilder::set_input(int qubit, InputTag tag) {
    circuit_.inputs_.at(qubit) = tag;
    return *this;
}

CircuitBuilder &CircuitBuilder::gate(std::string_view name, std::vector<int> targets, Role role) {
    return gate(GateRef::named(name), std::move(targets), role);
}

CircuitBuilder &CircuitBuilder::gate(GateRef g, std::vector<int> targets, Role role) {
    return append(CircuitOp{GateOp{std::move(g), std::move(targets)}, role});
}

CircuitBuilder &CircuitBuilder::measure(int qubit, int cbit, Role role) {
    return append(CircuitOp{MeasureOp{qubit, cbit}, role});
}

CircuitBuilder &CircuitBuilder::cgate(std::vector<int> cbits, std::vector<int> equals, GateRef g,
                                      std::vector<int> targets, Role role) {
    return append(CircuitOp{ConditionalOp{std::move(cbits), std::move(equals), std::move(g), std::move(targets)}, role});
}

CircuitBuilder &CircuitBuilder::inject_label(std::string label, std::vector<int> targets, Role role) {
    return append(CircuitOp{InjectOp{std::move(label), {}, std::move(targets)}, role});
}

CircuitBuilder &CircuitBuilder::inject(std::vector<cplx> amplitudes, std::vector<int> targets, Role role,
                                       std::string label) {
    return append(CircuitOp{InjectOp{std::move(label), std::move(amplitudes), std::move(targets)}, role});
}

CircuitBuilder &CircuitBuilder::append(CircuitOp op) {
    circuit_.ops_.push_back(std::move(op));
    return *this;
}

CircuitBuilder &CircuitBuilder::append(const Circuit &other) {
    if (other.num_qubits() > num_qubits() || other.num_cbits() > num_cbits()) {
        throw DimensionError("appended circuit is wider than the builder");
    }
    for (const auto &op : other.ops()) append(op);
    return *this;
}

CircuitBuilder &CircuitBuilder::replace(std::size_t index, CircuitOp op) {
    circuit_.ops_.at(index) = std::move(op);
    return *this;
}

std::string describe(const Violation &v) {
    std::string s = "[" + v.rule + "]";
    if (v.op_index) s += " op " + std::to_string(*v.op_index);
    return s + ": " + v.message;
}

namespace {

enum class QubitState { Fresh, Live, Retired };

class Validator {
  public:
    explicit Validator(const Circuit &c) : c_(c) {
        state_.resize(c.num_qubits());
        for (int q = 0; q < c.num_qubits(); ++q) {
            state_[q] = c.inputs()[q] == InputTag::Symbolic ? QubitState::Live : QubitState::Fresh;
        }
        written_.assign(c.num_cbits(), false);
    }

    std::vector<Violation> run() {
        for (std::size_t i = 0; i < c_.ops().size(); ++i) {
            idx_ = i;
            std::visit([this](const auto &op) { check(op); }, c_.ops()[i].op);
        }
        return std::move(out_);
    }

  private:
    void add(std::optional<std::size_t> i, std::string rule, std::string msg) {
        out_.push_back(Violation{i, std::move(rule), std::move(msg)});
    }
    void add(std::string rule, std::string msg) { add(idx_, std::move(rule), std::move(msg)); }

    bool qubits_ok(const std::vector<int> &targets) {
        bool ok = true;
        std::set<int> seen;
        for (int q : targets) {
            if (q < 0 || q >= c_.num_qubits()) {
                add("range", "qubit " + std::to_string(q) + " out of range");
                ok = false;
            } else if (!seen.insert(q).second) {
                add("distinct-targets", "qubit " + std::to_string(q) + " repeated");
                ok = false;
            }
        }
        if (targets.empty()) {
            add("arity", "op has no targets");
            ok = false;
        }
        return ok;
    }

    void gate_shape(const GateRef &g, std::size_t n_targets) {
        int arity = -1;
        if (g.is_named()) {
            if (!is_known_gate(g.name)) {
                add("unknown-gate", "gate '" + g.name + "' is not in the library");
                return;
            }
            arity = NamedGate::lookup(g.name).arity;
        } else {
            const Matrix &m = g.matrix;
            const std::size_t dim = m.rows();
            if (!m.square() || dim < 2 || (dim & (dim - 1)) != 0) {
                add("arity", "custom gate matrix is not 2^k x 2^k");
                return;
            }
            arity = 0;
            while ((std::size_t{1} << arity) < dim) ++arity;
            for (cplx z : m.data()) {
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                    add("non-finite", "custom gate matrix has a non-finite entry");
                    return;
                }
            }
        }
        if (static_cast<std::size_t>(arity) != n_targets) {
            add("arity", "gate " + g.display() + " acts on " + std::to_string(arity) + " qubits but has " +
                             std::to_string(n_targets) + " targets");
        }
    }

    void require_live(const std::vector<int> &targets) {
        for (int q : targets) {
            if (q < 0 || q >= c_.num_qubits()) continue;
            if (state_[q] == QubitState::Retired) {
                add("single-measurement", "qubit " + std::to_string(q) + " is used after measurement without re-injection");
            } else if (state_[q] == QubitState::Fresh) {
                if (c_.inputs()[q] == InputTag::Injected) {
                    add("uninitialized", "qubit " + std::to_string(q) + " is used before its inject op");
                }
                state_[q] = QubitState::Live;
            }
        }
    }

    void check(const GateOp &op) {
        const bool ok = qubits_ok(op.targets);
        gate_shape(op.gate, op.targets.size());
        if (ok) require_live(op.targets);
    }

    void check(const MeasureOp &op) {
        const std::vector<int> t{op.qubit};
        const bool ok = qubits_ok(t);
        if (op.cbit < 0 || op.cbit >= c_.num_cbits()) {
            add("range", "cbit " + std::to_string(op.cbit) + " out of range");
        } else {
            if (written_[op.cbit]) {
                add("cbit-overwrite", "cbit " + std::to_string(op.cbit) + " is written twice");
            }
            written_[op.cbit] = true;
        }
        if (ok) {
            require_live(t);
            state_[op.qubit] = QubitState::Retired;
        }
    }

    void check(const ConditionalOp &op) {
        if (op.cbits.size() != op.equals.size() || op.cbits.empty()) {
            add("condition-shape", "condition needs one value per cbit and at least one cbit");
        }
        for (std::size_t k = 0; k < op.cbits.size(); ++k) {
            const int cb = op.cbits[k];
            if (cb < 0 || cb >= c_.num_cbits()) {
                add("range", "cbit " + std::to_string(cb) + " out of range");
            } else if (!written_[cb]) {
                add("causality", "cbit " + std::to_string(cb) + " is read before any measurement writes it");
            }
            if (k < op.equals.size() && op.equals[k] != 0 && op.equals[k] != 1) {
                add("condition-shape", "condition values must be 0 or 1");
            }
        }
        const bool ok = qubits_ok(op.targets);
        gate_shape(op.gate, op.targets.size());
        if (ok) require_live(op.targets);
    }

    void check(const InjectOp &op) {
        const bool ok = qubits_ok(op.targets);
        std::vector<cplx> amps;
        if (op.amplitudes.empty()) {
            auto s = state_for_label(op.label);
            if (!s) {
                add("unknown-label", "inject label '" + op.label + "' is not registered");
            } else {
                amps = *s;
            }
        } else {
            amps = op.amplitudes;
        }
        if (!amps.empty()) {
            if (amps.size() != (std::size_t{1} << std::min<std::size_t>(op.targets.size(), 30))) {
                add("state-shape", "inject state has " + std::to_string(amps.size()) + " amplitudes for " +
                                       std::to_string(op.targets.size()) + " targets");
            }
            double norm = 0;
            for (cplx a : amps) {
                if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                    add("non-finite", "inject state has a non-finite amplitude");
                    norm = 1;
                    break;
                }
                norm += std::norm(a);
            }
            if (std::abs(norm - 1) > 1e-9) add("state-shape", "inject state is not normalized");
        }
        if (!ok) return;
        for (int q : op.targets) {
            if (state_[q] == QubitState::Live) {
                add("inject-target", "qubit " + std::to_string(q) + " is live; inject needs a fresh or retired qubit");
            }
            if (c_.inputs()[q] == InputTag::Symbolic && state_[q] != QubitState::Retired) {
                add("inject-target", "qubit " + std::to_string(q) + " carries symbolic input");
            }
            state_[q] = QubitState::Live;
        }
    }

    const Circuit &c_;
    std::vector<QubitState> state_;
    std::vector<bool> written_;
    std::vector<Violation> out_;
    std::size_t idx_ = 0;
};

std::string join(const std::vector<int> &v, const char *prefix) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += prefix + std::to_string(v[i]);
    }
    return s;
}

}  // namespace

std::vector<Violation> validate(const Circuit &c) {
    try {
        return Validator(c).run();
    } catch (const std::exception &e) {
        // Totality guard: a validator bug must surface as data, not as a throw.
        return {Violation{std::nullopt, "internal", e.what()}};
    }
}

std::vector<int> live_qubits(const Circuit &c) {
    std::vector<bool> live(c.num_qubits(), true);
    for (const auto &op : c.ops()) {
        if (auto *m = std::get_if<MeasureOp>(&op.op)) {
            live.at(m->qubit) = false;
        } else if (auto *in = std::get_if<InjectOp>(&op.op)) {
            for (int q : in->targets) live.at(q) = true;
        }
    }
    std::vector<int> out;
    for (int q = 0; q < c.num_qubits(); ++q) {
        if (live[q]) out.push_back(q);
    }
    return out;
}

std::string describe(const CircuitOp &op) {
    std::string s = std::visit(
        [](const auto &o) -> std::string {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, GateOp>) {
                return "gate " + o.gate.display() + " " + join(o.targets, "q");
            } else if constexpr (std::is_same_v<T, MeasureOp>) {
                return "measure q" + std::to_string(o.qubit) + " -> c" + std::to_string(o.cbit);
            } else if constexpr (std::is_same_v<T, ConditionalOp>) {
                std::string cond;
                for (std::size_t k = 0; k < o.cbits.size(); ++k) {
                    if (k) cond += ",";
                    cond += "c" + std::to_string(o.cbits[k]) + "=" +
                            std::to_string(k < o.equals.size() ? o.equals[k] : -1);
                }
                return "cgate [" + cond + "] " + o.gate.display() + " " + join(o.targets, "q");
            } else {
                return "inject " + (o.label.empty() ? std::string("state") : o.label) + " " + join(o.targets, "q");
            }
        },
        op.op);
    if (op.role != Role::None) s += "  {" + std::string(to_string(op.role)) + "}";
    return s;
}

std::string render_text(const Circuit &c) {
    const int n = c.num_qubits();
    std::vector<std::string> wires(n);
    std::vector<bool> retired(n, false);
    for (int q = 0; q < n; ++q) {
        wires[q] = "q" + std::to_string(q);
        wires[q] += std::string(4 - std::min<std::size_t>(wires[q].size(), 3), ' ');
        switch (c.inputs()[q]) {
            case InputTag::Symbolic: wires[q] += "|in> "; break;
            case InputTag::Zero: wires[q] += "|0>  "; break;
            case InputTag::Injected: wires[q] += "     "; break;
        }
    }
    for (const auto &cop : c.ops()) {
        // Each op occupies one column; cells are padded to a common width.
        std::vector<std::string> cell(n);
        std::visit(
            [&](const auto &o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, GateOp> || std::is_same_v<T, ConditionalOp>) {
                    std::string tag = o.gate.display();
                    if constexpr (std::is_same_v<T, ConditionalOp>) {
                        tag += "^c" + join(o.cbits, "");
                    }
                    for (std::size_t k = 0; k < o.targets.size(); ++k) {
                        const int q = o.targets[k];
                        if (q < 0 || q >= n) continue;
                        cell[q] = o.targets.size() == 1 ? tag : tag + "." + std::to_string(k);
                    }
                } else if constexpr (std::is_same_v<T, MeasureOp>) {
                    if (o.qubit >= 0 && o.qubit < n) {
                        cell[o.qubit] = "M>c" + std::to_string(o.cbit);
                        retired[o.qubit] = true;
                    }
                } else {
                    for (int q : o.targets) {
                        if (q < 0 || q >= n) continue;
                        cell[q] = "<" + (o.label.empty() ? std::string("psi") : o.label) + ">";
                        retired[q] = false;
                    }
                }
            },
            cop.op);
        std::size_t width = 1;
        for (const auto &s : cell) width = std::max(width, s.size());
        for (int q = 0; q < n; ++q) {
            std::string s = cell[q];
            const char fill = retired[q] && s.empty() ? ' ' : '-';
            if (s.empty()) s = std::string(width, fill);
            while (s.size() < width) s += fill;
            wires[q] += fill;
            wires[q] += s;
        }
    }
    std::ostringstream out;
    for (const auto &w : wires) out << w << "\n";
    return out.str();
}

}  // namespace telegate
