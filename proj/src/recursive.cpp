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

#include "telegate/recursive.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "telegate/circuit_io.hpp"
#include "telegate/errors.hpp"
#include "telegate/gates.hpp"
#include "telegate/hierarchy.hpp"

namespace telegate {

// ---------------------------------------------------------------------------
// GateSpec

GateSpec GateSpec::rotation(int power) {
    if (power < 0) throw DimensionError("rotation power must be non-negative");
    GateSpec g;
    g.kind = Kind::Rotation;
    g.power = power;
    return g;
}

GateSpec GateSpec::controlled_rotation(int controls, int power) {
    if (controls < 0 || power < 0) throw DimensionError("control count and power must be non-negative");
    GateSpec g;
    g.kind = Kind::ControlledRotation;
    g.controls = controls;
    g.power = power;
    return g;
}

GateSpec GateSpec::product(int width, std::vector<GateSpec> factors, std::vector<std::vector<int>> qubits) {
    if (factors.size() != qubits.size()) throw DimensionError("one qubit list per factor");
    for (std::size_t j = 0; j < factors.size(); ++j) {
        if (static_cast<int>(qubits[j].size()) != factors[j].num_qubits()) {
            throw DimensionError("factor " + std::to_string(j) + " qubit list has the wrong length");
        }
        for (int q : qubits[j]) {
            if (q < 0 || q >= width) throw DimensionError("factor qubit out of range");
        }
    }
    GateSpec g;
    g.kind = Kind::Product;
    g.width = width;
    g.factors = std::move(factors);
    g.factor_qubits = std::move(qubits);
    return g;
}

GateSpec GateSpec::diagonal(Matrix m) {
    qubit_count(m);
    GateSpec g;
    g.kind = Kind::Diagonal;
    g.matrix_value = std::move(m);
    return g;
}

GateSpec GateSpec::from_name(const std::string &name, std::optional<int> level) {
    auto need = [&](int min_level) {
        if (!level) throw ValidationError("\"" + name + "\" needs a level");
        if (*level < min_level) {
            throw ValidationError("\"" + name + "\" needs level >= " + std::to_string(min_level));
        }
        return *level;
    };
    // Lambda_n(V^l) sits at level n + l + 1 under the classifier.
    if (name == "V") return rotation(need(1) - 1);
    if (name == "CV") return controlled_rotation(1, need(2) - 2);
    if (name == "CCV") return controlled_rotation(2, need(3) - 3);
    return diagonal(gate_matrix(name));
}

Matrix GateSpec::matrix() const {
    switch (kind) {
    case Kind::Rotation:
        return phase_gate(std::numbers::pi / std::ldexp(1.0, power));
    case Kind::ControlledRotation:
        return multi_controlled(phase_gate(std::numbers::pi / std::ldexp(1.0, power)), controls);
    case Kind::Product: {
        Matrix m = Matrix::identity(std::size_t{1} << width);
        for (std::size_t j = 0; j < factors.size(); ++j) m = embed(factors[j].matrix(), factor_qubits[j], width) * m;
        return m;
    }
    case Kind::Diagonal:
        return matrix_value;
    }
    return {};
}

int GateSpec::num_qubits() const {
    switch (kind) {
    case Kind::Rotation:
        return 1;
    case Kind::ControlledRotation:
        return controls + 1;
    case Kind::Product:
        return width;
    case Kind::Diagonal:
        return qubit_count(matrix_value);
    }
    return 0;
}

std::string GateSpec::describe() const {
    switch (kind) {
    case Kind::Rotation:
        return "V^" + std::to_string(power);
    case Kind::ControlledRotation:
        return "Λ" + std::to_string(controls) + "(V^" + std::to_string(power) + ")";
    case Kind::Product: {
        std::string s;
        for (std::size_t j = 0; j < factors.size(); ++j) {
            if (j) s += "·";
            s += factors[j].describe() + "[";
            for (std::size_t t = 0; t < factor_qubits[j].size(); ++t) {
                s += (t ? "," : "") + std::to_string(factor_qubits[j][t]);
            }
            s += "]";
        }
        return s;
    }
    case Kind::Diagonal:
        return operator_label(split_global_phase(matrix_value, 1e-12).canonical, "diag");
    }
    return {};
}

namespace {

constexpr double kExactTol = 1e-10;

std::optional<int> level_of(const Matrix &m) {
    HierarchyOptions opts;
    opts.k_max = kRecursiveMaxLevel + 1;
    return hierarchy_level(m, opts).level;
}

std::vector<int> range(int a, int b) {
    std::vector<int> v;
    for (int i = a; i < b; ++i) v.push_back(i);
    return v;
}

std::vector<cplx> diag_entries(const Matrix &m) {
    std::vector<cplx> d(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) d[i] = m(i, i);
    return d;
}

/// Qubits a diagonal acts on: q is idle iff flipping bit q never changes
/// an entry. The restriction keeps the exact phase: m = I_idle (x) m_support.
struct Support {
    std::vector<int> qubits;
    Matrix restricted;
};

Support diagonal_support(const Matrix &m) {
    const int n = qubit_count(m);
    const auto d = diag_entries(m);
    Support s;
    for (int q = 0; q < n; ++q) {
        const std::size_t bit = std::size_t{1} << (n - 1 - q);
        bool idle = true;
        for (std::size_t b = 0; b < d.size() && idle; ++b) {
            if (!(b & bit) && std::abs(d[b] - d[b | bit]) > kExactTol) idle = false;
        }
        if (!idle) s.qubits.push_back(q);
    }
    const int w = static_cast<int>(s.qubits.size());
    std::vector<cplx> r(std::size_t{1} << w);
    for (std::size_t j = 0; j < r.size(); ++j) {
        std::size_t b = 0;
        for (int t = 0; t < w; ++t) {
            if (j >> (w - 1 - t) & 1) b |= std::size_t{1} << (n - 1 - s.qubits[t]);
        }
        r[j] = d[b];
    }
    s.restricted = Matrix::diagonal(r);
    return s;
}

Matrix x_on(int q, int n) {
    const int t[1] = {q};
    return embed(gate_matrix("X"), t, n);
}

/// Every assignment that falsifies the conjunction `path`, as disjoint
/// prefix patterns.
std::vector<std::pair<std::vector<int>, std::vector<int>>> complement(const std::vector<int> &cbits,
                                                                      const std::vector<int> &vals) {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
    for (std::size_t j = 0; j < cbits.size(); ++j) {
        std::vector<int> c(cbits.begin(), cbits.begin() + j + 1);
        std::vector<int> v(vals.begin(), vals.begin() + j + 1);
        v.back() = 1 - v.back();
        out.emplace_back(std::move(c), std::move(v));
    }
    return out;
}

/// Classical conjunction of (cbit == value) terms.
struct Cond {
    std::vector<int> cbits;
    std::vector<int> vals;

    Cond with(int cbit, int val) const {
        Cond c = *this;
        c.cbits.push_back(cbit);
        c.vals.push_back(val);
        return c;
    }
    bool empty() const { return cbits.empty(); }
};

void emit_gate(CircuitBuilder &b, const Cond &cond, GateRef g, std::vector<int> targets, Role role = Role::None) {
    if (cond.empty()) {
        b.gate(std::move(g), std::move(targets), role);
    } else {
        b.cgate(cond.cbits, cond.vals, std::move(g), std::move(targets), role);
    }
}

/// Gate when cond holds, `otherwise` when it does not.
void emit_either(CircuitBuilder &b, const Cond &cond, const GateRef &then_g, const GateRef &else_g,
                 const std::vector<int> &targets, Role role) {
    if (cond.empty()) {
        b.gate(then_g, targets, role);
        return;
    }
    b.cgate(cond.cbits, cond.vals, then_g, targets, role);
    for (auto &[c, v] : complement(cond.cbits, cond.vals)) b.cgate(c, v, else_g, targets, role);
}

}  // namespace

// ---------------------------------------------------------------------------
// Tree construction

namespace {

RecursiveNode build_node(const Matrix &u, int level) {
    RecursiveNode node;
    node.gate = u;
    node.level = level;
    const int w = qubit_count(u);
    if (level <= 2) {
        CircuitBuilder b(w, 0, InputTag::Symbolic);
        const auto split = split_global_phase(u, kExactTol);
        b.gate(GateRef::custom(split.canonical, operator_label(split.canonical, "U")), range(0, w), Role::U);
        node.circuit = b.build();
        node.outputs = range(0, w);
        return node;
    }
    const auto data = range(0, w), anc = range(w, 2 * w);
    CircuitBuilder b(2 * w, w, InputTag::Symbolic);
    for (int q : anc) b.set_input(q, InputTag::Injected);
    {
        auto amps = diag_entries(u);
        const double s = 1 / std::sqrt(static_cast<double>(amps.size()));
        for (auto &a : amps) a *= s;
        b.inject(std::move(amps), anc, Role::AncillaPrep);
    }
    for (int i = 0; i < w; ++i) b.gate("CNOT", {anc[i], data[i]}, Role::E);
    for (int i = 0; i < w; ++i) b.measure(data[i], i);
    const Matrix u_dag = u.adjoint();
    for (int i = 0; i < w; ++i) {
        const Matrix x = x_on(i, w);
        Correction c = classify_correction(i, u * x * u_dag, x, level, 1e-9);
        c.label = operator_label(c.canonical, "UX" + std::to_string(i + 1) + "U†");
        if (c.cls == CorrectionClass::Pauli || c.cls == CorrectionClass::Clifford) {
            b.cgate({i}, {1}, GateRef::custom(c.canonical, c.label), anc, Role::D);
        } else if (c.cls == CorrectionClass::DiagonalPauli) {
            // op = R X_i: apply X_i, then hand the diagonal residue R down a level.
            const auto sup = diagonal_support(c.op * x);
            const auto residue = split_global_phase(sup.restricted, kExactTol).canonical;
            const auto child_level = level_of(residue);
            if (!child_level || *child_level >= level) {
                throw SynthesisError("correction residue for qubit " + std::to_string(i) + " does not descend below level " +
                                     std::to_string(level));
            }
            b.cgate({i}, {1}, GateRef::named("X"), {anc[i]}, Role::D);
            ChildLink link;
            link.on_cbit = i;
            link.after_op = b.num_ops();
            for (int q : sup.qubits) link.targets.push_back(anc[q]);
            link.child.push_back(build_node(residue, *child_level));
            node.children.push_back(std::move(link));
        } else {
            throw SynthesisError("correction for qubit " + std::to_string(i) + " is not a lower-level diagonal times X");
        }
        node.corrections.push_back(std::move(c));
    }
    node.circuit = b.build();
    node.outputs = anc;
    return node;
}

/// Residue levels at tree depth d (root 1) must be <= k_root - d; leaves <= 2.
bool check_descent(const RecursiveNode &node, int root_level, int depth) {
    for (const auto &c : node.corrections) {
        if (c.residue_level && *c.residue_level > root_level - depth) return false;
    }
    for (const auto &link : node.children) {
        const auto &child = link.child.front();
        if (child.level > root_level - depth) return false;
        if (!check_descent(child, root_level, depth + 1)) return false;
    }
    if (node.children.empty() && node.is_teleport()) {
        for (const auto &c : node.corrections) {
            if (c.cls != CorrectionClass::Pauli && c.cls != CorrectionClass::Clifford) return false;
        }
    }
    return true;
}

void walk_resources(const RecursiveNode &node, int depth, ResourceReport &r) {
    if (!node.is_teleport()) return;
    r.depth = std::max(r.depth, depth);
    r.ancilla_qubits += node.width();
    r.measurements += node.width();
    for (const auto &op : node.circuit.ops()) {
        if (const auto *c = std::get_if<ConditionalOp>(&op.op)) {
            const auto lvl = level_of(c->gate.resolve());
            ++r.cgates_by_level[lvl.value_or(0)];
        }
    }
    for (const auto &link : node.children) walk_resources(link.child.front(), depth + 1, r);
}

int local_index(const std::vector<int> &outputs, int q) {
    const auto it = std::find(outputs.begin(), outputs.end(), q);
    if (it == outputs.end()) throw DimensionError("tree op acts outside the node outputs");
    return static_cast<int>(it - outputs.begin());
}

std::vector<int> local_targets(const std::vector<int> &outputs, const std::vector<int> &targets) {
    std::vector<int> t;
    for (int q : targets) t.push_back(local_index(outputs, q));
    return t;
}

}  // namespace

int tree_cbits(const RecursiveNode &root) {
    int n = root.circuit.num_cbits();
    for (const auto &link : root.children) n += tree_cbits(link.child.front());
    return n;
}

ResourceReport resource_report(const RecursiveNode &root) {
    ResourceReport r;
    walk_resources(root, 1, r);
    return r;
}

std::vector<TreeBranch> tree_branch_operators(const RecursiveNode &root) {
    const int w = root.width();
    const double d = std::ldexp(1.0, w);
    if (!root.is_teleport()) {
        const auto &g = std::get<GateOp>(root.circuit.ops().front().op);
        return {TreeBranch{"", 1, g.gate.resolve()}};
    }
    const auto &ops = root.circuit.ops();
    std::size_t prefix = 0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (std::holds_alternative<MeasureOp>(ops[i].op)) prefix = i + 1;
    }
    CircuitBuilder head(root.circuit.num_qubits(), root.circuit.num_cbits());
    for (int q = 0; q < root.circuit.num_qubits(); ++q) head.set_input(q, root.circuit.inputs()[q]);
    for (std::size_t i = 0; i < prefix; ++i) head.append(ops[i]);
    const auto data = head.build().symbolic_qubits();

    // Child j owns local bit positions [offset[j], offset[j] + width_j).
    std::vector<int> offset;
    int total = root.circuit.num_cbits();
    for (const auto &link : root.children) {
        offset.push_back(total);
        total += tree_cbits(link.child.front());
    }

    struct Partial {
        std::string bits;
        Matrix k;
    };
    std::vector<Partial> parts;
    for (auto &bo : branch_operators(head.build(), data, root.outputs)) {
        if (bo.op.empty()) continue;
        parts.push_back({bo.bits + std::string(total - bo.bits.size(), '-'), std::move(bo.op)});
    }
    auto holds = [](const std::string &bits, const std::vector<int> &cb, const std::vector<int> &eq) {
        for (std::size_t j = 0; j < cb.size(); ++j) {
            if (bits[cb[j]] != static_cast<char>('0' + eq[j])) return false;
        }
        return true;
    };
    std::size_t next_child = 0;
    auto run_children_at = [&](std::size_t idx) {
        while (next_child < root.children.size() && root.children[next_child].after_op == idx) {
            const auto &link = root.children[next_child];
            const auto sub = tree_branch_operators(link.child.front());
            const auto lt = local_targets(root.outputs, link.targets);
            std::vector<Partial> next;
            for (auto &p : parts) {
                if (p.bits[link.on_cbit] != '1') {
                    next.push_back(std::move(p));
                    continue;
                }
                for (const auto &cb : sub) {
                    Partial q{p.bits, embed(cb.op, lt, w) * p.k};
                    q.bits.replace(offset[next_child], cb.bits.size(), cb.bits);
                    next.push_back(std::move(q));
                }
            }
            parts = std::move(next);
            ++next_child;
        }
    };
    for (std::size_t i = prefix; i < ops.size(); ++i) {
        run_children_at(i);
        if (const auto *c = std::get_if<ConditionalOp>(&ops[i].op)) {
            const Matrix g = embed(c->gate.resolve(), local_targets(root.outputs, c->targets), w);
            for (auto &p : parts) {
                if (holds(p.bits, c->cbits, c->equals)) p.k = g * p.k;
            }
        } else if (const auto *g = std::get_if<GateOp>(&ops[i].op)) {
            const Matrix m = embed(g->gate.resolve(), local_targets(root.outputs, g->targets), w);
            for (auto &p : parts) p.k = m * p.k;
        } else {
            throw ValidationError("tree node has a non-gate op after its measurements");
        }
    }
    run_children_at(ops.size());

    std::vector<TreeBranch> out;
    for (auto &p : parts) {
        const double f = frobenius_norm(p.k);
        out.push_back({std::move(p.bits), f * f / d, std::move(p.k)});
    }
    return out;
}

EquivalenceReport verify_tree(const std::vector<TreeBranch> &branches, const Matrix &u, double tol) {
    const double d = static_cast<double>(u.rows());
    EquivalenceReport rep;
    bool any = false;
    for (const auto &b : branches) {
        BranchCheck bc;
        bc.bits = b.bits;
        bc.probability = b.probability;
        if (b.probability < kZeroBranchThreshold) {
            bc.fidelity = 1;
            rep.branches.push_back(bc);
            continue;
        }
        any = true;
        cplx tr = 0;
        for (std::size_t r = 0; r < u.rows(); ++r)
            for (std::size_t k = 0; k < u.cols(); ++k) tr += std::conj(u(r, k)) * b.op(r, k);
        bc.fidelity = std::min(1.0, std::abs(tr) / (d * std::sqrt(b.probability)));
        bc.scalar = std::abs(tr) > 0 ? tr / std::abs(tr) : cplx(1, 0);
        if (bc.fidelity < 1 - tol && bc.fidelity < rep.worst_fidelity) rep.failing_branch = bc.bits;
        rep.worst_fidelity = std::min(rep.worst_fidelity, bc.fidelity);
        rep.branches.push_back(bc);
    }
    if (!any) rep.worst_fidelity = 0;
    rep.pass = any && rep.worst_fidelity >= 1 - tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Flattening

namespace {

std::vector<int> emit_flat(const RecursiveNode &node, CircuitBuilder &b, const std::vector<int> &in, const Cond &path) {
    if (!node.is_teleport()) {
        const auto &g = std::get<GateOp>(node.circuit.ops().front().op);
        emit_gate(b, path, g.gate, in, Role::U);
        return in;
    }
    const int w = node.width();
    std::vector<int> anc, cb;
    for (int i = 0; i < w; ++i) anc.push_back(b.add_qubit(InputTag::Injected));
    for (int i = 0; i < w; ++i) cb.push_back(b.add_cbit());

    const auto &ops = node.circuit.ops();
    std::size_t i = 0;
    for (; i < ops.size(); ++i) {
        const auto &op = ops[i].op;
        if (const auto *inj = std::get_if<InjectOp>(&op)) {
            b.inject(inject_amplitudes(*inj), anc, ops[i].role);
        } else if (const auto *g = std::get_if<GateOp>(&op)) {
            // Entangler CNOT(anc_j -> data_j); SWAP instead when the path is off,
            // so the child's output location never depends on the branch.
            const int j = g->targets[1];
            emit_either(b, path, g->gate, GateRef::named("SWAP"), {anc[j], in[j]}, ops[i].role);
        } else if (const auto *m = std::get_if<MeasureOp>(&op)) {
            b.measure(in[m->qubit], cb[m->cbit], ops[i].role);
        } else {
            break;
        }
    }
    std::vector<int> cur = anc;
    std::size_t next_child = 0;
    auto run_children_at = [&](std::size_t idx) {
        while (next_child < node.children.size() && node.children[next_child].after_op == idx) {
            const auto &link = node.children[next_child++];
            const auto lt = local_targets(node.outputs, link.targets);
            std::vector<int> child_in;
            for (int t : lt) child_in.push_back(cur[t]);
            const auto out = emit_flat(link.child.front(), b, child_in, path.with(cb[link.on_cbit], 1));
            for (std::size_t t = 0; t < lt.size(); ++t) cur[lt[t]] = out[t];
        }
    };
    for (; i < ops.size(); ++i) {
        run_children_at(i);
        const auto &c = std::get<ConditionalOp>(ops[i].op);
        Cond cond = path;
        for (std::size_t j = 0; j < c.cbits.size(); ++j) cond = cond.with(cb[c.cbits[j]], c.equals[j]);
        std::vector<int> t;
        for (int q : local_targets(node.outputs, c.targets)) t.push_back(cur[q]);
        b.cgate(cond.cbits, cond.vals, c.gate, t, ops[i].role);
    }
    run_children_at(ops.size());
    return cur;
}

}  // namespace

Circuit flatten_tree(const RecursiveNode &root, std::vector<int> *outputs) {
    const int w = root.width();
    CircuitBuilder b(w, 0, InputTag::Symbolic);
    const auto out = emit_flat(root, b, range(0, w), Cond{});
    if (b.num_qubits() > kMaxQubits) {
        throw WidthOverflow("flattened circuit needs " + std::to_string(b.num_qubits()) + " qubits (limit " +
                            std::to_string(kMaxQubits) + ")");
    }
    if (outputs) *outputs = out;
    return b.build();
}

nlohmann::json resources_to_json(const ResourceReport &r) {
    nlohmann::json by_level = nlohmann::json::object();
    for (const auto &[lvl, n] : r.cgates_by_level) by_level[std::to_string(lvl)] = n;
    return {{"ancilla_qubits", r.ancilla_qubits},
            {"measurements", r.measurements},
            {"cgates_by_level", by_level},
            {"depth", r.depth}};
}

nlohmann::json tree_to_json(const RecursiveNode &root) {
    nlohmann::json j;
    j["level"] = root.level;
    j["gate"] = matrix_to_json(root.gate);
    j["circuit"] = circuit_to_json(root.circuit);
    j["outputs"] = root.outputs;
    nlohmann::json corr = nlohmann::json::array();
    for (const auto &c : root.corrections) {
        nlohmann::json e{{"qubit", c.qubit}, {"class", std::string(to_string(c.cls))}, {"label", c.label}};
        if (c.residue_level) e["residue_level"] = *c.residue_level;
        corr.push_back(std::move(e));
    }
    j["corrections"] = std::move(corr);
    nlohmann::json kids = nlohmann::json::array();
    for (const auto &link : root.children) {
        nlohmann::json k = tree_to_json(link.child.front());
        k["on_cbit"] = link.on_cbit;
        k["after_op"] = link.after_op;
        k["targets"] = link.targets;
        kids.push_back(std::move(k));
    }
    j["children"] = std::move(kids);
    return j;
}

// ---------------------------------------------------------------------------
// Entry points

namespace {

struct Checked {
    Matrix u;
    int level = 0;
};

Checked check_gate(const GateSpec &g) {
    Checked c;
    c.u = g.matrix();
    const int w = qubit_count(c.u);
    if (w > kRecursiveMaxWidth) {
        throw WidthOverflow("recursive constructions accept at most " + std::to_string(kRecursiveMaxWidth) + " qubits");
    }
    if (!is_unitary(c.u, 1e-9)) throw ValidationError("gate is not unitary");
    if (!is_diagonal(c.u, 1e-12)) throw ValidationError("gate is not diagonal");
    const auto lvl = level_of(c.u);
    if (!lvl || *lvl > kRecursiveMaxLevel) {
        throw WidthOverflow("gate lies above level " + std::to_string(kRecursiveMaxLevel));
    }
    c.level = *lvl;
    return c;
}

}  // namespace

RecursiveCircuit synth_recursive(const GateSpec &g, bool flatten, double tol) {
    const auto checked = check_gate(g);
    RecursiveCircuit rc;
    rc.spec = g;
    rc.gate = checked.u;
    rc.level = checked.level;
    rc.root = build_node(checked.u, checked.level);
    rc.resources = resource_report(rc.root);
    rc.descent_ok = check_descent(rc.root, rc.level, 1);
    if (!rc.descent_ok) throw SynthesisError("correction levels do not descend through the tree");
    rc.verification = verify_tree(tree_branch_operators(rc.root), rc.gate, tol);
    if (!rc.verification.pass) throw SynthesisError("recursive tree failed verification: " + rc.verification.summary());
    if (flatten) {
        rc.flattened = flatten_tree(rc.root, &rc.flattened_outputs);
        const auto in = range(0, qubit_count(rc.gate));
        rc.flattened_verification = verify_gate_equivalence(*rc.flattened, rc.gate, in, rc.flattened_outputs, tol);
        if (!rc.flattened_verification->pass) {
            throw SynthesisError("flattened circuit failed verification: " + rc.flattened_verification->summary());
        }
    }
    return rc;
}

// ---------------------------------------------------------------------------
// Recursive ancilla preparation

namespace {

/// Controlled teleportation entangler on [control, ancilla, data]:
/// CNOT(ancilla -> data) when the control is 1, SWAP(ancilla, data) when 0.
/// Either way the data ends up on the ancilla wire.
Matrix controlled_entangler() {
    const Matrix swap = gate_matrix("SWAP"), cnot = gate_matrix("CNOT");
    Matrix m(8, 8);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            m(r, c) = swap(r, c);
            m(4 + r, 4 + c) = cnot(r, c);
        }
    }
    return m;
}

Matrix idle_swap() { return kron(Matrix::identity(2), gate_matrix("SWAP")); }

std::vector<int> emit_prep(CircuitBuilder &b, const Matrix &v, RecursivePrepNode &node);

/// Applies controlled-w (exact phase kept) from control c onto targets t,
/// gated classically by cond. Returns the targets' new locations.
std::vector<int> emit_controlled(CircuitBuilder &b, int c, std::vector<int> t, const Matrix &w, const Cond &cond,
                                 ControlledNode &node) {
    node.op = w;
    const auto sup = diagonal_support(w);
    if (sup.qubits.empty()) {
        const cplx lambda = w(0, 0);
        node.level = level_of(phase_gate(std::arg(lambda)));
        if (std::abs(lambda - cplx(1, 0)) > kExactTol) {
            emit_gate(b, cond, GateRef::custom(phase_gate(std::arg(lambda)), "P"), {c}, Role::U);
        }
        return t;
    }
    const Matrix &ws = sup.restricted;
    std::vector<int> ts;
    for (int q : sup.qubits) ts.push_back(t[q]);
    node.level = level_of(ws);
    if (node.level && *node.level <= 2) {
        std::vector<int> targets{c};
        targets.insert(targets.end(), ts.begin(), ts.end());
        const std::string label = "C-" + operator_label(split_global_phase(ws, kExactTol).canonical, "W");
        emit_gate(b, cond, GateRef::custom(controlled(ws), label), targets, Role::U);
        return t;
    }

    // Teleport the support through v H^m|0>, v = ws / ws[0], under control c.
    node.base = false;
    const int m = static_cast<int>(ts.size());
    const cplx lambda = ws(0, 0);
    const Matrix v = (1.0 / lambda) * ws;
    node.ancilla.emplace_back();
    auto cur = emit_prep(b, v, node.ancilla.back());
    std::vector<int> cb;
    for (int i = 0; i < m; ++i) cb.push_back(b.add_cbit());
    const GateRef ent = GateRef::custom(controlled_entangler(), "C-E"), idle = GateRef::custom(idle_swap(), "I⊗SWAP");
    for (int i = 0; i < m; ++i) emit_either(b, cond, ent, idle, {c, cur[i], ts[i]}, Role::E);
    for (int i = 0; i < m; ++i) b.measure(ts[i], cb[i]);

    // Controlled corrections v X_i v^dagger = (v X_i v^dagger X_i) X_i, recursively.
    const Matrix v_dag = v.adjoint();
    for (int i = 0; i < m; ++i) {
        const Cond ci = cond.with(cb[i], 1);
        emit_gate(b, ci, GateRef::named("CNOT"), {c, cur[i]}, Role::D);
        const Matrix x = x_on(i, m);
        node.corrections.emplace_back();
        cur = emit_controlled(b, c, cur, v * x * v_dag * x, ci, node.corrections.back());
    }

    // With control 0 the measured ancilla leaves amplitude v[p] behind; with
    // control 1 the target needs the factor lambda. diag(1, lambda v[p]) on
    // the control restores both.
    for (std::size_t p = 0; p < (std::size_t{1} << m); ++p) {
        const cplx f = ws(p, p);
        if (std::abs(f - cplx(1, 0)) <= kExactTol) continue;
        Cond cp = cond;
        for (int i = 0; i < m; ++i) cp = cp.with(cb[i], static_cast<int>(p >> (m - 1 - i) & 1));
        const Matrix fix = phase_gate(std::arg(f));
        node.phase_fix_levels.push_back(level_of(fix));
        b.cgate(cp.cbits, cp.vals, GateRef::custom(fix, "P"), {c}, Role::D);
    }
    for (int i = 0; i < m; ++i) t[sup.qubits[i]] = cur[i];
    return t;
}

StateVector hadamard_image(const Matrix &v) {
    auto amps = diag_entries(v);
    const double s = 1 / std::sqrt(static_cast<double>(amps.size()));
    for (auto &a : amps) a *= s;
    return StateVector(std::move(amps));
}

std::vector<int> emit_prep(CircuitBuilder &b, const Matrix &v, RecursivePrepNode &node) {
    const int n = qubit_count(v);
    node.u = v;
    node.level = level_of(v).value_or(0);
    const Matrix v_dag = v.adjoint();
    const Matrix z = gate_matrix("Z");
    for (int i = 0; i < n; ++i) {
        const Matrix x = x_on(i, n);
        const int t[1] = {i};
        node.pairs.push_back({v * x * v_dag, embed(z, t, n), std::nullopt, 1});
        node.pairs.back().m_level = level_of(node.pairs.back().m);
    }
    // Stabilizer pair conditions for measure-and-correct preparation; throws if violated.
    make_stabilizer_spec(hadamard_image(v), node.pairs);

    std::vector<int> sys;
    for (int i = 0; i < n; ++i) sys.push_back(b.add_qubit(InputTag::Zero));
    for (int i = 0; i < n; ++i) {
        const int c = b.add_qubit(InputTag::Zero);
        const int cbit = b.add_cbit();
        b.gate("H", {c}, Role::AncillaPrep);
        b.gate("CNOT", {c, sys[i]}, Role::AncillaPrep);
        node.controlled.emplace_back();
        sys = emit_controlled(b, c, sys, node.pairs[i].m * x_on(i, n), Cond{}, node.controlled.back());
        b.gate("H", {c}, Role::AncillaPrep);
        b.measure(c, cbit, Role::AncillaPrep);
        b.cgate({cbit}, {1}, GateRef::named("Z"), {sys[i]}, Role::D);
    }
    return sys;
}

double expectation(const StateVector &full, const Matrix &m, const std::vector<int> &sys) {
    std::vector<cplx> v = full.amplitudes();
    apply_matrix_inplace(v, full.num_qubits(), m, sys);
    cplx acc = 0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += std::conj(full[i]) * v[i];
    return acc.real();
}

nlohmann::json controlled_to_json(const ControlledNode &node) {
    nlohmann::json j;
    j["op"] = matrix_to_json(node.op);
    j["level"] = node.level ? nlohmann::json(*node.level) : nlohmann::json(nullptr);
    j["base"] = node.base;
    if (!node.ancilla.empty()) j["ancilla"] = prep_tree_to_json(node.ancilla.front());
    nlohmann::json corr = nlohmann::json::array();
    for (const auto &c : node.corrections) corr.push_back(controlled_to_json(c));
    j["corrections"] = std::move(corr);
    nlohmann::json fix = nlohmann::json::array();
    for (const auto &l : node.phase_fix_levels) fix.push_back(l ? nlohmann::json(*l) : nlohmann::json(nullptr));
    j["phase_fix_levels"] = std::move(fix);
    return j;
}

}  // namespace

nlohmann::json prep_tree_to_json(const RecursivePrepNode &node) {
    nlohmann::json j;
    j["level"] = node.level;
    j["u"] = matrix_to_json(node.u);
    nlohmann::json steps = nlohmann::json::array();
    for (std::size_t i = 0; i < node.pairs.size(); ++i) {
        steps.push_back({{"measure", matrix_to_json(node.pairs[i].m)},
                         {"measure_level", node.pairs[i].m_level ? nlohmann::json(*node.pairs[i].m_level) : nlohmann::json(nullptr)},
                         {"correct", "Z_" + std::to_string(i + 1)},
                         {"controlled", controlled_to_json(node.controlled[i])}});
    }
    j["steps"] = std::move(steps);
    return j;
}

RecursivePreparation recursive_ancilla_prep(const GateSpec &g, double tol) {
    const auto checked = check_gate(g);
    RecursivePreparation rp;
    rp.spec = g;
    rp.u = checked.u;
    rp.level = checked.level;
    rp.target = hadamard_image(checked.u);
    CircuitBuilder b(0, 0);
    rp.system = emit_prep(b, checked.u, rp.root);
    if (b.num_qubits() > kMaxQubits) {
        throw WidthOverflow("recursive preparation needs " + std::to_string(b.num_qubits()) + " qubits");
    }
    rp.circuit = b.build();

    bool any = false, stab_ok = true;
    for (const auto &br : run_all_branches(rp.circuit, StateVector(std::vector<cplx>{1}))) {
        PreparationBranch pb;
        pb.bits = br.bits();
        pb.probability = br.probability;
        if (!br.state) {
            pb.fidelity = 1;
            rp.report.branches.push_back(pb);
            continue;
        }
        any = true;
        pb.fidelity = subsystem_overlap(*br.state, rp.system, rp.target);
        for (const auto &p : rp.root.pairs) {
            pb.stabilizer_error = std::max(pb.stabilizer_error, std::abs(expectation(*br.state, p.m, rp.system) - 1));
        }
        stab_ok = stab_ok && pb.stabilizer_error <= tol;
        rp.report.worst_fidelity = std::min(rp.report.worst_fidelity, pb.fidelity);
        rp.report.branches.push_back(pb);
    }
    rp.report.pass = any && stab_ok && rp.report.worst_fidelity >= 1 - tol;
    if (!rp.report.pass) {
        throw SynthesisError("recursive preparation missed the target (worst fidelity " +
                             std::to_string(rp.report.worst_fidelity) + ")");
    }
    return rp;
}

}  // namespace telegate
