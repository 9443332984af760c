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

#include "telegate/ancilla.hpp"

#include <cmath>

#include "telegate/circuit_io.hpp"
#include "telegate/errors.hpp"
#include "telegate/gates.hpp"
#include "telegate/hierarchy.hpp"

namespace telegate {
namespace {

bool commute(const Matrix &a, const Matrix &b, double tol) { return max_abs_diff(a * b, b * a) <= tol; }
bool anticommute(const Matrix &a, const Matrix &b, double tol) { return max_abs(a * b + b * a) <= tol; }

std::optional<int> level_of(const Matrix &m) {
    HierarchyOptions opts;
    opts.k_max = 4;
    return hierarchy_level(m, opts).level;
}

std::vector<int> range(int from, int to) {
    std::vector<int> v;
    for (int i = from; i < to; ++i) v.push_back(i);
    return v;
}

// Appends H, controlled-M, H, measure, conditional Q for each step.
void append_steps(CircuitBuilder &b, const std::vector<PreparationStep> &steps, const std::vector<int> &sys,
                  int first_control, int first_cbit) {
    for (std::size_t j = 0; j < steps.size(); ++j) {
        const int c = first_control + static_cast<int>(j);
        const int bit = first_cbit + static_cast<int>(j);
        std::vector<int> targets{c};
        targets.insert(targets.end(), sys.begin(), sys.end());
        b.gate("H", {c}, Role::AncillaPrep);
        b.gate(GateRef::custom(controlled(steps[j].measure), "c-" + steps[j].measure_label), targets, Role::AncillaPrep);
        b.gate("H", {c}, Role::AncillaPrep);
        b.measure(c, bit, Role::AncillaPrep);
        b.cgate({bit}, {1}, GateRef::custom(steps[j].correct, steps[j].correct_label), sys, Role::AncillaPrep);
    }
}

std::vector<PreparationStep> steps_for(const StabilizerSpec &spec, const std::vector<std::size_t> &which) {
    std::vector<PreparationStep> steps;
    for (std::size_t i : which) {
        const auto &p = spec.pairs.at(i);
        const std::string idx = std::to_string(i + 1);
        steps.push_back(PreparationStep{p.m, p.q, operator_label(split_global_phase(p.m, 1e-12).canonical, "M" + idx),
                                        operator_label(split_global_phase(p.q, 1e-12).canonical, "Q" + idx)});
    }
    return steps;
}

double expectation(const StateVector &full, const Matrix &m, const std::vector<int> &sys) {
    std::vector<cplx> v = full.amplitudes();
    apply_matrix_inplace(v, full.num_qubits(), m, sys);
    cplx acc = 0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += std::conj(full[i]) * v[i];
    return acc.real();
}

// Rank-1 test of the 2^k x 2^(n-k) reshaping via 2x2 minors against the
// largest entry.
bool rank_one(const std::vector<cplx> &v, std::size_t rows, std::size_t cols, double tol) {
    std::size_t p = 0, q = 0;
    double best = -1;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (std::abs(v[i * cols + j]) > best) {
                best = std::abs(v[i * cols + j]);
                p = i;
                q = j;
            }
    const cplx apq = v[p * cols + q];
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            if (std::abs(v[i * cols + j] * apq - v[i * cols + q] * v[p * cols + j]) > tol * std::abs(apq)) return false;
        }
    return true;
}

}  // namespace

StabilizerSpec make_stabilizer_spec(StateVector target, std::vector<StabilizerPair> pairs, double tol) {
    const std::size_t dim = target.dim();
    const Matrix id = Matrix::identity(dim);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto &p = pairs[i];
        const std::string tag = "pair " + std::to_string(i + 1);
        if (p.m.rows() != dim || p.q.rows() != dim) throw DimensionError(tag + " has the wrong width");
        if (max_abs_diff(p.m * p.m, id) > tol) throw ValidationError(tag + ": M^2 != I");
        const auto mt = p.m * std::span<const cplx>(target.amplitudes());
        double err = 0;
        for (std::size_t k = 0; k < dim; ++k) err = std::max(err, std::abs(mt[k] - target[k]));
        if (err > tol) throw ValidationError(tag + ": M does not stabilize the target");
        if (!anticommute(p.m, p.q, tol)) throw ValidationError(tag + ": M and Q do not anticommute");
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            if (j == i) continue;
            if (!commute(p.m, pairs[j].q, tol)) {
                throw ValidationError(tag + ": M does not commute with Q of pair " + std::to_string(j + 1));
            }
            if (!commute(p.m, pairs[j].m, tol)) {
                throw ValidationError(tag + ": M does not commute with M of pair " + std::to_string(j + 1));
            }
        }
    }
    StabilizerSpec spec{std::move(target), std::move(pairs), {}};
    for (std::size_t i = 0; i < spec.pairs.size(); ++i) {
        auto &p = spec.pairs[i];
        p.m_level = level_of(p.m);
        p.q_level = level_of(p.q);
        if (!p.m_level || *p.m_level > 2) {
            spec.warnings.push_back("stabilizer M" + std::to_string(i + 1) + " is not Clifford");
        }
    }
    return spec;
}

StabilizerSpec derive_stabilizers(const Matrix &u, const TeleportPlan &plan, double tol) {
    const int n = qubit_count(u);
    if (plan.num_qubits() != n) throw DimensionError("plan width does not match the gate");
    if (n > kMaxQubits) throw WidthOverflow("target too wide");
    std::vector<Matrix> a;
    for (int q = 0; q < n; ++q) a.push_back(gate_matrix(plan.a_gate(q)));
    const Matrix ua = u * tensor(a);
    const Matrix ua_dag = ua.adjoint();
    std::vector<StabilizerPair> pairs;
    for (int q = 0; q < n; ++q) {
        StabilizerPair p;
        p.m = ua * pauli_to_matrix(PauliOperator::z_on(n, q)) * ua_dag;
        p.q = ua * pauli_to_matrix(PauliOperator::x_on(n, q)) * ua_dag;
        pairs.push_back(std::move(p));
    }
    return make_stabilizer_spec(StateVector(ua.column(0)), std::move(pairs), tol);
}

double stabilized_dimension(const StabilizerSpec &spec, std::size_t skip) {
    const std::size_t dim = spec.target.dim();
    Matrix proj = Matrix::identity(dim);
    for (std::size_t j = 0; j < spec.pairs.size(); ++j) {
        if (j == skip) continue;
        Matrix f = Matrix::identity(dim) + spec.pairs[j].m;
        f *= 0.5;
        proj = proj * f;
    }
    cplx tr = 0;
    for (std::size_t i = 0; i < dim; ++i) tr += proj(i, i);
    return tr.real();
}

std::array<MeasurementBranch, 2> measure_operator(const StateVector &s, const Matrix &m, double tol) {
    const int n = s.num_qubits();
    if (m.rows() != s.dim()) throw DimensionError("operator width does not match the state");
    if (max_abs_diff(m * m, Matrix::identity(m.rows())) > tol) throw ValidationError("measured operator is not an involution");
    CircuitBuilder b(n + 1, 1, InputTag::Symbolic);
    b.set_input(0, InputTag::Zero);
    b.gate("H", {0});
    b.gate(GateRef::custom(controlled(m), "c-M"), range(0, n + 1));
    b.gate("H", {0});
    b.measure(0, 0);
    const auto branches = run_all_branches(b.build(), s);
    std::array<MeasurementBranch, 2> out;
    for (int k = 0; k < 2; ++k) {
        out[k].outcome = k;
        out[k].probability = branches[k].probability;
        if (branches[k].state) {
            const std::size_t half = s.dim();
            std::vector<cplx> v(branches[k].state->amplitudes().begin() + k * half,
                                branches[k].state->amplitudes().begin() + (k + 1) * half);
            out[k].state = StateVector(std::move(v));
        }
    }
    return out;
}

PreparationScript build_preparation(const StabilizerSpec &spec, const StateVector &initial) {
    if (initial.dim() != spec.target.dim()) throw DimensionError("initial state width does not match the target");
    PreparationScript s;
    s.initial = initial;
    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < spec.pairs.size(); ++i) all.push_back(i);
    s.steps = steps_for(spec, all);
    s.expected_final = spec.target;
    s.warnings = spec.warnings;
    return s;
}

PreparationScript build_preparation(const StabilizerSpec &spec) {
    return build_preparation(spec, StateVector::zero(spec.target.num_qubits()));
}

PreparationScript shortcut_preparation(const StabilizerSpec &spec, std::size_t i) {
    const auto &p = spec.pairs.at(i);
    auto qt = p.q * std::span<const cplx>(spec.target.amplitudes());
    for (std::size_t k = 0; k < qt.size(); ++k) qt[k] += spec.target[k];
    PreparationScript s;
    s.initial = StateVector(std::move(qt));
    s.steps = steps_for(spec, {i});
    s.expected_final = spec.target;
    s.warnings = spec.warnings;
    if (auto factors = product_factors(s.initial)) {
        s.product_intermediate = true;
        for (std::size_t q = 0; q < factors->size(); ++q) {
            const auto st = single_qubit_stabilizer((*factors)[q]);
            std::string label = "?";
            if (st) {
                const std::string lit = st->to_string();
                label = (lit[0] == '-' ? "-" : "") + std::string(1, st->x(0) ? (st->z(0) ? 'Y' : 'X') : 'Z');
            }
            s.intermediate_stabilizers.push_back(label + "_" + std::to_string(q + 1));
        }
    } else {
        s.product_intermediate = false;
        s.warnings.push_back("shortcut intermediate is entangled");
    }
    return s;
}

Circuit preparation_circuit(const PreparationScript &script) {
    const int n = script.initial.num_qubits();
    const int steps = static_cast<int>(script.steps.size());
    if (n + steps > kMaxQubits) throw WidthOverflow("preparation circuit exceeds the simulator width");
    CircuitBuilder b(n + steps, steps, InputTag::Zero);
    const auto sys = range(0, n);
    for (int q : sys) b.set_input(q, InputTag::Injected);
    b.inject(script.initial.amplitudes(), sys, Role::AncillaPrep);
    append_steps(b, script.steps, sys, n, 0);
    return b.build();
}

PreparationReport run_preparation(const PreparationScript &script, const StabilizerSpec &spec, double tol) {
    const Circuit c = preparation_circuit(script);
    const auto sys = range(0, script.initial.num_qubits());
    PreparationReport rep;
    bool any = false;
    for (const auto &br : run_all_branches(c, StateVector(std::vector<cplx>{1}))) {
        PreparationBranch pb;
        pb.bits = br.bits();
        pb.probability = br.probability;
        if (!br.state) {
            pb.fidelity = 1;
            rep.branches.push_back(pb);
            continue;
        }
        any = true;
        pb.fidelity = subsystem_overlap(*br.state, sys, script.expected_final);
        for (const auto &p : spec.pairs) {
            pb.stabilizer_error = std::max(pb.stabilizer_error, std::abs(expectation(*br.state, p.m, sys) - 1));
        }
        rep.worst_fidelity = std::min(rep.worst_fidelity, pb.fidelity);
        rep.branches.push_back(pb);
    }
    bool stab_ok = true;
    for (const auto &b : rep.branches) stab_ok = stab_ok && b.stabilizer_error <= tol;
    rep.pass = any && stab_ok && rep.worst_fidelity >= 1 - tol;
    return rep;
}

bool is_product_state(const StateVector &s, double tol) {
    const int n = s.num_qubits();
    for (int k = 1; k < n; ++k) {
        if (!rank_one(s.amplitudes(), std::size_t{1} << k, std::size_t{1} << (n - k), tol)) return false;
    }
    return true;
}

std::optional<std::vector<StateVector>> product_factors(const StateVector &s, double tol) {
    if (!is_product_state(s, tol)) return std::nullopt;
    std::vector<StateVector> out;
    std::vector<cplx> rest = s.amplitudes();
    for (int n = s.num_qubits(); n > 1; --n) {
        const std::size_t cols = std::size_t{1} << (n - 1);
        // Peel qubit 0: the largest entry fixes one row and one column.
        std::size_t p = 0;
        for (std::size_t i = 1; i < rest.size(); ++i)
            if (std::abs(rest[i]) > std::abs(rest[p])) p = i;
        const std::size_t row = p / cols, col = p % cols;
        out.emplace_back(std::vector<cplx>{rest[col], rest[cols + col]});
        rest = std::vector<cplx>(rest.begin() + row * cols, rest.begin() + (row + 1) * cols);
    }
    out.emplace_back(rest);
    return out;
}

std::optional<PauliOperator> single_qubit_stabilizer(const StateVector &s, double tol) {
    if (s.num_qubits() != 1) throw DimensionError("single-qubit state expected");
    for (auto lit : {"+X", "-X", "+Y", "-Y", "+Z", "-Z"}) {
        const auto p = PauliOperator::from_string(lit);
        const auto v = pauli_to_matrix(p) * std::span<const cplx>(s.amplitudes());
        if (std::abs(v[0] - s[0]) <= tol && std::abs(v[1] - s[1]) <= tol) return p;
    }
    return std::nullopt;
}

Circuit with_prepared_ancilla(const SynthesisResult &r, const PreparationScript &script) {
    const int n = r.layout.n;
    const int steps = static_cast<int>(script.steps.size());
    if (script.initial.num_qubits() != n) throw DimensionError("script width does not match the ancilla register");
    if (2 * n + steps > kMaxQubits) throw WidthOverflow("prepared-ancilla circuit exceeds the simulator width");
    const auto &ops = r.circuit.ops();
    if (ops.empty() || !std::holds_alternative<InjectOp>(ops.front().op)) {
        throw ValidationError("synthesized circuit does not start with its ancilla injection");
    }
    CircuitBuilder b(2 * n + steps, n + steps, InputTag::Zero);
    for (int q = 0; q < n; ++q) {
        b.set_input(q, InputTag::Symbolic);
        b.set_input(n + q, InputTag::Injected);
    }
    const auto anc = range(n, 2 * n);
    b.inject(script.initial.amplitudes(), anc, Role::AncillaPrep);
    append_steps(b, script.steps, anc, 2 * n, 0);
    for (std::size_t i = 1; i < ops.size(); ++i) {
        CircuitOp op = ops[i];
        if (auto *m = std::get_if<MeasureOp>(&op.op)) m->cbit += steps;
        if (auto *c = std::get_if<ConditionalOp>(&op.op))
            for (int &bit : c->cbits) bit += steps;
        b.append(std::move(op));
    }
    return b.build();
}

nlohmann::json script_to_json(const PreparationScript &script) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto &s : script.steps) {
        auto entry = [](const Matrix &m, const std::string &label) {
            nlohmann::json j{{"label", label}};
            if (is_known_gate(label)) {
                j["name"] = canonical_gate_name(label);
            } else {
                j["matrix"] = matrix_to_json(m);
            }
            return j;
        };
        steps.push_back({{"measure", entry(s.measure, s.measure_label)}, {"correct", entry(s.correct, s.correct_label)}});
    }
    nlohmann::json j{{"initial", vector_to_json(script.initial.amplitudes())},
                     {"steps", steps},
                     {"target", vector_to_json(script.expected_final.amplitudes())}};
    if (script.product_intermediate) {
        j["product_intermediate"] = *script.product_intermediate;
        j["intermediate_stabilizers"] = script.intermediate_stabilizers;
    }
    return j;
}

}  // namespace telegate
