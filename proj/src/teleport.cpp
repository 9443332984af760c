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

#include "telegate/teleport.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "telegate/circuit_io.hpp"
#include "telegate/errors.hpp"
#include "telegate/gates.hpp"
#include "telegate/hierarchy.hpp"

namespace telegate {

std::string TeleportPlan::describe() const {
    std::string s;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        if (i) s += ",";
        s += kinds[i] == TeleportKind::X ? "X" : "Z";
    }
    return s;
}

TeleportPlan TeleportPlan::all(int n, TeleportKind k) { return TeleportPlan{std::vector<TeleportKind>(n, k), {}}; }

std::vector<int> TeleportLayout::data() const {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return v;
}

std::vector<int> TeleportLayout::ancillas() const {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = n + i;
    return v;
}

std::string_view to_string(CorrectionClass c) {
    switch (c) {
        case CorrectionClass::Pauli: return "pauli";
        case CorrectionClass::Clifford: return "clifford";
        case CorrectionClass::DiagonalPauli: return "diagonal-pauli";
        case CorrectionClass::Other: return "other";
    }
    return "?";
}

namespace {

constexpr double kPlanTol = 1e-9;

CircuitBuilder teleport_register(int n) {
    CircuitBuilder b(2 * n, n, InputTag::Zero);
    for (int i = 0; i < n; ++i) b.set_input(i, InputTag::Symbolic);
    return b;
}

void add_entangler(CircuitBuilder &b, const TeleportPlan &plan) {
    const int n = plan.num_qubits();
    for (int i = 0; i < n; ++i) {
        if (plan.kinds[i] == TeleportKind::X) {
            b.gate("CNOT", {n + i, i}, Role::E);
        } else {
            b.gate("CNOT", {i, n + i}, Role::E);
        }
    }
}

void add_b_and_measure(CircuitBuilder &b, const TeleportPlan &plan) {
    const int n = plan.num_qubits();
    for (int i = 0; i < n; ++i) {
        if (plan.kinds[i] == TeleportKind::Z) b.gate("H", {i}, Role::B);
    }
    for (int i = 0; i < n; ++i) b.measure(i, i);
}

bool projectively_identity(const Matrix &m) {
    return projective_distance(m, Matrix::identity(m.rows())) < 1e-9;
}

std::string strip_sign(std::string s) {
    std::size_t k = 0;
    while (k < s.size() && (s[k] == '+' || s[k] == '-' || s[k] == 'i')) ++k;
    return s.substr(k);
}

Matrix generator(int n, int q, TeleportKind k) {
    return pauli_to_matrix(k == TeleportKind::X ? PauliOperator::x_on(n, q) : PauliOperator::z_on(n, q));
}

std::vector<cplx> hadamard_layer_state(const TeleportPlan &plan) {
    // A|0..0> as a vector, built from per-qubit factors.
    std::vector<cplx> v{1};
    const double r = std::sqrt(0.5);
    for (auto k : plan.kinds) {
        std::vector<cplx> f = k == TeleportKind::X ? std::vector<cplx>{r, r} : std::vector<cplx>{1, 0};
        std::vector<cplx> out;
        for (cplx a : v)
            for (cplx b : f) out.push_back(a * b);
        v = std::move(out);
    }
    return v;
}

struct EmitSpec {
    TeleportPlan plan;
    std::vector<cplx> ancilla;
    std::optional<Matrix> g_a, g_b;
    std::vector<Correction> corrections;
};

Circuit emit(const EmitSpec &spec) {
    const int n = spec.plan.num_qubits();
    CircuitBuilder b = teleport_register(n);
    std::vector<int> anc(n), data(n);
    for (int i = 0; i < n; ++i) {
        data[i] = i;
        anc[i] = n + i;
        b.set_input(n + i, InputTag::Injected);
    }
    b.inject(spec.ancilla, anc, Role::AncillaPrep);
    if (spec.g_a) b.gate(GateRef::custom(*spec.g_a, "Ga"), data, Role::U);
    add_entangler(b, spec.plan);
    add_b_and_measure(b, spec.plan);
    if (spec.g_b) b.gate(GateRef::custom(*spec.g_b, "Gb"), anc, Role::U);
    for (const auto &c : spec.corrections) {
        b.cgate({c.qubit}, {1}, GateRef::custom(c.canonical, c.label), anc, Role::D);
    }
    return b.build();
}

void check_ancilla(const std::vector<cplx> &matrix_path, const StateVector &sim_path) {
    // Two independent code paths must agree to rounding.
    double diff = 0;
    for (std::size_t i = 0; i < matrix_path.size(); ++i) diff = std::max(diff, std::abs(matrix_path[i] - sim_path[i]));
    if (diff > 1e-10) {
        throw SynthesisError("ancilla mismatch between matrix action and gate simulation (" + format_complex(diff) + ")");
    }
}

SynthesisResult finish(EmitSpec spec, const Matrix &u, int level, double tol) {
    SynthesisResult r;
    const int n = spec.plan.num_qubits();
    r.layout.n = n;
    r.plan = spec.plan;
    r.level = level;
    r.ancilla = StateVector(spec.ancilla);
    r.corrections = spec.corrections;
    r.circuit = emit(spec);
    r.verification = verify_gate_equivalence(r.circuit, u, r.layout.data(), r.layout.ancillas(), tol);
    if (!r.verification.pass) {
        throw SynthesisError("teleported circuit failed verification: " + r.verification.summary());
    }
    return r;
}

}  // namespace

Circuit build_one_bit_teleport(TeleportKind kind, int n) {
    if (n < 1) throw DimensionError("teleport needs at least one qubit");
    if (2 * n > kMaxQubits) throw WidthOverflow("teleport of " + std::to_string(n) + " qubits is too wide");
    const TeleportPlan plan = TeleportPlan::all(n, kind);
    CircuitBuilder b = teleport_register(n);
    for (int i = 0; i < n; ++i) {
        if (kind == TeleportKind::X) b.gate("H", {n + i}, Role::A);
    }
    add_entangler(b, plan);
    add_b_and_measure(b, plan);
    for (int i = 0; i < n; ++i) b.cgate({i}, {1}, GateRef::named(plan.d_gate(i)), {n + i}, Role::D);
    return b.build();
}

Circuit build_generalized_teleport(const CliffordTableau &g) {
    const int n = g.num_qubits();
    if (n < 1) throw DimensionError("generalized teleport needs at least one qubit");
    if (2 * n > kMaxQubits) throw WidthOverflow("teleport of " + std::to_string(n) + " qubits is too wide");
    const TeleportPlan plan = TeleportPlan::all(n, TeleportKind::X);
    const bool trivial = g == CliffordTableau::identity(n);
    const Matrix gm = tableau_to_matrix(g);
    std::vector<int> data(n), anc(n);
    for (int i = 0; i < n; ++i) {
        data[i] = i;
        anc[i] = n + i;
    }
    CircuitBuilder b = teleport_register(n);
    for (int i = 0; i < n; ++i) b.gate("H", {n + i}, Role::A);
    if (!trivial) b.gate(GateRef::custom(gm, "G"), data, Role::U);
    add_entangler(b, plan);
    add_b_and_measure(b, plan);
    if (!trivial) b.gate(GateRef::custom(gm.adjoint(), "G†"), anc, Role::U);
    // The correction G^dagger X_i G is a Pauli; its sign is a global phase.
    const CliffordTableau g_inv = g.inverse();
    for (int i = 0; i < n; ++i) {
        const PauliOperator p = conjugate_pauli(g_inv, PauliOperator::x_on(n, i));
        for (int q = 0; q < n; ++q) {
            const char *name = p.x(q) ? (p.z(q) ? "Y" : "X") : (p.z(q) ? "Z" : nullptr);
            if (name) b.cgate({i}, {1}, GateRef::named(name), {n + q}, Role::D);
        }
    }
    return b.build();
}

Matrix plan_entangler(const TeleportPlan &plan) {
    const int n = plan.num_qubits();
    Matrix e = Matrix::identity(std::size_t{1} << (2 * n));
    for (int i = 0; i < n; ++i) {
        const std::vector<int> t = plan.kinds[i] == TeleportKind::X ? std::vector<int>{n + i, i} : std::vector<int>{i, n + i};
        e = gate_on("CNOT", t, 2 * n) * e;
    }
    return e;
}

bool plan_commutes(const Matrix &u, const TeleportPlan &plan, double tol) {
    const int n = plan.num_qubits();
    if (qubit_count(u) != n) throw DimensionError("plan width does not match the gate");
    const std::size_t d = std::size_t{1} << n;
    // E permutes basis states of data (x) ancilla; I (x) u commutes with it iff
    // M[pi(i)][pi(j)] == M[i][j] where M = I (x) u.
    auto pi = [&](std::size_t data, std::size_t anc) {
        for (int q = 0; q < n; ++q) {
            const std::size_t bit = std::size_t{1} << (n - 1 - q);
            if (plan.kinds[q] == TeleportKind::X) {
                if (anc & bit) data ^= bit;
            } else {
                if (data & bit) anc ^= bit;
            }
        }
        return std::pair{data, anc};
    };
    for (std::size_t di = 0; di < d; ++di) {
        for (std::size_t ai = 0; ai < d; ++ai) {
            const auto [pdi, pai] = pi(di, ai);
            for (std::size_t dj = 0; dj < d; ++dj) {
                for (std::size_t aj = 0; aj < d; ++aj) {
                    const auto [pdj, paj] = pi(dj, aj);
                    const cplx lhs = pdi == pdj ? u(pai, paj) : cplx(0);
                    const cplx rhs = di == dj ? u(ai, aj) : cplx(0);
                    if (std::abs(lhs - rhs) > tol) return false;
                }
            }
        }
    }
    return true;
}

std::vector<TeleportPlan> enumerate_plans(int n) {
    std::vector<unsigned> masks(std::size_t{1} << n);
    for (unsigned m = 0; m < masks.size(); ++m) masks[m] = m;
    // Bit n-1-q of the mask marks qubit q as Z, so numeric order is
    // lexicographic order with X before Z.
    std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
        if (std::popcount(a) != std::popcount(b)) return std::popcount(a) < std::popcount(b);
        return a < b;
    });
    std::vector<TeleportPlan> out;
    for (unsigned m : masks) {
        TeleportPlan p;
        for (int q = 0; q < n; ++q) p.kinds.push_back((m >> (n - 1 - q)) & 1u ? TeleportKind::Z : TeleportKind::X);
        out.push_back(std::move(p));
    }
    return out;
}

std::optional<TeleportPlan> plan_teleportation(const Matrix &u, double tol) {
    const int n = qubit_count(u);
    if (n > 4) throw WidthOverflow("plan search is exhaustive and limited to 4 qubits");
    if (!is_unitary(u, std::max(tol, 1e-12) * 10)) throw ValidationError("matrix is not unitary");
    for (auto &plan : enumerate_plans(n)) {
        if (plan_commutes(u, plan, tol)) return plan;
    }
    return std::nullopt;
}

namespace {

std::string subscript(int q) {
    static const char *digits[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
    return digits[q % 10];
}

/// Tensor of single-qubit library gates, optionally times one two-qubit
/// gate on an ordered pair: "X₁⊗CNOT₂₃", "(X⊗S)·CZ".
std::optional<std::string> placed_product_label(const Matrix &canonical) {
    static const std::vector<std::string> singles = {"I", "X", "Y", "Z", "H", "S", "S†", "T", "T†"};
    static const std::vector<std::string> pair_gates = {"CZ", "CNOT"};
    const int n = qubit_count(canonical);
    struct Pair {
        std::string name;
        int a = -1, b = -1;
    };
    std::vector<Pair> pairs{{}};
    for (const auto &g : pair_gates) {
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (a == b || (g == "CZ" && b < a)) continue;
                pairs.push_back({g, a, b});
            }
        }
    }
    std::size_t combos = 1;
    for (int q = 0; q < n; ++q) combos *= singles.size();
    for (const auto &pr : pairs) {
        Matrix r = canonical;
        if (pr.a >= 0) {
            const int t[2] = {pr.a, pr.b};
            r = canonical * embed(gate_matrix(pr.name), t, n).adjoint();
        }
        for (std::size_t c = 0; c < combos; ++c) {
            std::vector<std::string> names;
            std::vector<Matrix> factors;
            std::size_t rest = c;
            for (int q = 0; q < n; ++q) {
                names.push_back(singles[rest % singles.size()]);
                rest /= singles.size();
                factors.push_back(gate_matrix(names.back()));
            }
            if (projective_distance(r, tensor(factors)) >= 1e-9) continue;
            if (pr.a < 0) {
                std::string s;
                for (int q = 0; q < n; ++q) s += (q ? "⊗" : "") + names[q];
                return s;
            }
            const std::string pair_name = pr.name + subscript(pr.a + 1) + subscript(pr.b + 1);
            bool disjoint = names[pr.a] == "I" && names[pr.b] == "I";
            if (disjoint) {
                std::string s;
                for (int q = 0; q < n; ++q) {
                    if (names[q] != "I") s += names[q] + subscript(q + 1) + "⊗";
                }
                return s + pair_name;
            }
            std::string s = "(";
            for (int q = 0; q < n; ++q) s += (q ? "⊗" : "") + names[q];
            return s + ")·" + (n == 2 ? pr.name : pair_name);
        }
    }
    return std::nullopt;
}

}  // namespace

std::string operator_label(const Matrix &canonical, const std::string &fallback) {
    const int n = qubit_count(canonical);
    if (auto p = pauli_from_matrix(canonical, 1e-9)) return strip_sign(p->pauli.to_string());
    for (const auto &name : gate_library()) {
        const Matrix g = gate_matrix(name);
        if (g.rows() == canonical.rows() && projective_distance(canonical, g) < 1e-9) return name;
    }
    if (n > 3) return fallback;
    if (n >= 2) {
        if (auto placed = placed_product_label(canonical)) return *placed;
    }
    // R P with R a tensor of single-qubit diagonal library gates.
    static const std::vector<std::string> diag = {"I", "Z", "S", "S†", "T", "T†"};
    std::size_t combos = 1;
    for (int q = 0; q < n; ++q) combos *= diag.size();
    for (const auto &p : all_phase_free_paulis(n)) {
        const Matrix r = canonical * pauli_to_matrix(p);
        if (!is_diagonal(r, 1e-9)) continue;
        for (std::size_t c = 0; c < combos; ++c) {
            std::vector<Matrix> factors;
            std::string rname;
            std::size_t rest = c;
            for (int q = 0; q < n; ++q) {
                const auto &name = diag[rest % diag.size()];
                rest /= diag.size();
                factors.push_back(gate_matrix(name));
                rname += (q ? "⊗" : "") + name;
            }
            if (projective_distance(r, tensor(factors)) < 1e-9) {
                return rname + "·" + strip_sign(p.to_string());
            }
        }
    }
    return fallback;
}

Correction classify_correction(int qubit, const Matrix &op, const Matrix &d, int k, double tol) {
    Correction c;
    c.qubit = qubit;
    c.op = op;
    auto split = split_global_phase(op, tol);
    c.phase = split.phase;
    c.canonical = std::move(split.canonical);
    const Matrix r = op * d;
    if (is_diagonal(r, tol)) {
        HierarchyOptions opts;
        opts.k_max = std::max(k, 2);
        c.residue_level = hierarchy_level(r, opts).level;
    }
    if (pauli_from_matrix(op, tol)) {
        c.cls = CorrectionClass::Pauli;
    } else if (clifford_from_matrix(op, tol)) {
        c.cls = CorrectionClass::Clifford;
    } else if (c.residue_level && *c.residue_level <= k - 1) {
        c.cls = CorrectionClass::DiagonalPauli;
    } else {
        c.cls = CorrectionClass::Other;
    }
    return c;
}

StateVector simulate_ancilla(const Matrix &u, const TeleportPlan &plan) {
    const int n = plan.num_qubits();
    StateVector s = StateVector::zero(n);
    for (int q = 0; q < n; ++q) {
        if (plan.kinds[q] == TeleportKind::X) {
            const int t[1] = {q};
            s = apply_gate(s, "H", t);
        }
    }
    std::vector<int> all(n);
    for (int q = 0; q < n; ++q) all[q] = q;
    return apply_gate(s, u, all);
}

SynthesisResult synthesize_teleported_gate(const Matrix &u, const TeleportPlan &plan, int k_hint, double tol) {
    const int n = qubit_count(u);
    if (plan.num_qubits() != n) throw SynthesisError("plan width does not match the gate");
    if (plan.generalized_g) throw SynthesisError("generalized plans go through synthesize_sandwiched");
    if (2 * n > kMaxQubits) throw WidthOverflow("teleported form of a " + std::to_string(n) + "-qubit gate is too wide");
    if (!plan_commutes(u, plan, kPlanTol)) {
        throw SynthesisError("plan " + plan.describe() + " does not commute with the gate");
    }
    HierarchyOptions opts;
    opts.k_max = std::max(k_hint, 1);
    const auto verdict = hierarchy_level(u, opts);
    if (!verdict.level) throw SynthesisError("gate is not in C_" + std::to_string(k_hint));
    const int k = *verdict.level;

    EmitSpec spec;
    spec.plan = plan;
    spec.ancilla = u * hadamard_layer_state(plan);
    check_ancilla(spec.ancilla, simulate_ancilla(u, plan));
    const Matrix u_dag = u.adjoint();
    for (int i = 0; i < n; ++i) {
        const Matrix d = generator(n, i, plan.kinds[i]);
        Correction c = classify_correction(i, u * d * u_dag, d, k, 1e-9);
        if (c.cls == CorrectionClass::Other) {
            throw SynthesisError("correction for qubit " + std::to_string(i) + " is neither Clifford nor a level-" +
                                 std::to_string(k - 1) + " diagonal times a Pauli");
        }
        c.label = operator_label(c.canonical, "U" + plan.d_gate(i) + std::to_string(i + 1) + "U†");
        spec.corrections.push_back(std::move(c));
    }
    return finish(std::move(spec), u, k, tol);
}

SynthesisResult synthesize_sandwiched(const Matrix &u, const Matrix &g_a, const Matrix &v, const Matrix &g_b,
                                      double tol) {
    const int n = qubit_count(u);
    if (qubit_count(g_a) != n || qubit_count(v) != n || qubit_count(g_b) != n) {
        throw DimensionError("sandwich factors must all act on " + std::to_string(n) + " qubits");
    }
    if (2 * n > kMaxQubits) throw WidthOverflow("sandwiched form is too wide");
    if (!clifford_from_matrix(g_a)) throw SynthesisError("G_a is not Clifford");
    if (!clifford_from_matrix(g_b)) throw SynthesisError("G_b is not Clifford");
    if (!is_diagonal(v, 1e-12)) throw SynthesisError("V must be diagonal");
    if (projective_distance(u, g_b * v * g_a) > 1e-9) {
        throw SynthesisError("U differs from G_b V G_a beyond a global phase");
    }
    const auto verdict = hierarchy_level(u);
    const int k = verdict.level.value_or(HierarchyOptions{}.k_max);

    EmitSpec spec;
    spec.plan = TeleportPlan::all(n, TeleportKind::X);
    spec.ancilla = v * hadamard_layer_state(spec.plan);
    check_ancilla(spec.ancilla, simulate_ancilla(v, spec.plan));
    if (!projectively_identity(g_a)) spec.g_a = g_a;
    if (!projectively_identity(g_b)) spec.g_b = g_b;
    const Matrix outer = g_b * v;
    const Matrix outer_dag = outer.adjoint();
    for (int i = 0; i < n; ++i) {
        const Matrix x = generator(n, i, TeleportKind::X);
        const Matrix d = g_b * x * g_b.adjoint();
        Correction c = classify_correction(i, outer * x * outer_dag, d, k, 1e-9);
        if (c.cls == CorrectionClass::Other) {
            throw SynthesisError("correction for qubit " + std::to_string(i) + " is not implementable at level " +
                                 std::to_string(k - 1));
        }
        c.label = operator_label(c.canonical, "UX" + std::to_string(i + 1) + "U†");
        spec.corrections.push_back(std::move(c));
    }
    return finish(std::move(spec), u, k, tol);
}

SynthesisResult synthesize_sandwiched(const Matrix &u, const CliffordTableau &g_a, const Matrix &v,
                                      const CliffordTableau &g_b, double tol) {
    return synthesize_sandwiched(u, tableau_to_matrix(g_a), v, tableau_to_matrix(g_b), tol);
}

nlohmann::json synthesis_sidecar(const SynthesisResult &r) {
    nlohmann::json corr = nlohmann::json::array();
    for (const auto &c : r.corrections) {
        nlohmann::json j{{"qubit", c.qubit},
                         {"class", std::string(to_string(c.cls))},
                         {"phase", complex_to_json(c.phase)},
                         {"label", c.label}};
        if (is_known_gate(c.label)) {
            j["name"] = canonical_gate_name(c.label);
        } else {
            j["matrix"] = matrix_to_json(c.canonical);
        }
        if (c.residue_level) j["residue_level"] = *c.residue_level;
        corr.push_back(std::move(j));
    }
    return {{"plan", r.plan.describe()},
            {"level", r.level},
            {"ancilla", vector_to_json(r.ancilla.amplitudes())},
            {"corrections", corr},
            {"verification", report_to_json(r.verification)}};
}

}  // namespace telegate
