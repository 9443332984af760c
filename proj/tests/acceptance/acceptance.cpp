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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "telegate/ancilla.hpp"
#include "telegate/clifford.hpp"
#include "telegate/errors.hpp"
#include "telegate/gates.hpp"
#include "telegate/hierarchy.hpp"
#include "telegate/recursive.hpp"
#include "telegate/remote.hpp"
#include "telegate/teleport.hpp"

namespace tg = telegate;
using tg::cplx;
using tg::Matrix;
using tg::StateVector;

namespace {

constexpr double kPi = std::numbers::pi;
const double kR2 = 1 / std::sqrt(2.0);

/// Collects failed expectations for one criterion.
struct Ctx {
    std::vector<std::string> failures;

    bool expect(bool ok, const std::string &what) {
        if (!ok) failures.push_back(what);
        return ok;
    }
};

std::vector<int> iota(int a, int b) {
    std::vector<int> v;
    for (int i = a; i < b; ++i) v.push_back(i);
    return v;
}

tg::TeleportPlan plan_of(std::string_view s) {
    tg::TeleportPlan p;
    for (char ch : s) p.kinds.push_back(ch == 'X' ? tg::TeleportKind::X : tg::TeleportKind::Z);
    return p;
}

Matrix g(std::string_view name) { return tg::gate_matrix(name); }

Matrix on(const Matrix &m, std::vector<int> targets, int n) { return tg::embed(m, targets, n); }

bool same_up_to_phase(const Matrix &a, const Matrix &b, double tol = 1e-10) {
    return tg::projective_distance(a, b) < tol;
}

bool same_state(const StateVector &a, const StateVector &b, double tol = 1e-10) {
    return tg::equivalent_up_to_phase(a, b, tol).equivalent;
}

std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

// Hierarchy membership straight from the recursive definition, independent of
// the library classifier: level 1 is the Pauli group up to phase, level k
// maps every X_i and Z_i into level k-1 under conjugation.
struct DefinitionOracle {
    int n;
    std::vector<Matrix> paulis;
    std::vector<Matrix> generators;

    explicit DefinitionOracle(int n_qubits) : n(n_qubits) {
        const Matrix single[4] = {Matrix::identity(2), g("X"), g("Y"), g("Z")};
        paulis.push_back(Matrix::identity(1));
        for (int q = 0; q < n; ++q) {
            std::vector<Matrix> next;
            for (const auto &p : paulis) {
                for (const auto &s : single) next.push_back(tg::kron(p, s));
            }
            paulis = std::move(next);
        }
        for (int q = 0; q < n; ++q) {
            generators.push_back(on(g("X"), {q}, n));
            generators.push_back(on(g("Z"), {q}, n));
        }
    }

    bool in_level(const Matrix &u, int k) const {
        if (k == 1) {
            for (const auto &p : paulis) {
                if (tg::projective_distance(u, p) < 1e-9) return true;
            }
            return false;
        }
        for (const auto &x : generators) {
            if (!in_level(u * x * u.adjoint(), k - 1)) return false;
        }
        return true;
    }
};

// 1. One-bit teleports are the identity channel.
void teleport_identities(Ctx &ctx) {
    std::vector<std::pair<std::string, tg::Circuit>> circuits = {
        {"Z-teleport", tg::build_one_bit_teleport(tg::TeleportKind::Z, 1)},
        {"X-teleport", tg::build_one_bit_teleport(tg::TeleportKind::X, 1)},
    };
    for (auto name : {"H", "S", "Q"}) {
        circuits.emplace_back(std::string("G=") + name, tg::build_generalized_teleport(tg::tableau_from_gate(name)));
    }
    for (const auto &[name, c] : circuits) {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto psi = tg::random_state(1, 1000 + seed);
            const auto branches = tg::run_all_branches(c, psi);
            ctx.expect(branches.size() == 2, name + ": expected 2 branches");
            for (const auto &b : branches) {
                const int out[] = {1};
                const double ov = b.state ? tg::subsystem_overlap(*b.state, out, psi) : 0;
                ctx.expect(ov * ov >= 1 - 1e-10, name + " branch " + b.bits() + " fidelity " + fmt(ov * ov));
                ctx.expect(std::abs(b.probability - 0.5) <= 1e-10,
                           name + " branch " + b.bits() + " probability " + fmt(b.probability));
            }
        }
    }
}

// 2. T through the X-teleport.
void t_gate(Ctx &ctx) {
    const auto r = tg::synthesize_teleported_gate(g("T"), plan_of("X"), 3);
    ctx.expect(r.verification.pass && r.verification.branches.size() == 2, "T: " + r.verification.summary());
    ctx.expect(same_state(r.ancilla, StateVector({kR2, std::polar(kR2, kPi / 4)})), "T: ancilla");
    ctx.expect(r.corrections.size() == 1, "T: one correction");
    if (r.corrections.empty()) return;
    const auto &c = r.corrections[0];
    const Matrix sx = g("S") * g("X");
    const cplx expected_phase = std::polar(1.0, -kPi / 4);
    // T X T^dagger, computed directly.
    const Matrix oracle = g("T") * g("X") * g("T").adjoint();
    ctx.expect(tg::max_abs_diff(oracle, expected_phase * sx) < 1e-10, "T: T X T^dagger != e^{-i pi/4} S X");
    ctx.expect(tg::max_abs_diff(c.phase * c.canonical, oracle) < 1e-10, "T: correction operator");
    ctx.expect(same_up_to_phase(c.canonical, sx), "T: correction is not S X");
    ctx.expect(std::abs(c.phase - expected_phase) < 1e-10, "T: phase " + tg::format_complex(c.phase));
}

// 3. Controlled-S.
void controlled_phase(Ctx &ctx) {
    const auto r = tg::synthesize_teleported_gate(g("CS"), plan_of("XX"), 3);
    ctx.expect(r.verification.pass && r.verification.branches.size() == 4, "CS: " + r.verification.summary());
    ctx.expect(same_state(r.ancilla, StateVector({0.5, 0.5, 0.5, cplx(0, 0.5)})), "CS: ancilla");
    const Matrix m1 = tg::kron(g("X"), g("S")) * g("CZ");
    const Matrix m2 = tg::kron(g("S"), g("X")) * g("CZ");
    ctx.expect(r.corrections.size() == 2, "CS: two corrections");
    if (r.corrections.size() != 2) return;
    ctx.expect(same_up_to_phase(r.corrections[0].canonical, m1), "CS: correction 1");
    ctx.expect(same_up_to_phase(r.corrections[1].canonical, m2), "CS: correction 2");
}

// 4. Toffoli.
void toffoli(Ctx &ctx) {
    const auto plan = tg::plan_teleportation(g("TOFFOLI"));
    ctx.expect(plan && plan->describe() == "X,X,Z", "TOFFOLI: plan");
    if (!plan) return;
    const auto r = tg::synthesize_teleported_gate(g("TOFFOLI"), *plan, 3);
    ctx.expect(r.verification.pass && r.verification.branches.size() == 8, "TOFFOLI: " + r.verification.summary());
    ctx.expect(same_state(r.ancilla, StateVector({0.5, 0, 0.5, 0, 0.5, 0, 0, 0.5})), "TOFFOLI: ancilla");
    const Matrix expected[3] = {
        tg::kron(g("X"), g("CNOT")),
        on(g("X"), {1}, 3) * on(g("CNOT"), {0, 2}, 3),
        tg::kron(g("CZ"), g("Z")),
    };
    ctx.expect(r.corrections.size() == 3, "TOFFOLI: three corrections");
    for (std::size_t i = 0; i < r.corrections.size() && i < 3; ++i) {
        ctx.expect(same_up_to_phase(r.corrections[i].canonical, expected[i]),
                   "TOFFOLI: correction " + std::to_string(i + 1) + " is " + r.corrections[i].label);
    }
}

// 5. Hierarchy levels.
void hierarchy(Ctx &ctx) {
    tg::HierarchyOptions opts;
    opts.k_max = 6;
    auto level_is = [&](const std::string &name, const Matrix &u, int k, bool strict) {
        const auto v = tg::hierarchy_level(u, opts);
        ctx.expect(v.level == k && (!strict || v.strict), name + ": " + v.describe(opts.k_max));
    };
    for (auto n : {"X", "Z"}) level_is(n, g(n), 1, false);
    for (auto n : {"H", "S", "CNOT", "CZ", "SWAP"}) level_is(n, g(n), 2, false);
    for (auto n : {"T", "CS", "TOFFOLI", "CH"}) level_is(n, g(n), 3, true);
    for (int k = 2; k <= 5; ++k) {
        const Matrix d = tg::phase_gate(2 * kPi / std::pow(2.0, k));
        level_is("diag(1,e^{2 pi i/2^" + std::to_string(k) + "})", d, k, false);
    }
    const Matrix ccs = tg::multi_controlled(g("S"), 2);
    level_is("Lambda2(S)", ccs, 4, true);
    const DefinitionOracle oracle(3);
    ctx.expect(oracle.in_level(ccs, 4) && !oracle.in_level(ccs, 3), "Lambda2(S): definition oracle disagrees");
}

// 6. Controlled-Hadamard needs the Clifford sandwich.
void controlled_hadamard(Ctx &ctx) {
    ctx.expect(!tg::plan_teleportation(g("CH")), "CH: a commuting plan was found");
    const Matrix ga = on(g("Q†"), {1}, 2);
    const Matrix gb = g("CNOT") * on(g("Q"), {1}, 2);
    const Matrix v = on(g("T"), {0}, 2) * g("CS†");
    ctx.expect(same_up_to_phase(gb * v * ga, g("CH")), "CH: sandwich product");
    const auto r = tg::synthesize_sandwiched(g("CH"), ga, v, gb);
    ctx.expect(r.verification.pass && r.verification.branches.size() == 4, "CH: " + r.verification.summary());
}

// 7. Ancilla preparation scripts.
void ancilla_prep(Ctx &ctx) {
    struct Case {
        const char *gate;
        const char *plan;
        std::vector<std::vector<std::string>> intermediates;  // per shortcut index
    };
    const Case cases[] = {
        {"T", "X", {{"Z_1"}}},
        {"CS", "XX", {{"Z_1", "X_2"}, {"X_1", "Z_2"}}},
        {"TOFFOLI", "XXZ", {{"Z_1", "X_2", "Z_3"}, {"X_1", "Z_2", "Z_3"}, {"X_1", "X_2", "X_3"}}},
    };
    for (const auto &c : cases) {
        const std::string name = c.gate;
        const auto spec = tg::derive_stabilizers(g(c.gate), plan_of(c.plan));
        const auto full = tg::run_preparation(tg::build_preparation(spec), spec);
        ctx.expect(full.pass && full.worst_fidelity >= 1 - 1e-10, name + ": full script");
        for (std::size_t i = 0; i < c.intermediates.size(); ++i) {
            const auto script = tg::shortcut_preparation(spec, i);
            const auto rep = tg::run_preparation(script, spec);
            const std::string tag = name + " shortcut " + std::to_string(i + 1);
            ctx.expect(rep.pass && rep.worst_fidelity >= 1 - 1e-10, tag + ": worst fidelity " + fmt(rep.worst_fidelity));
            ctx.expect(script.product_intermediate == true, tag + ": intermediate not a product state");
            ctx.expect(script.intermediate_stabilizers == c.intermediates[i], tag + ": intermediate stabilizers");
        }
    }
}

// 8. Recursive synthesis.
void recursive(Ctx &ctx) {
    auto run = [&](const std::string &name, int k, bool rotation) {
        const auto spec = tg::GateSpec::from_name(name, k);
        const auto rc = tg::synth_recursive(spec, false, 1e-9);
        const std::string tag = spec.describe() + " (level " + std::to_string(k) + ")";
        ctx.expect(rc.level == k, tag + ": level " + std::to_string(rc.level));
        ctx.expect(rc.verification.pass && rc.verification.worst_fidelity >= 1 - 1e-9,
                   tag + ": " + rc.verification.summary());
        ctx.expect(rc.descent_ok, tag + ": descent invariant");
        if (rotation) {
            ctx.expect(rc.resources.depth == k - 2, tag + ": depth " + std::to_string(rc.resources.depth));
            ctx.expect(rc.resources.measurements == k - 2,
                       tag + ": measurements " + std::to_string(rc.resources.measurements));
        }
    };
    for (int k = 3; k <= 5; ++k) run("V", k, true);
    for (int k = 3; k <= 4; ++k) run("CV", k, false);
}

// 9. Recursive ancilla preparation.
void recursive_prep(Ctx &ctx) {
    const std::pair<std::string, tg::GateSpec> cases[] = {
        {"T", tg::GateSpec::diagonal(g("T"))},
        {"diag(1,e^{i pi/8})", tg::GateSpec::diagonal(tg::phase_gate(kPi / 8))},
        {"Lambda1(S)", tg::GateSpec::diagonal(g("CS"))},
    };
    for (const auto &[name, spec] : cases) {
        const auto p = tg::recursive_ancilla_prep(spec, 1e-9);
        const Matrix u = spec.matrix();
        const int n = tg::qubit_count(u);
        const double amp = 1 / std::sqrt(static_cast<double>(std::size_t{1} << n));
        std::vector<cplx> plus(std::size_t{1} << n, amp);
        const StateVector target(u * std::span<const cplx>(plus));
        ctx.expect(same_state(p.target, target), name + ": target is not U H^n|0>");
        ctx.expect(p.report.pass && p.report.worst_fidelity >= 1 - 1e-9,
                   name + ": worst fidelity " + fmt(p.report.worst_fidelity));
        ctx.expect(!p.root.controlled.empty(), name + ": no controlled-M decomposition");
    }
}

// 10. Two-party protocols.
void remote(Ctx &ctx) {
    struct Expect {
        std::string name;
        int ebits, cbits, violations;
    };
    const Expect cases[] = {
        {"teleport2-xz", 1, 2, 1},
        {"teleport2-zx", 1, 2, 1},
        {"remote-cnot", 1, 2, 1},
        {"remote-cnot-4step", 2, 4, 2},
    };
    for (const auto &e : cases) {
        const auto p = tg::build_protocol(e.name);
        const auto chk = tg::verify_protocol(p, 50, 7, 1e-10);
        ctx.expect(chk.pass && chk.trials == 50, e.name + ": worst fidelity " + fmt(chk.worst_fidelity));
        ctx.expect(chk.channel.pass, e.name + ": " + chk.channel.summary());
        ctx.expect(chk.resources.ebits == e.ebits && chk.resources.cbits() == e.cbits &&
                       chk.resources.other_shared == 0,
                   e.name + ": resources " + std::to_string(chk.resources.ebits) + " ebits, " +
                       std::to_string(chk.resources.cbits()) + " cbits");
        ctx.expect(tg::locality_audit(p.circuit, p.layout).empty(), e.name + ": post-rewrite form rejected");
        const auto pre = tg::build_protocol(e.name, {.pre_rewrite = true});
        const auto v = tg::locality_audit(pre.circuit, pre.layout);
        ctx.expect(static_cast<int>(v.size()) == e.violations, e.name + ": pre-rewrite violations " +
                                                                    std::to_string(v.size()));
        for (const auto &x : v) {
            const auto *op = x.op_index ? std::get_if<tg::GateOp>(&pre.circuit.ops()[*x.op_index].op) : nullptr;
            ctx.expect(x.rule == "prohibited-operation" && op && op->gate.name == "CNOT",
                       e.name + ": unexpected violation " + tg::describe(x));
        }
        ctx.expect(tg::rewrite_preserves_branches(e.name), e.name + ": rewrite changes the branch operators");
    }
}

// 11. Tampered constructions must fail and name a branch.
void negative_controls(Ctx &ctx) {
    auto must_fail = [&](const std::string &name, const tg::Circuit &c, const Matrix &u, int n) {
        const auto rep = tg::verify_gate_equivalence(c, u, iota(0, n), iota(n, 2 * n), 1e-10);
        ctx.expect(!rep.pass, name + ": tampered circuit passed");
        ctx.expect(rep.failing_branch.has_value(), name + ": no failing branch reported");
        return rep;
    };

    {  // Z instead of S X on outcome 1.
        const auto r = tg::synthesize_teleported_gate(g("T"), plan_of("X"), 3);
        auto b = tg::CircuitBuilder::from(r.circuit);
        const std::size_t last = r.circuit.ops().size() - 1;
        b.replace(last, tg::CircuitOp{tg::ConditionalOp{{0}, {1}, tg::GateRef::named("Z"), {1}}, tg::Role::D});
        const auto rep = must_fail("wrong correction", b.build(), g("T"), 1);
        ctx.expect(rep.failing_branch == "1", "wrong correction: failing branch should be 1");
    }
    {  // CS ancilla with -i on |11>.
        const auto r = tg::synthesize_teleported_gate(g("CS"), plan_of("XX"), 3);
        auto b = tg::CircuitBuilder::from(r.circuit);
        bool tampered = false;
        for (std::size_t i = 0; i < r.circuit.ops().size(); ++i) {
            if (const auto *inj = std::get_if<tg::InjectOp>(&r.circuit.ops()[i].op)) {
                auto bad = *inj;
                bad.amplitudes[3] = std::conj(bad.amplitudes[3]);
                b.replace(i, tg::CircuitOp{bad, r.circuit.ops()[i].role});
                tampered = true;
            }
        }
        ctx.expect(tampered, "wrong ancilla amplitude: no inject found");
        must_fail("wrong ancilla amplitude", b.build(), g("CS"), 2);
    }
    {  // Toffoli with the third qubit X-teleported through the X,X,Z ancilla.
        const auto r = tg::synthesize_teleported_gate(g("TOFFOLI"), plan_of("XXZ"), 3);
        auto b = tg::CircuitBuilder::from(r.circuit);
        bool swapped = false;
        for (std::size_t i = 0; i < r.circuit.ops().size(); ++i) {
            const auto *op = std::get_if<tg::GateOp>(&r.circuit.ops()[i].op);
            if (!op) continue;
            const auto role = r.circuit.ops()[i].role;
            if (op->gate.name == "CNOT" && op->targets == std::vector<int>{2, 5}) {
                b.replace(i, tg::CircuitOp{tg::GateOp{op->gate, {5, 2}}, role});
                swapped = true;
            } else if (op->gate.name == "H" && op->targets == std::vector<int>{2}) {
                b.replace(i, tg::CircuitOp{tg::GateOp{tg::GateRef::named("I"), {2}}, role});
            }
        }
        ctx.expect(swapped, "swapped plan: entangler not found");
        must_fail("swapped plan", b.build(), g("TOFFOLI"), 3);
    }
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char *name;
        std::function<void(Ctx &)> run;
        double budget_s;  // 0 for none
    };
    const Criterion criteria[] = {
        {1, "one-bit teleportation identities", teleport_identities, 1},
        {2, "pi/8 gate", t_gate, 0},
        {3, "controlled-phase gate", controlled_phase, 0},
        {4, "Toffoli gate", toffoli, 5},
        {5, "hierarchy classifier", hierarchy, 0},
        {6, "controlled-Hadamard sandwich", controlled_hadamard, 0},
        {7, "ancilla preparation", ancilla_prep, 0},
        {8, "recursive synthesis", recursive, 30},
        {9, "recursive ancilla preparation", recursive_prep, 0},
        {10, "remote protocols", remote, 0},
        {11, "negative controls", negative_controls, 0},
    };
    int failed = 0;
    for (const auto &c : criteria) {
        Ctx ctx;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(ctx);
        } catch (const std::exception &e) {
            ctx.failures.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_s > 0) ctx.expect(secs < c.budget_s, "runtime " + fmt(secs) + " s over budget");
        const bool ok = ctx.failures.empty();
        failed += ok ? 0 : 1;
        std::printf("%s %2d %s (%.3f s)\n", ok ? "PASS" : "FAIL", c.id, c.name, secs);
        for (const auto &f : ctx.failures) std::printf("       %s\n", f.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
    return failed == 0 ? 0 : 1;
}
