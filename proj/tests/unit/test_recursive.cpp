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

#include <numbers>

#include "catch_amalgamated.hpp"
#include "helpers.hpp"
#include "telegate/errors.hpp"
#include "telegate/gates.hpp"
#include "telegate/hierarchy.hpp"
#include "telegate/recursive.hpp"

using namespace telegate;

namespace {

std::vector<int> iota(int a, int b) {
    std::vector<int> v;
    for (int i = a; i < b; ++i) v.push_back(i);
    return v;
}

GateSpec rot_level(int k) { return GateSpec::from_name("V", k); }

}  // namespace

TEST_CASE("gate specs realize the expected matrices", "[recursive]") {
    CHECK(max_abs_diff(GateSpec::rotation(2).matrix(), gate_matrix("T")) < 1e-14);
    CHECK(max_abs_diff(GateSpec::controlled_rotation(1, 1).matrix(), gate_matrix("CS")) < 1e-14);
    CHECK(max_abs_diff(GateSpec::from_name("V", 4).matrix(), hierarchy_rotation(4)) < 1e-14);
    CHECK(max_abs_diff(GateSpec::from_name("CV", 3).matrix(), gate_matrix("CS")) < 1e-14);
    CHECK(GateSpec::controlled_rotation(2, 0).num_qubits() == 3);
    const auto p = GateSpec::product(2, {GateSpec::rotation(2), GateSpec::controlled_rotation(1, 1)}, {{1}, {0, 1}});
    const int q1[1] = {1};
    CHECK(max_abs_diff(p.matrix(), gate_matrix("CS") * embed(gate_matrix("T"), q1, 2)) < 1e-14);
    CHECK(p.describe() == "V^2[1]·Λ1(V^1)[0,1]");
    CHECK_THROWS_AS(GateSpec::from_name("V", std::nullopt), ValidationError);
}

TEST_CASE("closure: products classify at most at the component maximum", "[recursive]") {
    const std::vector<std::pair<GateSpec, std::vector<int>>> parts{
        {GateSpec::rotation(2), {0}}, {GateSpec::controlled_rotation(1, 1), {0, 1}},
        {GateSpec::rotation(1), {1}}, {GateSpec::controlled_rotation(1, 2), {1, 0}}};
    for (std::size_t a = 0; a < parts.size(); ++a) {
        for (std::size_t b = a + 1; b < parts.size(); ++b) {
            const auto g = GateSpec::product(2, {parts[a].first, parts[b].first}, {parts[a].second, parts[b].second});
            const int la = *hierarchy_level(embed(parts[a].first.matrix(), parts[a].second, 2)).level;
            const int lb = *hierarchy_level(embed(parts[b].first.matrix(), parts[b].second, 2)).level;
            CHECK(*hierarchy_level(g.matrix()).level <= std::max(la, lb));
        }
    }
}

TEST_CASE("T needs one teleportation with a direct S·X correction", "[recursive]") {
    const auto rc = synth_recursive(GateSpec::rotation(2), true);
    CHECK(rc.level == 3);
    CHECK(rc.root.children.empty());
    REQUIRE(rc.root.corrections.size() == 1);
    CHECK(rc.root.corrections[0].label == "S·X");
    CHECK(std::abs(rc.root.corrections[0].phase - std::polar(1.0, -std::numbers::pi / 4)) < 1e-12);
    CHECK(rc.resources.depth == 1);
    CHECK(rc.resources.ancilla_qubits == 1);
    CHECK(rc.resources.measurements == 1);
    CHECK(rc.verification.pass);
    CHECK(rc.flattened_verification->pass);
    CHECK(rc.flattened->num_qubits() == 2);
}

TEST_CASE("level-4 rotation recurses once on T", "[recursive]") {
    const auto rc = synth_recursive(rot_level(4), true);
    CHECK(rc.level == 4);
    REQUIRE(rc.root.children.size() == 1);
    const auto &child = rc.root.children[0].child.front();
    CHECK(child.level == 3);
    CHECK(projective_distance(child.gate, gate_matrix("T")) < 1e-12);
    // Root correction is proportional to T·X.
    CHECK(projective_distance(rc.root.corrections[0].op, gate_matrix("T") * gate_matrix("X")) < 1e-12);
    CHECK(rc.resources.ancilla_qubits == 2);
    CHECK(rc.resources.measurements == 2);
    CHECK(rc.resources.depth == 2);
    CHECK(rc.descent_ok);
    CHECK(rc.flattened->num_qubits() == 3);
    CHECK(rc.flattened_verification->pass);
}

TEST_CASE("single-qubit rotations: depth and measurements are k - 2", "[recursive]") {
    for (int k = 2; k <= 5; ++k) {
        INFO(k);
        const auto rc = synth_recursive(rot_level(k), true);
        CHECK(rc.level == k);
        CHECK(rc.resources.depth == k - 2);
        CHECK(rc.resources.measurements == k - 2);
        CHECK(rc.resources.ancilla_qubits == k - 2);
        CHECK(rc.verification.worst_fidelity > 1 - 1e-9);
        CHECK(rc.flattened_verification->pass);
    }
}

TEST_CASE("controlled rotations", "[recursive]") {
    const auto cs = synth_recursive(GateSpec::controlled_rotation(1, 1), true);
    CHECK(cs.level == 3);
    CHECK(cs.root.children.empty());
    CHECK(cs.resources.depth == 1);
    for (const auto &c : cs.root.corrections) CHECK(c.cls == CorrectionClass::Clifford);
    CHECK(cs.verification.branches.size() == 4);

    const auto cv4 = synth_recursive(GateSpec::from_name("CV", 4), true);
    CHECK(cv4.level == 4);
    CHECK(cv4.descent_ok);
    CHECK(cv4.resources.depth == 2);
    CHECK(cv4.verification.pass);
    CHECK(cv4.flattened_verification->pass);

    const auto ccz = synth_recursive(GateSpec::from_name("CCV", 3), false);
    CHECK(ccz.level == 3);
    CHECK(ccz.verification.pass);
}

TEST_CASE("flattened and tree branch operators agree", "[recursive]") {
    for (const auto &g : {rot_level(4), rot_level(5), GateSpec::from_name("CV", 4)}) {
        INFO(g.describe());
        const auto rc = synth_recursive(g, true);
        const auto tree = tree_branch_operators(rc.root);
        const auto flat = branch_operators(*rc.flattened, iota(0, qubit_count(rc.gate)), rc.flattened_outputs);
        CHECK(static_cast<int>(flat.front().bits.size()) == tree_cbits(rc.root));
        for (const auto &f : flat) {
            int matches = 0;
            for (const auto &t : tree) {
                bool agree = true;
                int wild = 0;
                for (std::size_t i = 0; i < t.bits.size(); ++i) {
                    if (t.bits[i] == '-') {
                        ++wild;
                    } else if (t.bits[i] != f.bits[i]) {
                        agree = false;
                    }
                }
                if (!agree) continue;
                ++matches;
                CHECK(std::abs(f.probability - t.probability / std::ldexp(1.0, wild)) < 1e-12);
                CHECK(projective_distance((1 / frobenius_norm(f.op)) * f.op, (1 / frobenius_norm(t.op)) * t.op) < 1e-9);
            }
            CHECK(matches == 1);
        }
    }
}

TEST_CASE("width-3 and overflow limits", "[recursive]") {
    const auto g = GateSpec::product(3, {GateSpec::controlled_rotation(1, 2), GateSpec::rotation(1)}, {{0, 2}, {1}});
    const auto rc = synth_recursive(g, false);
    CHECK(rc.level == 4);
    CHECK(rc.verification.pass);
    CHECK_THROWS_AS(synth_recursive(GateSpec::diagonal(gate_matrix("H")), false), ValidationError);
    CHECK_THROWS_AS(synth_recursive(rot_level(6), false), WidthOverflow);
    CHECK_THROWS_AS(synth_recursive(GateSpec::controlled_rotation(3, 0), false), WidthOverflow);
    // Level-5 two-qubit trees verify, but the flattened form exceeds 12 qubits.
    CHECK_THROWS_AS(synth_recursive(GateSpec::from_name("CV", 5), true), WidthOverflow);
    CHECK(synth_recursive(GateSpec::from_name("CV", 5), false).verification.pass);
}

TEST_CASE("tampered tree node fails with the branch named", "[recursive]") {
    auto rc = synth_recursive(rot_level(4), false);
    rc.root.children[0].child.front().gate = gate_matrix("T");
    auto &child = rc.root.children[0].child.front();
    auto b = CircuitBuilder::from(child.circuit);
    b.replace(b.num_ops() - 1, CircuitOp{ConditionalOp{{0}, {1}, GateRef::named("X"), {1}}, Role::D});
    child.circuit = b.build();
    const auto rep = verify_tree(tree_branch_operators(rc.root), rc.gate, 1e-9);
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.failing_branch);
    CHECK(*rep.failing_branch == "11");
}

TEST_CASE("tree JSON nests children", "[recursive]") {
    const auto rc = synth_recursive(rot_level(5), false);
    const auto j = tree_to_json(rc.root);
    CHECK(j["children"].size() == 1);
    CHECK(j["children"][0]["on_cbit"] == 0);
    CHECK(j["children"][0]["children"].size() == 1);
    CHECK(j["circuit"]["format"] == "telegate-circuit/1");
    const auto r = resources_to_json(rc.resources);
    CHECK(r["depth"] == 3);
}

TEST_CASE("recursive ancilla preparation", "[recursive]") {
    SECTION("T") {
        const auto rp = recursive_ancilla_prep(GateSpec::rotation(2));
        CHECK(rp.report.pass);
        const Matrix m = std::polar(1.0, -std::numbers::pi / 4) * gate_matrix("S") * gate_matrix("X");
        CHECK(max_abs_diff(rp.root.pairs[0].m, m) < 1e-12);
        CHECK(rp.root.controlled[0].base);
        CHECK(rp.report.branches.size() == 2);
    }
    SECTION("level-4 rotation") {
        const auto rp = recursive_ancilla_prep(rot_level(4));
        CHECK(rp.report.pass);
        CHECK(rp.report.worst_fidelity > 1 - 1e-9);
        const auto &ctl = rp.root.controlled[0];
        CHECK_FALSE(ctl.base);
        REQUIRE(ctl.ancilla.size() == 1);
        CHECK(ctl.ancilla[0].level == 3);
        CHECK(ctl.corrections[0].base);
    }
    SECTION("controlled S") {
        const auto rp = recursive_ancilla_prep(GateSpec::controlled_rotation(1, 1));
        CHECK(rp.report.pass);
        CHECK(rp.root.pairs.size() == 2);
        for (const auto &c : rp.root.controlled) CHECK(c.base);
    }
    SECTION("controlled level-4") {
        const auto rp = recursive_ancilla_prep(GateSpec::from_name("CV", 4));
        CHECK(rp.report.pass);
    }
}
