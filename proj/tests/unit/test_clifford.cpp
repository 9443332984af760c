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

#include "catch_amalgamated.hpp"
#include "helpers.hpp"
#include "telegate/clifford.hpp"
#include "telegate/errors.hpp"

using namespace telegate;

TEST_CASE("hand-coded tableaus match dense recognition", "[clifford]") {
    for (const auto &name : gate_library()) {
        const auto g = NamedGate::lookup(name);
        if (!g.is_clifford()) {
            CHECK_THROWS_AS(tableau_from_gate(g), ClassificationError);
            CHECK_FALSE(clifford_from_matrix(g.matrix()));
            continue;
        }
        INFO(name);
        const auto dense = clifford_from_matrix(g.matrix());
        REQUIRE(dense);
        CHECK(tableau_from_gate(g) == *dense);
        CHECK(projective_distance(tableau_to_matrix(*dense), g.matrix()) < 1e-12);
    }
}

TEST_CASE("S maps X to Y and T is rejected", "[clifford]") {
    const auto s = tableau_from_gate("S");
    CHECK(s.image_of_x(0) == PauliOperator::from_string("+Y"));
    CHECK(s.image_of_z(0) == PauliOperator::from_string("+Z"));
    try {
        tableau_from_gate("T");
        FAIL("expected ClassificationError");
    } catch (const ClassificationError &e) {
        CHECK(std::string(e.what()).find("T") != std::string::npos);
    }
}

TEST_CASE("composition and conjugation agree with matrices", "[clifford]") {
    const auto h = tableau_from_gate("H").on(std::vector<int>{1}, 2);
    const auto cx = tableau_from_gate("CNOT");
    const auto c = compose(cx, h);
    const Matrix m = gate_matrix("CNOT") * kron(Matrix::identity(2), gate_matrix("H"));
    CHECK(projective_distance(tableau_to_matrix(c), m) < 1e-12);
    for (const auto &p : all_phase_free_paulis(2)) {
        const Matrix expect = m * pauli_to_matrix(p) * m.adjoint();
        CHECK(max_abs_diff(pauli_to_matrix(conjugate_pauli(c, p)), expect) < 1e-12);
    }
    CHECK(compose(c, c.inverse()) == CliffordTableau::identity(2));
}

TEST_CASE("invalid tableaus are rejected", "[clifford]") {
    using V = std::vector<PauliOperator>;
    CHECK_THROWS_AS(CliffordTableau(V{PauliOperator::from_string("X")}, V{PauliOperator::from_string("X")}),
                    ValidationError);
    CHECK_THROWS_AS(CliffordTableau(V{PauliOperator::from_string("iX")}, V{PauliOperator::from_string("Z")}),
                    ValidationError);
    CHECK_THROWS_AS(clifford_from_matrix(Matrix{{1, 1}, {0, 1}}), ValidationError);
}

TEST_CASE("random Clifford words round-trip through dense form", "[clifford]") {
    std::mt19937 rng(5);
    const std::vector<std::string> names{"H", "S", "CNOT", "CZ", "SWAP", "X", "Q"};
    for (int trial = 0; trial < 30; ++trial) {
        auto t = CliffordTableau::identity(3);
        for (int step = 0; step < 8; ++step) {
            const auto &nm = names[rng() % names.size()];
            const auto g = tableau_from_gate(nm);
            std::vector<int> q{0, 1, 2};
            std::shuffle(q.begin(), q.end(), rng);
            q.resize(g.num_qubits());
            t = compose(g.on(q, 3), t);
        }
        const auto back = clifford_from_matrix(tableau_to_matrix(t));
        REQUIRE(back);
        CHECK(*back == t);
    }
}
