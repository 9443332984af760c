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
#include "telegate/pauli.hpp"

using namespace telegate;

namespace {
int level_of(const Matrix &m) {
    const auto v = hierarchy_level(m);
    REQUIRE(v.level);
    return *v.level;
}
}  // namespace

TEST_CASE("library gates land on their levels", "[hierarchy]") {
    CHECK(level_of(gate_matrix("X")) == 1);
    CHECK(level_of(gate_matrix("Z")) == 1);
    for (auto n : {"H", "S", "CNOT", "CZ", "SWAP"}) CHECK(level_of(gate_matrix(n)) == 2);
    for (auto n : {"T", "CS", "TOFFOLI", "CH"}) {
        const auto v = hierarchy_level(gate_matrix(n));
        CHECK(v.level == 3);
        CHECK(v.strict);
    }
    CHECK(hierarchy_level(gate_matrix("CS")).diagonal);
    CHECK_FALSE(hierarchy_level(gate_matrix("CH")).diagonal);
}

TEST_CASE("rotation family follows the 2 pi / 2^k rule", "[hierarchy]") {
    for (int k = 1; k <= 5; ++k) {
        CHECK(level_of(hierarchy_rotation(k)) == predicted_level_two_pi_form(k));
    }
    // diag(1, e^{i pi/8}) is the 2 pi / 2^4 rotation.
    CHECK(level_of(phase_gate(std::numbers::pi / 8)) == predicted_level_pi_form(3));
}

TEST_CASE("verdicts are projective and monotone", "[hierarchy]") {
    const Matrix t = gate_matrix("T");
    CHECK(level_of(std::polar(1.0, 1.234) * t) == 3);
    const auto v = hierarchy_level(gate_matrix("TOFFOLI"), 4, 1e-9);
    CHECK(v.level == 3);
    CHECK(hierarchy_level(gate_matrix("TOFFOLI"), 3, 1e-9).level == 3);
    CHECK(hierarchy_level(gate_matrix("T"), 2, 1e-9).exceeds());
}

TEST_CASE("irrational phases exceed k_max", "[hierarchy]") {
    const auto v = hierarchy_level(phase_gate(1.0), 5, 1e-9);
    CHECK(v.exceeds());
    CHECK(v.describe(5).find("exceeds") != std::string::npos);
}

TEST_CASE("closure under Clifford multiplication", "[hierarchy]") {
    for (auto u : {"T", "CS", "TOFFOLI"}) {
        const Matrix um = gate_matrix(u);
        const int n = qubit_count(um);
        for (const auto &c : gate_library()) {
            const auto g = NamedGate::lookup(c);
            if (!g.is_clifford() || g.arity > n) continue;
            std::vector<int> t(g.arity);
            for (int i = 0; i < g.arity; ++i) t[i] = i;
            const Matrix v = gate_on(c, t, n);
            const auto verdict = hierarchy_level(um * v);
            REQUIRE(verdict.level);
            CHECK(*verdict.level <= 3);
        }
    }
}

TEST_CASE("diagonal correction structure", "[hierarchy]") {
    for (auto u : {"T", "CS"}) {
        const Matrix um = gate_matrix(u);
        const int n = qubit_count(um);
        const int k = level_of(um);
        for (int q = 0; q < n; ++q) {
            const Matrix x = pauli_to_matrix(PauliOperator::x_on(n, q));
            const Matrix dtilde = um * x * um.adjoint() * x;
            CHECK(is_diagonal(dtilde, 1e-12));
            CHECK(level_of(dtilde) <= k - 1);
        }
    }
}

TEST_CASE("bad input is rejected", "[hierarchy]") {
    CHECK_THROWS_AS(hierarchy_level(Matrix{{1, 1}, {0, 1}}), ValidationError);
    CHECK_THROWS_AS(hierarchy_level(Matrix(3, 3)), DimensionError);
}

TEST_CASE("memo is populated and can be cleared", "[hierarchy]") {
    clear_hierarchy_memo();
    // Level-4 verdicts recurse through memoized level-3 tests.
    (void)hierarchy_level(hierarchy_rotation(4));
    CHECK(hierarchy_memo_size() > 0);
    clear_hierarchy_memo();
    CHECK(hierarchy_memo_size() == 0);
}
