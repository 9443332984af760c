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
#include "telegate/errors.hpp"
#include "telegate/gates.hpp"
#include "telegate/pauli.hpp"

using namespace telegate;

TEST_CASE("letter literals round-trip and match matrices", "[pauli]") {
    for (std::string s : {"+X", "-Z", "+iY", "-iXZ", "+YY", "-XYZ", "+I"}) {
        const auto p = PauliOperator::from_string(s);
        CHECK(PauliOperator::from_string(p.to_string()) == p);
    }
    CHECK(max_abs_diff(pauli_to_matrix(PauliOperator::from_string("Y")), gate_matrix("Y")) == 0);
    CHECK(max_abs_diff(pauli_to_matrix(PauliOperator::from_string("-iY")),
                       gate_matrix("X") * gate_matrix("Z")) < 1e-15);
    CHECK_THROWS_AS(PauliOperator::from_string("+Q"), ParseError);
}

TEST_CASE("product phases agree with dense multiplication", "[pauli]") {
    const auto all = all_phase_free_paulis(2);
    REQUIRE(all.size() == 16);
    for (const auto &a : all) {
        for (const auto &b : all) {
            for (int ph = 0; ph < 4; ++ph) {
                const auto pa = a.with_phase(ph);
                const Matrix expect = pauli_to_matrix(pa) * pauli_to_matrix(b);
                CHECK(max_abs_diff(pauli_to_matrix(pa * b), expect) < 1e-15);
                const bool dense_commute =
                    max_abs_diff(expect, pauli_to_matrix(b) * pauli_to_matrix(pa)) < 1e-12;
                CHECK(commutes(pa, b) == dense_commute);
            }
        }
    }
}

TEST_CASE("inverse is the adjoint", "[pauli]") {
    for (const auto &p : all_phase_free_paulis(2)) {
        for (int ph = 0; ph < 4; ++ph) {
            const auto q = p.with_phase(ph);
            CHECK((q * q.inverse()) == PauliOperator::identity(2));
        }
    }
}

TEST_CASE("recognition of scaled Paulis", "[pauli]") {
    const auto xz = PauliOperator::from_string("XZ");
    const cplx w = std::polar(1.0, 0.3);
    auto m = pauli_from_matrix(w * pauli_to_matrix(xz));
    REQUIRE(m);
    CHECK(m->pauli == xz.phase_free());
    CHECK(!m->strict_member);
    auto s = pauli_from_matrix(cplx(0, 1) * pauli_to_matrix(xz));
    REQUIRE(s);
    CHECK(s->strict_member);
    CHECK(pauli_to_matrix(s->as_group_element()) == cplx(0, 1) * pauli_to_matrix(xz));
    CHECK_FALSE(pauli_from_matrix(gate_matrix("H")));
    CHECK_FALSE(pauli_from_matrix(gate_matrix("T")));
    CHECK_THROWS_AS(pauli_from_matrix(Matrix(2, 3)), DimensionError);
}
