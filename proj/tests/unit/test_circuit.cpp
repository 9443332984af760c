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
#include <random>

#include "catch_amalgamated.hpp"
#include "helpers.hpp"
#include "telegate/circuit.hpp"
#include "telegate/circuit_io.hpp"
#include "telegate/errors.hpp"
#include "telegate/teleport.hpp"

using namespace telegate;

namespace {

bool has_rule(const std::vector<Violation> &v, const std::string &rule, std::size_t op) {
    for (const auto &x : v) {
        if (x.rule == rule && x.op_index == op) return true;
    }
    return false;
}

// Random valid circuit generator for round-trip tests: tracks which qubits
// are live so every op it emits is legal.
Circuit random_circuit(std::mt19937 &rng) {
    const int n = 1 + static_cast<int>(rng() % 4);
    CircuitBuilder b(n, 0, InputTag::Zero);
    for (int q = 0; q < n; ++q) {
        if (rng() % 2) b.set_input(q, InputTag::Symbolic);
    }
    std::vector<bool> retired(n, false);
    std::vector<int> written;
    const int ops = static_cast<int>(rng() % 21);
    const std::vector<std::string> one{"H", "S", "T", "X", "Z", "Y", "T†", "Q"};
    for (int i = 0; i < ops; ++i) {
        std::vector<int> live;
        for (int q = 0; q < n; ++q)
            if (!retired[q]) live.push_back(q);
        const int kind = static_cast<int>(rng() % 5);
        if (kind == 0 && !live.empty()) {
            b.gate(one[rng() % one.size()], {live[rng() % live.size()]});
        } else if (kind == 1 && live.size() >= 2) {
            std::shuffle(live.begin(), live.end(), rng);
            b.gate(rng() % 2 ? "CNOT" : "CZ", {live[0], live[1]}, Role::E);
        } else if (kind == 2 && !live.empty()) {
            const int q = live[rng() % live.size()];
            const int c = b.add_cbit();
            b.measure(q, c);
            retired[q] = true;
            written.push_back(c);
        } else if (kind == 3 && !written.empty() && !live.empty()) {
            const int c = written[rng() % written.size()];
            const Matrix m = testutil::random_unitary(2, rng());
            b.cgate({c}, {static_cast<int>(rng() % 2)}, GateRef::custom(m, "R"), {live[rng() % live.size()]}, Role::D);
        } else {
            std::vector<int> dead;
            for (int q = 0; q < n; ++q)
                if (retired[q]) dead.push_back(q);
            if (dead.empty()) continue;
            const int q = dead[rng() % dead.size()];
            auto amps = testutil::random_vector(2, rng());
            const double nn = std::sqrt(std::norm(amps[0]) + std::norm(amps[1]));
            for (auto &a : amps) a /= nn;
            b.inject(amps, {q});
            retired[q] = false;
        }
    }
    return b.build();
}

}  // namespace

TEST_CASE("teleport circuits validate cleanly", "[circuit]") {
    CHECK(validate(build_one_bit_teleport(TeleportKind::X, 1)).empty());
    CHECK(validate(build_one_bit_teleport(TeleportKind::Z, 2)).empty());
}

TEST_CASE("single-measurement discipline", "[circuit]") {
    CircuitBuilder b(2, 1, InputTag::Symbolic);
    b.measure(0, 0).gate("H", {0});
    auto v = validate(b.build());
    CHECK(has_rule(v, "single-measurement", 1));
    // Re-injection makes the qubit usable again.
    CircuitBuilder ok(2, 1, InputTag::Symbolic);
    ok.measure(0, 0).inject_label("plus", {0}).gate("H", {0});
    CHECK(validate(ok.build()).empty());
}

TEST_CASE("causality of classical control", "[circuit]") {
    CircuitBuilder b(2, 1, InputTag::Symbolic);
    b.cgate({0}, {1}, GateRef::named("X"), {1}).measure(0, 0);
    CHECK(has_rule(validate(b.build()), "causality", 0));
}

TEST_CASE("structural violations are reported as data", "[circuit]") {
    CircuitBuilder b(2, 1, InputTag::Symbolic);
    b.gate("CNOT", {0, 0});
    b.gate("H", {5});
    b.gate("CNOT", {0});
    b.measure(0, 3);
    b.inject_label("nope", {1});
    b.gate(GateRef::custom(Matrix(3, 3)), {1});
    const auto v = validate(b.build());
    CHECK(has_rule(v, "distinct-targets", 0));
    CHECK(has_rule(v, "range", 1));
    CHECK(has_rule(v, "arity", 2));
    CHECK(has_rule(v, "range", 3));
    CHECK(has_rule(v, "unknown-label", 4));
    CHECK(has_rule(v, "inject-target", 4));
    CHECK(has_rule(v, "arity", 5));
}

TEST_CASE("cbits are written once", "[circuit]") {
    CircuitBuilder b(2, 1, InputTag::Symbolic);
    b.measure(0, 0).measure(1, 0);
    CHECK(has_rule(validate(b.build()), "cbit-overwrite", 1));
}

TEST_CASE("validate is total on random junk", "[circuit]") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        CircuitBuilder b(static_cast<int>(rng() % 4), static_cast<int>(rng() % 3));
        for (int i = 0; i < 8; ++i) {
            const int a = static_cast<int>(rng() % 7) - 2, c = static_cast<int>(rng() % 7) - 2;
            switch (rng() % 4) {
                case 0: b.gate(GateRef::named(rng() % 2 ? "CNOT" : "H"), {a, c}); break;
                case 1: b.measure(a, c); break;
                case 2: b.cgate({c, a}, {1}, GateRef::custom(Matrix(2, 2)), {a}); break;
                default: b.inject({1, 0, 0}, {a}); break;
            }
        }
        CHECK_NOTHROW(validate(b.build()));
    }
}

TEST_CASE("empty circuit serializes minimally", "[circuit]") {
    CircuitBuilder b(1, 0, InputTag::Symbolic);
    const auto j = nlohmann::json::parse(serialize(b.build()));
    CHECK(j["format"] == "telegate-circuit/1");
    CHECK(j["qubits"] == 1);
    CHECK(j["ops"].empty());
    CHECK(deserialize(serialize(b.build())) == b.build());
}

TEST_CASE("T-ancilla amplitudes round-trip bit-exactly", "[circuit]") {
    const double r = std::sqrt(0.5);
    const std::vector<cplx> amps{r, std::polar(r, std::numbers::pi / 4)};
    CircuitBuilder b(1, 0, InputTag::Injected);
    b.inject(amps, {0});
    const std::string text = serialize(b.build());
    CHECK(text.find("[") != std::string::npos);
    const Circuit back = deserialize(text);
    const auto &in = std::get<InjectOp>(back.ops()[0].op);
    REQUIRE(in.amplitudes.size() == 2);
    CHECK(in.amplitudes[0] == amps[0]);
    CHECK(in.amplitudes[1] == amps[1]);
}

TEST_CASE("round trip on random valid circuits", "[circuit]") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const Circuit c = random_circuit(rng);
        INFO(render_text(c));
        REQUIRE(validate(c).empty());
        CHECK(deserialize(serialize(c)) == c);
    }
    CHECK(deserialize(serialize(build_one_bit_teleport(TeleportKind::Z, 1))) ==
          build_one_bit_teleport(TeleportKind::Z, 1));
}

TEST_CASE("invalid circuits are refused by serialize", "[circuit]") {
    CircuitBuilder b(1, 1, InputTag::Symbolic);
    b.cgate({0}, {1}, GateRef::named("X"), {0});
    CHECK_THROWS_AS(serialize(b.build()), ValidationError);
}

TEST_CASE("parse errors carry a position", "[circuit]") {
    try {
        deserialize("{\n  \"format\": \"telegate-circuit/1\",\n  \"qubits\": 1,, }");
        FAIL("expected ParseError");
    } catch (const ParseError &e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(deserialize(R"({"format":"other","qubits":1,"cbits":0,"ops":[]})"), ParseError);
    CHECK_THROWS_AS(deserialize(R"({"format":"telegate-circuit/1","qubits":1,"cbits":0,"ops":[{"op":"zap"}]})"),
                    ParseError);
}

TEST_CASE("text art shows one wire per qubit", "[circuit]") {
    const std::string art = render_text(build_one_bit_teleport(TeleportKind::X, 1));
    CHECK(std::count(art.begin(), art.end(), '\n') == 2);
    CHECK(art.find("M>c0") != std::string::npos);
}
