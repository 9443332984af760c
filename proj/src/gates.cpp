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

#include "telegate/gates.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "telegate/errors.hpp"

namespace telegate {
namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
const cplx kI{0.0, 1.0};

struct Entry {
    int arity;
    bool clifford;
    Matrix (*build)();
};

Matrix make_h() { return {{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}}; }
Matrix make_s() { return {{1, 0}, {0, kI}}; }
Matrix make_q() { return make_s().adjoint() * make_h() * make_s(); }

const std::unordered_map<std::string, Entry> &table() {
    static const std::unordered_map<std::string, Entry> t = {
        {"I", {1, true, [] { return Matrix::identity(2); }}},
        {"X", {1, true, [] { return Matrix{{0, 1}, {1, 0}}; }}},
        {"Y", {1, true, [] { return Matrix{{0, -kI}, {kI, 0}}; }}},
        {"Z", {1, true, [] { return Matrix{{1, 0}, {0, -1}}; }}},
        {"H", {1, true, make_h}},
        {"S", {1, true, make_s}},
        {"S†", {1, true, [] { return make_s().adjoint(); }}},
        {"T", {1, false, [] { return phase_gate(std::numbers::pi / 4); }}},
        {"T†", {1, false, [] { return phase_gate(-std::numbers::pi / 4); }}},
        {"Q", {1, true, make_q}},
        {"Q†", {1, true, [] { return make_q().adjoint(); }}},
        {"CNOT", {2, true, [] { return controlled(Matrix{{0, 1}, {1, 0}}); }}},
        {"CZ", {2, true, [] { return controlled(Matrix{{1, 0}, {0, -1}}); }}},
        {"SWAP", {2, true, [] { return Matrix{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}; }}},
        {"CS", {2, false, [] { return controlled(make_s()); }}},
        {"CS†", {2, false, [] { return controlled(make_s().adjoint()); }}},
        {"CH", {2, false, [] { return controlled(make_h()); }}},
        {"TOFFOLI", {3, false, [] { return multi_controlled(Matrix{{0, 1}, {1, 0}}, 2); }}},
    };
    return t;
}

const std::unordered_map<std::string, std::string> &aliases() {
    static const std::unordered_map<std::string, std::string> a = {
        {"Sdg", "S†"},  {"SDG", "S†"},     {"Tdg", "T†"},   {"TDG", "T†"},   {"Qdg", "Q†"},
        {"QDG", "Q†"},  {"CX", "CNOT"},    {"CSdg", "CS†"}, {"CSDG", "CS†"}, {"CCX", "TOFFOLI"},
        {"CCNOT", "TOFFOLI"}, {"Toffoli", "TOFFOLI"}, {"ID", "I"},
    };
    return a;
}

const Entry &entry(std::string_view name) {
    const std::string canon = canonical_gate_name(name);
    return table().at(canon);
}

}  // namespace

std::string canonical_gate_name(std::string_view name) {
    std::string s(name);
    if (table().count(s)) {
        return s;
    }
    if (auto it = aliases().find(s); it != aliases().end()) {
        return it->second;
    }
    throw ParseError("unknown gate name '" + s + "'");
}

bool is_known_gate(std::string_view name) {
    std::string s(name);
    return table().count(s) || aliases().count(s);
}

NamedGate NamedGate::lookup(std::string_view name) {
    const std::string canon = canonical_gate_name(name);
    return {canon, table().at(canon).arity};
}

Matrix NamedGate::matrix() const { return entry(name).build(); }

bool NamedGate::is_clifford() const { return entry(name).clifford; }

Matrix gate_matrix(std::string_view name) { return entry(name).build(); }

const std::vector<std::string> &gate_library() {
    static const std::vector<std::string> names = {"I",  "X",   "Y",    "Z",  "H",   "S",  "S†",
                                                   "T",  "T†",  "CNOT", "CZ", "SWAP", "CS", "CS†",
                                                   "TOFFOLI", "Q", "Q†", "CH"};
    return names;
}

Matrix phase_gate(double angle) { return Matrix{{1, 0}, {0, std::polar(1.0, angle)}}; }

Matrix hierarchy_rotation(int k) { return phase_gate(2.0 * std::numbers::pi / std::ldexp(1.0, k)); }

Matrix multi_controlled(const Matrix &m, int controls) {
    Matrix out = m;
    for (int c = 0; c < controls; ++c) {
        out = controlled(out);
    }
    return out;
}

Matrix tensor(std::span<const Matrix> factors) {
    Matrix out = Matrix::identity(1);
    for (const auto &f : factors) {
        out = kron(out, f);
    }
    return out;
}

Matrix gate_on(std::string_view name, std::span<const int> targets, int n) {
    return embed(gate_matrix(name), targets, n);
}

}  // namespace telegate
