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

#include "telegate/circuit_io.hpp"

#include <cmath>

#include "telegate/errors.hpp"
#include "telegate/gates.hpp"

namespace telegate {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string &where, const std::string &what) {
    throw ParseError(where + ": " + what);
}

const json &field(const json &j, const char *key, const std::string &where) {
    if (!j.is_object()) schema_error(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) schema_error(where, std::string("missing field '") + key + "'");
    return *it;
}

int as_int(const json &j, const std::string &where) {
    if (!j.is_number_integer()) schema_error(where, "expected an integer");
    return j.get<int>();
}

std::vector<int> as_ints(const json &j, const std::string &where) {
    if (!j.is_array()) schema_error(where, "expected an integer list");
    std::vector<int> out;
    for (const auto &e : j) out.push_back(as_int(e, where));
    return out;
}

json gate_fields(json j, const GateRef &g) {
    if (g.is_named()) {
        j["name"] = g.name;
    } else {
        j["matrix"] = matrix_to_json(g.matrix);
        if (!g.label.empty()) j["label"] = g.label;
    }
    return j;
}

GateRef gate_from(const json &j, const std::string &where) {
    if (j.contains("name")) {
        if (!j["name"].is_string()) schema_error(where, "gate name must be a string");
        const auto name = j["name"].get<std::string>();
        // Unknown names survive parsing so validate() can report them.
        GateRef g;
        g.name = is_known_gate(name) ? canonical_gate_name(name) : name;
        return g;
    }
    if (j.contains("matrix")) {
        std::string label;
        if (j.contains("label")) label = j["label"].get<std::string>();
        return GateRef::custom(matrix_from_json(j["matrix"]), label);
    }
    schema_error(where, "gate needs 'name' or 'matrix'");
}

// Undo normalization drift from decimal round trips; exact data is untouched.
void renormalize(std::vector<cplx> &v) {
    double n2 = 0;
    for (cplx a : v) n2 += std::norm(a);
    if (n2 > 0 && std::abs(n2 - 1) > 1e-14 && std::abs(n2 - 1) < 1e-9) {
        const double s = 1 / std::sqrt(n2);
        for (auto &a : v) a *= s;
    }
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json &j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ParseError("complex number must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const Matrix &m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json &j) {
    if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty list of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array()) throw ParseError("matrix rows must be lists");
    const std::size_t cols = j[0].size();
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw ParseError("matrix rows have unequal lengths");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
    }
    return m;
}

json vector_to_json(std::span<const cplx> v) {
    json out = json::array();
    for (cplx a : v) out.push_back(complex_to_json(a));
    return out;
}

std::vector<cplx> vector_from_json(const json &j) {
    if (!j.is_array()) throw ParseError("amplitudes must be a list");
    std::vector<cplx> v;
    for (const auto &e : j) v.push_back(complex_from_json(e));
    return v;
}

json circuit_to_json(const Circuit &c) {
    if (auto bad = validate(c); !bad.empty()) {
        std::string msg = "refusing to serialize an invalid circuit:";
        for (const auto &v : bad) msg += "\n  " + describe(v);
        throw ValidationError(msg);
    }
    json j;
    j["format"] = kCircuitFormat;
    j["qubits"] = c.num_qubits();
    j["cbits"] = c.num_cbits();
    j["inputs"] = json::array();
    for (InputTag t : c.inputs()) j["inputs"].push_back(std::string(to_string(t)));
    j["ops"] = json::array();
    for (const auto &cop : c.ops()) {
        json o = std::visit(
            [](const auto &op) -> json {
                using T = std::decay_t<decltype(op)>;
                if constexpr (std::is_same_v<T, GateOp>) {
                    return gate_fields({{"op", "gate"}, {"targets", op.targets}}, op.gate);
                } else if constexpr (std::is_same_v<T, MeasureOp>) {
                    return {{"op", "measure"}, {"qubit", op.qubit}, {"cbit", op.cbit}};
                } else if constexpr (std::is_same_v<T, ConditionalOp>) {
                    return gate_fields({{"op", "cgate"},
                                        {"cond", {{"cbits", op.cbits}, {"equals", op.equals}}},
                                        {"targets", op.targets}},
                                       op.gate);
                } else {
                    json state = json::object();
                    if (!op.label.empty()) state["label"] = op.label;
                    if (!op.amplitudes.empty()) state["amplitudes"] = vector_to_json(op.amplitudes);
                    return {{"op", "inject"}, {"state", state}, {"targets", op.targets}};
                }
            },
            cop.op);
        if (cop.role != Role::None) o["role"] = std::string(to_string(cop.role));
        j["ops"].push_back(std::move(o));
    }
    return j;
}

std::string serialize(const Circuit &c) { return circuit_to_json(c).dump(1) + "\n"; }

Circuit circuit_from_json(const json &j) {
    const std::string top = "circuit";
    const json &fmt = field(j, "format", top);
    if (!fmt.is_string() || fmt.get<std::string>() != kCircuitFormat) {
        schema_error(top, "format must be \"" + std::string(kCircuitFormat) + "\"");
    }
    const int n = as_int(field(j, "qubits", top), top + ".qubits");
    const int nc = as_int(field(j, "cbits", top), top + ".cbits");
    if (n < 0 || nc < 0) schema_error(top, "register sizes must be non-negative");
    CircuitBuilder b(n, nc);
    if (j.contains("inputs")) {
        const json &inputs = j["inputs"];
        if (!inputs.is_array() || static_cast<int>(inputs.size()) != n) {
            schema_error(top + ".inputs", "needs one tag per qubit");
        }
        for (int q = 0; q < n; ++q) {
            if (!inputs[q].is_string()) schema_error(top + ".inputs", "tags are strings");
            b.set_input(q, input_tag_from_string(inputs[q].get<std::string>()));
        }
    }
    const json &ops = field(j, "ops", top);
    if (!ops.is_array()) schema_error(top + ".ops", "expected a list");
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const std::string where = "ops[" + std::to_string(i) + "]";
        const json &o = ops[i];
        const json &kind_j = field(o, "op", where);
        if (!kind_j.is_string()) schema_error(where, "'op' must be a string");
        const std::string kind = kind_j.get<std::string>();
        Role role = Role::None;
        if (o.contains("role")) role = role_from_string(o["role"].get<std::string>());
        if (kind == "gate") {
            b.gate(gate_from(o, where), as_ints(field(o, "targets", where), where + ".targets"), role);
        } else if (kind == "measure") {
            b.measure(as_int(field(o, "qubit", where), where), as_int(field(o, "cbit", where), where), role);
        } else if (kind == "cgate") {
            const json &cond = field(o, "cond", where);
            b.cgate(as_ints(field(cond, "cbits", where + ".cond"), where + ".cond.cbits"),
                    as_ints(field(cond, "equals", where + ".cond"), where + ".cond.equals"), gate_from(o, where),
                    as_ints(field(o, "targets", where), where + ".targets"), role);
        } else if (kind == "inject") {
            const json &state = field(o, "state", where);
            if (!state.is_object()) schema_error(where + ".state", "expected an object");
            std::string label;
            std::vector<cplx> amps;
            if (state.contains("label")) label = state["label"].get<std::string>();
            if (state.contains("amplitudes")) {
                amps = vector_from_json(state["amplitudes"]);
                renormalize(amps);
            }
            if (label.empty() && amps.empty()) schema_error(where + ".state", "needs 'label' or 'amplitudes'");
            b.inject(std::move(amps), as_ints(field(o, "targets", where), where + ".targets"), role, label);
        } else {
            schema_error(where, "unknown op kind '" + kind + "'");
        }
    }
    return b.build();
}

Circuit deserialize(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
    }
    try {
        return circuit_from_json(j);
    } catch (const json::exception &e) {
        throw ParseError(std::string("schema: ") + e.what());
    }
}

Matrix parse_matrix_text(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
    }
    if (j.is_object()) {
        if (!j.contains("matrix")) throw ParseError("matrix file object needs a 'matrix' field");
        return matrix_from_json(j["matrix"]);
    }
    return matrix_from_json(j);
}

}  // namespace telegate
