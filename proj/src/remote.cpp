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

#include "telegate/remote.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "telegate/circuit_io.hpp"
#include "telegate/errors.hpp"
#include "telegate/gates.hpp"

namespace telegate {

std::string_view to_string(Party p) { return p == Party::Alice ? "alice" : "bob"; }

namespace {

constexpr Party A = Party::Alice;
constexpr Party B = Party::Bob;

std::vector<cplx> epr_amplitudes() {
    const double r = std::sqrt(0.5);
    return {r, 0, 0, r};
}

/// Builder that tracks which ancilla pairs become EPR resources.
struct ProtocolBuilder {
    ProtocolBuilder(std::vector<Party> parties, std::vector<int> symbolic, const ProtocolOptions &o)
        : b(static_cast<int>(parties.size()), 0), opts(o) {
        layout.parties = std::move(parties);
        for (int q : symbolic) b.set_input(q, InputTag::Symbolic);
    }

    /// Post-rewrite: the pair is a pre-shared EPR resource. Pre-rewrite: the
    /// pair starts in |00> and is entangled later by the prohibited CNOT.
    void share_epr(int q0, int q1) {
        if (opts.pre_rewrite) return;
        b.set_input(q0, InputTag::Injected);
        b.set_input(q1, InputTag::Injected);
        b.inject(epr_amplitudes(), {q0, q1}, Role::AncillaPrep, "epr");
        layout.resources.push_back({"epr", epr_amplitudes(), {q0, q1}});
    }

    int cbit() { return b.add_cbit(); }

    CircuitBuilder b;
    PartyLayout layout;
    ProtocolOptions opts;
};

Protocol finish(std::string name, ProtocolBuilder &pb, std::vector<int> in, std::vector<int> out, Matrix target) {
    Protocol p;
    p.name = std::move(name);
    p.circuit = pb.b.build();
    p.layout = pb.layout;
    p.inputs = std::move(in);
    p.outputs = std::move(out);
    p.target = std::move(target);
    return p;
}

/// Two-bit teleportation from `src` through Alice-side `mid` to `dst`,
/// appended to an existing builder. Returns nothing; the state ends on dst.
/// XZ: X-teleport src -> mid, then Z-teleport mid -> dst.
/// ZX: Z-teleport src -> mid, then X-teleport mid -> dst.
void two_bit_segment(ProtocolBuilder &pb, TwoBitVariant v, int src, int mid, int dst) {
    auto &b = pb.b;
    const bool pre = pb.opts.pre_rewrite, keep = pb.opts.retain_irrelevant;
    const int c0 = pb.cbit(), c1 = pb.cbit();
    if (v == TwoBitVariant::XZ) {
        if (pre) {
            b.gate("H", {mid}, Role::A);
            b.gate("CNOT", {mid, src}, Role::E);
            b.measure(src, c0);
            b.cgate({c0}, {1}, GateRef::named("X"), {mid}, Role::D);
            b.gate("CNOT", {mid, dst}, Role::E);  // prohibited
            b.gate("H", {mid}, Role::B);
            b.measure(mid, c1);
            b.cgate({c1}, {1}, GateRef::named("Z"), {dst}, Role::D);
            return;
        }
        // The prohibited CNOT, commuted back through cX(mid), leaves cX on dst too.
        b.gate("CNOT", {mid, src}, Role::E);
        b.measure(src, c0);
        if (keep) b.cgate({c0}, {1}, GateRef::named("X"), {mid}, Role::D);
        b.cgate({c0}, {1}, GateRef::named("X"), {dst}, Role::D);
        b.gate("H", {mid}, Role::B);
        b.measure(mid, c1);
        b.cgate({c1}, {1}, GateRef::named("Z"), {dst}, Role::D);
        return;
    }
    if (pre) {
        b.gate("CNOT", {src, mid}, Role::E);
        b.gate("H", {src}, Role::B);
        b.measure(src, c0);
        b.cgate({c0}, {1}, GateRef::named("Z"), {mid}, Role::D);
        b.gate("H", {dst}, Role::A);
        b.gate("CNOT", {dst, mid}, Role::E);  // prohibited
        b.measure(mid, c1);
        b.cgate({c1}, {1}, GateRef::named("X"), {dst}, Role::D);
        return;
    }
    // Z on the prohibited CNOT's target copies onto its control.
    b.gate("CNOT", {src, mid}, Role::E);
    b.gate("H", {src}, Role::B);
    b.measure(src, c0);
    if (keep) b.cgate({c0}, {1}, GateRef::named("Z"), {mid}, Role::D);
    b.cgate({c0}, {1}, GateRef::named("Z"), {dst}, Role::D);
    b.measure(mid, c1);
    b.cgate({c1}, {1}, GateRef::named("X"), {dst}, Role::D);
}

std::string party_name(const PartyLayout &layout, const std::vector<int> &qubits) {
    std::set<Party> ps;
    for (int q : qubits) ps.insert(layout.of(q));
    if (ps.size() > 1) return "shared";
    return std::string(to_string(*ps.begin()));
}

std::vector<int> op_qubits(const OpVariant &op) {
    if (const auto *g = std::get_if<GateOp>(&op)) return g->targets;
    if (const auto *m = std::get_if<MeasureOp>(&op)) return {m->qubit};
    if (const auto *c = std::get_if<ConditionalOp>(&op)) return c->targets;
    return std::get<InjectOp>(op).targets;
}

bool same_amplitudes(const std::vector<cplx> &a, const std::vector<cplx> &b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > 1e-9) return false;
    }
    return true;
}

bool is_epr(const std::vector<cplx> &amps) {
    if (amps.size() != 4) return false;
    // Maximally entangled two-qubit state: reshaped 2x2 matrix is sqrt(1/2) times a unitary.
    const cplx a = amps[0], b = amps[1], c = amps[2], d = amps[3];
    const double tol = 1e-9;
    return std::abs(std::norm(a) + std::norm(b) - 0.5) < tol && std::abs(std::norm(c) + std::norm(d) - 0.5) < tol &&
           std::abs(a * std::conj(c) + b * std::conj(d)) < tol;
}

/// Per-party bit ownership: the party whose qubit is measured into it.
std::map<int, Party> cbit_owners(const Circuit &c, const PartyLayout &layout) {
    std::map<int, Party> owner;
    for (const auto &op : c.ops()) {
        if (const auto *m = std::get_if<MeasureOp>(&op.op)) owner[m->cbit] = layout.of(m->qubit);
    }
    return owner;
}

/// Joint state of `outputs` when it factors out of the full state.
std::optional<StateVector> extract_output(const StateVector &full, const std::vector<int> &outputs, double tol) {
    const int n = full.num_qubits();
    std::vector<int> rest;
    for (int q = 0; q < n; ++q) {
        if (std::find(outputs.begin(), outputs.end(), q) == outputs.end()) rest.push_back(q);
    }
    auto offsets = [n](const std::vector<int> &qs) {
        std::vector<std::size_t> off(std::size_t{1} << qs.size(), 0);
        for (std::size_t j = 0; j < off.size(); ++j) {
            for (std::size_t t = 0; t < qs.size(); ++t) {
                if (j >> (qs.size() - 1 - t) & 1) off[j] |= std::size_t{1} << (n - 1 - qs[t]);
            }
        }
        return off;
    };
    const auto oo = offsets(outputs), ro = offsets(rest);
    std::size_t best = 0;
    double best_w = -1;
    for (std::size_t r = 0; r < ro.size(); ++r) {
        double w = 0;
        for (auto o : oo) w += std::norm(full[o | ro[r]]);
        if (w > best_w) {
            best_w = w;
            best = r;
        }
    }
    std::vector<cplx> v(oo.size());
    for (std::size_t o = 0; o < oo.size(); ++o) v[o] = full[oo[o] | ro[best]];
    StateVector s(std::move(v));
    if (subsystem_overlap(full, outputs, s) < 1 - tol) return std::nullopt;
    return s;
}

}  // namespace

Protocol build_two_bit_teleportation(TwoBitVariant v, const ProtocolOptions &o) {
    ProtocolBuilder pb({A, A, B}, {0}, o);
    pb.share_epr(1, 2);
    two_bit_segment(pb, v, 0, 1, 2);
    return finish(v == TwoBitVariant::XZ ? "teleport2-xz" : "teleport2-zx", pb, {0}, {2}, Matrix::identity(2));
}

Protocol build_remote_cnot(RemoteCnotVariant v, const ProtocolOptions &o) {
    if (v == RemoteCnotVariant::FourStep) {
        // Alice: 0 input, 1 relay, 2 output.  Bob: 3 target, 4 receives, 5 relay.
        ProtocolBuilder pb({A, A, A, B, B, B}, {0, 3}, o);
        pb.share_epr(1, 4);
        pb.share_epr(5, 2);
        two_bit_segment(pb, TwoBitVariant::ZX, 0, 1, 4);
        pb.b.gate("CNOT", {4, 3}, Role::U);
        // Bob -> Alice: the relay is Bob's, so roles mirror the first leg.
        two_bit_segment(pb, TwoBitVariant::XZ, 4, 5, 2);
        return finish("remote-cnot-4step", pb, {0, 3}, {2, 3}, gate_matrix("CNOT"));
    }
    ProtocolBuilder pb({A, A, B, B}, {0, 2}, o);
    pb.share_epr(1, 3);
    auto &b = pb.b;
    const int c0 = pb.cbit(), c1 = pb.cbit();
    if (o.pre_rewrite) {
        // Alice X-teleports 0 -> 1, Bob Z-teleports 2 -> 3, then the prohibited CNOT.
        b.gate("H", {1}, Role::A);
        b.gate("CNOT", {1, 0}, Role::E);
        b.measure(0, c0);
        b.cgate({c0}, {1}, GateRef::named("X"), {1}, Role::D);
        b.gate("CNOT", {2, 3}, Role::E);
        b.gate("H", {2}, Role::B);
        b.measure(2, c1);
        b.cgate({c1}, {1}, GateRef::named("Z"), {3}, Role::D);
        b.gate("CNOT", {1, 3}, Role::U);  // prohibited
    } else {
        b.gate("CNOT", {1, 0}, Role::E);
        b.measure(0, c0);
        b.gate("CNOT", {2, 3}, Role::E);
        b.gate("H", {2}, Role::B);
        b.measure(2, c1);
        b.cgate({c0}, {1}, GateRef::named("X"), {1}, Role::D);
        b.cgate({c0}, {1}, GateRef::named("X"), {3}, Role::D);
        b.cgate({c1}, {1}, GateRef::named("Z"), {1}, Role::D);
        b.cgate({c1}, {1}, GateRef::named("Z"), {3}, Role::D);
    }
    return finish("remote-cnot", pb, {0, 2}, {1, 3}, gate_matrix("CNOT"));
}

const std::vector<std::string> &protocol_names() {
    static const std::vector<std::string> names{"teleport2-xz", "teleport2-zx", "remote-cnot", "remote-cnot-4step"};
    return names;
}

Protocol build_protocol(std::string_view name, const ProtocolOptions &o) {
    if (name == "teleport2-xz") return build_two_bit_teleportation(TwoBitVariant::XZ, o);
    if (name == "teleport2-zx") return build_two_bit_teleportation(TwoBitVariant::ZX, o);
    if (name == "remote-cnot") return build_remote_cnot(RemoteCnotVariant::Direct, o);
    if (name == "remote-cnot-4step") return build_remote_cnot(RemoteCnotVariant::FourStep, o);
    throw ValidationError("unknown protocol \"" + std::string(name) + "\"");
}

std::vector<Violation> locality_audit(const Circuit &c, const PartyLayout &layout) {
    std::vector<Violation> out;
    if (static_cast<int>(layout.parties.size()) != c.num_qubits()) {
        out.push_back({std::nullopt, "layout", "layout assigns " + std::to_string(layout.parties.size()) +
                                                   " qubits but the circuit has " + std::to_string(c.num_qubits())});
        return out;
    }
    for (std::size_t i = 0; i < c.ops().size(); ++i) {
        const auto &op = c.ops()[i].op;
        const auto qs = op_qubits(op);
        if (party_name(layout, qs) != "shared") continue;
        if (const auto *inj = std::get_if<InjectOp>(&op)) {
            const auto amps = inject_amplitudes(*inj);
            const bool declared = std::any_of(layout.resources.begin(), layout.resources.end(), [&](const auto &r) {
                return r.targets == inj->targets && same_amplitudes(r.amplitudes, amps);
            });
            if (!declared) out.push_back({i, "undeclared-shared-state", "multi-party inject is not a declared resource"});
            continue;
        }
        out.push_back({i, "prohibited-operation", "prohibited operation: " + describe(c.ops()[i]) + " spans both parties"});
    }
    return out;
}

ResourceTotals count_resources(const Circuit &c, const PartyLayout &layout) {
    ResourceTotals r;
    for (const auto &op : c.ops()) {
        const auto *inj = std::get_if<InjectOp>(&op.op);
        if (!inj || party_name(layout, inj->targets) != "shared") continue;
        if (is_epr(inject_amplitudes(*inj))) {
            ++r.ebits;
        } else {
            ++r.other_shared;
        }
    }
    const auto owner = cbit_owners(c, layout);
    std::set<std::pair<int, Party>> sent;
    for (const auto &op : c.ops()) {
        const auto *cond = std::get_if<ConditionalOp>(&op.op);
        if (!cond) continue;
        const Party reader = layout.of(cond->targets.front());
        for (int cb : cond->cbits) {
            const auto it = owner.find(cb);
            if (it == owner.end() || it->second == reader || !sent.insert({cb, reader}).second) continue;
            ++(reader == Party::Bob ? r.cbits_alice_to_bob : r.cbits_bob_to_alice);
        }
    }
    return r;
}

ProtocolTrace run_protocol(const Protocol &p, const StateVector &input, double tol) {
    const auto violations = locality_audit(p.circuit, p.layout);
    if (!violations.empty()) {
        std::string msg = p.name + " is not party-local:";
        for (const auto &v : violations) msg += "\n  " + describe(v);
        throw LocalityError(msg);
    }
    ProtocolTrace t;
    t.resources = count_resources(p.circuit, p.layout);
    const auto owner = cbit_owners(p.circuit, p.layout);
    std::set<std::pair<int, Party>> sent;
    for (std::size_t i = 0; i < p.circuit.ops().size(); ++i) {
        const auto &op = p.circuit.ops()[i];
        TraceStep s;
        s.op_index = i;
        s.party = party_name(p.layout, op_qubits(op.op));
        s.description = describe(op);
        if (const auto *cond = std::get_if<ConditionalOp>(&op.op)) {
            const Party reader = p.layout.of(cond->targets.front());
            for (int cb : cond->cbits) {
                const auto it = owner.find(cb);
                if (it == owner.end() || it->second == reader || !sent.insert({cb, reader}).second) continue;
                if (!s.message.empty()) s.message += ", ";
                s.message += "c" + std::to_string(cb) + " " + std::string(to_string(it->second)) + "->" +
                             std::string(to_string(reader));
            }
        }
        t.steps.push_back(std::move(s));
    }

    // The input is placed on the protocol's input qubits; other symbolic
    // qubits would be an error in the construction itself.
    if (static_cast<int>(p.inputs.size()) != input.num_qubits()) {
        throw DimensionError("input width does not match the protocol inputs");
    }
    const auto expected = StateVector(p.target * std::span<const cplx>(input.amplitudes()));
    bool any = false;
    for (const auto &br : run_all_branches(p.circuit, input)) {
        ProtocolBranch pbr;
        pbr.bits = br.bits();
        pbr.probability = br.probability;
        if (!br.state) {
            pbr.fidelity = 1;
            t.branches.push_back(std::move(pbr));
            continue;
        }
        any = true;
        pbr.fidelity = subsystem_overlap(*br.state, p.outputs, expected);
        pbr.output = extract_output(*br.state, p.outputs, tol);
        t.worst_fidelity = std::min(t.worst_fidelity, pbr.fidelity);
        t.branches.push_back(std::move(pbr));
    }
    t.pass = any && t.worst_fidelity >= 1 - tol;
    return t;
}

ProtocolCheck verify_protocol(const Protocol &p, int trials, std::uint64_t seed, double tol) {
    ProtocolCheck chk;
    chk.trials = trials;
    chk.resources = count_resources(p.circuit, p.layout);
    bool ok = true;
    for (int i = 0; i < trials; ++i) {
        const auto t = run_protocol(p, random_state(static_cast<int>(p.inputs.size()), seed + i), tol);
        chk.worst_fidelity = std::min(chk.worst_fidelity, t.worst_fidelity);
        ok = ok && t.pass;
    }
    chk.channel = verify_gate_equivalence(p.circuit, p.target, p.inputs, p.outputs, tol);
    chk.pass = ok && chk.channel.pass;
    return chk;
}

bool rewrite_preserves_branches(std::string_view name, double tol) {
    const auto pre = build_protocol(name, {.pre_rewrite = true});
    for (bool keep : {false, true}) {
        const auto post = build_protocol(name, {.pre_rewrite = false, .retain_irrelevant = keep});
        const auto a = branch_operators(pre.circuit, pre.inputs, pre.outputs);
        const auto b = branch_operators(post.circuit, post.inputs, post.outputs);
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i].bits != b[i].bits || std::abs(a[i].probability - b[i].probability) > tol) return false;
            if (a[i].op.empty() != b[i].op.empty()) return false;
            if (a[i].op.empty()) continue;
            // Without the dropped correction the branch differs by a sign only.
            const double dist = keep ? max_abs_diff(a[i].op, b[i].op) : projective_distance(a[i].op, b[i].op);
            if (dist > 1e-9) return false;
        }
    }
    return true;
}

nlohmann::json layout_to_json(const PartyLayout &layout) {
    nlohmann::json parties = nlohmann::json::object();
    for (std::size_t q = 0; q < layout.parties.size(); ++q) parties[std::to_string(q)] = to_string(layout.parties[q]);
    nlohmann::json res = nlohmann::json::array();
    for (const auto &r : layout.resources) res.push_back({{"state", r.label}, {"targets", r.targets}});
    return {{"parties", parties}, {"resources", res}};
}

nlohmann::json resources_to_json(const ResourceTotals &r) {
    return {{"ebits", r.ebits},
            {"cbits", r.cbits()},
            {"alice_to_bob", r.cbits_alice_to_bob},
            {"bob_to_alice", r.cbits_bob_to_alice},
            {"other_shared", r.other_shared}};
}

nlohmann::json trace_to_json(const ProtocolTrace &t) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto &s : t.steps) {
        nlohmann::json j{{"op", s.op_index}, {"party", s.party}, {"desc", s.description}};
        if (!s.message.empty()) j["message"] = s.message;
        steps.push_back(std::move(j));
    }
    nlohmann::json branches = nlohmann::json::array();
    for (const auto &b : t.branches) {
        nlohmann::json j{{"bits", b.bits}, {"p", b.probability}, {"fidelity", b.fidelity}};
        if (b.output) j["output"] = vector_to_json(b.output->amplitudes());
        branches.push_back(std::move(j));
    }
    return {{"steps", steps},
            {"resources", resources_to_json(t.resources)},
            {"branches", branches},
            {"worst_fidelity", t.worst_fidelity},
            {"pass", t.pass}};
}

}  // namespace telegate
