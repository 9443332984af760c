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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "telegate/circuit.hpp"
#include "telegate/simulator.hpp"

namespace telegate {

enum class Party { Alice, Bob };
std::string_view to_string(Party p);

/// A state both parties hold pieces of before the protocol starts.
struct SharedResource {
    std::string label;
    std::vector<cplx> amplitudes;
    std::vector<int> targets;
};

struct PartyLayout {
    std::vector<Party> parties;  // one per qubit
    std::vector<SharedResource> resources;

    Party of(int qubit) const { return parties.at(qubit); }
};

/// A two-party construction with the operation it claims to implement.
struct Protocol {
    std::string name;
    Circuit circuit;
    PartyLayout layout;
    std::vector<int> inputs;
    std::vector<int> outputs;
    Matrix target;
};

enum class TwoBitVariant { XZ, ZX };
enum class RemoteCnotVariant { Direct, FourStep };

struct ProtocolOptions {
    /// Emit the form before the prohibited CNOTs are commuted onto the
    /// fresh ancillas (not party-local).
    bool pre_rewrite = false;
    /// Keep the classically controlled Pauli on a register that is measured
    /// right after (it only changes a branch sign).
    bool retain_irrelevant = false;
};

/// Qubits: 0 Alice input, 1 Alice ancilla, 2 Bob output.
Protocol build_two_bit_teleportation(TwoBitVariant v, const ProtocolOptions &o = {});

/// Direct: 0 Alice input, 1 Alice output, 2 Bob input, 3 Bob output.
/// FourStep: Alice 0 (input), 1, 2 (output); Bob 3 (input and output), 4, 5.
/// Sends Alice's qubit over by two-bit teleportation, applies the CNOT at
/// Bob and teleports the control back.
Protocol build_remote_cnot(RemoteCnotVariant v, const ProtocolOptions &o = {});

/// "teleport2-xz", "teleport2-zx", "remote-cnot", "remote-cnot-4step".
Protocol build_protocol(std::string_view name, const ProtocolOptions &o = {});
const std::vector<std::string> &protocol_names();

/// Empty iff every multi-qubit gate is party-local and every multi-party
/// Inject matches a declared shared resource. Cross-party gates are reported
/// under rule "prohibited-operation".
std::vector<Violation> locality_audit(const Circuit &c, const PartyLayout &layout);

struct ResourceTotals {
    int ebits = 0;
    /// Other shared (non-EPR) states injected.
    int other_shared = 0;
    int cbits_alice_to_bob = 0;
    int cbits_bob_to_alice = 0;

    int cbits() const { return cbits_alice_to_bob + cbits_bob_to_alice; }
};

/// A measured bit counts once per direction it is read in, however many
/// conditional ops read it.
ResourceTotals count_resources(const Circuit &c, const PartyLayout &layout);

struct TraceStep {
    std::size_t op_index = 0;
    /// "alice", "bob" or "shared".
    std::string party;
    std::string description;
    /// e.g. "c0 alice->bob" for the first read of a remote bit.
    std::string message;
};

struct ProtocolBranch {
    std::string bits;
    double probability = 0;
    double fidelity = 0;
    /// Joint output state, when the outputs are unentangled from the rest.
    std::optional<StateVector> output;
};

struct ProtocolTrace {
    std::vector<TraceStep> steps;
    ResourceTotals resources;
    std::vector<ProtocolBranch> branches;
    double worst_fidelity = 1;
    bool pass = false;
};

/// Exhaustive execution on one input (over the protocol's input qubits).
/// Throws LocalityError when the audit fails.
ProtocolTrace run_protocol(const Protocol &p, const StateVector &input, double tol = 1e-10);

struct ProtocolCheck {
    int trials = 0;
    bool pass = false;
    double worst_fidelity = 1;
    /// All-branch operator check against the target.
    EquivalenceReport channel;
    ResourceTotals resources;
};

/// `trials` random inputs (seeded) plus the all-branch operator check.
ProtocolCheck verify_protocol(const Protocol &p, int trials, std::uint64_t seed, double tol = 1e-10);

/// Pre- and post-rewrite forms yield the same branch operators (projectively,
/// per branch, since dropped corrections only flip signs).
bool rewrite_preserves_branches(std::string_view name, double tol = 1e-10);

nlohmann::json layout_to_json(const PartyLayout &layout);
nlohmann::json trace_to_json(const ProtocolTrace &t);
nlohmann::json resources_to_json(const ResourceTotals &r);

}  // namespace telegate
