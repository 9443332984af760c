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

// Command-line frontend: classification, synthesis, verification, ancilla
// preparation, recursive expansion and the remote protocols.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "telegate/ancilla.hpp"
#include "telegate/circuit_io.hpp"
#include "telegate/errors.hpp"
#include "telegate/gates.hpp"
#include "telegate/hierarchy.hpp"
#include "telegate/recursive.hpp"
#include "telegate/remote.hpp"
#include "telegate/teleport.hpp"

namespace tg = telegate;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::optional<double> tol;
    std::uint64_t seed = 0;
    bool draw = false;

    /// --tol, then TELEGATE_TOL, then the command's default.
    double tolerance(double fallback) const {
        if (tol) return *tol;
        if (const char *env = std::getenv("TELEGATE_TOL")) {
            char *end = nullptr;
            const double v = std::strtod(env, &end);
            if (end == env || *end != '\0' || !(v > 0)) throw UsageError("TELEGATE_TOL is not a positive number");
            return v;
        }
        return fallback;
    }
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

int parse_int(const std::string &s, const std::string &what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception &) {
        throw UsageError("bad " + what + " \"" + s + "\"");
    }
}

/// A gate argument: a matrix file, or a product of library gates written
/// left to right as a matrix product, each optionally placed with
/// @q[:q...] inside a `width`-qubit register ("CNOT*Q@1").
tg::Matrix load_gate(const std::string &arg, int width = 0) {
    if (std::filesystem::is_regular_file(arg)) return tg::parse_matrix_text(read_file(arg));
    struct Factor {
        tg::Matrix m;
        std::vector<int> qubits;
    };
    std::vector<Factor> factors;
    int needed = width;
    for (const auto &term : split(arg, '*')) {
        const auto at = term.find('@');
        const std::string name = term.substr(0, at);
        if (!tg::is_known_gate(name)) throw UsageError("unknown gate or unreadable matrix file \"" + name + "\"");
        Factor f{tg::gate_matrix(name), {}};
        if (at != std::string::npos) {
            for (const auto &q : split(term.substr(at + 1), ':')) f.qubits.push_back(parse_int(q, "qubit index"));
            if (static_cast<int>(f.qubits.size()) != tg::qubit_count(f.m)) {
                throw UsageError("\"" + term + "\" places a " + std::to_string(tg::qubit_count(f.m)) +
                                 "-qubit gate on " + std::to_string(f.qubits.size()) + " qubits");
            }
            for (int q : f.qubits) needed = std::max(needed, q + 1);
        } else {
            needed = std::max(needed, tg::qubit_count(f.m));
        }
        factors.push_back(std::move(f));
    }
    tg::Matrix total = tg::Matrix::identity(std::size_t{1} << needed);
    for (const auto &f : factors) {
        std::vector<int> qs = f.qubits;
        if (qs.empty()) {
            for (int q = 0; q < tg::qubit_count(f.m); ++q) qs.push_back(q);
        }
        total = total * tg::embed(f.m, qs, needed);
    }
    return total;
}

std::vector<int> parse_map(const std::string &s) {
    std::vector<int> v;
    for (const auto &p : split(s, ',')) v.push_back(parse_int(p, "qubit map entry"));
    return v;
}

tg::TeleportPlan parse_plan(const std::string &s) {
    tg::TeleportPlan p;
    for (char c : s) {
        if (c == ',' || c == ' ') continue;
        if (c == 'X' || c == 'x') {
            p.kinds.push_back(tg::TeleportKind::X);
        } else if (c == 'Z' || c == 'z') {
            p.kinds.push_back(tg::TeleportKind::Z);
        } else {
            throw UsageError("plan must be \"auto\" or a string of X and Z");
        }
    }
    return p;
}

std::string ket(const tg::StateVector &s) {
    const int n = s.num_qubits();
    std::string out;
    for (std::size_t i = 0; i < s.dim(); ++i) {
        if (std::abs(s[i]) < 1e-12) continue;
        std::string bits;
        for (int q = 0; q < n; ++q) bits += (i >> (n - 1 - q) & 1) ? '1' : '0';
        if (!out.empty()) out += " + ";
        out += "(" + tg::format_complex(s[i]) + ")|" + bits + "⟩";
    }
    return out;
}

std::string level_tag(const std::optional<int> &lvl) { return lvl ? "C" + std::to_string(*lvl) : "above C4"; }

void maybe_draw(const Globals &g, const tg::Circuit &c) {
    if (g.draw) std::cout << tg::render_text(c);
}

// --- hierarchy ----------------------------------------------------------------

int cmd_hierarchy(const Globals &g, const std::string &gate, int k_max) {
    tg::HierarchyOptions opts;
    opts.k_max = k_max;
    opts.tol = g.tolerance(opts.tol);
    const auto verdict = tg::diagonal_hierarchy_level(load_gate(gate), opts);
    std::cout << verdict.describe(k_max) << "\n";
    return kPass;
}

// --- synth --------------------------------------------------------------------

int cmd_synth(const Globals &g, const std::string &gate, const std::string &plan_arg, const std::string &out,
              const std::string &sandwich, int k_max) {
    const double tol = g.tolerance(1e-10);
    const tg::Matrix u = load_gate(gate);
    const int n = tg::qubit_count(u);
    tg::SynthesisResult r;
    if (!sandwich.empty()) {
        const auto parts = split(sandwich, ',');
        if (parts.size() != 3) throw UsageError("--sandwich takes Ga,V,Gb");
        r = tg::synthesize_sandwiched(u, load_gate(parts[0], n), load_gate(parts[1], n), load_gate(parts[2], n), tol);
    } else {
        tg::TeleportPlan plan;
        if (plan_arg == "auto") {
            const auto found = tg::plan_teleportation(u);
            if (!found) {
                std::cout << "refused: no commuting plan; E fails to commute with the gate for every one of the "
                          << (1 << n) << " X/Z assignments\n";
                return kFail;
            }
            plan = *found;
        } else {
            plan = parse_plan(plan_arg);
            if (plan.num_qubits() != n) throw UsageError("plan length does not match the gate width");
        }
        r = tg::synthesize_teleported_gate(u, plan, k_max, tol);
    }
    std::cout << "plan " << r.plan.describe() << ", level " << r.level << "\n";
    std::cout << "ancilla " << ket(r.ancilla) << "\n";
    for (const auto &c : r.corrections) {
        std::cout << "correction c" << c.qubit << "=1: " << c.label << " [" << tg::to_string(c.cls) << "], phase "
                  << tg::format_complex(c.phase) << "\n";
    }
    std::cout << "verification " << r.verification.summary() << "\n";
    maybe_draw(g, r.circuit);
    if (!out.empty()) {
        write_file(out, tg::serialize(r.circuit));
        write_file(out + ".report.json", tg::synthesis_sidecar(r).dump(1) + "\n");
        std::cout << "wrote " << out << " and " << out << ".report.json\n";
    }
    return kPass;
}

// --- verify -------------------------------------------------------------------

int cmd_verify(const Globals &g, const std::string &file, const std::string &against, const std::string &in_arg,
               const std::string &out_arg, const std::string &report) {
    const double tol = g.tolerance(1e-10);
    const tg::Circuit c = tg::deserialize(read_file(file));
    const auto violations = tg::validate(c);
    if (!violations.empty()) {
        for (const auto &v : violations) std::cerr << tg::describe(v) << "\n";
        throw UsageError("circuit is not valid");
    }
    const auto in = in_arg.empty() ? c.symbolic_qubits() : parse_map(in_arg);
    const auto out = out_arg.empty() ? tg::live_qubits(c) : parse_map(out_arg);
    const tg::Matrix u = load_gate(against, static_cast<int>(in.size()));
    tg::EquivalenceReport rep;
    try {
        rep = tg::verify_gate_equivalence(c, u, in, out, tol);
    } catch (const tg::DimensionError &e) {
        throw UsageError(std::string("map error: ") + e.what());
    }
    for (const auto &b : rep.branches) {
        std::cout << "branch " << (b.bits.empty() ? "(none)" : b.bits) << "  p=" << b.probability
                  << "  fidelity=" << b.fidelity << "\n";
    }
    std::cout << rep.summary() << "\n";
    if (!report.empty()) write_file(report, tg::report_to_json(rep).dump(1) + "\n");
    return rep.pass ? kPass : kFail;
}

// --- ancilla ------------------------------------------------------------------

std::string product_ket(const std::vector<std::string> &stabs) {
    std::string s;
    for (const auto &st : stabs) {
        const bool neg = st.front() == '-';
        const char letter = st[neg ? 1 : 0];
        if (letter == 'Z') s += neg ? "|1⟩" : "|0⟩";
        if (letter == 'X') s += neg ? "|−⟩" : "|+⟩";
        if (letter == 'Y') s += neg ? "|−i⟩" : "|+i⟩";
    }
    return s;
}

int cmd_ancilla(const Globals &g, const std::string &gate, const std::string &plan_arg, int shortcut, bool simulate,
                const std::string &out) {
    const double tol = g.tolerance(1e-10);
    const tg::Matrix u = load_gate(gate);
    const int n = tg::qubit_count(u);
    tg::TeleportPlan plan;
    if (plan_arg == "auto") {
        const auto found = tg::plan_teleportation(u);
        if (!found) {
            std::cout << "refused: no commuting plan\n";
            return kFail;
        }
        plan = *found;
    } else {
        plan = parse_plan(plan_arg);
    }
    const auto spec = tg::derive_stabilizers(u, plan, tol);
    std::cout << "target " << ket(spec.target) << "\n";
    for (std::size_t i = 0; i < spec.pairs.size(); ++i) {
        const auto &p = spec.pairs[i];
        const std::string idx = std::to_string(i + 1);
        std::cout << "M_" << idx << " = "
                  << tg::operator_label(tg::split_global_phase(p.m, 1e-12).canonical, "[matrix]") << " ["
                  << level_tag(p.m_level) << "]   Q_" << idx << " = "
                  << tg::operator_label(tg::split_global_phase(p.q, 1e-12).canonical, "[matrix]") << " ["
                  << level_tag(p.q_level) << "]\n";
    }
    for (const auto &w : spec.warnings) std::cout << "warning: " << w << "\n";

    tg::PreparationScript script;
    if (shortcut > 0) {
        if (shortcut > n) throw UsageError("--shortcut must lie in 1.." + std::to_string(n));
        script = tg::shortcut_preparation(spec, static_cast<std::size_t>(shortcut - 1));
        std::cout << "intermediate " << (script.product_intermediate.value_or(false) ? "product " : "entangled ");
        if (!script.intermediate_stabilizers.empty()) {
            std::cout << product_ket(script.intermediate_stabilizers) << " (stabilizers";
            for (const auto &s : script.intermediate_stabilizers) std::cout << " " << s;
            std::cout << ")";
        } else {
            std::cout << ket(script.initial);
        }
        std::cout << ", measure M_" << shortcut << " only\n";
    } else {
        script = tg::build_preparation(spec);
        std::cout << "full script: measure M_1..M_" << n << " from |0..0⟩\n";
    }
    int code = kPass;
    if (simulate) {
        const auto rep = tg::run_preparation(script, spec, tol);
        for (const auto &b : rep.branches) {
            std::cout << "branch " << b.bits << "  p=" << b.probability << "  fidelity=" << b.fidelity << "\n";
        }
        std::cout << (rep.pass ? "all branches reach the target" : "FAIL: target missed") << ", worst fidelity "
                  << rep.worst_fidelity << "\n";
        maybe_draw(g, tg::preparation_circuit(script));
        if (!rep.pass) code = kFail;
    }
    if (!out.empty() && code == kPass) {
        write_file(out, tg::script_to_json(script).dump(1) + "\n");
        std::cout << "wrote " << out << "\n";
    }
    return code;
}

// --- recursive ----------------------------------------------------------------

tg::GateSpec parse_spec(const std::string &arg, std::optional<int> k) {
    if (arg == "V" || arg == "CV" || arg == "CCV") {
        try {
            return tg::GateSpec::from_name(arg, k);
        } catch (const tg::ValidationError &e) {
            throw UsageError(e.what());
        }
    }
    return tg::GateSpec::diagonal(load_gate(arg));
}

int cmd_recursive(const Globals &g, const std::string &arg, std::optional<int> k, bool flatten,
                  const std::string &report, const std::string &out) {
    const double tol = g.tolerance(1e-9);
    const auto spec = parse_spec(arg, k);
    const auto rc = tg::synth_recursive(spec, flatten, tol);
    if (k && rc.level != *k) {
        throw UsageError(spec.describe() + " classifies at level " + std::to_string(rc.level) + ", not " +
                         std::to_string(*k));
    }
    const auto &res = rc.resources;
    std::cout << spec.describe() << ": level " << rc.level << ", depth-" << res.depth << " tree, "
              << (rc.verification.pass ? "verified" : "FAILED") << " (" << rc.verification.branches.size()
              << " branches)\n";
    std::cout << "ancilla qubits " << res.ancilla_qubits << ", measurements " << res.measurements
              << ", classically controlled gates";
    for (const auto &[lvl, cnt] : res.cgates_by_level) std::cout << " C" << lvl << ":" << cnt;
    std::cout << "\n";
    std::cout << "descent invariant " << (rc.descent_ok ? "holds" : "violated") << "\n";
    if (rc.flattened) {
        std::cout << "flattened: " << rc.flattened->num_qubits() << " qubits, " << rc.flattened->num_cbits()
                  << " cbits, " << rc.flattened_verification->summary() << "\n";
        maybe_draw(g, *rc.flattened);
    }
    if (!out.empty()) {
        write_file(out, rc.flattened ? tg::serialize(*rc.flattened) : tg::tree_to_json(rc.root).dump(1) + "\n");
        std::cout << "wrote " << out << "\n";
    }
    if (!report.empty()) {
        nlohmann::json j = tg::resources_to_json(res);
        j["level"] = rc.level;
        j["verification"] = tg::report_to_json(rc.verification);
        write_file(report, j.dump(1) + "\n");
    }
    return kPass;
}

// --- remote -------------------------------------------------------------------

int cmd_remote(const Globals &g, const std::string &name, int trials, const std::string &trace_out,
               const std::string &layout_out) {
    const double tol = g.tolerance(1e-10);
    const auto &names = tg::protocol_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) throw UsageError("unknown protocol " + name);
    const auto p = tg::build_protocol(name);
    const auto chk = tg::verify_protocol(p, trials, g.seed, tol);
    const auto &r = chk.resources;
    std::cout << r.ebits << (r.ebits == 1 ? " ebit, " : " ebits, ") << r.cbits() << " cbits ("
              << r.cbits_alice_to_bob << " alice->bob, " << r.cbits_bob_to_alice << " bob->alice), "
              << (chk.pass ? "all branches pass" : "FAIL") << "\n";
    std::cout << trials << " random inputs (seed " << g.seed << "), worst fidelity " << chk.worst_fidelity
              << "; channel " << chk.channel.summary() << "\n";
    const auto pre = tg::build_protocol(name, {.pre_rewrite = true});
    for (const auto &v : tg::locality_audit(pre.circuit, pre.layout)) {
        std::cout << "pre-rewrite form: " << tg::describe(v) << "\n";
    }
    maybe_draw(g, p.circuit);
    if (!trace_out.empty() && chk.pass) {
        const auto t = tg::run_protocol(p, tg::random_state(static_cast<int>(p.inputs.size()), g.seed), tol);
        write_file(trace_out, tg::trace_to_json(t).dump(1) + "\n");
    }
    if (!layout_out.empty() && chk.pass) write_file(layout_out, tg::layout_to_json(p.layout).dump(1) + "\n");
    return chk.pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"telegate: gate teleportation synthesis and verification"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--tol", g.tol, "Verification tolerance (overrides TELEGATE_TOL)");
    app.add_option("--seed", g.seed, "Seed for random inputs")->capture_default_str();
    app.add_flag("--draw", g.draw, "Print a text diagram of emitted circuits");

    std::string gate, plan = "auto", out, sandwich, file, against, in_map, out_map, report, protocol, trace, layout;
    int k_max = 6, shortcut = 0, trials = 20;
    std::optional<int> k;
    bool simulate = false, flatten = false;

    auto *hier = app.add_subcommand("hierarchy", "Classify a gate in the Clifford hierarchy");
    hier->add_option("gate", gate, "Gate name, product expression or matrix file")->required();
    hier->add_option("--k-max", k_max, "Highest level searched")->capture_default_str();

    auto *syn = app.add_subcommand("synth", "Synthesize the teleported form of a gate");
    syn->add_option("gate", gate, "Gate name, product expression or matrix file")->required();
    syn->add_option("--plan", plan, "auto, or X/Z per qubit (e.g. XXZ)")->capture_default_str();
    syn->add_option("--out", out, "Circuit file to write (sidecar goes to <out>.report.json)");
    syn->add_option("--sandwich", sandwich, "Ga,V,Gb with U = Gb V Ga");
    syn->add_option("--k-max", k_max, "Highest level accepted")->capture_default_str();

    auto *ver = app.add_subcommand("verify", "Check a circuit file against a gate on every branch");
    ver->add_option("circuit", file, "Circuit file")->required();
    ver->add_option("--against", against, "Gate name, product expression or matrix file")->required();
    ver->add_option("--in-map", in_map, "Input qubits, comma separated (default: symbolic qubits)");
    ver->add_option("--out-map", out_map, "Output qubits, comma separated (default: unmeasured qubits)");
    ver->add_option("--report", report, "JSON report to write");

    auto *anc = app.add_subcommand("ancilla", "Derive and simulate the ancilla preparation");
    anc->add_option("gate", gate, "Gate name, product expression or matrix file")->required();
    anc->add_option("--plan", plan, "auto, or X/Z per qubit")->capture_default_str();
    anc->add_option("--shortcut", shortcut, "Start from the product state of pair i (1-based)");
    anc->add_flag("--simulate", simulate, "Run the script on every branch");
    anc->add_option("--out", out, "Preparation script to write");

    auto *rec = app.add_subcommand("recursive", "Recursive teleportation of a diagonal gate");
    rec->add_option("gate", gate, "V, CV, CCV (with --k), a gate name, or a matrix file")->required();
    rec->add_option("--k", k, "Hierarchy level of the gate");
    rec->add_flag("--flatten", flatten, "Inline the tree into one circuit");
    rec->add_option("--report", report, "Resource report to write");
    rec->add_option("--out", out, "Tree (or flattened circuit) to write");

    auto *rem = app.add_subcommand("remote", "Run a two-party protocol");
    rem->add_option("--protocol", protocol, "teleport2-xz, teleport2-zx, remote-cnot, remote-cnot-4step")->required();
    rem->add_option("--trials", trials, "Random inputs to test")->capture_default_str()->check(CLI::PositiveNumber);
    rem->add_option("--trace", trace, "Trace file to write");
    rem->add_option("--layout", layout, "Layout sidecar to write");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (hier->parsed()) return cmd_hierarchy(g, gate, k_max);
        if (syn->parsed()) return cmd_synth(g, gate, plan, out, sandwich, k_max);
        if (ver->parsed()) return cmd_verify(g, file, against, in_map, out_map, report);
        if (anc->parsed()) return cmd_ancilla(g, gate, plan, shortcut, simulate, out);
        if (rec->parsed()) return cmd_recursive(g, gate, k, flatten, report, out);
        if (rem->parsed()) return cmd_remote(g, protocol, trials, trace, layout);
    } catch (const tg::SynthesisError &e) {
        std::cout << "refused: " << e.what() << "\n";
        return kFail;
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const tg::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
