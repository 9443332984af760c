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

#include "telegate/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "telegate/errors.hpp"
#include "telegate/gates.hpp"
#include "telegate/kernels.hpp"

namespace telegate {

StateVector::StateVector(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
    n_ = qubit_count_for_dim(amps_.size());
    const double n2 = kernels::active().norm2(amps_.data(), amps_.size());
    if (!(n2 > 0) || !std::isfinite(n2)) throw ValidationError("state vector has zero or non-finite norm");
    const double s = 1 / std::sqrt(n2);
    for (auto &a : amps_) a *= s;
}

StateVector StateVector::zero(int n) { return basis(n, 0); }

StateVector StateVector::basis(int n, std::size_t index) {
    if (n < 0 || n > kMaxQubits) throw WidthOverflow("state width " + std::to_string(n) + " not supported");
    std::vector<cplx> v(std::size_t{1} << n, 0);
    v.at(index) = 1;
    return StateVector(std::move(v));
}

namespace {

void check_targets(int n, std::span<const int> targets) {
    std::set<int> seen;
    for (int q : targets) {
        if (q < 0 || q >= n) throw DimensionError("target qubit " + std::to_string(q) + " out of range");
        if (!seen.insert(q).second) throw DimensionError("target qubit " + std::to_string(q) + " repeated");
    }
}

std::size_t bit_of(int n, int q) { return std::size_t{1} << (n - 1 - q); }

// Offsets of each local basis state of `qubits` inside the full register.
std::vector<std::size_t> local_offsets(int n, std::span<const int> qubits) {
    const std::size_t k = qubits.size();
    std::vector<std::size_t> off(std::size_t{1} << k, 0);
    for (std::size_t a = 0; a < off.size(); ++a) {
        for (std::size_t i = 0; i < k; ++i) {
            if (a & (std::size_t{1} << (k - 1 - i))) off[a] |= bit_of(n, qubits[i]);
        }
    }
    return off;
}

}  // namespace

void apply_matrix_inplace(std::span<cplx> amps, int n, const Matrix &g, std::span<const int> targets) {
    const std::size_t k = targets.size();
    if (amps.size() != (std::size_t{1} << n)) throw DimensionError("amplitude count does not match width");
    if (!g.square() || g.rows() != (std::size_t{1} << k)) {
        throw DimensionError("gate of dimension " + std::to_string(g.rows()) + " applied to " + std::to_string(k) +
                             " targets");
    }
    check_targets(n, targets);
    if (k == 1) {
        const cplx m[4] = {g(0, 0), g(0, 1), g(1, 0), g(1, 1)};
        kernels::active().apply_1q(amps.data(), amps.size(), bit_of(n, targets[0]), m);
        return;
    }
    const auto off = local_offsets(n, targets);
    const std::size_t tmask = off.back();
    const std::size_t d = off.size();
    std::vector<cplx> in(d), out(d);
    for (std::size_t base = 0; base < amps.size(); ++base) {
        if (base & tmask) continue;
        for (std::size_t a = 0; a < d; ++a) in[a] = amps[base | off[a]];
        for (std::size_t r = 0; r < d; ++r) {
            cplx acc = 0;
            for (std::size_t c = 0; c < d; ++c) acc += g(r, c) * in[c];
            out[r] = acc;
        }
        for (std::size_t a = 0; a < d; ++a) amps[base | off[a]] = out[a];
    }
}

StateVector apply_gate(const StateVector &s, const Matrix &g, std::span<const int> targets) {
    std::vector<cplx> v = s.amplitudes();
    apply_matrix_inplace(v, s.num_qubits(), g, targets);
    return StateVector(std::move(v));
}

StateVector apply_gate(const StateVector &s, std::string_view name, std::span<const int> targets) {
    return apply_gate(s, gate_matrix(name), targets);
}

StateVector random_state(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    std::vector<cplx> v(std::size_t{1} << n);
    for (auto &a : v) a = {dist(rng), dist(rng)};
    return StateVector(std::move(v));
}

std::string Branch::bits() const {
    std::string s;
    for (int b : cbits) s += b < 0 ? '-' : static_cast<char>('0' + b);
    return s;
}

namespace {

struct Leaf {
    std::vector<int> cbits;
    double probability = 0;
    std::vector<std::vector<cplx>> cols;  // empty for dead branches
};

// Depth-first executor over a batch of register columns. With `renormalize`
// the batch holds one normalized state and probabilities multiply; without,
// columns keep their Kraus norms and a leaf's probability is the mean
// squared column norm.
class Executor {
  public:
    Executor(const Circuit &c, bool renormalize) : c_(c), n_(c.num_qubits()), renormalize_(renormalize) {}

    std::vector<Leaf> run(std::vector<std::vector<cplx>> cols) {
        std::vector<int> cbits(c_.num_cbits(), -1);
        resolved_.clear();
        for (const auto &op : c_.ops()) {
            if (auto *g = std::get_if<GateOp>(&op.op)) {
                resolved_.push_back(g->gate.resolve());
            } else if (auto *cg = std::get_if<ConditionalOp>(&op.op)) {
                resolved_.push_back(cg->gate.resolve());
            } else {
                resolved_.emplace_back();
            }
        }
        m_ = static_cast<double>(cols.size());
        dfs(0, std::move(cols), cbits, 1.0);
        return std::move(leaves_);
    }

  private:
    void dfs(std::size_t i, std::vector<std::vector<cplx>> cols, std::vector<int> &cbits, double prob) {
        for (; i < c_.ops().size(); ++i) {
            const auto &op = c_.ops()[i].op;
            if (auto *g = std::get_if<GateOp>(&op)) {
                for (auto &col : cols) apply_matrix_inplace(col, n_, resolved_[i], g->targets);
            } else if (auto *cg = std::get_if<ConditionalOp>(&op)) {
                bool fire = true;
                for (std::size_t k = 0; k < cg->cbits.size(); ++k) {
                    if (cbits[cg->cbits[k]] != cg->equals[k]) fire = false;
                }
                if (fire) {
                    for (auto &col : cols) apply_matrix_inplace(col, n_, resolved_[i], cg->targets);
                }
            } else if (auto *in = std::get_if<InjectOp>(&op)) {
                inject(cols, *in);
            } else {
                const auto &m = std::get<MeasureOp>(op);
                const std::size_t bit = bit_of(n_, m.qubit);
                for (int outcome = 0; outcome < 2; ++outcome) {
                    auto child = cols;
                    double w = 0;
                    for (auto &col : child) {
                        for (std::size_t b = 0; b < col.size(); ++b) {
                            if (((b & bit) != 0) != (outcome == 1)) col[b] = 0;
                        }
                        w += kernels::active().norm2(col.data(), col.size());
                    }
                    double child_prob = renormalize_ ? prob * w : w / m_;
                    cbits[m.cbit] = outcome;
                    if (child_prob < kZeroBranchThreshold) {
                        leaves_.push_back(Leaf{cbits, 0.0, {}});
                    } else {
                        if (renormalize_) {
                            const double s = 1 / std::sqrt(w);
                            for (auto &col : child)
                                for (auto &a : col) a *= s;
                        }
                        dfs(i + 1, std::move(child), cbits, child_prob);
                    }
                    cbits[m.cbit] = -1;
                }
                return;
            }
        }
        if (!renormalize_) {
            double w = 0;
            for (auto &col : cols) w += kernels::active().norm2(col.data(), col.size());
            prob = w / m_;
        }
        leaves_.push_back(Leaf{cbits, prob, std::move(cols)});
    }

    void inject(std::vector<std::vector<cplx>> &cols, const InjectOp &op) {
        const auto amps = inject_amplitudes(op);
        const auto off = local_offsets(n_, op.targets);
        const std::size_t tmask = off.back();
        for (auto &col : cols) {
            // Targets sit in a known basis state, so summing over their patterns
            // recovers the remaining factor exactly.
            for (std::size_t base = 0; base < col.size(); ++base) {
                if (base & tmask) continue;
                cplx s = 0;
                for (std::size_t v = 0; v < off.size(); ++v) s += col[base | off[v]];
                for (std::size_t t = 0; t < off.size(); ++t) col[base | off[t]] = amps[t] * s;
            }
        }
    }

    const Circuit &c_;
    int n_;
    bool renormalize_;
    double m_ = 1;
    std::vector<Matrix> resolved_;
    std::vector<Leaf> leaves_;
};

void require_runnable(const Circuit &c) {
    if (c.num_qubits() > kMaxQubits) {
        throw WidthOverflow("circuit has " + std::to_string(c.num_qubits()) + " qubits; the simulator supports " +
                            std::to_string(kMaxQubits));
    }
    if (auto bad = validate(c); !bad.empty()) {
        std::string msg = "cannot simulate an invalid circuit:";
        for (const auto &v : bad) msg += "\n  " + describe(v);
        throw ValidationError(msg);
    }
}

}  // namespace

StateVector initial_state(const Circuit &c, const StateVector &input) {
    const auto sym = c.symbolic_qubits();
    if (input.num_qubits() != static_cast<int>(sym.size())) {
        throw DimensionError("input has " + std::to_string(input.num_qubits()) + " qubits but the circuit has " +
                             std::to_string(sym.size()) + " symbolic inputs");
    }
    if (c.num_qubits() > kMaxQubits) throw WidthOverflow("circuit too wide to simulate");
    const int n = c.num_qubits();
    std::vector<cplx> v(std::size_t{1} << n, 0);
    const auto off = local_offsets(n, sym);
    for (std::size_t a = 0; a < off.size(); ++a) v[off[a]] = input[a];
    return StateVector(std::move(v));
}

std::vector<Branch> run_all_branches(const Circuit &c, const StateVector &input) {
    require_runnable(c);
    const StateVector init = initial_state(c, input);
    Executor ex(c, true);
    std::vector<Branch> out;
    for (auto &leaf : ex.run({init.amplitudes()})) {
        Branch b;
        b.cbits = std::move(leaf.cbits);
        b.probability = leaf.probability;
        if (!leaf.cols.empty()) b.state = StateVector(std::move(leaf.cols[0]));
        out.push_back(std::move(b));
    }
    return out;
}

nlohmann::json branches_to_json(const std::vector<Branch> &branches) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &b : branches) {
        nlohmann::json j{{"bits", b.bits()}, {"p", b.probability}};
        if (b.state) {
            nlohmann::json st = nlohmann::json::array();
            for (cplx a : b.state->amplitudes()) st.push_back({a.real(), a.imag()});
            j["state"] = std::move(st);
        }
        arr.push_back(std::move(j));
    }
    return {{"branches", arr}};
}

Overlap equivalent_up_to_phase(const StateVector &a, const StateVector &b, double tol) {
    if (a.dim() != b.dim()) throw DimensionError("comparing states of different widths");
    const double f = std::abs(kernels::active().cdot(a.amplitudes().data(), b.amplitudes().data(), a.dim()));
    return {f >= 1 - tol, f};
}

double subsystem_overlap(const StateVector &full, std::span<const int> qubits, const StateVector &target) {
    const int n = full.num_qubits();
    check_targets(n, qubits);
    if (target.num_qubits() != static_cast<int>(qubits.size())) {
        throw DimensionError("target width does not match the qubit list");
    }
    const auto off = local_offsets(n, qubits);
    const std::size_t tmask = off.back();
    double acc = 0;
    for (std::size_t base = 0; base < full.dim(); ++base) {
        if (base & tmask) continue;
        cplx s = 0;
        for (std::size_t a = 0; a < off.size(); ++a) s += std::conj(target[a]) * full[base | off[a]];
        acc += std::norm(s);
    }
    return std::sqrt(acc);
}

std::vector<BranchOperator> branch_operators(const Circuit &c, std::span<const int> in_map,
                                             std::span<const int> out_map) {
    require_runnable(c);
    const int n = c.num_qubits();
    const auto sym = c.symbolic_qubits();
    {
        std::vector<int> a(in_map.begin(), in_map.end());
        std::sort(a.begin(), a.end());
        if (a != sym) throw DimensionError("in_map must list exactly the symbolic input qubits");
    }
    check_targets(n, out_map);
    const auto in_off = local_offsets(n, in_map);
    const std::size_t d_in = in_off.size();
    std::vector<std::vector<cplx>> cols;
    for (std::size_t j = 0; j < d_in; ++j) {
        std::vector<cplx> v(std::size_t{1} << n, 0);
        v[in_off[j]] = 1;
        cols.push_back(std::move(v));
    }
    Executor ex(c, false);
    auto leaves = ex.run(std::move(cols));

    const auto out_off = local_offsets(n, out_map);
    std::vector<int> rest;
    for (int q = 0; q < n; ++q) {
        if (std::find(out_map.begin(), out_map.end(), q) == out_map.end()) rest.push_back(q);
    }
    const auto rest_off = local_offsets(n, rest);
    const std::size_t d_out = out_off.size(), d_rest = rest_off.size();

    std::vector<BranchOperator> out;
    for (auto &leaf : leaves) {
        BranchOperator bo;
        bo.cbits = leaf.cbits;
        bo.bits = Branch{leaf.cbits, 0, {}}.bits();
        bo.probability = leaf.probability;
        if (leaf.cols.empty()) {
            out.push_back(std::move(bo));
            continue;
        }
        // K_j reshaped to (out x rest); for a product branch every row is a
        // multiple of the same rest vector, so the largest row defines it.
        std::vector<cplx> best(d_rest, 0);
        double best_norm = -1, total = 0;
        for (const auto &col : leaf.cols) {
            for (std::size_t o = 0; o < d_out; ++o) {
                double rn = 0;
                for (std::size_t r = 0; r < d_rest; ++r) rn += std::norm(col[out_off[o] | rest_off[r]]);
                total += rn;
                if (rn > best_norm) {
                    best_norm = rn;
                    for (std::size_t r = 0; r < d_rest; ++r) best[r] = col[out_off[o] | rest_off[r]];
                }
            }
        }
        double peak = 0;
        for (cplx a : best) peak = std::max(peak, std::abs(a));
        cplx phase = 1;
        for (cplx a : best) {
            if (std::abs(a) > 1e-9 * peak) {
                phase = a / std::abs(a);
                break;
            }
        }
        const double s = 1 / std::sqrt(best_norm);
        for (auto &a : best) a = a * std::conj(phase) * s;

        bo.op = Matrix(d_out, d_in);
        double kept = 0;
        for (std::size_t j = 0; j < d_in; ++j) {
            for (std::size_t o = 0; o < d_out; ++o) {
                cplx acc = 0;
                for (std::size_t r = 0; r < d_rest; ++r) acc += std::conj(best[r]) * leaf.cols[j][out_off[o] | rest_off[r]];
                bo.op(o, j) = acc;
                kept += std::norm(acc);
            }
        }
        bo.residual = std::sqrt(std::max(0.0, total - kept));
        out.push_back(std::move(bo));
    }
    return out;
}

std::string EquivalenceReport::summary() const {
    std::ostringstream s;
    s << (pass ? "pass" : "FAIL") << ": " << branches.size() << " branches, worst fidelity " << worst_fidelity;
    if (failing_branch) s << ", failing branch " << *failing_branch;
    return s.str();
}

EquivalenceReport verify_gate_equivalence(const Circuit &c, const Matrix &u, std::span<const int> in_map,
                                          std::span<const int> out_map, double tol) {
    if (in_map.size() != out_map.size()) throw DimensionError("in_map and out_map widths differ");
    if (!u.square() || u.rows() != (std::size_t{1} << in_map.size())) {
        throw DimensionError("reference unitary does not match the map width");
    }
    const double d = static_cast<double>(u.rows());
    EquivalenceReport rep;
    bool any = false;
    for (const auto &bo : branch_operators(c, in_map, out_map)) {
        BranchCheck bc;
        bc.bits = bo.bits;
        bc.probability = bo.probability;
        if (bo.op.empty()) {
            bc.fidelity = 1;
            rep.branches.push_back(bc);
            continue;
        }
        any = true;
        cplx tr = 0;
        for (std::size_t r = 0; r < u.rows(); ++r)
            for (std::size_t k = 0; k < u.cols(); ++k) tr += std::conj(u(r, k)) * bo.op(r, k);
        bc.fidelity = std::min(1.0, std::abs(tr) / (d * std::sqrt(bo.probability)));
        bc.scalar = std::abs(tr) > 0 ? tr / std::abs(tr) : cplx(1, 0);
        if (bc.fidelity < 1 - tol && bc.fidelity < rep.worst_fidelity) rep.failing_branch = bc.bits;
        rep.worst_fidelity = std::min(rep.worst_fidelity, bc.fidelity);
        rep.branches.push_back(bc);
    }
    if (!any) rep.worst_fidelity = 0;
    rep.pass = any && rep.worst_fidelity >= 1 - tol;
    return rep;
}

nlohmann::json report_to_json(const EquivalenceReport &r) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &b : r.branches) {
        arr.push_back({{"bits", b.bits},
                       {"p", b.probability},
                       {"fidelity", b.fidelity},
                       {"scalar", {b.scalar.real(), b.scalar.imag()}}});
    }
    nlohmann::json j{{"verdict", r.pass ? "pass" : "fail"}, {"worst_fidelity", r.worst_fidelity}, {"branches", arr}};
    if (r.failing_branch) j["failing_branch"] = *r.failing_branch;
    return j;
}

}  // namespace telegate
