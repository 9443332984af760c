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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "telegate/circuit.hpp"
#include "telegate/linalg.hpp"

namespace telegate {

/// Normalized n-qubit pure state, qubit 0 most significant.
class StateVector {
  public:
    StateVector() = default;
    /// Normalizes; throws DimensionError unless the length is 2^n, ValidationError for a zero vector.
    explicit StateVector(std::vector<cplx> amplitudes);

    static StateVector zero(int n);
    static StateVector basis(int n, std::size_t index);

    int num_qubits() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<cplx> &amplitudes() const { return amps_; }
    cplx operator[](std::size_t i) const { return amps_[i]; }

  private:
    int n_ = 0;
    std::vector<cplx> amps_;
};

/// In-place k-qubit gate on a raw amplitude vector of an n-qubit register.
void apply_matrix_inplace(std::span<cplx> amps, int n, const Matrix &g, std::span<const int> targets);

StateVector apply_gate(const StateVector &s, const Matrix &g, std::span<const int> targets);
StateVector apply_gate(const StateVector &s, std::string_view name, std::span<const int> targets);

/// Haar-like random state from a seeded generator (normal real and imaginary parts).
StateVector random_state(int n, std::uint64_t seed);

struct Branch {
    /// Per-cbit outcome; -1 for cbits never written on this path.
    std::vector<int> cbits;
    double probability = 0;
    /// Full-register post-measurement state; empty for zero-probability branches.
    std::optional<StateVector> state;

    /// Outcome string over cbits in index order, '-' for unwritten bits.
    std::string bits() const;
};

inline constexpr double kZeroBranchThreshold = 1e-12;

/// Depth-first over every measurement (outcome 0 first). `input` covers the
/// symbolic qubits in index order. Throws ValidationError for invalid circuits
/// and WidthOverflow above kMaxQubits.
std::vector<Branch> run_all_branches(const Circuit &c, const StateVector &input);

/// Full-register initial state: input on the symbolic qubits, |0> elsewhere.
StateVector initial_state(const Circuit &c, const StateVector &input);

nlohmann::json branches_to_json(const std::vector<Branch> &branches);

struct Overlap {
    bool equivalent = false;
    double fidelity = 0;
};

/// fidelity = |<a|b>|.
Overlap equivalent_up_to_phase(const StateVector &a, const StateVector &b, double tol);

/// Norm of (<target| (x) I)|full>, with target on `qubits`; 1 iff the
/// subsystem is exactly `target` and unentangled with the rest.
double subsystem_overlap(const StateVector &full, std::span<const int> qubits, const StateVector &target);

/// Effective operator of one measurement branch, restricted to the output
/// qubits: K_b = op (x) |rest> with the rest factor split off.
struct BranchOperator {
    std::vector<int> cbits;
    std::string bits;
    /// Average over basis inputs of the Kraus norm; the branch probability on
    /// the maximally mixed input.
    double probability = 0;
    /// 2^|out| x 2^|in| operator; empty when probability is below threshold.
    Matrix op;
    /// Frobenius norm of the part of K_b not of the form op (x) |rest>.
    double residual = 0;
};

/// Runs every computational-basis input through the circuit at once and
/// assembles per-branch operators. in_map lists the symbolic qubits in
/// operator-qubit order; out_map lists the output qubits likewise.
std::vector<BranchOperator> branch_operators(const Circuit &c, std::span<const int> in_map,
                                             std::span<const int> out_map);

struct BranchCheck {
    std::string bits;
    double probability = 0;
    double fidelity = 0;
    /// Unit-modulus scalar s with op ~ s u.
    cplx scalar{1, 0};
};

struct EquivalenceReport {
    bool pass = false;
    double worst_fidelity = 1;
    std::optional<std::string> failing_branch;
    std::vector<BranchCheck> branches;

    std::string summary() const;
};

/// Per-branch check that the circuit implements u (projectively) from in_map to out_map.
EquivalenceReport verify_gate_equivalence(const Circuit &c, const Matrix &u, std::span<const int> in_map,
                                          std::span<const int> out_map, double tol);

nlohmann::json report_to_json(const EquivalenceReport &r);

}  // namespace telegate
