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

#include "telegate/linalg.hpp"

namespace telegate {

/// n-qubit Pauli operator  i^phase * (x)_q X^{x_q} Z^{z_q}.
///
/// The phase is relative to the X-then-Z product form, so the (x=1, z=1)
/// factor is XZ = -iY. Text literals use the Hermitian letter form instead
/// ("+Y" has x=z=1 and phase 1); `from_string` / `to_string` translate.
class PauliOperator {
  public:
    PauliOperator() = default;
    explicit PauliOperator(int n);
    PauliOperator(std::vector<std::uint8_t> x, std::vector<std::uint8_t> z, int phase);

    static PauliOperator identity(int n) { return PauliOperator(n); }
    /// Single-qubit X_q or Z_q embedded in n qubits.
    static PauliOperator x_on(int n, int q);
    static PauliOperator z_on(int n, int q);

    /// Parses "+XZI", "-iYXI", "XX" (sign optional). Throws ParseError.
    static PauliOperator from_string(std::string_view text);
    std::string to_string() const;

    int num_qubits() const { return static_cast<int>(x_.size()); }
    bool x(int q) const { return x_[q] != 0; }
    bool z(int q) const { return z_[q] != 0; }
    const std::vector<std::uint8_t> &x_bits() const { return x_; }
    const std::vector<std::uint8_t> &z_bits() const { return z_; }
    /// Quarter turns in XZ form, in {0,1,2,3}.
    int phase() const { return phase_; }

    /// Same Pauli string with the phase reset to 0.
    PauliOperator phase_free() const;
    PauliOperator with_phase(int quarters) const;
    bool is_identity_up_to_phase() const;

    /// p * p^dagger = I; inverse(p) = p^dagger.
    PauliOperator inverse() const;

    bool operator==(const PauliOperator &) const = default;

  private:
    std::vector<std::uint8_t> x_;
    std::vector<std::uint8_t> z_;
    int phase_ = 0;
};

/// Group product p * q with exact phase. Throws DimensionError on width mismatch.
PauliOperator pauli_mul(const PauliOperator &p, const PauliOperator &q);
PauliOperator operator*(const PauliOperator &p, const PauliOperator &q);

/// Symplectic test: true iff pq = qp.
bool commutes(const PauliOperator &p, const PauliOperator &q);

/// Exact dense matrix. Throws WidthOverflow above kMaxQubits.
Matrix pauli_to_matrix(const PauliOperator &p);

/// Recognition result: m = scalar * matrix(pauli) with `pauli` phase-free.
struct PauliMatch {
    cplx scalar;
    PauliOperator pauli;
    /// scalar is one of +-1, +-i, i.e. m itself is an element of the Pauli group.
    bool strict_member;

    /// The Pauli group element equal to m; only meaningful when strict_member.
    PauliOperator as_group_element() const;
};

inline constexpr double kDefaultRecognitionTol = 1e-9;

/// Recognizes unit-modulus multiples of Pauli operators. Throws
/// DimensionError when m is not 2^n x 2^n.
std::optional<PauliMatch> pauli_from_matrix(const Matrix &m, double tol = kDefaultRecognitionTol);

/// All 4^n phase-free Paulis on n qubits, in lexicographic I<X<Y<Z order.
std::vector<PauliOperator> all_phase_free_paulis(int n);

}  // namespace telegate
