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
#include <string_view>
#include <vector>

#include "telegate/gates.hpp"
#include "telegate/pauli.hpp"

namespace telegate {

/// A Clifford (C_2) element stored by its conjugation action on the 2n
/// Pauli generators X_i and Z_i. Projective: the unitary's global phase is
/// not represented, but each generator image carries its exact sign.
class CliffordTableau {
  public:
    CliffordTableau() = default;
    /// Throws ValidationError when the images do not preserve the
    /// commutation relations or do not square to +I.
    CliffordTableau(std::vector<PauliOperator> x_images, std::vector<PauliOperator> z_images);

    static CliffordTableau identity(int n);

    int num_qubits() const { return static_cast<int>(x_images_.size()); }
    const PauliOperator &image_of_x(int q) const { return x_images_.at(q); }
    const PauliOperator &image_of_z(int q) const { return z_images_.at(q); }

    /// Tableau of this gate acting on `targets` inside an n-qubit register.
    CliffordTableau on(std::span<const int> targets, int n) const;

    /// c^dagger as a tableau.
    CliffordTableau inverse() const;

    bool operator==(const CliffordTableau &) const = default;

  private:
    std::vector<PauliOperator> x_images_;
    std::vector<PauliOperator> z_images_;
};

/// Tableau of a named Clifford gate. Throws ClassificationError naming the
/// gate for T, CS, TOFFOLI and other non-Clifford names.
CliffordTableau tableau_from_gate(const NamedGate &g);
CliffordTableau tableau_from_gate(std::string_view name);

/// c P c^dagger, expanded through the generator images.
PauliOperator conjugate_pauli(const CliffordTableau &c, const PauliOperator &p);

/// Tableau of c1 * c2 (c2 applied first).
CliffordTableau compose(const CliffordTableau &c1, const CliffordTableau &c2);

/// Recognizes C_2 matrices. Throws ValidationError for non-unitary input.
std::optional<CliffordTableau> clifford_from_matrix(const Matrix &m, double tol = kDefaultRecognitionTol);

/// A dense unitary realizing the tableau, determined up to global phase
/// (column j is prod_i image_of_x(i)^{j_i} applied to the stabilizer state of
/// the Z images). Used to emit tableau-specified gates into circuits.
Matrix tableau_to_matrix(const CliffordTableau &c);

}  // namespace telegate
