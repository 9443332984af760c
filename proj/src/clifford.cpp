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

#include "telegate/clifford.hpp"

#include <cmath>

#include "telegate/errors.hpp"

namespace telegate {
namespace {

PauliOperator lit(std::string_view s) { return PauliOperator::from_string(s); }

CliffordTableau from_literals(std::initializer_list<std::string_view> xs, std::initializer_list<std::string_view> zs) {
    std::vector<PauliOperator> xi, zi;
    for (auto s : xs) xi.push_back(lit(s));
    for (auto s : zs) zi.push_back(lit(s));
    return CliffordTableau(std::move(xi), std::move(zi));
}

PauliOperator embed_pauli(const PauliOperator &local, std::span<const int> targets, int n) {
    std::vector<std::uint8_t> x(n, 0), z(n, 0);
    for (int k = 0; k < local.num_qubits(); ++k) {
        x.at(targets[k]) = local.x(k);
        z.at(targets[k]) = local.z(k);
    }
    return PauliOperator(std::move(x), std::move(z), local.phase());
}

}  // namespace

CliffordTableau::CliffordTableau(std::vector<PauliOperator> x_images, std::vector<PauliOperator> z_images)
    : x_images_(std::move(x_images)), z_images_(std::move(z_images)) {
    const int n = static_cast<int>(x_images_.size());
    if (static_cast<int>(z_images_.size()) != n) {
        throw DimensionError("tableau needs as many Z images as X images");
    }
    std::vector<const PauliOperator *> all;
    for (int i = 0; i < n; ++i) all.push_back(&x_images_[i]);
    for (int i = 0; i < n; ++i) all.push_back(&z_images_[i]);
    for (const auto *p : all) {
        if (p->num_qubits() != n) {
            throw DimensionError("tableau image has wrong width");
        }
        if (pauli_mul(*p, *p) != PauliOperator::identity(n)) {
            throw ValidationError("tableau image " + p->to_string() + " does not square to +I");
        }
    }
    for (int a = 0; a < 2 * n; ++a) {
        for (int b = a + 1; b < 2 * n; ++b) {
            const bool should_anticommute = (b == a + n);
            if (commutes(*all[a], *all[b]) == should_anticommute) {
                throw ValidationError("tableau images " + all[a]->to_string() + " and " + all[b]->to_string() +
                                      " break the generator commutation relations");
            }
        }
    }
}

CliffordTableau CliffordTableau::identity(int n) {
    std::vector<PauliOperator> xs, zs;
    for (int q = 0; q < n; ++q) {
        xs.push_back(PauliOperator::x_on(n, q));
        zs.push_back(PauliOperator::z_on(n, q));
    }
    return CliffordTableau(std::move(xs), std::move(zs));
}

CliffordTableau CliffordTableau::on(std::span<const int> targets, int n) const {
    if (static_cast<int>(targets.size()) != num_qubits()) {
        throw DimensionError("tableau placement needs one target per qubit");
    }
    std::vector<PauliOperator> xs, zs;
    for (int q = 0; q < n; ++q) {
        xs.push_back(PauliOperator::x_on(n, q));
        zs.push_back(PauliOperator::z_on(n, q));
    }
    for (int k = 0; k < num_qubits(); ++k) {
        if (targets[k] < 0 || targets[k] >= n) {
            throw DimensionError("tableau target out of range");
        }
        xs[targets[k]] = embed_pauli(x_images_[k], targets, n);
        zs[targets[k]] = embed_pauli(z_images_[k], targets, n);
    }
    return CliffordTableau(std::move(xs), std::move(zs));
}

CliffordTableau CliffordTableau::inverse() const {
    auto inv = clifford_from_matrix(tableau_to_matrix(*this).adjoint());
    if (!inv) {
        throw ValidationError("tableau inverse is not Clifford");  // unreachable for valid tableaus
    }
    return *inv;
}

CliffordTableau tableau_from_gate(const NamedGate &g) {
    const std::string &n = g.name;
    if (n == "I") return from_literals({"+X"}, {"+Z"});
    if (n == "X") return from_literals({"+X"}, {"-Z"});
    if (n == "Y") return from_literals({"-X"}, {"-Z"});
    if (n == "Z") return from_literals({"-X"}, {"+Z"});
    if (n == "H") return from_literals({"+Z"}, {"+X"});
    if (n == "S") return from_literals({"+Y"}, {"+Z"});
    if (n == "S†") return from_literals({"-Y"}, {"+Z"});
    if (n == "CNOT") return from_literals({"+XX", "+IX"}, {"+ZI", "+ZZ"});
    if (n == "CZ") return from_literals({"+XZ", "+ZX"}, {"+ZI", "+IZ"});
    if (n == "SWAP") return from_literals({"+IX", "+XI"}, {"+IZ", "+ZI"});
    if (n == "Q") return compose(tableau_from_gate("S†"), compose(tableau_from_gate("H"), tableau_from_gate("S")));
    if (n == "Q†") return tableau_from_gate("Q").inverse();
    throw ClassificationError("gate '" + n + "' is not a Clifford gate");
}

CliffordTableau tableau_from_gate(std::string_view name) { return tableau_from_gate(NamedGate::lookup(name)); }

PauliOperator conjugate_pauli(const CliffordTableau &c, const PauliOperator &p) {
    const int n = c.num_qubits();
    if (p.num_qubits() != n) {
        throw DimensionError("conjugating a " + std::to_string(p.num_qubits()) + "-qubit Pauli by a " +
                             std::to_string(n) + "-qubit Clifford");
    }
    PauliOperator out = PauliOperator::identity(n).with_phase(p.phase());
    for (int q = 0; q < n; ++q) {
        if (p.x(q)) out = out * c.image_of_x(q);
        if (p.z(q)) out = out * c.image_of_z(q);
    }
    return out;
}

CliffordTableau compose(const CliffordTableau &c1, const CliffordTableau &c2) {
    if (c1.num_qubits() != c2.num_qubits()) {
        throw DimensionError("composing tableaus of different widths");
    }
    std::vector<PauliOperator> xs, zs;
    for (int q = 0; q < c2.num_qubits(); ++q) {
        xs.push_back(conjugate_pauli(c1, c2.image_of_x(q)));
        zs.push_back(conjugate_pauli(c1, c2.image_of_z(q)));
    }
    return CliffordTableau(std::move(xs), std::move(zs));
}

std::optional<CliffordTableau> clifford_from_matrix(const Matrix &m, double tol) {
    const int n = qubit_count(m);
    if (!is_unitary(m, std::max(tol, 1e-12))) {
        throw ValidationError("matrix is not unitary within tolerance " + format_complex(tol));
    }
    const Matrix m_dag = m.adjoint();
    std::vector<PauliOperator> xs, zs;
    for (int q = 0; q < n; ++q) {
        for (int kind = 0; kind < 2; ++kind) {
            const PauliOperator gen = kind == 0 ? PauliOperator::x_on(n, q) : PauliOperator::z_on(n, q);
            const auto match = pauli_from_matrix(m * pauli_to_matrix(gen) * m_dag, tol);
            if (!match || !match->strict_member) {
                return std::nullopt;
            }
            (kind == 0 ? xs : zs).push_back(match->as_group_element());
        }
    }
    return CliffordTableau(std::move(xs), std::move(zs));
}

Matrix tableau_to_matrix(const CliffordTableau &c) {
    const int n = c.num_qubits();
    if (n > kMaxQubits) {
        throw WidthOverflow("tableau too wide for dense reconstruction");
    }
    const std::size_t dim = std::size_t{1} << n;
    Matrix projector = Matrix::identity(dim);
    for (int q = 0; q < n; ++q) {
        Matrix factor = Matrix::identity(dim) + pauli_to_matrix(c.image_of_z(q));
        factor *= 0.5;
        projector = projector * factor;
    }
    std::size_t pick = 0;
    for (std::size_t k = 1; k < dim; ++k) {
        if (std::abs(projector(k, k)) > std::abs(projector(pick, pick))) pick = k;
    }
    std::vector<cplx> seed = projector.column(pick);
    const double norm = std::sqrt(std::abs(projector(pick, pick)));
    for (auto &a : seed) a /= norm;

    std::vector<Matrix> x_mats;
    for (int q = 0; q < n; ++q) x_mats.push_back(pauli_to_matrix(c.image_of_x(q)));
    Matrix out(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
        std::vector<cplx> col = seed;
        for (int q = 0; q < n; ++q) {
            if (j & (std::size_t{1} << (n - 1 - q))) col = x_mats[q] * col;
        }
        for (std::size_t r = 0; r < dim; ++r) out(r, j) = col[r];
    }
    return out;
}

}  // namespace telegate
