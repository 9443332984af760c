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

#include "telegate/pauli.hpp"

#include <bit>
#include <cmath>

#include "telegate/errors.hpp"

namespace telegate {
namespace {

constexpr cplx kQuarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

std::size_t mask_of(const std::vector<std::uint8_t> &bits) {
    const int n = static_cast<int>(bits.size());
    std::size_t m = 0;
    for (int q = 0; q < n; ++q) {
        if (bits[q]) {
            m |= std::size_t{1} << (n - 1 - q);
        }
    }
    return m;
}

void require_same_width(const PauliOperator &p, const PauliOperator &q) {
    if (p.num_qubits() != q.num_qubits()) {
        throw DimensionError("Pauli width mismatch: " + std::to_string(p.num_qubits()) + " vs " +
                             std::to_string(q.num_qubits()));
    }
}

int y_count(const PauliOperator &p) {
    int c = 0;
    for (int q = 0; q < p.num_qubits(); ++q) {
        c += p.x(q) && p.z(q);
    }
    return c;
}

}  // namespace

PauliOperator::PauliOperator(int n) : x_(n, 0), z_(n, 0) {}

PauliOperator::PauliOperator(std::vector<std::uint8_t> x, std::vector<std::uint8_t> z, int phase)
    : x_(std::move(x)), z_(std::move(z)), phase_(((phase % 4) + 4) % 4) {
    if (x_.size() != z_.size()) {
        throw DimensionError("Pauli x/z bit vectors differ in length");
    }
    for (auto &b : x_) b = b ? 1 : 0;
    for (auto &b : z_) b = b ? 1 : 0;
}

PauliOperator PauliOperator::x_on(int n, int q) {
    PauliOperator p(n);
    p.x_.at(q) = 1;
    return p;
}

PauliOperator PauliOperator::z_on(int n, int q) {
    PauliOperator p(n);
    p.z_.at(q) = 1;
    return p;
}

PauliOperator PauliOperator::from_string(std::string_view text) {
    int letter_phase = 0;
    std::size_t pos = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        letter_phase = text[pos] == '-' ? 2 : 0;
        ++pos;
    }
    if (pos < text.size() && text[pos] == 'i') {
        letter_phase += 1;
        ++pos;
    }
    std::vector<std::uint8_t> x, z;
    for (; pos < text.size(); ++pos) {
        switch (text[pos]) {
        case 'I': x.push_back(0); z.push_back(0); break;
        case 'X': x.push_back(1); z.push_back(0); break;
        case 'Y': x.push_back(1); z.push_back(1); break;
        case 'Z': x.push_back(0); z.push_back(1); break;
        default:
            throw ParseError("invalid Pauli literal '" + std::string(text) + "' at position " +
                             std::to_string(pos));
        }
    }
    if (x.empty()) {
        throw ParseError("empty Pauli literal '" + std::string(text) + "'");
    }
    PauliOperator p(std::move(x), std::move(z), 0);
    p.phase_ = (letter_phase + y_count(p)) % 4;
    return p;
}

std::string PauliOperator::to_string() const {
    static const char *kPrefix[4] = {"+", "+i", "-", "-i"};
    const int letter_phase = ((phase_ - y_count(*this)) % 4 + 4) % 4;
    std::string out = kPrefix[letter_phase];
    for (int q = 0; q < num_qubits(); ++q) {
        out += x(q) ? (z(q) ? 'Y' : 'X') : (z(q) ? 'Z' : 'I');
    }
    return out;
}

PauliOperator PauliOperator::phase_free() const { return with_phase(0); }

PauliOperator PauliOperator::with_phase(int quarters) const {
    PauliOperator p = *this;
    p.phase_ = ((quarters % 4) + 4) % 4;
    return p;
}

bool PauliOperator::is_identity_up_to_phase() const {
    for (int q = 0; q < num_qubits(); ++q) {
        if (x_[q] || z_[q]) {
            return false;
        }
    }
    return true;
}

PauliOperator PauliOperator::inverse() const {
    int overlap = 0;
    for (int q = 0; q < num_qubits(); ++q) {
        overlap += x_[q] & z_[q];
    }
    return with_phase(-phase_ + 2 * overlap);
}

PauliOperator pauli_mul(const PauliOperator &p, const PauliOperator &q) {
    require_same_width(p, q);
    const int n = p.num_qubits();
    // X^a Z^b X^c Z^d = (-1)^{b.c} X^{a+c} Z^{b+d}
    int sign_flips = 0;
    std::vector<std::uint8_t> x(n), z(n);
    for (int k = 0; k < n; ++k) {
        sign_flips += p.z(k) && q.x(k);
        x[k] = p.x(k) ^ q.x(k);
        z[k] = p.z(k) ^ q.z(k);
    }
    return PauliOperator(std::move(x), std::move(z), p.phase() + q.phase() + 2 * sign_flips);
}

PauliOperator operator*(const PauliOperator &p, const PauliOperator &q) { return pauli_mul(p, q); }

bool commutes(const PauliOperator &p, const PauliOperator &q) {
    require_same_width(p, q);
    int s = 0;
    for (int k = 0; k < p.num_qubits(); ++k) {
        s += (p.x(k) && q.z(k)) + (p.z(k) && q.x(k));
    }
    return s % 2 == 0;
}

Matrix pauli_to_matrix(const PauliOperator &p) {
    const int n = p.num_qubits();
    if (n > kMaxQubits) {
        throw WidthOverflow("Pauli on " + std::to_string(n) + " qubits exceeds dense limit");
    }
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t xm = mask_of(p.x_bits());
    const std::size_t zm = mask_of(p.z_bits());
    Matrix m(dim, dim);
    for (std::size_t c = 0; c < dim; ++c) {
        const int sign = std::popcount(zm & c) % 2 ? 2 : 0;
        m(c ^ xm, c) = kQuarter[(p.phase() + sign) % 4];
    }
    return m;
}

PauliOperator PauliMatch::as_group_element() const {
    int quarters = 0;
    double best = 1e300;
    for (int k = 0; k < 4; ++k) {
        const double d = std::abs(scalar - kQuarter[k]);
        if (d < best) {
            best = d;
            quarters = k;
        }
    }
    return pauli.with_phase(quarters);
}

std::optional<PauliMatch> pauli_from_matrix(const Matrix &m, double tol) {
    const int n = qubit_count(m);
    const std::size_t dim = m.rows();
    // Column 0 has its only entry at row x_mask.
    std::size_t xm = 0;
    double best = -1.0;
    for (std::size_t r = 0; r < dim; ++r) {
        const double a = std::abs(m(r, 0));
        if (a > best) {
            best = a;
            xm = r;
        }
    }
    const cplx scalar = m(xm, 0);
    if (std::abs(std::abs(scalar) - 1.0) > tol) {
        return std::nullopt;
    }
    std::vector<std::uint8_t> x(n), z(n);
    for (int q = 0; q < n; ++q) {
        const std::size_t bit = std::size_t{1} << (n - 1 - q);
        x[q] = (xm & bit) ? 1 : 0;
        // Entry (bit ^ xm, bit) = scalar * (-1)^{z_q}.
        const cplx v = m(bit ^ xm, bit);
        if (std::abs(v - scalar) <= tol) {
            z[q] = 0;
        } else if (std::abs(v + scalar) <= tol) {
            z[q] = 1;
        } else {
            return std::nullopt;
        }
    }
    PauliOperator p(std::move(x), std::move(z), 0);
    const std::size_t zm = mask_of(p.z_bits());
    for (std::size_t c = 0; c < dim; ++c) {
        const cplx expected = std::popcount(zm & c) % 2 ? -scalar : scalar;
        for (std::size_t r = 0; r < dim; ++r) {
            const cplx want = (r == (c ^ xm)) ? expected : cplx{0.0, 0.0};
            if (std::abs(m(r, c) - want) > tol) {
                return std::nullopt;
            }
        }
    }
    bool strict = false;
    for (const auto &q : kQuarter) {
        strict = strict || std::abs(scalar - q) <= tol;
    }
    return PauliMatch{scalar, std::move(p), strict};
}

std::vector<PauliOperator> all_phase_free_paulis(int n) {
    std::vector<PauliOperator> out;
    const std::size_t total = std::size_t{1} << (2 * n);
    out.reserve(total);
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<std::uint8_t> x(n), z(n);
        for (int q = 0; q < n; ++q) {
            // Base-4 digit per qubit, most significant first: 0=I 1=X 2=Y 3=Z.
            const int digit = static_cast<int>((code >> (2 * (n - 1 - q))) & 3);
            x[q] = digit == 1 || digit == 2;
            z[q] = digit == 2 || digit == 3;
        }
        out.emplace_back(std::move(x), std::move(z), 0);
    }
    return out;
}

}  // namespace telegate
