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

#include "telegate/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "telegate/errors.hpp"
#include "telegate/kernels.hpp"

namespace telegate {

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto &r : rows) {
        if (r.size() != cols_) {
            throw DimensionError("ragged matrix literal");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::diagonal(std::span<const cplx> entries) {
    Matrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        m(i, i) = entries[i];
    }
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

std::vector<cplx> Matrix::column(std::size_t c) const {
    std::vector<cplx> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        out[r] = (*this)(r, c);
    }
    return out;
}

Matrix &Matrix::operator*=(cplx s) {
    for (auto &x : data_) {
        x *= s;
    }
    return *this;
}

Matrix &Matrix::operator+=(const Matrix &o) {
    if (o.rows_ != rows_ || o.cols_ != cols_) {
        throw DimensionError("matrix sum shape mismatch");
    }
    kernels::active().caxpy(1.0, o.data_.data(), data_.data(), data_.size());
    return *this;
}

Matrix &Matrix::operator-=(const Matrix &o) {
    if (o.rows_ != rows_ || o.cols_ != cols_) {
        throw DimensionError("matrix difference shape mismatch");
    }
    kernels::active().caxpy(-1.0, o.data_.data(), data_.data(), data_.size());
    return *this;
}

Matrix operator*(const Matrix &a, const Matrix &b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matrix product shape mismatch: " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " * " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()));
    }
    Matrix out(a.rows(), b.cols());
    const auto &k = kernels::active();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto out_row = out.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx s = a(i, j);
            if (s != cplx{0.0, 0.0}) {
                k.caxpy(s, b.row(j).data(), out_row.data(), b.cols());
            }
        }
    }
    return out;
}

Matrix operator*(cplx s, Matrix m) {
    m *= s;
    return m;
}

Matrix operator+(Matrix a, const Matrix &b) {
    a += b;
    return a;
}

Matrix operator-(Matrix a, const Matrix &b) {
    a -= b;
    return a;
}

std::vector<cplx> operator*(const Matrix &m, std::span<const cplx> v) {
    if (m.cols() != v.size()) {
        throw DimensionError("matrix-vector shape mismatch");
    }
    std::vector<cplx> out(m.rows());
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (v[c] == cplx{0.0, 0.0}) {
            continue;
        }
        for (std::size_t r = 0; r < m.rows(); ++r) {
            out[r] += m(r, c) * v[c];
        }
    }
    return out;
}

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar) {
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const cplx s = a(ar, ac);
            if (s == cplx{0.0, 0.0}) {
                continue;
            }
            for (std::size_t br = 0; br < b.rows(); ++br) {
                for (std::size_t bc = 0; bc < b.cols(); ++bc) {
                    out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
                }
            }
        }
    }
    return out;
}

int qubit_count_for_dim(std::size_t dim) {
    if (dim == 0 || !std::has_single_bit(dim)) {
        throw DimensionError("dimension " + std::to_string(dim) + " is not a power of two");
    }
    return std::countr_zero(dim);
}

int qubit_count(const Matrix &m) {
    if (!m.square()) {
        throw DimensionError("matrix is not square");
    }
    return qubit_count_for_dim(m.rows());
}

Matrix embed(const Matrix &gate, std::span<const int> targets, int n_qubits) {
    const int k = qubit_count(gate);
    if (static_cast<std::size_t>(k) != targets.size()) {
        throw DimensionError("gate arity " + std::to_string(k) + " does not match " +
                             std::to_string(targets.size()) + " targets");
    }
    if (n_qubits > kMaxQubits) {
        throw WidthOverflow("embedding into " + std::to_string(n_qubits) + " qubits exceeds limit of " +
                            std::to_string(kMaxQubits));
    }
    std::size_t mask = 0;
    std::vector<std::size_t> bit_of(k);
    for (int j = 0; j < k; ++j) {
        if (targets[j] < 0 || targets[j] >= n_qubits) {
            throw DimensionError("target " + std::to_string(targets[j]) + " out of range");
        }
        bit_of[j] = std::size_t{1} << (n_qubits - 1 - targets[j]);
        if (mask & bit_of[j]) {
            throw DimensionError("duplicate target " + std::to_string(targets[j]));
        }
        mask |= bit_of[j];
    }
    const std::size_t dim = std::size_t{1} << n_qubits;
    const std::size_t sub = std::size_t{1} << k;
    auto spread = [&](std::size_t t) {
        std::size_t out = 0;
        for (int j = 0; j < k; ++j) {
            if (t & (std::size_t{1} << (k - 1 - j))) {
                out |= bit_of[j];
            }
        }
        return out;
    };
    std::vector<std::size_t> spread_of(sub);
    for (std::size_t t = 0; t < sub; ++t) {
        spread_of[t] = spread(t);
    }
    Matrix out(dim, dim);
    for (std::size_t rest = 0; rest < dim; ++rest) {
        if (rest & mask) {
            continue;
        }
        for (std::size_t tc = 0; tc < sub; ++tc) {
            for (std::size_t tr = 0; tr < sub; ++tr) {
                out(rest | spread_of[tr], rest | spread_of[tc]) = gate(tr, tc);
            }
        }
    }
    return out;
}

Matrix controlled(const Matrix &m) {
    const std::size_t d = m.rows();
    Matrix out = Matrix::identity(2 * d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            out(d + r, d + c) = m(r, c);
        }
    }
    return out;
}

double max_abs(const Matrix &m) {
    double best = 0.0;
    for (const auto &x : m.data()) {
        best = std::max(best, std::abs(x));
    }
    return best;
}

double max_abs_diff(const Matrix &a, const Matrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("shape mismatch in comparison");
    }
    double best = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        best = std::max(best, std::abs(a.data()[i] - b.data()[i]));
    }
    return best;
}

double frobenius_norm(const Matrix &m) {
    return std::sqrt(kernels::active().norm2(m.data().data(), m.data().size()));
}

bool is_unitary(const Matrix &m, double tol) {
    if (!m.square()) {
        return false;
    }
    return max_abs_diff(m * m.adjoint(), Matrix::identity(m.rows())) <= tol;
}

bool is_diagonal(const Matrix &m, double tol) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (r != c && std::abs(m(r, c)) > tol) {
                return false;
            }
        }
    }
    return true;
}

cplx best_phase(const Matrix &a, const Matrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("shape mismatch in phase fit");
    }
    cplx overlap = kernels::active().cdot(b.data().data(), a.data().data(), a.data().size());
    double mag = std::abs(overlap);
    if (mag < 1e-300) {
        return 1.0;
    }
    return overlap / mag;
}

double projective_distance(const Matrix &a, const Matrix &b) {
    const cplx c = best_phase(a, b);
    return max_abs_diff(a, c * b);
}

PhaseSplit split_global_phase(const Matrix &m, double tol) {
    for (const auto &x : m.data()) {
        if (std::abs(x) > tol) {
            const cplx phase = x / std::abs(x);
            return {phase, std::conj(phase) * m};
        }
    }
    return {1.0, m};
}

std::string projective_fingerprint(const Matrix &m, double tol, int digits) {
    const PhaseSplit split = split_global_phase(m, tol);
    const double scale = std::pow(10.0, digits);
    std::ostringstream os;
    os << m.rows() << 'x' << m.cols() << ':';
    for (const auto &x : split.canonical.data()) {
        // +0.0 normalizes negative zero after rounding.
        const double re = std::round(x.real() * scale) + 0.0;
        const double im = std::round(x.imag() * scale) + 0.0;
        os << re << ',' << im << ';';
    }
    return os.str();
}

std::string format_complex(cplx z, int precision) {
    const double eps = 0.5 * std::pow(10.0, -precision);
    const double re = std::abs(z.real()) < eps ? 0.0 : z.real();
    const double im = std::abs(z.imag()) < eps ? 0.0 : z.imag();
    char buf[96];
    if (im == 0.0) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, re);
    } else if (re == 0.0) {
        std::snprintf(buf, sizeof buf, "%.*gi", precision, im);
    } else {
        std::snprintf(buf, sizeof buf, "%.*g%+.*gi", precision, re, precision, im);
    }
    return buf;
}

std::string format_matrix(const Matrix &m, int precision) {
    std::ostringstream os;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        os << (r == 0 ? "[[" : " [");
        for (std::size_t c = 0; c < m.cols(); ++c) {
            os << (c ? ", " : "") << format_complex(m(r, c), precision);
        }
        os << (r + 1 == m.rows() ? "]]" : "]\n");
    }
    return os.str();
}

}  // namespace telegate
