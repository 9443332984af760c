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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace telegate {

using cplx = std::complex<double>;

/// Widest register the dense code paths accept (4096 amplitudes).
inline constexpr int kMaxQubits = 12;

/// Dense row-major complex matrix. Basis index convention everywhere:
/// qubit 0 is the most significant bit, b = sum_q bit_q * 2^(n-1-q).
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static Matrix identity(std::size_t dim);
    static Matrix diagonal(std::span<const cplx> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    bool empty() const { return data_.empty(); }

    cplx &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<cplx> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const cplx> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<const cplx> data() const { return data_; }
    std::span<cplx> data() { return data_; }

    Matrix adjoint() const;
    std::vector<cplx> column(std::size_t c) const;

    Matrix &operator*=(cplx s);
    Matrix &operator+=(const Matrix &o);
    Matrix &operator-=(const Matrix &o);

    bool operator==(const Matrix &o) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

Matrix operator*(const Matrix &a, const Matrix &b);
Matrix operator*(cplx s, Matrix m);
Matrix operator+(Matrix a, const Matrix &b);
Matrix operator-(Matrix a, const Matrix &b);
std::vector<cplx> operator*(const Matrix &m, std::span<const cplx> v);

Matrix kron(const Matrix &a, const Matrix &b);

/// Number of qubits for a 2^n-dimensional square matrix; throws DimensionError otherwise.
int qubit_count(const Matrix &m);
int qubit_count_for_dim(std::size_t dim);

/// Lifts a k-qubit gate acting on `targets` (in gate-qubit order) to the full
/// n-qubit space.
Matrix embed(const Matrix &gate, std::span<const int> targets, int n_qubits);

/// Block-diagonal |0><0| (x) I + |1><1| (x) m with the control as the first qubit.
Matrix controlled(const Matrix &m);

double max_abs(const Matrix &m);
double max_abs_diff(const Matrix &a, const Matrix &b);
double frobenius_norm(const Matrix &m);

bool is_unitary(const Matrix &m, double tol);
bool is_diagonal(const Matrix &m, double tol);

/// min over unit scalars c of max_ij |a_ij - c b_ij|, using the trace-optimal c.
double projective_distance(const Matrix &a, const Matrix &b);

/// Unit scalar c minimizing ||a - c b|| (phase of tr(b^dagger a)); 1 if undefined.
cplx best_phase(const Matrix &a, const Matrix &b);

/// Splits m = phase * canonical where the first entry (row-major) with
/// |m_ij| > tol of `canonical` is real positive.
struct PhaseSplit {
    cplx phase;
    Matrix canonical;
};
PhaseSplit split_global_phase(const Matrix &m, double tol);

/// Global-phase-invariant fingerprint: canonical form rounded to `digits`
/// decimal places, serialized. Used as a memo key.
std::string projective_fingerprint(const Matrix &m, double tol, int digits);

std::string format_complex(cplx z, int precision = 6);
std::string format_matrix(const Matrix &m, int precision = 4);

}  // namespace telegate
