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

#include <cmath>
#include <complex>
#include <random>

#include "telegate/linalg.hpp"

namespace testutil {

using telegate::cplx;
using telegate::Matrix;

/// Haar-ish random unitary via Gram-Schmidt on a complex Gaussian matrix.
inline Matrix random_unitary(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Matrix m(dim, dim);
    for (std::size_t c = 0; c < dim; ++c) {
        std::vector<cplx> v(dim);
        for (auto &a : v) a = {g(rng), g(rng)};
        for (std::size_t p = 0; p < c; ++p) {
            cplx dot = 0;
            for (std::size_t r = 0; r < dim; ++r) dot += std::conj(m(r, p)) * v[r];
            for (std::size_t r = 0; r < dim; ++r) v[r] -= dot * m(r, p);
        }
        double n = 0;
        for (auto a : v) n += std::norm(a);
        n = std::sqrt(n);
        for (std::size_t r = 0; r < dim; ++r) m(r, c) = v[r] / n;
    }
    return m;
}

inline std::vector<cplx> random_vector(std::size_t len, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<cplx> v(len);
    for (auto &a : v) a = {g(rng), g(rng)};
    return v;
}

/// Naive triple-loop product used as an oracle for the kernel-backed one.
inline Matrix naive_mul(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            cplx s = 0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            out(i, j) = s;
        }
    return out;
}

inline bool close(cplx a, cplx b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

}  // namespace testutil
