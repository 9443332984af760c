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
#include <span>
#include <string_view>

namespace telegate::kernels {

using cplx = std::complex<double>;

/// Function table for the arithmetic inner loops. Every entry has a scalar
/// reference implementation; vectorized variants must agree with it to
/// within floating-point reassociation error.
struct KernelTable {
    std::string_view name;

    /// y[i] += alpha * x[i]
    void (*caxpy)(cplx alpha, const cplx *x, cplx *y, std::size_t len);

    /// out[i] = a[i] * b[i]
    void (*cmul)(const cplx *a, const cplx *b, cplx *out, std::size_t len);

    /// sum_i conj(a[i]) * b[i]
    cplx (*cdot)(const cplx *a, const cplx *b, std::size_t len);

    /// Applies the row-major 2x2 matrix m to every amplitude pair (i, i + stride)
    /// where bit `stride` of i is clear. `len` is the full amplitude count.
    void (*apply_1q)(cplx *amps, std::size_t len, std::size_t stride, const cplx m[4]);

    /// sum_i |a[i]|^2
    double (*norm2)(const cplx *a, std::size_t len);
};

const KernelTable &scalar_kernels();

/// The AVX2 table, or nullptr when it was not compiled in or the CPU lacks AVX2.
const KernelTable *avx2_kernels();

/// Table used by the library. Chosen once at first use: AVX2 when available,
/// unless the environment variable TELEGATE_KERNELS=scalar forces the reference path.
const KernelTable &active();

/// Overrides the active table (tests and benchmarks).
void set_active(const KernelTable &table);

}  // namespace telegate::kernels
