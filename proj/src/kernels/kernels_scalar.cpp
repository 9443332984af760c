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

#include "telegate/kernels.hpp"

namespace telegate::kernels {
namespace {

void caxpy_scalar(cplx alpha, const cplx *x, cplx *y, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
        y[i] += alpha * x[i];
    }
}

void cmul_scalar(const cplx *a, const cplx *b, cplx *out, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
        out[i] = a[i] * b[i];
    }
}

cplx cdot_scalar(const cplx *a, const cplx *b, std::size_t len) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < len; ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

void apply_1q_scalar(cplx *amps, std::size_t len, std::size_t stride, const cplx m[4]) {
    for (std::size_t base = 0; base < len; base += 2 * stride) {
        for (std::size_t k = 0; k < stride; ++k) {
            cplx &a0 = amps[base + k];
            cplx &a1 = amps[base + k + stride];
            cplx n0 = m[0] * a0 + m[1] * a1;
            cplx n1 = m[2] * a0 + m[3] * a1;
            a0 = n0;
            a1 = n1;
        }
    }
}

double norm2_scalar(const cplx *a, std::size_t len) {
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        acc += std::norm(a[i]);
    }
    return acc;
}

}  // namespace

const KernelTable &scalar_kernels() {
    static const KernelTable table{
        "scalar", caxpy_scalar, cmul_scalar, cdot_scalar, apply_1q_scalar, norm2_scalar,
    };
    return table;
}

}  // namespace telegate::kernels
