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

// AVX2 variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after a runtime CPU check (see dispatch.cpp).

#include <immintrin.h>

#include "telegate/kernels.hpp"

namespace telegate::kernels {
namespace {

// Two complex doubles per register: [re0, im0, re1, im1].

inline __m256d load2(const cplx *p) { return _mm256_loadu_pd(reinterpret_cast<const double *>(p)); }
inline void store2(cplx *p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double *>(p), v); }

// (x) * (ar + i ai) for both lanes.
inline __m256d mul_by_scalar(__m256d x, __m256d ar, __m256d ai) {
    __m256d swapped = _mm256_permute_pd(x, 0b0101);
    return _mm256_fmaddsub_pd(x, ar, _mm256_mul_pd(swapped, ai));
}

// Lane-wise complex product a * b.
inline __m256d mul_lanes(__m256d a, __m256d b) {
    __m256d b_re = _mm256_movedup_pd(b);
    __m256d b_im = _mm256_permute_pd(b, 0b1111);
    __m256d a_sw = _mm256_permute_pd(a, 0b0101);
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void caxpy_avx2(cplx alpha, const cplx *x, cplx *y, std::size_t len) {
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        store2(y + i, _mm256_add_pd(load2(y + i), mul_by_scalar(load2(x + i), ar, ai)));
    }
    for (; i < len; ++i) {
        y[i] += alpha * x[i];
    }
}

void cmul_avx2(const cplx *a, const cplx *b, cplx *out, std::size_t len) {
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        store2(out + i, mul_lanes(load2(a + i), load2(b + i)));
    }
    for (; i < len; ++i) {
        out[i] = a[i] * b[i];
    }
}

cplx cdot_avx2(const cplx *a, const cplx *b, std::size_t len) {
    // acc_rr = [ar*br, ai*bi], acc_ri = [ar*bi, ai*br]
    __m256d acc_rr = _mm256_setzero_pd();
    __m256d acc_ri = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        __m256d va = load2(a + i);
        __m256d vb = load2(b + i);
        acc_rr = _mm256_fmadd_pd(va, vb, acc_rr);
        acc_ri = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), acc_ri);
    }
    const __m256d sign = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
    cplx acc{hsum(acc_rr), hsum(_mm256_mul_pd(acc_ri, sign))};
    for (; i < len; ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

void apply_1q_avx2(cplx *amps, std::size_t len, std::size_t stride, const cplx m[4]) {
    if (stride < 2) {
        for (std::size_t base = 0; base < len; base += 2) {
            cplx a0 = amps[base];
            cplx a1 = amps[base + 1];
            amps[base] = m[0] * a0 + m[1] * a1;
            amps[base + 1] = m[2] * a0 + m[3] * a1;
        }
        return;
    }
    __m256d re[4], im[4];
    for (int k = 0; k < 4; ++k) {
        re[k] = _mm256_set1_pd(m[k].real());
        im[k] = _mm256_set1_pd(m[k].imag());
    }
    for (std::size_t base = 0; base < len; base += 2 * stride) {
        cplx *lo = amps + base;
        cplx *hi = lo + stride;
        for (std::size_t k = 0; k < stride; k += 2) {
            __m256d a0 = load2(lo + k);
            __m256d a1 = load2(hi + k);
            __m256d n0 = _mm256_add_pd(mul_by_scalar(a0, re[0], im[0]), mul_by_scalar(a1, re[1], im[1]));
            __m256d n1 = _mm256_add_pd(mul_by_scalar(a0, re[2], im[2]), mul_by_scalar(a1, re[3], im[3]));
            store2(lo + k, n0);
            store2(hi + k, n1);
        }
    }
}

double norm2_avx2(const cplx *a, std::size_t len) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        __m256d v = load2(a + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double total = hsum(acc);
    for (; i < len; ++i) {
        total += std::norm(a[i]);
    }
    return total;
}

}  // namespace

const KernelTable &avx2_table() {
    static const KernelTable table{
        "avx2", caxpy_avx2, cmul_avx2, cdot_avx2, apply_1q_avx2, norm2_avx2,
    };
    return table;
}

}  // namespace telegate::kernels
