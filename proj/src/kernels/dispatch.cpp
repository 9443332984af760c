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

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "telegate/kernels.hpp"

namespace telegate::kernels {

#if defined(TELEGATE_HAVE_AVX2_KERNELS)
const KernelTable &avx2_table();
#endif

const KernelTable *avx2_kernels() {
#if defined(TELEGATE_HAVE_AVX2_KERNELS)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

namespace {

const KernelTable *detect() {
    const char *forced = std::getenv("TELEGATE_KERNELS");
    if (forced != nullptr && std::string_view(forced) == "scalar") {
        return &scalar_kernels();
    }
    if (const KernelTable *t = avx2_kernels()) {
        return t;
    }
    return &scalar_kernels();
}

std::atomic<const KernelTable *> &slot() {
    static std::atomic<const KernelTable *> current{detect()};
    return current;
}

}  // namespace

const KernelTable &active() { return *slot().load(std::memory_order_acquire); }

void set_active(const KernelTable &table) { slot().store(&table, std::memory_order_release); }

}  // namespace telegate::kernels
