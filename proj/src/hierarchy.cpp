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

#include "telegate/hierarchy.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

#include "telegate/clifford.hpp"
#include "telegate/errors.hpp"
#include "telegate/pauli.hpp"

namespace telegate {
namespace {

// Membership answers keyed by (projective fingerprint, level). Guarded by a
// mutex so concurrent classifications see one logical map.
class MembershipMemo {
  public:
    std::optional<bool> get(const std::string &key) {
        std::lock_guard lock(mu_);
        auto it = map_.find(key);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }
    bool put(const std::string &key, bool value) {
        std::lock_guard lock(mu_);
        return map_.try_emplace(key, value).first->second;
    }
    std::size_t size() {
        std::lock_guard lock(mu_);
        return map_.size();
    }
    void clear() {
        std::lock_guard lock(mu_);
        map_.clear();
    }

  private:
    std::mutex mu_;
    std::unordered_map<std::string, bool> map_;
};

MembershipMemo &memo() {
    static MembershipMemo m;
    return m;
}

bool in_level(const Matrix &u, int k, double tol, const std::vector<Matrix> &generators) {
    if (k == 1) {
        return pauli_from_matrix(u, tol).has_value();
    }
    if (k == 2) {
        return clifford_from_matrix(u, tol).has_value();
    }
    // Rounding at 6 digits merges operators equal within the nested tolerance.
    const std::string key = std::to_string(k) + "|" + std::to_string(tol) + "|" + projective_fingerprint(u, tol, 6);
    if (auto hit = memo().get(key)) {
        return *hit;
    }
    const Matrix u_dag = u.adjoint();
    bool member = true;
    for (const auto &g : generators) {
        if (!in_level(u * g * u_dag, k - 1, tol, generators)) {
            member = false;
            break;
        }
    }
    return memo().put(key, member);
}

void check_input(const Matrix &u, const HierarchyOptions &opts) {
    const int n = qubit_count(u);
    if (n > kMaxQubits) {
        throw WidthOverflow("classification limited to " + std::to_string(kMaxQubits) + " qubits");
    }
    if (opts.k_max < 1) {
        throw ValidationError("k_max must be at least 1");
    }
    if (!is_unitary(u, std::max(opts.tol, 1e-12) * 10)) {
        throw ValidationError("matrix is not unitary");
    }
}

}  // namespace

std::string HierarchyVerdict::describe(int k_max) const {
    if (!level) {
        return "exceeds k_max " + std::to_string(k_max);
    }
    std::string s = "level " + std::to_string(*level);
    if (diagonal) s += ", diagonal";
    if (strict) s += ", strict";
    return s;
}

HierarchyVerdict hierarchy_level(const Matrix &u, const HierarchyOptions &opts) {
    check_input(u, opts);
    const int n = qubit_count(u);
    std::vector<Matrix> generators;
    for (int q = 0; q < n; ++q) {
        generators.push_back(pauli_to_matrix(PauliOperator::x_on(n, q)));
        generators.push_back(pauli_to_matrix(PauliOperator::z_on(n, q)));
    }
    HierarchyVerdict v;
    v.diagonal = is_diagonal(u, opts.tol);
    for (int k = 1; k <= opts.k_max; ++k) {
        bool member;
        if (k <= 2) {
            member = in_level(u, k, opts.tol, generators);
        } else {
            // Images of generators are tested at the looser nested tolerance.
            const double nested = std::max(opts.tol, opts.nested_tol);
            const Matrix u_dag = u.adjoint();
            member = true;
            for (const auto &g : generators) {
                if (!in_level(u * g * u_dag, k - 1, nested, generators)) {
                    member = false;
                    break;
                }
            }
        }
        if (member) {
            v.level = k;
            v.strict = k > 1;
            return v;
        }
    }
    return v;
}

HierarchyVerdict hierarchy_level(const Matrix &u, int k_max, double tol) {
    HierarchyOptions opts;
    opts.k_max = k_max;
    opts.tol = tol;
    return hierarchy_level(u, opts);
}

HierarchyVerdict diagonal_hierarchy_level(const Matrix &u, const HierarchyOptions &opts) {
    return hierarchy_level(u, opts);
}

std::size_t hierarchy_memo_size() { return memo().size(); }
void clear_hierarchy_memo() { memo().clear(); }

}  // namespace telegate
