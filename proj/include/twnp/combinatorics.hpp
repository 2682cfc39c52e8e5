/*
   Copyright 2026 The twnp Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef TWNP_COMBINATORICS_HPP
#define TWNP_COMBINATORICS_HPP

#include <twnp/arith.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace twnp
{

/// Permutation of {0..n} stored as the image vector tau[i].
using Permutation = std::vector<int>;

/// Largest n + 1 for which permutations are enumerated exhaustively.
inline constexpr int kEnumerationCap = 9;

class enumeration_cap_exceeded : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Parameters of the assignment problem behind C_{t,n}.
struct CombInstance {
    std::int64_t p = 0;
    std::int64_t d = 0;
    std::int64_t e = 0;
    std::int64_t t = 0;

    CombInstance() = default;
    CombInstance(std::int64_t p_, std::int64_t d_, std::int64_t e_, std::int64_t t_)
        : p(p_), d(d_), e(e_), t(t_)
    {
        if (!(d > e && e >= 1) || std::gcd(d, e) != 1) {
            throw domain_error("CombInstance: need d > e >= 1 with gcd(d, e) = 1");
        }
        e_inv_ = mod_inverse(e, d);
    }

    std::int64_t e_inv() const { return e_inv_; }

private:
    std::int64_t e_inv_ = 0;
};

struct OptimumResult {
    int n = -1;
    std::int64_t value = 0;
    std::vector<Permutation> minimizers;
};

/// Unique (x, y) with d x + e y = p i - j + t and 0 <= y < d.
struct XYDecomposition {
    std::int64_t x = 0;
    std::int64_t y = 0;
};

struct PermSets {
    std::vector<Permutation> circle;
    std::vector<Permutation> bullet;
};

// Residue of e^{-1}(p i - j + t) mod d.
inline std::int64_t cost(const CombInstance& inst, std::int64_t i, std::int64_t j)
{
    const std::int64_t arg = min_residue(min_residue(inst.p, inst.d) * min_residue(i, inst.d) - j + inst.t,
                                         inst.d);
    return arg * inst.e_inv() % inst.d;
}

inline XYDecomposition xy_decomposition(const CombInstance& inst, std::int64_t i, std::int64_t j)
{
    const std::int64_t y = cost(inst, i, j);
    const std::int64_t total = inst.p * i - j + inst.t - inst.e * y;
    return {total / inst.d, y};
}

inline int permutation_sign(const Permutation& perm)
{
    std::vector<char> seen(perm.size(), 0);
    int sign = 1;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) {
            continue;
        }
        std::size_t len = 0;
        for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
            seen[j] = 1;
            ++len;
        }
        if (len % 2 == 0) {
            sign = -sign;
        }
    }
    return sign;
}

inline Permutation identity_permutation(int n)
{
    Permutation id(static_cast<std::size_t>(n + 1));
    std::iota(id.begin(), id.end(), 0);
    return id;
}

/// Minimum-cost perfect assignment of a square integer matrix (shortest
/// augmenting paths with potentials).  Returns the optimum and fills
/// row_to_col.
inline std::int64_t assignment_min(const std::vector<std::vector<std::int64_t>>& costm,
                                   std::vector<int>* row_to_col = nullptr)
{
    const int n = static_cast<int>(costm.size());
    if (n == 0) {
        if (row_to_col != nullptr) {
            row_to_col->clear();
        }
        return 0;
    }
    constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
    // 1-based potentials; col_match[j] = row assigned to column j.
    std::vector<std::int64_t> pot_row(n + 1, 0), pot_col(n + 1, 0);
    std::vector<int> col_match(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        col_match[0] = i;
        int j0 = 0;
        std::vector<std::int64_t> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = col_match[j0];
            std::int64_t delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) {
                    continue;
                }
                const std::int64_t cur = costm[i0 - 1][j - 1] - pot_row[i0] - pot_col[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    pot_row[col_match[j]] += delta;
                    pot_col[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (col_match[j0] != 0);
        do {
            const int j1 = way[j0];
            col_match[j0] = col_match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::int64_t total = 0;
    std::vector<int> assign(n, -1);
    for (int j = 1; j <= n; ++j) {
        assign[col_match[j] - 1] = j - 1;
    }
    for (int i = 0; i < n; ++i) {
        total += costm[i][assign[i]];
    }
    if (row_to_col != nullptr) {
        *row_to_col = std::move(assign);
    }
    return total;
}

/// Maximum matching in a bipartite graph given as adjacency lists of the
/// left side (Kuhn's augmenting paths).
inline int max_bipartite_matching(const std::vector<std::vector<int>>& adj, int right_size)
{
    std::vector<int> match_right(static_cast<std::size_t>(right_size), -1);
    std::vector<char> visited;
    auto try_augment = [&](auto&& self, int v) -> bool {
        for (int w : adj[v]) {
            if (visited[w]) {
                continue;
            }
            visited[w] = 1;
            if (match_right[w] < 0 || self(self, match_right[w])) {
                match_right[w] = v;
                return true;
            }
        }
        return false;
    };
    int size = 0;
    for (int v = 0; v < static_cast<int>(adj.size()); ++v) {
        visited.assign(static_cast<std::size_t>(right_size), 0);
        if (try_augment(try_augment, v)) {
            ++size;
        }
    }
    return size;
}

inline std::vector<std::vector<std::int64_t>> cost_matrix(const CombInstance& inst, int n)
{
    std::vector<std::vector<std::int64_t>> m(n + 1, std::vector<std::int64_t>(n + 1));
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            m[i][j] = cost(inst, i, j);
        }
    }
    return m;
}

/// Exhaustive minimum of sum_i cost(i, tau(i)) over all permutations of
/// {0..n}, with the list of minimizers in lexicographic order.
inline OptimumResult compute_C_exhaustive(const CombInstance& inst, int n)
{
    OptimumResult res;
    res.n = n;
    if (n < 0) {
        return res;
    }
    if (n + 1 > kEnumerationCap) {
        throw enumeration_cap_exceeded("compute_C: n + 1 exceeds the enumeration cap");
    }
    const auto m = cost_matrix(inst, n);
    Permutation perm = identity_permutation(n);
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    do {
        std::int64_t s = 0;
        for (int i = 0; i <= n; ++i) {
            s += m[i][perm[i]];
        }
        if (s < best) {
            best = s;
            res.minimizers.clear();
        }
        if (s == best) {
            res.minimizers.push_back(perm);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    res.value = best;
    return res;
}

/// C_{t,n} through the assignment solver (no minimizer list).
inline std::int64_t compute_C_value(const CombInstance& inst, int n)
{
    if (n < 0) {
        return 0;
    }
    return assignment_min(cost_matrix(inst, n));
}

/// C_{t,n} with its minimizers when n + 1 <= kEnumerationCap; beyond the cap
/// only the value is returned unless minimizers are requested.
inline OptimumResult compute_C(const CombInstance& inst, int n, bool want_minimizers = true)
{
    if (n < 0) {
        return OptimumResult{n, 0, {}};
    }
    if (n + 1 <= kEnumerationCap && want_minimizers) {
        return compute_C_exhaustive(inst, n);
    }
    if (want_minimizers) {
        throw enumeration_cap_exceeded("compute_C: minimizer set requested beyond the enumeration cap");
    }
    return OptimumResult{n, compute_C_value(inst, n), {}};
}

inline std::int64_t R_value(const CombInstance& inst, std::int64_t i, std::int64_t alpha)
{
    return min_residue(inst.e_inv() * min_residue(inst.p * i + alpha, inst.d), inst.d);
}

inline std::int64_t r_value(const CombInstance& inst, std::int64_t i, std::int64_t alpha)
{
    return min_residue(inst.e_inv() * min_residue(inst.t - alpha - i, inst.d), inst.d);
}

/// Number of i with R_{i,alpha} + r_{tau(i),alpha} >= d.
inline int bullet_count(const CombInstance& inst, const Permutation& tau, std::int64_t alpha)
{
    int count = 0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (R_value(inst, static_cast<std::int64_t>(i), alpha) + r_value(inst, tau[i], alpha) >= inst.d) {
            ++count;
        }
    }
    return count;
}

/// Bold C_{t,n,alpha}: the largest number of "carries" over permutations,
/// as a maximum bipartite matching.
inline std::int64_t compute_bfC(const CombInstance& inst, int n, std::int64_t alpha)
{
    if (n < 0) {
        return 0;
    }
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n + 1));
    for (int i = 0; i <= n; ++i) {
        const std::int64_t R = R_value(inst, i, alpha);
        for (int j = 0; j <= n; ++j) {
            if (R + r_value(inst, j, alpha) >= inst.d) {
                adj[i].push_back(j);
            }
        }
    }
    return max_bipartite_matching(adj, n + 1);
}

/// Exhaustive maximum of bullet_count; used as an oracle for compute_bfC.
inline std::int64_t compute_bfC_exhaustive(const CombInstance& inst, int n, std::int64_t alpha)
{
    if (n < 0) {
        return 0;
    }
    if (n + 1 > kEnumerationCap) {
        throw enumeration_cap_exceeded("compute_bfC_exhaustive: beyond the enumeration cap");
    }
    Permutation perm = identity_permutation(n);
    int best = 0;
    do {
        best = std::max(best, bullet_count(inst, perm, alpha));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// S_bullet: permutations attaining bold C for alpha = 0.  S_circle: those
/// whose every p i - tau(i) + t lies in dN + eN.
inline PermSets optimal_perm_sets(const CombInstance& inst, int n, std::int64_t alpha = 0)
{
    PermSets sets;
    if (n < 0) {
        return sets;
    }
    if (n + 1 > kEnumerationCap) {
        throw enumeration_cap_exceeded("optimal_perm_sets: n + 1 exceeds the enumeration cap");
    }
    const std::int64_t target = compute_bfC(inst, n, alpha);
    Permutation perm = identity_permutation(n);
    do {
        if (bullet_count(inst, perm, alpha) != target) {
            continue;
        }
        sets.bullet.push_back(perm);
        bool representable = true;
        for (int i = 0; i <= n && representable; ++i) {
            representable = xy_decomposition(inst, i, perm[i]).x >= 0;
        }
        if (representable) {
            sets.circle.push_back(perm);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sets;
}

} // namespace twnp

#endif
