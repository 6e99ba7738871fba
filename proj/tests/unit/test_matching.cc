// Copyright 2026 The zonesim Authors
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


#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "zonesim/matching.h"

namespace zonesim {
namespace {

// Test-local exhaustive search, independent of the library's brute force.
int64_t best_pairing(const std::vector<std::vector<int64_t>>& c) {
    const std::size_t n = c.size();
    std::vector<int64_t> memo(std::size_t{1} << n, -2);
    std::function<int64_t(std::size_t)> go = [&](std::size_t mask) -> int64_t {
        if (mask == 0) return 0;
        if (memo[mask] != -2) return memo[mask];
        std::size_t i = 0;
        while (!((mask >> i) & 1U)) ++i;
        int64_t best = -1;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!((mask >> j) & 1U) || c[i][j] == kNoEdge) continue;
            const int64_t r = go(mask & ~(std::size_t{1} << i) & ~(std::size_t{1} << j));
            if (r >= 0 && (best < 0 || c[i][j] + r < best)) best = c[i][j] + r;
        }
        return memo[mask] = best;
    };
    return go((std::size_t{1} << n) - 1);
}

std::vector<std::vector<int64_t>> random_costs(std::mt19937_64& gen, std::size_t n, double p_absent) {
    std::uniform_int_distribution<int64_t> w(0, 1 << 20);
    std::bernoulli_distribution absent(p_absent);
    std::vector<std::vector<int64_t>> c(n, std::vector<int64_t>(n, kNoEdge));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!absent(gen)) c[i][j] = c[j][i] = w(gen);
        }
    }
    return c;
}

TEST(PerfectMatching, MatchesExhaustiveSearch) {
    std::mt19937_64 gen(1);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 2 * (1 + gen() % 6);
        auto c = random_costs(gen, n, trial % 3 == 0 ? 0.3 : 0.0);
        const int64_t oracle = best_pairing(c);
        if (oracle < 0) {
            EXPECT_THROW(min_cost_perfect_matching(c), std::exception);
            continue;
        }
        const auto m = min_cost_perfect_matching(c);
        EXPECT_EQ(m.cost, oracle);
        EXPECT_EQ(brute_force_perfect_matching(c).cost, oracle);
        int64_t sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const int j = m.mate[i];
            ASSERT_GE(j, 0);
            EXPECT_EQ(m.mate[static_cast<std::size_t>(j)], static_cast<int>(i));
            if (static_cast<std::size_t>(j) > i) sum += c[i][static_cast<std::size_t>(j)];
        }
        EXPECT_EQ(sum, m.cost);
    }
}

TEST(PerfectMatching, TiesAndZeros) {
    std::vector<std::vector<int64_t>> c(4, std::vector<int64_t>(4, 0));
    EXPECT_EQ(min_cost_perfect_matching(c).cost, 0);
    EXPECT_EQ(min_cost_perfect_matching({}).cost, 0);
}

TEST(MaxWeightMatching, SmallGraphs) {
    // Triangle plus pendant: the best matching uses the pendant edge.
    const std::vector<WeightedEdge> edges = {{0, 1, 5}, {1, 2, 5}, {0, 2, 5}, {2, 3, 9}};
    const auto mate = max_weight_matching(edges, false);
    EXPECT_EQ(mate[2], 3);
    EXPECT_EQ(mate[3], 2);
    EXPECT_TRUE(mate[0] == 1 || mate[0] == -1);
}

TEST(MaxWeightMatching, AgreesWithEnumeration) {
    std::mt19937_64 gen(2);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(gen() % 8);
        std::vector<WeightedEdge> edges;
        std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, -1));
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (gen() % 3 == 0) continue;
                const int64_t x = static_cast<int64_t>(gen() % 100);
                edges.push_back({i, j, x});
                w[i][j] = w[j][i] = x;
            }
        }
        // Enumerate all matchings.
        int64_t best = 0;
        std::function<void(int, std::vector<int>&, int64_t)> rec = [&](int v, std::vector<int>& used, int64_t acc) {
            if (v == n) {
                best = std::max(best, acc);
                return;
            }
            rec(v + 1, used, acc);
            if (used[v]) return;
            for (int u = v + 1; u < n; ++u) {
                if (used[u] || w[v][u] < 0) continue;
                used[v] = used[u] = 1;
                rec(v + 1, used, acc + w[v][u]);
                used[v] = used[u] = 0;
            }
        };
        std::vector<int> used(n, 0);
        rec(0, used, 0);
        const auto mate = max_weight_matching(edges, false);
        int64_t got = 0;
        for (int i = 0; i < static_cast<int>(mate.size()); ++i) {
            if (mate[i] > i) got += w[i][mate[i]];
        }
        EXPECT_EQ(got, best);
    }
}

}  // namespace
}  // namespace zonesim
