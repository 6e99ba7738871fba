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

#ifndef ZONESIM_MATCHING_H
#define ZONESIM_MATCHING_H

#include <cstdint>
#include <limits>
#include <vector>

namespace zonesim {

struct WeightedEdge {
    int u = 0;
    int v = 0;
    int64_t weight = 0;
};

/// Maximum-weight matching by Edmonds' blossom algorithm with dual variables,
/// in O(n^3). With `max_cardinality`, only maximum-cardinality matchings are
/// considered. Returns mate[v], or -1 for unmatched vertices.
std::vector<int> max_weight_matching(const std::vector<WeightedEdge>& edges, bool max_cardinality);

inline constexpr int64_t kNoEdge = std::numeric_limits<int64_t>::max();

struct PerfectMatching {
    std::vector<int> mate;
    int64_t cost = 0;
};

/// Minimum-cost perfect matching on a symmetric cost matrix. Entries equal to
/// kNoEdge are absent edges. Throws if no perfect matching exists.
PerfectMatching min_cost_perfect_matching(const std::vector<std::vector<int64_t>>& cost);

/// Exhaustive enumeration over all pairings; for oracles on up to ~14 nodes.
PerfectMatching brute_force_perfect_matching(const std::vector<std::vector<int64_t>>& cost);

}  // namespace zonesim

#endif  // ZONESIM_MATCHING_H
