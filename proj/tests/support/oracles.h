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


// Reference implementations shared by the unit and acceptance tests. They
// take the slow, obvious route on purpose.

#ifndef ZONESIM_TESTS_ORACLES_H
#define ZONESIM_TESTS_ORACLES_H

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "zonesim/decoder.h"
#include "zonesim/logistics.h"
#include "zonesim/noise_model.h"

namespace zonesim::oracle {

inline constexpr int64_t kNoPath = std::numeric_limits<int64_t>::max() / 4;

// All-pairs shortest paths plus a bitmask DP over pairings, with the
// boundary as an optional partner for every flagged detector.
inline int64_t brute_force_weight(const MatchingGraph& g, const LossOverlay& ov, const std::vector<std::size_t>& syn) {
    const std::size_t n = g.num_detectors() + 1;
    std::vector<std::vector<int64_t>> d(n, std::vector<int64_t>(n, kNoPath));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const auto& ed = g.edges()[e];
        const int64_t c = g.edge_cost(e, ov);
        d[ed.u][ed.v] = std::min(d[ed.u][ed.v], c);
        d[ed.v][ed.u] = std::min(d[ed.v][ed.u], c);
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (d[i][k] < kNoPath && d[k][j] < kNoPath) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
            }
        }
    }
    const std::size_t m = syn.size();
    std::vector<int64_t> best(std::size_t{1} << m, kNoPath);
    best[0] = 0;
    for (std::size_t mask = 1; mask < best.size(); ++mask) {
        std::size_t i = 0;
        while (!((mask >> i) & 1U)) ++i;
        const std::size_t rest = mask & ~(std::size_t{1} << i);
        const int64_t b = d[syn[i]][g.boundary()];
        if (b < kNoPath && best[rest] < kNoPath) best[mask] = std::min(best[mask], best[rest] + b);
        for (std::size_t j = i + 1; j < m; ++j) {
            if (!((rest >> j) & 1U)) continue;
            const std::size_t r2 = rest & ~(std::size_t{1} << j);
            const int64_t c = d[syn[i]][syn[j]];
            if (c < kNoPath && best[r2] < kNoPath) best[mask] = std::min(best[mask], best[r2] + c);
        }
    }
    return best.back();
}

// Distribution over SZ atom counts after the replenishment rounds, computed
// by convolving binomials. Independent of the simulator's sampling.
inline double replenish_success_probability(const NoiseModel& noise, const ReplenishOptions& opts, int start) {
    const int cap = 32, lz = 75;
    const double p_img = noise.p_mcm_loss_bright + 2 * noise.p_background_loss_per_image;
    const double y = noise.lz_load_probability * (1 - p_img);
    auto binom = [](int n, double p) {
        std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
        if (p <= 0.0 || p >= 1.0) {
            out[p <= 0.0 ? 0 : static_cast<std::size_t>(n)] = 1.0;
            return out;
        }
        for (int k = 0; k <= n; ++k) out[k] = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                                                       k * std::log(p) + (n - k) * std::log1p(-p));
        return out;
    };
    const auto lz_dist = binom(lz, y);
    auto done = [&](int k) { return static_cast<double>(k) / cap > opts.target_fill; };
    std::vector<double> dist(cap + 1, 0.0);
    dist[start] = 1.0;
    double success = 0.0;
    for (int round = 0; round < opts.max_load_rounds; ++round) {
        std::vector<double> next(cap + 1, 0.0);
        for (int k = 0; k <= cap; ++k) {
            if (dist[k] == 0.0) continue;
            const auto survive = binom(k, 1 - p_img);
            for (int k2 = 0; k2 <= k; ++k2) {
                const int vac = cap - k2;
                for (int n = 0; n <= lz; ++n) {
                    const auto moved = binom(std::min(n, vac), 1 - noise.p_move_fail);
                    for (int m = 0; m < static_cast<int>(moved.size()); ++m) {
                        next[k2 + m] += dist[k] * survive[k2] * lz_dist[n] * moved[m];
                    }
                }
            }
        }
        dist.assign(cap + 1, 0.0);
        for (int k = 0; k <= cap; ++k) {
            if (done(k)) {
                success += next[k];
            } else {
                dist[k] = next[k];
            }
        }
    }
    return success;
}

// Minimum total path length of an injective vacancy -> source assignment,
// by a DP over sources and subsets of vacancies.
inline double min_assignment_length(const ZoneLayout& layout, const std::vector<Site>& vac,
                                    const std::vector<Site>& src) {
    const std::size_t full = (std::size_t{1} << vac.size()) - 1;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(full + 1, inf);
    best[0] = 0.0;
    for (const Site& s : src) {
        std::vector<double> next = best;
        for (std::size_t mask = 0; mask <= full; ++mask) {
            if (best[mask] == inf) continue;
            for (std::size_t i = 0; i < vac.size(); ++i) {
                if ((mask >> i) & 1U) continue;
                const std::size_t m2 = mask | (std::size_t{1} << i);
                next[m2] = std::min(next[m2], best[mask] + path_length(layout, s, vac[i]));
            }
        }
        best = std::move(next);
    }
    return best[full];
}

}  // namespace zonesim::oracle

#endif  // ZONESIM_TESTS_ORACLES_H
