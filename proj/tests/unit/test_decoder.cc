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
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "support/oracles.h"
#include "zonesim/decoder.h"
#include "zonesim/engine.h"
#include "zonesim/qec_circuits.h"

namespace zonesim {
namespace {

using oracle::brute_force_weight;

constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;

std::vector<std::size_t> syndrome_of(const ExtractedShot& ex) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < ex.detectors.size(); ++i) {
        if (ex.detectors[i].parity) s.push_back(i);
    }
    return s;
}

EngineOptions with_faults(const ElementaryFault& f) {
    EngineOptions opts;
    for (std::size_t k = 0; k < f.qubits.size(); ++k) {
        ForcedFault ff;
        ff.op_index = f.op_index;
        ff.qubit = f.qubits[k];
        switch (f.paulis[k]) {
            case 'X': ff.kind = ForcedFault::Kind::kX; break;
            case 'Y': ff.kind = ForcedFault::Kind::kY; break;
            case 'Z': ff.kind = ForcedFault::Kind::kZ; break;
            case 'M': ff.kind = ForcedFault::Kind::kFlipRecord; break;
            default: continue;
        }
        opts.faults.push_back(ff);
    }
    return opts;
}

TEST(Detectors, NoiselessShotIsQuiet) {
    const Circuit c = gen_walking_repcode({5, 4, true, 0});
    const auto layout = RepCodeLayout::from_circuit(c);
    const auto ex = extract_detectors(run_shot(c, NoiseModel::noiseless(), 1), layout);
    ASSERT_EQ(ex.detectors.size(), layout.num_detectors());
    for (const auto& d : ex.detectors) {
        EXPECT_EQ(d.parity, 0);
        EXPECT_FALSE(d.loss_touched);
    }
    EXPECT_TRUE(ex.lost.empty());
}

TEST(Detectors, EveryFaultMatchesTheEngine) {
    // The frame-propagated fault table against direct injection in the tableau engine.
    for (int d : {3, 5}) {
        for (bool sens : {false, true}) {
            const Circuit c = gen_walking_repcode({d, 3, sens, 0});
            const auto layout = RepCodeLayout::from_circuit(c);
            const auto g = build_matching_graph(c, NoiseModel::defaults());
            for (const auto& f : g.faults()) {
                const auto rec = run_shot(c, NoiseModel::noiseless(), 5, with_faults(f));
                const auto ex = extract_detectors(rec, layout);
                std::vector<std::size_t> expect = f.detectors;
                std::sort(expect.begin(), expect.end());
                ASSERT_EQ(syndrome_of(ex), expect) << "fault at op " << f.op_index << " " << f.paulis;
                ASSERT_EQ(ex.observable != layout.expected_observable(), f.flips_observable);
            }
        }
    }
}

TEST(Detectors, SingleBulkXFlipsTwoTimeAdjacentDetectors) {
    const Circuit c = gen_walking_repcode({5, 5, false, 0});
    const auto g = build_matching_graph(c, NoiseModel::defaults());
    int seen = 0;
    for (const auto& f : g.faults()) {
        if (f.paulis != "X" || f.label != FaultLabel::kSpacelike || f.detectors.size() != 2) continue;
        const auto& a = g.layout();
        const int c0 = static_cast<int>(f.detectors[0] / a.distance), c1 = static_cast<int>(f.detectors[1] / a.distance);
        EXPECT_LE(std::abs(c0 - c1), 1);
        ++seen;
    }
    EXPECT_GT(seen, 0);
}

TEST(Detectors, LostMeasurementRandomizesItsDetectors) {
    const Circuit c = gen_walking_repcode({3, 4, false, 0});
    const auto layout = RepCodeLayout::from_circuit(c);
    // MCM of cycle 2 is in the bulk.
    std::size_t m = 0;
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
        if (c.ops[i].code == Opcode::kMcm && c.ops[i].cycle == 2) m = i;
    }
    ASSERT_GT(m, 0U);
    const uint32_t q = c.ops[m].targets[0];
    EngineOptions opts;
    opts.faults = {{m, q, ForcedFault::Kind::kLoss, 1}};
    const auto ex = extract_detectors(run_shot(c, NoiseModel::noiseless(), 2, opts), layout);
    ASSERT_EQ(ex.lost.size(), 1U);
    const MeasRef lost = ex.lost[0];
    std::set<std::size_t> expected;
    for (const auto& def : layout.detectors()) {
        if (std::find(def.measurements.begin(), def.measurements.end(), lost) != def.measurements.end()) {
            expected.insert(layout.detector_index(def.check, def.cycle));
        }
    }
    EXPECT_EQ(expected.size(), 2U);
    std::set<std::size_t> flagged;
    for (std::size_t i = 0; i < ex.detectors.size(); ++i) {
        if (ex.detectors[i].randomized) {
            EXPECT_TRUE(ex.detectors[i].loss_touched);
            flagged.insert(i);
        }
    }
    EXPECT_EQ(flagged, expected);
}

TEST(MatchingGraph, CountsFollowTheRingStructure) {
    // d in-layer edges per layer, d timelike and d diagonal edges per cycle.
    for (int d : {3, 5, 7, 9}) {
        for (int cyc : {1, 2, d}) {
            const auto g = build_matching_graph(gen_walking_repcode({d, cyc, false, 0}), NoiseModel::defaults());
            EXPECT_EQ(g.num_detectors(), static_cast<std::size_t>(d * (cyc + 1)));
            EXPECT_EQ(g.edges().size(), static_cast<std::size_t>(d * (cyc + 1) + 2 * d * cyc));
        }
    }
    EXPECT_EQ(build_matching_graph(gen_walking_repcode({3, 3, false, 0}), NoiseModel::defaults()).edges().size(), 30U);
    EXPECT_EQ(build_matching_graph(gen_walking_repcode({5, 5, false, 0}), NoiseModel::defaults()).edges().size(), 80U);
    EXPECT_EQ(build_matching_graph(gen_walking_repcode({7, 7, false, 0}), NoiseModel::defaults()).edges().size(), 154U);
}

TEST(MatchingGraph, FaultsFlipAtMostTwoDetectors) {
    for (int d : {3, 5, 7, 9}) {
        for (bool sens : {false, true}) {
            const auto g = build_matching_graph(gen_walking_repcode({d, 3, sens, 0}), NoiseModel::defaults());
            for (const auto& f : g.faults()) EXPECT_LE(f.detectors.size(), 2U);
        }
    }
}

TEST(MatchingGraph, EdgesAreTheDistinctFaultPairs) {
    const auto g = build_matching_graph(gen_walking_repcode({5, 3, true, 0}), NoiseModel::defaults());
    std::set<std::pair<std::size_t, std::size_t>> from_faults, from_edges;
    for (const auto& f : g.faults()) {
        if (f.detectors.size() != 2 || f.p <= 0.0) continue;
        from_faults.insert(std::minmax(f.detectors[0], f.detectors[1]));
    }
    for (const auto& e : g.edges()) {
        from_edges.insert(std::minmax(e.u, e.v));
        EXPECT_GT(e.p, 0.0);
        EXPECT_LE(e.p, 0.5);
    }
    EXPECT_EQ(from_faults, from_edges);
}

TEST(MatchingGraph, RingSymmetry) {
    // Edges related by a rotation of the check index carry the same probability.
    const int d = 5;
    const auto g = build_matching_graph(gen_walking_repcode({d, 4, false, 0}), NoiseModel::defaults());
    std::map<std::tuple<int, int, int>, std::vector<double>> groups;
    for (const auto& e : g.edges()) {
        const int cu = static_cast<int>(e.u) / d, cv = static_cast<int>(e.v) / d;
        const int ku = static_cast<int>(e.u) % d, kv = static_cast<int>(e.v) % d;
        int off = ((kv - ku) % d + d) % d;
        if (cu == cv) off = std::min(off, d - off);
        groups[{cu, cv, off}].push_back(e.p);
    }
    for (const auto& [key, ps] : groups) {
        for (double p : ps) EXPECT_NEAR(p, ps.front(), 1e-15);
    }
}

TEST(EdgeWeight, Formula) {
    EXPECT_DOUBLE_EQ(edge_weight(0.5), 0.0);
    EXPECT_NEAR(edge_weight(0.01), std::log(99.0), 1e-12);
    EXPECT_EQ(quantize_weight(0.0), 0);
    EXPECT_EQ(quantize_weight(1.0), static_cast<int64_t>(kWeightScale));
    const auto g = build_matching_graph(gen_walking_repcode({3, 2, false, 0}), NoiseModel::defaults());
    LossOverlay ov;
    ov.p_override[0] = 0.5;
    EXPECT_EQ(g.edge_cost(0, ov), 0);
    EXPECT_EQ(g.edge_cost(0, {}), quantize_weight(edge_weight(g.edges()[0].p)));
}

TEST(LossEdits, NoLossNoOverlay) {
    const Circuit c = gen_walking_repcode({3, 3, false, 0});
    const auto g = build_matching_graph(c, NoiseModel::defaults());
    const auto ex = extract_detectors(run_shot(c, NoiseModel::noiseless(), 3), g.layout());
    EXPECT_TRUE(apply_loss_edits(g, ex).empty());
}

TEST(LossEdits, LostAncillaZeroesTheReadoutEdge) {
    const Circuit c = gen_walking_repcode({5, 4, false, 0});
    const auto g = build_matching_graph(c, NoiseModel::defaults());
    std::size_t m = 0;
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
        if (c.ops[i].code == Opcode::kMcm && c.ops[i].cycle == 2) m = i;
    }
    EngineOptions opts;
    opts.faults = {{m, c.ops[m].targets[1], ForcedFault::Kind::kLoss, 1}};
    const auto ex = extract_detectors(run_shot(c, NoiseModel::noiseless(), 4, opts), g.layout());
    const auto ov = apply_loss_edits(g, ex);
    std::vector<std::size_t> touched;
    for (std::size_t i = 0; i < ex.detectors.size(); ++i) {
        if (ex.detectors[i].loss_touched) touched.push_back(i);
    }
    ASSERT_EQ(touched.size(), 2U);
    std::size_t timelike = 0;
    for (const auto& [e, p] : ov.p_override) {
        EXPECT_DOUBLE_EQ(p, 0.5);
        const auto& ed = g.edges()[e];
        if (ed.labels & static_cast<uint8_t>(FaultLabel::kTimelike)) {
            if (std::minmax(ed.u, ed.v) == std::minmax(touched[0], touched[1])) ++timelike;
        }
    }
    EXPECT_EQ(timelike, 1U);
    // Loss-correlated partner edges of the lost atom are zeroed too.
    std::size_t correlated = 0;
    for (const auto& [e, p] : ov.p_override) {
        correlated += (g.edges()[e].labels & static_cast<uint8_t>(FaultLabel::kLossCorrelated)) ? 1 : 0;
    }
    EXPECT_GT(correlated, 0U);
}

TEST(LossEdits, NeverIncreaseMatchingWeight) {
    const Circuit c = gen_walking_repcode({5, 5, false, 0});
    const auto g = build_matching_graph(c, NoiseModel::defaults());
    const NoiseModel noisy = NoiseModel::defaults().scaled(4.0);
    int with_loss = 0;
    for (uint64_t s = 0; s < 400; ++s) {
        const auto ex = extract_detectors(run_shot(c, noisy, derive_seed(8, s)), g.layout());
        const auto ov = apply_loss_edits(g, ex);
        if (ov.empty()) continue;
        ++with_loss;
        const auto syn = syndrome_of(ex);
        EXPECT_LE(decode(g, ov, syn).weight, decode(g, {}, syn).weight);
    }
    EXPECT_GT(with_loss, 20);
}

TEST(Decode, EmptySyndrome) {
    const auto g = build_matching_graph(gen_walking_repcode({3, 3, false, 0}), NoiseModel::defaults());
    const auto r = decode(g, {}, {});
    EXPECT_FALSE(r.flip);
    EXPECT_EQ(r.weight, 0);
    EXPECT_TRUE(r.pairs.empty());
}

TEST(Decode, SingleFaultIsCorrected) {
    const Circuit c = gen_walking_repcode({5, 5, false, 0});
    const auto g = build_matching_graph(c, NoiseModel::defaults());
    int checked = 0;
    for (const auto& f : g.faults()) {
        if (f.detectors.size() != 2 || f.label == FaultLabel::kLossCorrelated) continue;
        const auto r = decode(g, {}, f.detectors);
        EXPECT_EQ(r.flip, f.flips_observable) << "op " << f.op_index << " " << f.paulis;
        ++checked;
    }
    EXPECT_GT(checked, 100);
    // End to end through the engine for single X faults.
    for (const auto& f : g.faults()) {
        if (f.paulis != "X") continue;
        const auto rec = run_shot(c, NoiseModel::noiseless(), 1, with_faults(f));
        EXPECT_FALSE(decode_shot(g, rec).failure);
    }
}

TEST(Decode, MatchesBruteForceOnRandomSyndromes) {
    CounterRng rng(31);
    for (int d : {3, 5, 7}) {
        const auto g = build_matching_graph(gen_walking_repcode({d, d, d == 5, 0}), NoiseModel::defaults());
        for (int trial = 0; trial < 60; ++trial) {
            std::vector<std::size_t> syn;
            const std::size_t k = 2 * (1 + rng.below(6));
            std::vector<std::size_t> all(g.num_detectors());
            std::iota(all.begin(), all.end(), 0);
            std::shuffle(all.begin(), all.end(), rng);
            syn.assign(all.begin(), all.begin() + static_cast<long>(std::min(k, all.size() - all.size() % 2)));
            LossOverlay ov;
            for (std::size_t e = 0; e < g.edges().size(); ++e) {
                if (rng.bernoulli(0.1)) ov.p_override[e] = 0.5;
            }
            EXPECT_EQ(decode(g, ov, syn).weight, brute_force_weight(g, ov, syn));
            EXPECT_EQ(decode(g, {}, syn).weight, brute_force_weight(g, {}, syn));
        }
    }
}

TEST(Decode, UnifiedShotDecodingIsDeterministic) {
    const Circuit c = gen_walking_repcode({3, 3, true, 0});
    const auto g = build_matching_graph(c, NoiseModel::defaults());
    const auto rec = run_shot(c, NoiseModel::defaults().scaled(5.0), 77);
    const auto a = decode_shot(g, rec), b = decode_shot(g, rec);
    EXPECT_EQ(a.failure, b.failure);
    EXPECT_EQ(a.syndrome_weight, b.syndrome_weight);
}

TEST(FailureRate, TableValues) {
    std::vector<ShotDecode> shots(17820);
    for (int i = 0; i < 25; ++i) shots[i].failure = true;
    const auto r = logical_failure_rate(shots);
    EXPECT_NEAR(r.rate, 1.403e-3, 5e-7);
    EXPECT_LT(r.ci.low, r.rate);
    EXPECT_GT(r.ci.high, r.rate);
    std::vector<ShotDecode> sens(11700);
    for (int i = 0; i < 30; ++i) sens[i].failure = true;
    EXPECT_NEAR(logical_failure_rate(sens).rate, 2.564e-3, 5e-7);
    const auto zero = logical_failure_rate(std::vector<ShotDecode>(500));
    EXPECT_EQ(zero.rate, 0.0);
    EXPECT_GT(zero.ci.high, 0.0);
}

}  // namespace
}  // namespace zonesim
