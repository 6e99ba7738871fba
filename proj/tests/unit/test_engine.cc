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

#include <cmath>
#include <sstream>

#include "zonesim/decoder.h"
#include "zonesim/engine.h"
#include "zonesim/experiment.h"
#include "zonesim/qec_circuits.h"

namespace zonesim {
namespace {

Circuit single_mz_qubit(bool flip) {
    Circuit c;
    c.qubits = {{0, QubitRole::kData, {ZoneKind::kMeasurement, 0}}};
    if (flip) c.ops.push_back(make_x(0));
    c.ops.push_back(make_mcm({0}, 0));
    return c;
}

std::size_t first_op(const Circuit& c, Opcode code) {
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
        if (c.ops[i].code == code) return i;
    }
    ADD_FAILURE() << "opcode not found";
    return 0;
}

TEST(Engine, NoiselessMcmReadsState) {
    const NoiseModel nl = NoiseModel::noiseless();
    for (bool flip : {false, true}) {
        const auto rec = run_shot(single_mz_qubit(flip), nl, 1);
        ASSERT_EQ(rec.outcomes.size(), 1U);
        EXPECT_EQ(rec.outcomes[0].value, flip ? Outcome::kOne : Outcome::kZero);
        EXPECT_EQ(rec.outcomes[0].cycle, 0);
    }
}

TEST(Engine, ForcedLossReportsLostAndIsRefilled) {
    const Circuit c = gen_walking_repcode({3, 2, false, 0});
    const std::size_t m = first_op(c, Opcode::kMcm);
    const uint32_t q = c.ops[m].targets[0];
    EngineOptions opts;
    opts.faults = {{m, q, ForcedFault::Kind::kLoss, 1}};
    const auto rec = run_shot(c, NoiseModel::noiseless(), 3, opts);
    bool saw_lost = false;
    for (const auto& o : rec.outcomes) {
        if (o.op_index == m && o.qubit == q) saw_lost = o.value == Outcome::kLost;
    }
    EXPECT_TRUE(saw_lost);
    bool filled = false;
    for (const auto& f : rec.fills) {
        if (f.qubit == q && f.op_index > m) filled = f.planned && f.success;
    }
    EXPECT_TRUE(filled);
    EXPECT_EQ(rec.reservoir_remaining, opts.initial_reservoir - 1);
    ASSERT_EQ(rec.losses.size(), 1U);
    EXPECT_EQ(rec.losses[0].cause, LossCause::kInjected);
}

TEST(Engine, LossIsAbsorbing) {
    Circuit c;
    c.qubits = {{0, QubitRole::kData, {ZoneKind::kMeasurement, 0}}, {1, QubitRole::kData, {ZoneKind::kMeasurement, 1}}};
    c.ops = {make_x(0), make_cz(0, 1), make_mcm({0, 1}, 0), make_sx(0), make_mcm({0, 1}, 1)};
    EngineOptions opts;
    opts.faults = {{1, 0, ForcedFault::Kind::kLoss, 1}};
    const auto rec = run_shot(c, NoiseModel::noiseless(), 5, opts);
    ASSERT_EQ(rec.outcomes.size(), 4U);
    EXPECT_EQ(rec.outcomes[0].value, Outcome::kLost);
    EXPECT_EQ(rec.outcomes[2].value, Outcome::kLost);
    EXPECT_EQ(rec.outcomes[1].value, Outcome::kZero);
    EXPECT_EQ(rec.outcomes[3].value, Outcome::kZero);
}

TEST(Engine, ShotsAreDeterministic) {
    const Circuit c = gen_walking_repcode({5, 5, true, 0});
    const NoiseModel noise = NoiseModel::defaults().scaled(3.0);
    for (uint64_t s = 0; s < 20; ++s) EXPECT_EQ(run_shot(c, noise, s), run_shot(c, noise, s));
}

TEST(Engine, BatchMatchesIndividualShots) {
    const Circuit c = gen_distillation({true, BellBasis::kZZ, 5, false});
    const NoiseModel noise = NoiseModel::defaults();
    const auto batch = run_batch(c, noise, 2, 77);
    ASSERT_EQ(batch.size(), 2U);
    EXPECT_EQ(batch[0], run_shot(c, noise, derive_seed(77, 0)));
    EXPECT_EQ(batch[1], run_shot(c, noise, derive_seed(77, 1)));
}

TEST(Engine, BatchIndependentOfThreadCount) {
    const Circuit c = gen_walking_repcode({3, 3, false, 0});
    const NoiseModel noise = NoiseModel::defaults().scaled(2.0);
    std::ostringstream one, four;
    run_batch_jsonl(c, noise, 200, 9, one, 1);
    run_batch_jsonl(c, noise, 200, 9, four, 4);
    EXPECT_EQ(one.str(), four.str());
    EXPECT_EQ(run_batch(c, noise, 64, 3, 1), run_batch(c, noise, 64, 3, 3));
}

TEST(Engine, ShotRecordJsonRoundTrip) {
    const Circuit c = gen_distillation({true, BellBasis::kXX, 20, false});
    const auto rec = run_shot(c, NoiseModel::defaults().scaled(5.0), 12);
    EXPECT_EQ(ShotRecord::from_json(rec.to_json()), rec);
}

TEST(Engine, NoiselessRepcodeHasQuietDetectors) {
    for (bool sens : {false, true}) {
        const Circuit c = gen_walking_repcode({3, 3, sens, 0});
        const auto layout = RepCodeLayout::from_circuit(c);
        for (const auto& rec : run_batch(c, NoiseModel::noiseless(), 50, 4)) {
            const auto ex = extract_detectors(rec, layout);
            for (const auto& d : ex.detectors) ASSERT_EQ(d.parity, 0) << d.check << "@" << d.cycle;
            EXPECT_EQ(ex.observable, layout.expected_observable());
        }
    }
}

TEST(Engine, NoiselessDistillationNeedsNoRetries) {
    for (bool enc : {false, true}) {
        for (BellBasis b : {BellBasis::kXX, BellBasis::kYY, BellBasis::kZZ}) {
            const DistillSpec spec{enc, b, 20, false};
            for (const auto& rec : run_batch(gen_distillation(spec), NoiseModel::noiseless(), 30, 8)) {
                EXPECT_EQ(rec.attempts, 1);
                ASSERT_EQ(rec.heralds.size(), 1U);
                EXPECT_TRUE(rec.heralds[0].passed);
                EXPECT_EQ(score_distill_shot(rec, spec), DistillVerdict::kSuccess);
            }
        }
    }
}

TEST(Engine, InjectedBitFlipFailsTheHerald) {
    const DistillSpec spec{true, BellBasis::kZZ, 20, false};
    const Circuit c = gen_distillation(spec);
    const auto a = distill_block(spec, 0);
    const auto b = distill_block(spec, 1);
    // First CZ of the transversal A -> B CNOT.
    std::size_t cz = 0;
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
        const auto& op = c.ops[i];
        if (op.code == Opcode::kCz && op.targets == std::vector<uint32_t>{a[0], b[0]}) {
            cz = i;
            break;
        }
    }
    ASSERT_GT(cz, 3U);
    EngineOptions opts;
    opts.faults = {{cz - 3, a[1], ForcedFault::Kind::kX, 1}};
    const auto rec = run_shot(c, NoiseModel::noiseless(), 21, opts);
    ASSERT_GE(rec.heralds.size(), 2U);
    EXPECT_FALSE(rec.heralds[0].passed);
    EXPECT_TRUE(rec.heralds[1].passed);
    EXPECT_EQ(rec.attempts, 2);
    EXPECT_EQ(score_distill_shot(rec, spec), DistillVerdict::kSuccess);

    // A phase flip is caught by the other ancilla block.
    opts.faults = {{cz - 3, a[2], ForcedFault::Kind::kZ, 1}};
    EXPECT_FALSE(run_shot(c, NoiseModel::noiseless(), 21, opts).heralds[0].passed);
}

TEST(Engine, NoiselessGerbAlwaysReturns) {
    const Circuit c = gen_gerb({50, 1, 4});
    std::size_t good = 0;
    const std::size_t shots = 100000;
    for (const auto& rec : run_batch(c, NoiseModel::noiseless(), shots, 2)) {
        bool all_one = true;
        for (const auto& [q, v] : rec.final_measurements()) all_one &= v == Outcome::kOne;
        good += all_one ? 1 : 0;
    }
    EXPECT_EQ(good, shots);
}

TEST(Engine, SymplecticCheckOnEveryOp) {
    EngineOptions opts;
    opts.check_symplectic = true;
    const NoiseModel noise = NoiseModel::defaults().scaled(4.0);
    EXPECT_NO_THROW(run_batch(gen_walking_repcode({5, 6, true, 0}), noise, 20, 1, 1, opts));
    EXPECT_NO_THROW(run_batch(gen_distillation({true, BellBasis::kYY, 20, true}), noise, 20, 1, 1, opts));
}

TEST(Engine, StructuralErrors) {
    Circuit c;
    c.qubits = {{0, QubitRole::kData, {ZoneKind::kRegister, 0}}};
    c.ops = {make_x(4)};
    EXPECT_THROW(run_shot(c, NoiseModel::noiseless(), 0), StructuralError);
}

// Frequencies of the imaging channels over 10^6 events, within 4 binomial sigma.
void expect_rate(uint64_t hits, uint64_t n, double p, const char* what) {
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
    EXPECT_NEAR(static_cast<double>(hits) / static_cast<double>(n), p, 4 * sigma) << what;
}

uint64_t count_reads(const NoiseModel& noise, bool prepare_one, Outcome wanted, uint64_t n, uint64_t* present) {
    LossyStabilizerState s(1, 1234);
    const QubitMap map = QubitMap::identity(1);
    uint64_t hits = 0;
    *present = 0;
    for (uint64_t i = 0; i < n; ++i) {
        if (!s.present(0)) s.replace(0);
        CounterRng& rng = s.measurement_rng();
        if (s.tableau().measure_z(0, rng).value != prepare_one) s.tableau().x(0);
        const Outcome o = measure_mcm(s, {0}, {}, noise, map)[0];
        hits += o == wanted ? 1 : 0;
        *present += o != Outcome::kLost ? 1 : 0;
    }
    return hits;
}

TEST(Engine, ReadoutZeroToOneFrequency) {
    NoiseModel noise = NoiseModel::defaults();
    noise.p_distinguish = 0.0;  // isolate the spin-flip channel
    uint64_t present = 0;
    const uint64_t ones = count_reads(noise, false, Outcome::kOne, 1000000, &present);
    const double p = noise.p_flip_0to1;
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(present));
    EXPECT_NEAR(static_cast<double>(ones) / static_cast<double>(present), p, 3 * sigma);
}

TEST(Engine, ImagingChannelCalibration) {
    const NoiseModel def = NoiseModel::defaults();
    const uint64_t n = 1000000;
    uint64_t present = 0;
    {
        NoiseModel m = NoiseModel::noiseless();
        m.p_flip_1to0 = def.p_flip_1to0;
        expect_rate(count_reads(m, true, Outcome::kZero, n, &present), present, m.p_flip_1to0, "1->0");
    }
    {
        NoiseModel m = NoiseModel::noiseless();
        m.p_distinguish = def.p_distinguish;
        expect_rate(count_reads(m, false, Outcome::kOne, n, &present), present, m.p_distinguish, "distinguish");
    }
    {
        // Loss of a dark atom: background on both images plus one bright image.
        NoiseModel m = NoiseModel::noiseless();
        m.p_mcm_loss_bright = def.p_mcm_loss_bright;
        m.p_background_loss_per_image = def.p_background_loss_per_image;
        const uint64_t lost = count_reads(m, false, Outcome::kLost, n, &present);
        const double pb = m.p_background_loss_per_image, pl = m.p_mcm_loss_bright;
        expect_rate(lost, n, 1 - (1 - pb) * (1 - pl - pb), "dark loss");
        const uint64_t lost1 = count_reads(m, true, Outcome::kLost, n, &present);
        expect_rate(lost1, n, 1 - (1 - pl - pb) * (1 - pl - pb), "bright loss");
    }
    {
        // Readout composition with all defaults on a |0> atom.
        const double pf = def.p_flip_0to1, pd = def.p_distinguish;
        expect_rate(count_reads(def, false, Outcome::kOne, n, &present), present, pf * (1 - pd) + (1 - pf) * pd,
                    "composed 0->1");
    }
}

TEST(Engine, RegisterChannelsPerMcm) {
    NoiseModel m = NoiseModel::noiseless();
    m.p_register_loss_per_mcm = NoiseModel::defaults().p_register_loss_per_mcm;
    LossyStabilizerState s(2, 99);
    const QubitMap map = QubitMap::identity(2);
    const uint64_t n = 1000000;
    uint64_t lost = 0;
    for (uint64_t i = 0; i < n; ++i) {
        if (!s.present(1)) s.replace(1);
        measure_mcm(s, {0}, {1}, m, map);
        lost += s.present(1) ? 0 : 1;
    }
    expect_rate(lost, n, m.p_register_loss_per_mcm, "register loss");
}

}  // namespace
}  // namespace zonesim
