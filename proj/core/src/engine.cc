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

#include "zonesim/engine.h"

#include <algorithm>
#include <map>
#include <set>
#include <thread>

namespace zonesim {

char outcome_char(Outcome o) {
    switch (o) {
        case Outcome::kZero:
            return '0';
        case Outcome::kOne:
            return '1';
        case Outcome::kLost:
            break;
    }
    return 'L';
}

std::string_view loss_cause_name(LossCause c) {
    switch (c) {
        case LossCause::kCz:
            return "cz";
        case LossCause::kMcmImage:
            return "mcm_image";
        case LossCause::kRegisterMcm:
            return "register_mcm";
        case LossCause::kIdle:
            return "idle";
        case LossCause::kRegularImage:
            return "regular_image";
        case LossCause::kInjected:
            break;
    }
    return "injected";
}

LossyStabilizerState::LossyStabilizerState(std::size_t n, uint64_t seed)
    : tableau_(n),
      present_(n, 1),
      leaked_(n, 0),
      frame_(n),
      meas_rng_(seed, kMeasurementStream),
      noise_rng_(seed, kNoiseStream) {}

void LossyStabilizerState::lose(std::size_t q) {
    if (!present_[q]) return;
    // Tracing out: the outcome is drawn from the noise stream and discarded.
    tableau_.measure_z(q, noise_rng_);
    present_[q] = 0;
    leaked_[q] = 0;
    frame_.clear(q);
}

void LossyStabilizerState::replace(std::size_t q) {
    if (present_[q]) {
        throw std::logic_error("replacing a qubit that is still present");
    }
    if (tableau_.measure_z_forced(q, false).value) tableau_.x(q);
    present_[q] = 1;
    leaked_[q] = 0;
}

QubitMap QubitMap::identity(std::size_t n) {
    QubitMap m;
    m.slot_.resize(n);
    for (std::size_t i = 0; i < n; ++i) m.slot_[i] = i;
    return m;
}

QubitMap QubitMap::of(const Circuit& circuit) {
    QubitMap m;
    for (std::size_t i = 0; i < circuit.qubits.size(); ++i) {
        const uint32_t q = circuit.qubits[i].index;
        if (q >= m.slot_.size()) m.slot_.resize(q + 1, kNone);
        m.slot_[q] = i;
    }
    return m;
}

std::size_t QubitMap::operator()(uint32_t q) const {
    if (q >= slot_.size() || slot_[q] == kNone) {
        throw StructuralError("unknown qubit " + std::to_string(q));
    }
    return slot_[q];
}

void EventSink::lost(uint32_t qubit, LossCause cause) const {
    if (losses) losses->push_back({op_index, qubit, cause, attempt});
}

namespace {

constexpr char kPaulis[3] = {'X', 'Y', 'Z'};

void apply_pauli(LossyStabilizerState& s, std::size_t q, char p) {
    if (p != 'I') s.tableau().apply_pauli(q, p);
}

void depolarize_1q(LossyStabilizerState& s, std::size_t q, double p) {
    if (!s.noise_rng().bernoulli(p)) return;
    apply_pauli(s, q, kPaulis[s.noise_rng().below(3)]);
}

void depolarize_2q(LossyStabilizerState& s, std::size_t a, std::size_t b, double p) {
    if (!s.noise_rng().bernoulli(p)) return;
    static constexpr char kAll[4] = {'I', 'X', 'Y', 'Z'};
    const uint64_t k = 1 + s.noise_rng().below(15);
    apply_pauli(s, a, kAll[k % 4]);
    apply_pauli(s, b, kAll[k / 4]);
}

/// Samples the four-step imaging model for one present atom and returns the
/// recorded value. `p_bright` is the loss per bright image.
Outcome image_atom(LossyStabilizerState& s, std::size_t q, double p_bright, double p_background,
                   double p_distinguish, const NoiseModel& noise, bool* lost_flag) {
    CounterRng& rng = s.noise_rng();
    *lost_flag = false;
    if (s.leaked(q)) {
        // Unconverted leakage images like a random present atom.
        const bool bit = rng.bernoulli(0.5);
        return bit ? Outcome::kOne : Outcome::kZero;
    }
    bool value = s.tableau().measure_z(q, s.measurement_rng()).value;
    if (value && rng.bernoulli(noise.p_flip_1to0)) {
        value = false;
        s.tableau().x(q);
    } else if (!value && rng.bernoulli(noise.p_flip_0to1)) {
        value = true;
        s.tableau().x(q);
    }
    const bool reported = value ^ rng.bernoulli(p_distinguish);
    // First image is bright only for |1>; the second, after pumping to |1>, always.
    const bool lost = rng.bernoulli((value ? p_bright : 0.0) + p_background) || rng.bernoulli(p_bright + p_background);
    if (lost) {
        *lost_flag = true;
        return Outcome::kLost;
    }
    return (reported ^ s.frame().x(q)) ? Outcome::kOne : Outcome::kZero;
}

}  // namespace

void apply_gate(LossyStabilizerState& state, const NativeOp& op, const NoiseModel& noise, const QubitMap& map,
                const EventSink& sink) {
    switch (op.code) {
        case Opcode::kRz: {
            if (!op.angle.is_clifford()) {
                throw StructuralError("non-Clifford RZ reached the stabilizer engine");
            }
            const std::size_t q = map(op.targets.at(0));
            if (!state.active(q)) return;
            state.tableau().rz_quarter(q, op.angle.quarter());
            for (int k = 0; k < op.angle.quarter(); ++k) state.frame().s(q);
            return;
        }
        case Opcode::kSx:
        case Opcode::kX: {
            const std::size_t q = map(op.targets.at(0));
            if (!state.active(q)) return;
            if (op.code == Opcode::kSx) {
                state.tableau().sx(q);
                state.frame().sx(q);
            } else {
                state.tableau().x(q);
            }
            depolarize_1q(state, q, noise.p_1q_pauli);
            return;
        }
        case Opcode::kCz: {
            if (op.targets.size() != 2 || op.targets[0] == op.targets[1]) {
                throw StructuralError("CZ needs two distinct targets");
            }
            const std::size_t a = map(op.targets[0]);
            const std::size_t b = map(op.targets[1]);
            const bool act_a = state.active(a);
            const bool act_b = state.active(b);
            CounterRng& rng = state.noise_rng();
            if (act_a && act_b) {
                state.tableau().cz(a, b);
                state.frame().cz(a, b);
                depolarize_2q(state, a, b, noise.p_cz_pauli);
                const bool lose_a = rng.bernoulli(noise.p_cz_loss);
                const bool lose_b = rng.bernoulli(noise.p_cz_loss);
                if (lose_a) {
                    state.lose(a);
                    sink.lost(op.targets[0], LossCause::kCz);
                }
                if (lose_b) {
                    state.lose(b);
                    sink.lost(op.targets[1], LossCause::kCz);
                }
                if (lose_a != lose_b) {
                    const std::size_t partner = lose_a ? b : a;
                    if (rng.bernoulli(noise.p_loss_partner_z)) state.tableau().z(partner);
                }
                if (state.active(a) && rng.bernoulli(noise.p_leak_residual)) state.leak(a);
                if (state.active(b) && rng.bernoulli(noise.p_leak_residual)) state.leak(b);
            } else if (act_a != act_b) {
                const std::size_t partner = act_a ? a : b;
                if (rng.bernoulli(noise.p_loss_partner_z)) state.tableau().z(partner);
            }
            return;
        }
        default:
            throw StructuralError("apply_gate called with non-gate opcode " + std::string(opcode_name(op.code)));
    }
}

std::vector<Outcome> measure_mcm(LossyStabilizerState& state, const std::vector<uint32_t>& targets,
                                 const std::vector<uint32_t>& register_qubits, const NoiseModel& noise,
                                 const QubitMap& map, const EventSink& sink) {
    std::vector<Outcome> out;
    out.reserve(targets.size());
    for (uint32_t t : targets) {
        const std::size_t q = map(t);
        if (!state.present(q)) {
            out.push_back(Outcome::kLost);
            continue;
        }
        bool lost = false;
        const Outcome v = image_atom(state, q, noise.p_mcm_loss_bright, noise.p_background_loss_per_image,
                                     noise.p_distinguish, noise, &lost);
        if (lost) {
            state.lose(q);
            sink.lost(t, LossCause::kMcmImage);
        }
        out.push_back(v);
    }
    CounterRng& rng = state.noise_rng();
    for (uint32_t r : register_qubits) {
        const std::size_t q = map(r);
        if (!state.present(q)) continue;
        if (rng.bernoulli(noise.p_register_loss_per_mcm)) {
            state.lose(q);
            sink.lost(r, LossCause::kRegisterMcm);
        } else if (rng.bernoulli(noise.p_register_dephase_per_mcm) && state.active(q)) {
            state.tableau().z(q);
        }
    }
    return out;
}

std::vector<Outcome> measure_regular(LossyStabilizerState& state, const std::vector<uint32_t>& targets,
                                     const NoiseModel& noise, const QubitMap& map, const EventSink& sink) {
    std::vector<Outcome> out;
    out.reserve(targets.size());
    for (uint32_t t : targets) {
        const std::size_t q = map(t);
        if (!state.present(q)) {
            out.push_back(Outcome::kLost);
            continue;
        }
        bool lost = false;
        const Outcome v = image_atom(state, q, noise.p_regular_loss_bright, noise.p_background_loss_per_image,
                                     noise.p_distinguish_regular, noise, &lost);
        if (lost) {
            state.lose(q);
            sink.lost(t, LossCause::kRegularImage);
        }
        out.push_back(v);
    }
    return out;
}

std::vector<std::pair<uint32_t, Outcome>> ShotRecord::final_measurements() const {
    std::map<uint32_t, Outcome> terminal;
    for (const auto& o : outcomes) {
        if (o.terminal) terminal[o.qubit] = o.value;
    }
    if (terminal.empty() && !outcomes.empty()) {
        // Fall back to the last MCM op.
        const std::size_t last_op = outcomes.back().op_index;
        const int last_attempt = outcomes.back().attempt;
        for (const auto& o : outcomes) {
            if (o.op_index == last_op && o.attempt == last_attempt) terminal[o.qubit] = o.value;
        }
    }
    return {terminal.begin(), terminal.end()};
}

bool operator==(const ShotRecord& a, const ShotRecord& b) { return a.to_json() == b.to_json(); }

nlohmann::json ShotRecord::to_json() const {
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& o : outcomes) {
        outs.push_back({o.op_index, o.qubit, static_cast<int>(o.value), o.cycle.value_or(-1), o.attempt,
                        o.terminal ? 1 : 0});
    }
    nlohmann::json fills_json = nlohmann::json::array();
    for (const auto& f : fills) {
        fills_json.push_back({f.op_index, f.qubit, f.attempt, f.planned ? 1 : 0, f.success ? 1 : 0,
                              f.source ? f.source->index : -1});
    }
    nlohmann::json heralds_json = nlohmann::json::array();
    for (const auto& h : heralds) heralds_json.push_back({h.op_index, h.attempt, h.passed ? 1 : 0});
    nlohmann::json losses_json = nlohmann::json::array();
    for (const auto& l : losses) {
        losses_json.push_back({l.op_index, l.qubit, std::string(loss_cause_name(l.cause)), l.attempt});
    }
    return {{"schema", "zonesim.shot/1"},
            {"seed", seed},
            {"attempts", attempts},
            {"herald_exhausted", herald_exhausted},
            {"reservoir_remaining", reservoir_remaining},
            {"outcomes", outs},
            {"fills", fills_json},
            {"heralds", heralds_json},
            {"losses", losses_json}};
}

ShotRecord ShotRecord::from_json(const nlohmann::json& j) {
    if (j.value("schema", "") != "zonesim.shot/1") {
        throw std::invalid_argument("not a zonesim.shot/1 record");
    }
    ShotRecord r;
    r.seed = j.at("seed").get<uint64_t>();
    r.attempts = j.at("attempts").get<int>();
    r.herald_exhausted = j.at("herald_exhausted").get<bool>();
    r.reservoir_remaining = j.at("reservoir_remaining").get<int>();
    for (const auto& o : j.at("outcomes")) {
        OutcomeEntry e;
        e.op_index = o.at(0).get<std::size_t>();
        e.qubit = o.at(1).get<uint32_t>();
        const int v = o.at(2).get<int>();
        if (v < 0 || v > 2) throw std::invalid_argument("bad outcome value");
        e.value = static_cast<Outcome>(v);
        const int c = o.at(3).get<int>();
        if (c >= 0) e.cycle = c;
        e.attempt = o.at(4).get<int>();
        e.terminal = o.at(5).get<int>() != 0;
        r.outcomes.push_back(e);
    }
    for (const auto& f : j.at("fills")) {
        FillEvent e;
        e.op_index = f.at(0).get<std::size_t>();
        e.qubit = f.at(1).get<uint32_t>();
        e.attempt = f.at(2).get<int>();
        e.planned = f.at(3).get<int>() != 0;
        e.success = f.at(4).get<int>() != 0;
        const int src = f.at(5).get<int>();
        if (src >= 0) e.source = Site{ZoneKind::kStorage, src};
        r.fills.push_back(e);
    }
    for (const auto& h : j.at("heralds")) {
        r.heralds.push_back({h.at(0).get<std::size_t>(), h.at(1).get<int>(), h.at(2).get<int>() != 0});
    }
    static const std::map<std::string, LossCause> kCauses = {
        {"cz", LossCause::kCz},           {"mcm_image", LossCause::kMcmImage},
        {"register_mcm", LossCause::kRegisterMcm}, {"idle", LossCause::kIdle},
        {"regular_image", LossCause::kRegularImage}, {"injected", LossCause::kInjected}};
    for (const auto& l : j.at("losses")) {
        r.losses.push_back(
            {l.at(0).get<std::size_t>(), l.at(1).get<uint32_t>(), kCauses.at(l.at(2).get<std::string>()),
             l.at(3).get<int>()});
    }
    return r;
}

struct Engine::ShotContext {
    LossyStabilizerState state;
    Placement placement;
    ShotRecord record;
    ZoneOccupancy occupancy;
    int attempt = 1;
    std::set<uint32_t> detected_vacant;
    std::map<uint32_t, Outcome> last_outcome;  // current attempt only

    ShotContext(const Circuit& c, uint64_t seed)
        : state(c.num_qubits(), seed), placement(c, ZoneLayout::defaults()) {}

    EventSink sink(std::size_t op_index) { return {&record.losses, op_index, attempt}; }
};

Engine::Engine(Circuit circuit, NoiseModel noise, EngineOptions options)
    : circuit_(std::move(circuit)), noise_(std::move(noise)), options_(std::move(options)), map_(QubitMap::of(circuit_)) {
    noise_.check();
}

void Engine::execute(ShotContext& ctx, const NativeOp& op, std::size_t op_index) const {
    LossyStabilizerState& s = ctx.state;
    switch (op.code) {
        case Opcode::kRz:
        case Opcode::kSx:
        case Opcode::kX:
        case Opcode::kCz:
            apply_gate(s, op, noise_, map_, ctx.sink(op_index));
            break;
        case Opcode::kMcm: {
            std::vector<uint32_t> reg;
            for (const Qubit& q : circuit_.qubits) {
                if (ctx.placement.in_register(q.index)) reg.push_back(q.index);
            }
            for (uint32_t t : op.targets) {
                if (ctx.placement.in_register(t)) {
                    throw StructuralError("MCM target " + std::to_string(t) + " is in the register");
                }
            }
            const auto values = measure_mcm(s, op.targets, reg, noise_, map_, ctx.sink(op_index));
            for (std::size_t i = 0; i < op.targets.size(); ++i) {
                const uint32_t t = op.targets[i];
                ctx.record.outcomes.push_back({op_index, t, values[i], op.cycle, ctx.attempt, false});
                ctx.last_outcome[t] = values[i];
                if (values[i] == Outcome::kLost) {
                    ctx.detected_vacant.insert(t);
                } else {
                    ctx.detected_vacant.erase(t);
                }
            }
            break;
        }
        case Opcode::kMeasure: {
            const auto values = measure_regular(s, op.targets, noise_, map_, ctx.sink(op_index));
            for (std::size_t i = 0; i < op.targets.size(); ++i) {
                ctx.record.outcomes.push_back({op_index, op.targets[i], values[i], op.cycle, ctx.attempt, true});
                ctx.last_outcome[op.targets[i]] = values[i];
            }
            break;
        }
        case Opcode::kReset0:
            for (uint32_t t : op.targets) {
                const std::size_t q = map_(t);
                if (!s.present(q)) continue;
                if (s.leaked(q)) {
                    // Optical pumping returns unconverted leakage to the qubit manifold.
                    s.replace_leaked(q);
                }
                s.tableau().reset(q, s.measurement_rng());
                s.frame().clear(q);
            }
            break;
        case Opcode::kMove:
            map_(op.targets.at(0));
            if (!ctx.placement.move(op.targets.at(0), op.site)) {
                throw StructuralError("move of qubit " + std::to_string(op.targets[0]) + " to " +
                                      std::string(zone_name(op.site.zone)) + ":" + std::to_string(op.site.index) +
                                      " is blocked");
            }
            break;
        case Opcode::kCondFill: {
            std::vector<uint32_t> requested;
            std::vector<Site> vacancies;
            for (uint32_t t : op.targets) {
                map_(t);
                if (!ctx.detected_vacant.count(t)) continue;
                const Site site = ctx.placement.site(t);
                if (site.zone != op.zone) {
                    throw StructuralError("COND_FILL target " + std::to_string(t) + " is not in " +
                                          std::string(zone_name(op.zone)));
                }
                requested.push_back(t);
                vacancies.push_back(site);
                ctx.occupancy.set(site, false);
            }
            if (requested.empty()) break;
            const std::size_t available = static_cast<std::size_t>(ctx.occupancy.count(ZoneKind::kStorage));
            const std::size_t n_plan = std::min(available, vacancies.size());
            std::vector<Site> planned(vacancies.begin(), vacancies.begin() + static_cast<long>(n_plan));
            const MovePlan plan = plan_moves(ctx.occupancy.layout(), planned,
                                             ctx.occupancy.occupied_sites(ZoneKind::kStorage), options_.fill);
            const auto results = execute_plan(ctx.occupancy, plan, noise_.p_move_fail, s.noise_rng());
            for (std::size_t i = 0; i < requested.size(); ++i) {
                FillEvent ev{op_index, requested[i], ctx.attempt, i < n_plan, false, std::nullopt};
                if (i < n_plan) {
                    ev.success = results[i].success;
                    ev.source = results[i].move.src;
                    if (ev.success) {
                        s.replace(map_(requested[i]));
                        ctx.detected_vacant.erase(requested[i]);
                    }
                }
                ctx.record.fills.push_back(ev);
            }
            break;
        }
        case Opcode::kIdle: {
            CounterRng& rng = s.noise_rng();
            const double p_z = noise_.p_idle_dephase_per_block();
            for (const Qubit& qb : circuit_.qubits) {
                if (!ctx.placement.in_register(qb.index)) continue;
                const std::size_t q = map_(qb.index);
                if (!s.present(q)) continue;
                if (rng.bernoulli(noise_.p_idle_loss_per_block)) {
                    s.lose(q);
                    ctx.record.losses.push_back({op_index, qb.index, LossCause::kIdle, ctx.attempt});
                } else if (rng.bernoulli(p_z) && s.active(q)) {
                    s.tableau().z(q);
                }
            }
            break;
        }
        case Opcode::kLoop:
        case Opcode::kHerald:
            break;
    }
}

ShotRecord Engine::run_shot(uint64_t seed) const {
    ShotContext ctx(circuit_, seed);
    ctx.record.seed = seed;
    ctx.occupancy.fill(ZoneKind::kStorage, options_.initial_reservoir);
    std::size_t loop_start = 0;
    int max_attempts = 1;
    bool in_loop = false;
    std::vector<const ForcedFault*> faults;
    for (const auto& f : options_.faults) faults.push_back(&f);

    for (std::size_t i = 0; i < circuit_.ops.size(); ++i) {
        for (const ForcedFault* f : faults) {
            if (f->op_index != i || f->attempt != ctx.attempt) continue;
            const std::size_t q = map_(f->qubit);
            switch (f->kind) {
                case ForcedFault::Kind::kX:
                case ForcedFault::Kind::kY:
                case ForcedFault::Kind::kZ:
                    if (ctx.state.active(q)) {
                        ctx.state.tableau().apply_pauli(q, "XYZ"[static_cast<int>(f->kind)]);
                    }
                    break;
                case ForcedFault::Kind::kLoss:
                    if (ctx.state.present(q)) {
                        ctx.state.lose(q);
                        ctx.record.losses.push_back({i, f->qubit, LossCause::kInjected, ctx.attempt});
                    }
                    break;
                case ForcedFault::Kind::kFlipRecord:
                    ctx.state.frame().inject(q, 'X');
                    break;
            }
        }
        const NativeOp& op = circuit_.ops[i];
        if (op.code == Opcode::kLoop) {
            loop_start = i;
            max_attempts = op.retries;
            in_loop = true;
            ctx.last_outcome.clear();
            continue;
        }
        if (op.code == Opcode::kHerald) {
            if (!in_loop) throw StructuralError("HERALD outside a LOOP");
            bool passed = true;
            for (std::size_t k = 0; k + 1 < op.targets.size(); k += 2) {
                auto a = ctx.last_outcome.find(op.targets[k]);
                auto b = ctx.last_outcome.find(op.targets[k + 1]);
                if (a == ctx.last_outcome.end() || b == ctx.last_outcome.end()) {
                    throw StructuralError("HERALD reads a qubit that was not measured in this attempt");
                }
                if (a->second == Outcome::kLost || b->second == Outcome::kLost || a->second != b->second) {
                    passed = false;
                }
            }
            ctx.record.heralds.push_back({i, ctx.attempt, passed});
            if (!passed && ctx.attempt < max_attempts) {
                ++ctx.attempt;
                ctx.last_outcome.clear();
                i = loop_start;  // loop increment lands on the first body op
                continue;
            }
            ctx.record.herald_exhausted = !passed;
            in_loop = false;
            continue;
        }
        execute(ctx, op, i);
        if (options_.check_symplectic && !ctx.state.tableau().symplectic_ok()) {
            throw std::logic_error("tableau lost symplectic structure at op " + std::to_string(i));
        }
    }
    ctx.record.attempts = ctx.attempt;
    ctx.record.reservoir_remaining = ctx.occupancy.count(ZoneKind::kStorage);
    return std::move(ctx.record);
}

ShotRecord run_shot(const Circuit& circuit, const NoiseModel& noise, uint64_t seed, const EngineOptions& options) {
    return Engine(circuit, noise, options).run_shot(seed);
}

namespace {

void run_range(const Engine& engine, uint64_t base_seed, std::size_t begin, std::size_t end,
               std::vector<ShotRecord>& out, unsigned threads) {
    const std::size_t n = end - begin;
    threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n == 0 ? 1 : n)));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = engine.run_shot(derive_seed(base_seed, begin + i));
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += threads) {
                    out[i] = engine.run_shot(derive_seed(base_seed, begin + i));
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

std::vector<ShotRecord> run_batch(const Circuit& circuit, const NoiseModel& noise, std::size_t n_shots,
                                  uint64_t base_seed, unsigned threads, const EngineOptions& options) {
    if (n_shots < 1) throw std::invalid_argument("run_batch needs at least one shot");
    const Engine engine(circuit, noise, options);
    std::vector<ShotRecord> out(n_shots);
    run_range(engine, base_seed, 0, n_shots, out, threads);
    return out;
}

void run_batch_jsonl(const Circuit& circuit, const NoiseModel& noise, std::size_t n_shots, uint64_t base_seed,
                     std::ostream& out, unsigned threads, const EngineOptions& options) {
    if (n_shots < 1) throw std::invalid_argument("run_batch needs at least one shot");
    const Engine engine(circuit, noise, options);
    constexpr std::size_t kChunk = 1024;
    std::vector<ShotRecord> buffer;
    for (std::size_t begin = 0; begin < n_shots; begin += kChunk) {
        const std::size_t end = std::min(n_shots, begin + kChunk);
        buffer.assign(end - begin, ShotRecord{});
        run_range(engine, base_seed, begin, end, buffer, threads);
        for (const auto& r : buffer) out << r.to_json().dump() << '\n';
    }
}

}  // namespace zonesim
