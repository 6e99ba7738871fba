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

#include "zonesim/qec_circuits.h"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

#include "zonesim/compile.h"
#include "zonesim/rng.h"
#include "zonesim/tableau.h"

namespace zonesim {

namespace {

uint32_t ring(int i, int n) { return static_cast<uint32_t>(((i % n) + n) % n); }

Site register_site(uint32_t i) { return {ZoneKind::kRegister, static_cast<int>(i)}; }
Site mz_site(int i) { return {ZoneKind::kMeasurement, i}; }

void append_h(std::vector<NativeOp>& ops, uint32_t q) { append(ops, compile_h(q)); }

}  // namespace

uint32_t RepCodeLayout::data_qubit(int slot, int cycle) const { return ring(2 * slot + cycle, 2 * distance); }

uint32_t RepCodeLayout::check_qubit(int check, int cycle) const {
    return ring(2 * check + 2 + cycle, 2 * distance);
}

std::vector<DetectorDef> RepCodeLayout::detectors() const {
    std::vector<DetectorDef> out;
    out.reserve(num_detectors());
    for (int c = 0; c <= cycles; ++c) {
        for (int k = 0; k < distance; ++k) {
            DetectorDef d{k, c, {}};
            if (c < cycles) d.measurements.push_back({check_qubit(k, c), c});
            if (c > 0) d.measurements.push_back({check_qubit(k, c - 1), c - 1});
            if (c == cycles) {
                d.measurements.push_back(final_ref(k));
                d.measurements.push_back(final_ref((k + 1) % distance));
            }
            out.push_back(std::move(d));
        }
    }
    return out;
}

nlohmann::json RepCodeLayout::to_json() const {
    nlohmann::json dets = nlohmann::json::array();
    for (const auto& d : detectors()) {
        nlohmann::json ms = nlohmann::json::array();
        for (const auto& m : d.measurements) ms.push_back({m.qubit, m.cycle});
        dets.push_back({{"check", d.check}, {"cycle", d.cycle}, {"measurements", ms}});
    }
    nlohmann::json obs = nlohmann::json::array();
    for (const auto& m : observable()) obs.push_back({m.qubit, m.cycle});
    nlohmann::json roles = nlohmann::json::array();
    for (int c = 0; c < cycles; ++c) {
        nlohmann::json data = nlohmann::json::array();
        nlohmann::json checks = nlohmann::json::array();
        for (int k = 0; k < distance; ++k) {
            data.push_back(data_qubit(k, c));
            checks.push_back(check_qubit(k, c));
        }
        roles.push_back({{"cycle", c}, {"data", data}, {"measured", checks}});
    }
    return {{"schema", "zonesim.repcode/1"},
            {"distance", distance},
            {"cycles", cycles},
            {"phase_sensitive", phase_sensitive},
            {"num_qubits", num_qubits()},
            {"expected_observable", expected_observable()},
            {"detectors", dets},
            {"observable", obs},
            {"roles", roles}};
}

RepCodeLayout RepCodeLayout::from_json(const nlohmann::json& j) {
    RepCodeLayout l;
    l.distance = j.at("distance").get<int>();
    l.cycles = j.at("cycles").get<int>();
    l.phase_sensitive = j.at("phase_sensitive").get<bool>();
    if (l.distance < 3 || l.distance % 2 == 0 || l.cycles < 1) {
        throw std::invalid_argument("repcode metadata has invalid distance or cycles");
    }
    return l;
}

RepCodeLayout RepCodeLayout::from_circuit(const Circuit& circuit) {
    auto get = [&](const std::string& key) {
        auto it = circuit.metadata.find(key);
        if (it == circuit.metadata.end()) {
            throw std::invalid_argument("circuit metadata lacks '" + key + "'");
        }
        return it->second;
    };
    if (get("kind") != "repcode") throw std::invalid_argument("circuit is not a repetition code");
    nlohmann::json j = {{"distance", std::stoi(get("distance"))},
                        {"cycles", std::stoi(get("cycles"))},
                        {"phase_sensitive", get("phase_sensitive") == "true"}};
    return from_json(j);
}

RepCodeLayout repcode_layout(const RepCodeSpec& spec) {
    if (spec.distance < 3 || spec.distance % 2 == 0) {
        throw std::invalid_argument("repetition code distance must be odd and at least 3");
    }
    if (spec.cycles < 1) throw std::invalid_argument("repetition code needs at least one cycle");
    return {spec.distance, spec.cycles, spec.phase_sensitive};
}

Circuit gen_walking_repcode(const RepCodeSpec& spec) {
    const RepCodeLayout layout = repcode_layout(spec);
    const int n = spec.distance;
    Circuit c;
    c.metadata = {{"kind", "repcode"},
                  {"distance", std::to_string(n)},
                  {"cycles", std::to_string(spec.cycles)},
                  {"phase_sensitive", spec.phase_sensitive ? "true" : "false"},
                  {"seed", std::to_string(spec.seed)}};
    for (int p = 0; p < 2 * n; ++p) {
        const auto q = static_cast<uint32_t>(p);
        c.qubits.push_back({q, p % 2 == 0 ? QubitRole::kData : QubitRole::kAncilla, register_site(q)});
    }
    auto& ops = c.ops;
    for (int cyc = 0; cyc < spec.cycles; ++cyc) {
        // Copy slot k onto its right neighbour, then fold the next slot's
        // parity into the qubit that is about to be measured.
        for (int k = 0; k < n; ++k) {
            append(ops, compile_cnot(layout.data_qubit(k, cyc), ring(2 * k + 1 + cyc, 2 * n)));
        }
        for (int k = 0; k < n; ++k) {
            append(ops, compile_cnot(ring(2 * k + 1 + cyc, 2 * n), layout.check_qubit(k, cyc)));
        }
        std::vector<uint32_t> measured;
        std::vector<uint32_t> idle;
        for (int k = 0; k < n; ++k) {
            measured.push_back(layout.check_qubit(k, cyc));
            idle.push_back(layout.data_qubit(k, cyc + 1));
        }
        for (int k = 0; k < n; ++k) ops.push_back(make_move(measured[k], mz_site(k)));
        if (spec.phase_sensitive) {
            for (uint32_t q : idle) append_h(ops, q);
        }
        ops.push_back(make_mcm(measured, cyc));
        for (uint32_t q : idle) ops.push_back(make_x(q));
        if (spec.phase_sensitive) {
            for (uint32_t q : idle) append_h(ops, q);
        }
        ops.push_back(make_reset0(measured));
        ops.push_back(make_cond_fill(measured, ZoneKind::kMeasurement));
        for (uint32_t q : measured) ops.push_back(make_move(q, register_site(q)));
    }
    std::vector<uint32_t> final_data;
    for (int k = 0; k < n; ++k) {
        final_data.push_back(layout.data_qubit(k, spec.cycles));
        ops.push_back(make_move(final_data.back(), mz_site(k)));
    }
    ops.push_back(make_mcm(final_data, spec.cycles));
    return c;
}

std::string_view basis_name(BellBasis b) {
    switch (b) {
        case BellBasis::kXX:
            return "XX";
        case BellBasis::kYY:
            return "YY";
        case BellBasis::kZZ:
            break;
    }
    return "ZZ";
}

BellBasis parse_basis(std::string_view name) {
    if (name == "XX") return BellBasis::kXX;
    if (name == "YY") return BellBasis::kYY;
    if (name == "ZZ") return BellBasis::kZZ;
    throw std::invalid_argument("unknown Bell basis '" + std::string(name) + "'");
}

std::vector<uint32_t> distill_block(const DistillSpec& spec, int block) {
    const int size = spec.encoded ? 4 : 2;
    std::vector<uint32_t> out;
    for (int j = 0; j < size; ++j) out.push_back(static_cast<uint32_t>(block * size + j));
    return out;
}

int distill_target_parity(BellBasis basis, bool antiferro) {
    if (antiferro) return 1;
    return basis == BellBasis::kYY ? 1 : 0;
}

Circuit gen_distillation(const DistillSpec& spec) {
    if (spec.max_retries < 1) throw std::invalid_argument("max_retries must be at least 1");
    if (spec.basis != BellBasis::kXX && spec.basis != BellBasis::kYY && spec.basis != BellBasis::kZZ) {
        throw std::invalid_argument("invalid Bell basis");
    }
    const auto a = distill_block(spec, 0);
    const auto b = distill_block(spec, 1);
    const auto cb = distill_block(spec, 2);
    std::vector<uint32_t> all;
    for (const auto* blk : {&a, &b, &cb}) all.insert(all.end(), blk->begin(), blk->end());

    Circuit c;
    c.metadata = {{"kind", "distill"},
                  {"encoded", spec.encoded ? "true" : "false"},
                  {"basis", std::string(basis_name(spec.basis))},
                  {"max_retries", std::to_string(spec.max_retries)},
                  {"antiferro_variant", spec.antiferro_variant ? "true" : "false"},
                  {"target_parity", std::to_string(distill_target_parity(spec.basis, spec.antiferro_variant))},
                  {"rotation", spec.basis == BellBasis::kXX   ? "H"
                               : spec.basis == BellBasis::kYY ? "SX"
                                                              : "I"}};
    for (uint32_t q : all) {
        c.qubits.push_back({q, q < a.size() ? QubitRole::kData : QubitRole::kAncilla, register_site(q)});
    }
    auto& ops = c.ops;
    auto to_mz = [&](const std::vector<uint32_t>& qs) {
        for (uint32_t q : qs) ops.push_back(make_move(q, mz_site(static_cast<int>(q))));
    };
    auto to_register = [&](const std::vector<uint32_t>& qs) {
        for (uint32_t q : qs) ops.push_back(make_move(q, register_site(q)));
    };

    ops.push_back(make_loop(spec.max_retries));
    to_mz(all);
    ops.push_back(make_mcm(all, 0));
    ops.push_back(make_reset0(all));
    ops.push_back(make_cond_fill(all, ZoneKind::kMeasurement));
    to_register(all);
    for (const auto* blk : {&a, &b, &cb}) {
        for (std::size_t j = 0; j + 1 < blk->size(); j += 2) {
            const uint32_t q0 = (*blk)[j];
            const uint32_t q1 = (*blk)[j + 1];
            append_h(ops, q0);
            append(ops, compile_cnot(q0, q1));
            if (spec.antiferro_variant) {
                ops.push_back(make_x(q1));
                ops.push_back(make_rz(q0, 2));
            }
        }
    }
    for (std::size_t j = 0; j < a.size(); ++j) append(ops, compile_cnot(a[j], b[j]));
    for (std::size_t j = 0; j < a.size(); ++j) append(ops, compile_cnot(cb[j], a[j]));
    for (uint32_t q : cb) append_h(ops, q);
    if (spec.antiferro_variant) {
        // The transversal CNOTs leave the data pairs in Phi+ and the C pairs
        // with odd X parity. Known Pauli corrections restore both.
        for (std::size_t j = 0; j + 1 < a.size(); j += 2) {
            ops.push_back(make_x(a[j + 1]));
            ops.push_back(make_rz(a[j], 2));
            ops.push_back(make_x(cb[j + 1]));
        }
    }
    std::vector<uint32_t> anc(b);
    anc.insert(anc.end(), cb.begin(), cb.end());
    to_mz(anc);
    ops.push_back(make_mcm(anc, 1));
    to_register(anc);
    ops.push_back(make_herald(anc));

    for (uint32_t q : a) {
        if (spec.basis == BellBasis::kXX) append_h(ops, q);
        if (spec.basis == BellBasis::kYY) ops.push_back(make_sx(q));
    }
    ops.push_back(make_measure(a));
    return c;
}

const std::vector<Clifford1Q>& clifford_group_1q() {
    static const std::vector<Clifford1Q> kGroup = [] {
        // Signed Pauli as (sign, letter). Conjugation tables for SX and S.
        using P = std::pair<int, char>;
        auto sx = [](P p) -> P {
            if (p.second == 'Z') return {-p.first, 'Y'};
            if (p.second == 'Y') return {p.first, 'Z'};
            return p;
        };
        auto s = [](P p) -> P {
            if (p.second == 'X') return {p.first, 'Y'};
            if (p.second == 'Y') return {-p.first, 'X'};
            return p;
        };
        auto fmt = [](P p) { return std::string(p.first > 0 ? "+" : "-") + p.second; };
        struct Node {
            std::string word;
            P x, z;
        };
        std::vector<Clifford1Q> out;
        std::map<std::string, bool> seen;
        std::deque<Node> queue{{"", {1, 'X'}, {1, 'Z'}}};
        seen[fmt({1, 'X'}) + fmt({1, 'Z'})] = true;
        while (!queue.empty()) {
            Node n = queue.front();
            queue.pop_front();
            out.push_back({n.word, fmt(n.x), fmt(n.z)});
            for (char g : {'s', 'r'}) {
                Node m{n.word + g, g == 's' ? sx(n.x) : s(n.x), g == 's' ? sx(n.z) : s(n.z)};
                const std::string key = fmt(m.x) + fmt(m.z);
                if (seen.emplace(key, true).second) queue.push_back(std::move(m));
            }
        }
        if (out.size() != 24) throw std::logic_error("single-qubit Clifford closure is not 24 elements");
        return out;
    }();
    return kGroup;
}

namespace {

void apply_to_tableau(Tableau& t, const NativeOp& op, uint32_t base) {
    switch (op.code) {
        case Opcode::kSx:
            t.sx(op.targets[0] - base);
            break;
        case Opcode::kX:
            t.x(op.targets[0] - base);
            break;
        case Opcode::kRz:
            t.rz_quarter(op.targets[0] - base, op.angle.quarter());
            break;
        case Opcode::kCz:
            t.cz(op.targets[0] - base, op.targets[1] - base);
            break;
        default:
            throw std::logic_error("unexpected op in GERB tracking");
    }
}

std::string state_key(const Tableau& t) {
    std::string key;
    static const char* kLetters = "IXYZ";
    for (int i = 1; i < 16; ++i) {
        PauliString p(2);
        p.set(0, kLetters[i % 4]);
        p.set(1, kLetters[i / 4]);
        key += static_cast<char>('1' + t.expectation(p));
    }
    return key;
}

/// Shortest SX / RZ / CZ sequence taking the pair state of `t` to |11>.
std::vector<NativeOp> invert_to_11(const Tableau& start, uint32_t a, uint32_t b) {
    Tableau target(2);
    target.x(0);
    target.x(1);
    const std::string goal = state_key(target);
    const std::vector<NativeOp> gens = {make_sx(a), make_sx(b), make_rz(a, 1), make_rz(b, 1), make_cz(a, b)};
    struct Node {
        Tableau t;
        std::vector<NativeOp> path;
    };
    std::map<std::string, bool> seen;
    std::deque<Node> queue;
    queue.push_back({start, {}});
    seen[state_key(start)] = true;
    while (!queue.empty()) {
        Node n = std::move(queue.front());
        queue.pop_front();
        if (state_key(n.t) == goal) return n.path;
        for (const auto& g : gens) {
            Node m{n.t, n.path};
            apply_to_tableau(m.t, g, a);
            m.path.push_back(g);
            if (seen.emplace(state_key(m.t), true).second) queue.push_back(std::move(m));
        }
    }
    throw std::logic_error("no inversion found for GERB pair");
}

}  // namespace

Circuit gen_gerb(const GerbSpec& spec) {
    if (spec.n_blocks < 0) throw std::invalid_argument("n_blocks must be non-negative");
    if (spec.pair_count < 1) throw std::invalid_argument("pair_count must be positive");
    const auto& group = clifford_group_1q();
    Circuit c;
    c.metadata = {{"kind", "gerb"},
                  {"n_blocks", std::to_string(spec.n_blocks)},
                  {"pair_count", std::to_string(spec.pair_count)},
                  {"seed", std::to_string(spec.seed)},
                  {"random_set", "clifford24"}};
    const auto nq = static_cast<uint32_t>(2 * spec.pair_count);
    for (uint32_t q = 0; q < nq; ++q) c.qubits.push_back({q, QubitRole::kData, register_site(q)});
    CounterRng rng(spec.seed, 0);
    std::vector<Tableau> track(static_cast<std::size_t>(spec.pair_count), Tableau(2));
    auto emit = [&](const NativeOp& op, int pair) {
        c.ops.push_back(op);
        apply_to_tableau(track[static_cast<std::size_t>(pair)], op, static_cast<uint32_t>(2 * pair));
    };
    for (int blk = 0; blk < spec.n_blocks; ++blk) {
        for (int p = 0; p < spec.pair_count; ++p) {
            for (uint32_t q : {static_cast<uint32_t>(2 * p), static_cast<uint32_t>(2 * p + 1)}) {
                for (char g : group[rng.below(group.size())].word) emit(g == 's' ? make_sx(q) : make_rz(q, 1), p);
            }
        }
        for (int p = 0; p < spec.pair_count; ++p) {
            const auto a = static_cast<uint32_t>(2 * p);
            emit(make_cz(a, a + 1), p);
            emit(make_x(a), p);
            emit(make_x(a + 1), p);
            emit(make_cz(a, a + 1), p);
        }
    }
    for (int p = 0; p < spec.pair_count; ++p) {
        const auto a = static_cast<uint32_t>(2 * p);
        append(c.ops, invert_to_11(track[static_cast<std::size_t>(p)], a, a + 1));
    }
    std::vector<uint32_t> all;
    for (uint32_t q = 0; q < nq; ++q) all.push_back(q);
    c.ops.push_back(make_measure(all));
    return c;
}

Circuit gen_ramsey_mcm(int n_mcm_cycles, bool include_light, const std::vector<int>& phase_scan) {
    if (n_mcm_cycles < 0) throw std::invalid_argument("n_mcm_cycles must be non-negative");
    if (phase_scan.empty()) throw std::invalid_argument("phase_scan must not be empty");
    Circuit c;
    std::string phases;
    for (int p : phase_scan) phases += (phases.empty() ? "" : ",") + std::to_string(p);
    c.metadata = {{"kind", "ramsey_mcm"},
                  {"n_mcm_cycles", std::to_string(n_mcm_cycles)},
                  {"include_light", include_light ? "true" : "false"},
                  {"phase_scan", phases},
                  {"echo", "midpoint"}};
    std::vector<uint32_t> reg;
    for (std::size_t i = 0; i < phase_scan.size(); ++i) {
        const auto q = static_cast<uint32_t>(i);
        reg.push_back(q);
        c.qubits.push_back({q, QubitRole::kData, register_site(q)});
    }
    const auto probe = static_cast<uint32_t>(phase_scan.size());
    c.qubits.push_back({probe, QubitRole::kAncilla, mz_site(0)});
    for (uint32_t q : reg) c.ops.push_back(make_sx(q));
    const int echo_at = n_mcm_cycles / 2;
    for (int k = 0; k <= n_mcm_cycles; ++k) {
        if (k == echo_at) {
            for (uint32_t q : reg) c.ops.push_back(make_x(q));
        }
        if (k == n_mcm_cycles) break;
        if (include_light) {
            c.ops.push_back(make_mcm({probe}, k));
            c.ops.push_back(make_reset0({probe}));
        } else {
            c.ops.push_back(make_idle(reg, k));
        }
    }
    for (std::size_t i = 0; i < reg.size(); ++i) {
        if (phase_scan[i] % 4 != 0) c.ops.push_back(make_rz(reg[i], phase_scan[i]));
        c.ops.push_back(make_sx(reg[i]));
    }
    c.ops.push_back(make_measure(reg));
    return c;
}

}  // namespace zonesim
