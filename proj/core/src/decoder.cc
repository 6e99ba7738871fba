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

#include "zonesim/decoder.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "zonesim/matching.h"
#include "zonesim/pauli_frame.h"

namespace zonesim {

namespace {

constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;

std::map<MeasRef, Outcome> mcm_outcomes(const ShotRecord& shot) {
    std::map<MeasRef, Outcome> out;
    for (const auto& o : shot.outcomes) {
        if (o.cycle) out[{o.qubit, *o.cycle}] = o.value;
    }
    return out;
}

}  // namespace

ExtractedShot extract_detectors(const ShotRecord& shot, const RepCodeLayout& layout) {
    const auto values = mcm_outcomes(shot);
    const auto defs = layout.detectors();
    std::map<MeasRef, int> bits;
    for (const auto& d : defs) {
        for (const auto& m : d.measurements) bits[m] = 0;
    }
    for (const auto& m : layout.observable()) bits[m] = 0;
    ExtractedShot out;
    CounterRng rng(shot.seed, kDecoderStream);
    std::map<MeasRef, bool> lost;
    for (auto& [ref, bit] : bits) {
        auto it = values.find(ref);
        if (it == values.end()) {
            throw std::invalid_argument("shot lacks measurement of qubit " + std::to_string(ref.qubit) +
                                        " at cycle " + std::to_string(ref.cycle));
        }
        if (it->second == Outcome::kLost) {
            bit = static_cast<int>(rng() >> 63);
            lost[ref] = true;
            out.lost.push_back(ref);
        } else {
            bit = it->second == Outcome::kOne ? 1 : 0;
        }
    }
    out.detectors.reserve(defs.size());
    for (const auto& d : defs) {
        DetectorRecord r{d.check, d.cycle, 0, false, false};
        for (const auto& m : d.measurements) {
            r.parity ^= static_cast<uint8_t>(bits[m]);
            if (lost.count(m)) r.loss_touched = r.randomized = true;
        }
        out.detectors.push_back(r);
    }
    for (const auto& m : layout.observable()) out.observable ^= bits[m];
    return out;
}

std::string_view fault_label_name(FaultLabel label) {
    switch (label) {
        case FaultLabel::kSpacelike:
            return "spacelike";
        case FaultLabel::kTimelike:
            return "timelike";
        case FaultLabel::kLossCorrelated:
            break;
    }
    return "loss_correlated";
}

double edge_weight(double p) {
    if (!(p > 0.0)) throw std::invalid_argument("edge probability must be positive");
    if (p >= 0.5) return 0.0;
    return std::log((1.0 - p) / p);
}

int64_t quantize_weight(double w) { return std::llround(w * kWeightScale); }

double MatchingGraph::edge_p(std::size_t e, const LossOverlay& overlay) const {
    auto it = overlay.p_override.find(e);
    return it == overlay.p_override.end() ? edges_[e].p : it->second;
}

int64_t MatchingGraph::edge_cost(std::size_t e, const LossOverlay& overlay) const {
    return quantize_weight(edge_weight(edge_p(e, overlay)));
}

std::string MatchingGraph::to_text() const {
    std::ostringstream os;
    os << "# zonesim matching graph v1\n";
    os << "NODES " << num_detectors_ << " BOUNDARY " << boundary() << "\n";
    for (const auto& d : layout_.detectors()) {
        os << "DETECTOR " << layout_.detector_index(d.check, d.cycle) << " check=" << d.check << " cycle=" << d.cycle
           << "\n";
    }
    os.precision(12);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto& ed = edges_[e];
        os << "EDGE " << ed.u << " ";
        if (ed.v == boundary()) {
            os << "B";
        } else {
            os << ed.v;
        }
        os << " p=" << ed.p << " w=" << edge_weight(ed.p) << " obs=" << (ed.flips_observable ? 1 : 0) << " labels=";
        bool first = true;
        for (FaultLabel l : {FaultLabel::kSpacelike, FaultLabel::kTimelike, FaultLabel::kLossCorrelated}) {
            if (ed.labels & static_cast<uint8_t>(l)) {
                os << (first ? "" : ",") << fault_label_name(l);
                first = false;
            }
        }
        os << "\n";
    }
    return os.str();
}

MatchingGraph build_matching_graph(const Circuit& circuit, const NoiseModel& noise) {
    MatchingGraph g;
    g.layout_ = RepCodeLayout::from_circuit(circuit);
    g.num_detectors_ = g.layout_.num_detectors();
    const QubitMap map = QubitMap::of(circuit);

    // Measurement records in program order.
    std::vector<std::size_t> first_record(circuit.ops.size() + 1, 0);
    std::map<MeasRef, std::size_t> record_of;
    std::size_t n_records = 0;
    for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
        first_record[i] = n_records;
        const NativeOp& op = circuit.ops[i];
        if (op.code == Opcode::kLoop || op.code == Opcode::kHerald) {
            throw std::invalid_argument("matching graphs need loop-free circuits");
        }
        if (op.code == Opcode::kMcm || op.code == Opcode::kMeasure) {
            for (uint32_t t : op.targets) {
                if (op.cycle) {
                    record_of[{t, *op.cycle}] = n_records;
                    g.mcm_op_[{t, *op.cycle}] = i;
                }
                ++n_records;
            }
        }
        if (op.code == Opcode::kReset0) {
            for (uint32_t t : op.targets) g.reset_ops_[t].push_back(i);
        }
    }
    first_record[circuit.ops.size()] = n_records;
    std::vector<std::vector<std::size_t>> record_detectors(n_records);
    std::vector<uint8_t> record_obs(n_records, 0);
    for (const auto& d : g.layout_.detectors()) {
        const std::size_t idx = g.layout_.detector_index(d.check, d.cycle);
        for (const auto& m : d.measurements) {
            auto it = record_of.find(m);
            if (it == record_of.end()) throw std::invalid_argument("circuit lacks a detector measurement");
            record_detectors[it->second].push_back(idx);
        }
    }
    for (const auto& m : g.layout_.observable()) record_obs.at(record_of.at(m)) ^= 1;

    // Enumerate elementary faults.
    const double p_read = noise.p_distinguish + 0.5 * (noise.p_flip_1to0 + noise.p_flip_0to1);
    const double p_partner = noise.p_cz_loss * noise.p_loss_partner_z;
    auto add = [&](std::size_t at, std::vector<uint32_t> qs, std::string ps, double p, FaultLabel label,
                   int64_t partner = -1) {
        if (!(p > 0.0) || at > circuit.ops.size()) return;
        ElementaryFault f;
        f.op_index = at;
        f.qubits = std::move(qs);
        f.paulis = std::move(ps);
        f.p = p;
        f.label = label;
        f.lost_partner = partner;
        g.faults_.push_back(std::move(f));
    };
    Placement placement(circuit, ZoneLayout::defaults());
    static const char* kPaulis = "IXYZ";
    for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
        const NativeOp& op = circuit.ops[i];
        const std::size_t after = i + 1;
        switch (op.code) {
            case Opcode::kSx:
            case Opcode::kX:
                for (char p : std::string("XYZ")) add(after, {op.targets[0]}, std::string(1, p), noise.p_1q_pauli / 3, FaultLabel::kSpacelike);
                break;
            case Opcode::kCz: {
                const uint32_t a = op.targets[0];
                const uint32_t b = op.targets[1];
                for (int k = 1; k < 16; ++k) {
                    std::vector<uint32_t> qs;
                    std::string ps;
                    if (k % 4) {
                        qs.push_back(a);
                        ps += kPaulis[k % 4];
                    }
                    if (k / 4) {
                        qs.push_back(b);
                        ps += kPaulis[k / 4];
                    }
                    add(after, qs, ps, noise.p_cz_pauli / 15, FaultLabel::kSpacelike);
                }
                add(after, {a}, "Z", p_partner, FaultLabel::kLossCorrelated, b);
                add(after, {b}, "Z", p_partner, FaultLabel::kLossCorrelated, a);
                break;
            }
            case Opcode::kMcm:
                for (uint32_t t : op.targets) add(i, {t}, "M", p_read, FaultLabel::kTimelike);
                for (const Qubit& q : circuit.qubits) {
                    if (placement.in_register(q.index)) {
                        add(after, {q.index}, "Z", noise.p_register_dephase_per_mcm, FaultLabel::kSpacelike);
                    }
                }
                break;
            case Opcode::kMeasure:
                for (uint32_t t : op.targets) add(i, {t}, "M", noise.p_distinguish_regular, FaultLabel::kTimelike);
                break;
            case Opcode::kIdle:
                for (const Qubit& q : circuit.qubits) {
                    if (placement.in_register(q.index)) {
                        add(after, {q.index}, "Z", noise.p_idle_dephase_per_block(), FaultLabel::kSpacelike);
                    }
                }
                break;
            case Opcode::kMove:
                if (!placement.move(op.targets[0], op.site)) throw std::invalid_argument("blocked move in circuit");
                break;
            default:
                break;
        }
    }

    // Propagate each fault forward from its injection point.
    PauliFrame frame(circuit.num_qubits());
    std::vector<uint8_t> det_flip(g.num_detectors_, 0);
    std::map<std::tuple<std::size_t, std::size_t, bool>, std::size_t> edge_of;
    for (auto& f : g.faults_) {
        std::fill(det_flip.begin(), det_flip.end(), 0);
        bool obs = false;
        auto flip_record = [&](std::size_t r) {
            for (std::size_t d : record_detectors[r]) det_flip[d] ^= 1;
            obs ^= record_obs[r] != 0;
        };
        bool live = false;
        for (std::size_t k = 0; k < f.qubits.size(); ++k) {
            if (f.paulis[k] == 'M') {
                const auto& op = circuit.ops.at(f.op_index);
                const auto pos = std::find(op.targets.begin(), op.targets.end(), f.qubits[k]) - op.targets.begin();
                flip_record(first_record[f.op_index] + static_cast<std::size_t>(pos));
            } else {
                frame.inject(map(f.qubits[k]), f.paulis[k]);
                live = true;
            }
        }
        for (std::size_t i = f.op_index; live && i < circuit.ops.size(); ++i) {
            const NativeOp& op = circuit.ops[i];
            switch (op.code) {
                case Opcode::kRz:
                    for (int k = 0; k < op.angle.quarter(); ++k) frame.s(map(op.targets[0]));
                    break;
                case Opcode::kSx:
                    frame.sx(map(op.targets[0]));
                    break;
                case Opcode::kCz:
                    frame.cz(map(op.targets[0]), map(op.targets[1]));
                    break;
                case Opcode::kMcm:
                case Opcode::kMeasure:
                    for (std::size_t t = 0; t < op.targets.size(); ++t) {
                        if (frame.x(map(op.targets[t]))) flip_record(first_record[i] + t);
                    }
                    break;
                case Opcode::kReset0:
                    for (uint32_t t : op.targets) frame.clear(map(t));
                    live = !frame.empty();
                    break;
                default:
                    break;
            }
        }
        for (std::size_t q = 0; q < circuit.num_qubits(); ++q) frame.clear(q);
        for (std::size_t d = 0; d < g.num_detectors_; ++d) {
            if (det_flip[d]) f.detectors.push_back(d);
        }
        f.flips_observable = obs;
        if (f.detectors.size() > 2) {
            throw std::logic_error("fault flips " + std::to_string(f.detectors.size()) + " detectors");
        }
        if (f.detectors.empty()) {
            if (obs) g.undetectable_p_ = g.undetectable_p_ * (1 - f.p) + f.p * (1 - g.undetectable_p_);
            continue;
        }
        if (f.label == FaultLabel::kTimelike) {
            // Only readout faults that link one check across consecutive cycles are timelike.
            const auto& n = g.layout_;
            const bool same_check = f.detectors.size() == 2 &&
                                    f.detectors[0] % static_cast<std::size_t>(n.distance) ==
                                        f.detectors[1] % static_cast<std::size_t>(n.distance);
            if (!same_check) f.label = FaultLabel::kSpacelike;
        }
        const std::size_t u = f.detectors[0];
        const std::size_t v = f.detectors.size() == 2 ? f.detectors[1] : g.boundary();
        auto key = std::make_tuple(u, v, obs);
        auto it = edge_of.find(key);
        if (it == edge_of.end()) {
            it = edge_of.emplace(key, g.edges_.size()).first;
            g.edges_.push_back({u, v, 0.0, obs, 0});
        }
        GraphEdge& e = g.edges_[it->second];
        e.p = e.p * (1 - f.p) + f.p * (1 - e.p);
        e.labels |= static_cast<uint8_t>(f.label);
        f.edge = static_cast<int>(it->second);
    }
    return g;
}

LossOverlay apply_loss_edits(const MatchingGraph& graph, const ExtractedShot& shot) {
    LossOverlay overlay;
    if (shot.lost.empty()) return overlay;
    std::vector<uint8_t> affected(graph.num_detectors(), 0);
    for (std::size_t d = 0; d < shot.detectors.size(); ++d) {
        if (shot.detectors[d].loss_touched) affected[d] = 1;
    }
    for (std::size_t e = 0; e < graph.edges_.size(); ++e) {
        const auto& ed = graph.edges_[e];
        if (!(ed.labels & static_cast<uint8_t>(FaultLabel::kTimelike))) continue;
        // A lost bit randomizes both detectors that contain it; the readout
        // edge joining them carries exactly that randomization.
        if (ed.v != graph.boundary() && affected[ed.u] && affected[ed.v]) overlay.p_override[e] = 0.5;
    }
    for (const MeasRef& ref : shot.lost) {
        auto mit = graph.mcm_op_.find(ref);
        if (mit == graph.mcm_op_.end()) continue;
        const std::size_t measured_at = mit->second;
        std::size_t window_start = 0;
        auto rit = graph.reset_ops_.find(ref.qubit);
        if (rit != graph.reset_ops_.end()) {
            for (std::size_t r : rit->second) {
                if (r < measured_at) window_start = r;
            }
        }
        for (const auto& f : graph.faults_) {
            if (f.label != FaultLabel::kLossCorrelated || f.edge < 0) continue;
            if (f.lost_partner != static_cast<int64_t>(ref.qubit)) continue;
            if (f.op_index > window_start && f.op_index <= measured_at) {
                overlay.p_override[static_cast<std::size_t>(f.edge)] = 0.5;
            }
        }
    }
    return overlay;
}

DecodeResult decode(const MatchingGraph& graph, const LossOverlay& overlay, const std::vector<std::size_t>& syndrome) {
    DecodeResult out;
    if (syndrome.empty()) return out;
    const std::size_t nodes = graph.num_detectors() + 1;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(nodes);  // (neighbour, edge)
    std::vector<int64_t> cost(graph.edges().size());
    for (std::size_t e = 0; e < graph.edges().size(); ++e) {
        const auto& ed = graph.edges()[e];
        cost[e] = graph.edge_cost(e, overlay);
        adj[ed.u].push_back({ed.v, e});
        adj[ed.v].push_back({ed.u, e});
    }
    std::vector<std::size_t> flagged(syndrome);
    std::sort(flagged.begin(), flagged.end());
    flagged.erase(std::unique(flagged.begin(), flagged.end()), flagged.end());
    for (std::size_t d : flagged) {
        if (d >= graph.num_detectors()) throw std::out_of_range("syndrome detector out of range");
    }
    const std::size_t m = flagged.size();
    std::vector<std::vector<int64_t>> dist(m, std::vector<int64_t>(nodes, kInf));
    std::vector<std::vector<uint8_t>> par(m, std::vector<uint8_t>(nodes, 0));
    for (std::size_t s = 0; s < m; ++s) {
        auto& d = dist[s];
        auto& p = par[s];
        using Item = std::pair<int64_t, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        d[flagged[s]] = 0;
        pq.push({0, flagged[s]});
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (du != d[u] || u == graph.boundary()) continue;
            for (auto [v, e] : adj[u]) {
                const int64_t nd = du + cost[e];
                if (nd < d[v]) {
                    d[v] = nd;
                    p[v] = p[u] ^ (graph.edges()[e].flips_observable ? 1 : 0);
                    pq.push({nd, v});
                }
            }
        }
    }
    bool use_boundary = false;
    for (std::size_t s = 0; s < m; ++s) use_boundary |= dist[s][graph.boundary()] < kInf;
    const std::size_t size = use_boundary ? 2 * m : m;
    if (size % 2 != 0) throw std::runtime_error("odd syndrome on a graph without boundary");
    std::vector<std::vector<int64_t>> c(size, std::vector<int64_t>(size, kNoEdge));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i != j && dist[i][flagged[j]] < kInf) c[i][j] = dist[i][flagged[j]];
        }
        if (use_boundary) {
            if (dist[i][graph.boundary()] < kInf) c[i][m + i] = c[m + i][i] = dist[i][graph.boundary()];
            for (std::size_t j = 0; j < m; ++j) {
                if (i != j) c[m + i][m + j] = 0;
            }
        }
    }
    const PerfectMatching pm = min_cost_perfect_matching(c);
    out.weight = pm.cost;
    for (std::size_t i = 0; i < m; ++i) {
        const auto j = static_cast<std::size_t>(pm.mate[i]);
        if (j < m) {
            if (i < j) {
                out.pairs.push_back({flagged[i], flagged[j]});
                out.flip ^= par[i][flagged[j]] != 0;
            }
        } else {
            out.pairs.push_back({flagged[i], graph.boundary()});
            out.flip ^= par[i][graph.boundary()] != 0;
        }
    }
    return out;
}

ShotDecode decode_shot(const MatchingGraph& graph, const ShotRecord& shot, bool use_loss_edits) {
    const ExtractedShot ex = extract_detectors(shot, graph.layout());
    const LossOverlay overlay = use_loss_edits ? apply_loss_edits(graph, ex) : LossOverlay{};
    std::vector<std::size_t> syndrome;
    for (std::size_t d = 0; d < ex.detectors.size(); ++d) {
        if (ex.detectors[d].parity) syndrome.push_back(d);
    }
    const DecodeResult r = decode(graph, overlay, syndrome);
    ShotDecode out;
    out.syndrome_weight = syndrome.size();
    out.loss_touched = !ex.lost.empty();
    out.failure = ((ex.observable ^ (r.flip ? 1 : 0)) != graph.layout().expected_observable());
    return out;
}

RateEstimate logical_failure_rate(const std::vector<ShotDecode>& decoded, double confidence) {
    if (decoded.empty()) throw std::invalid_argument("no decoded shots");
    uint64_t fails = 0;
    for (const auto& d : decoded) fails += d.failure ? 1 : 0;
    return estimate_rate(fails, decoded.size(), confidence);
}

}  // namespace zonesim
