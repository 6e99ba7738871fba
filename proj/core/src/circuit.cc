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

#include "zonesim/circuit.h"

#include <algorithm>
#include <charconv>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace zonesim {

namespace {

constexpr std::array<std::string_view, kNumZones> kZoneNames = {"REGISTER", "IZ", "MZ", "SZ", "LZ"};

constexpr std::array<std::pair<Opcode, std::string_view>, 12> kOpcodeNames = {{
    {Opcode::kRz, "RZ"},
    {Opcode::kSx, "SX"},
    {Opcode::kX, "X"},
    {Opcode::kCz, "CZ"},
    {Opcode::kMcm, "MCM"},
    {Opcode::kReset0, "RESET0"},
    {Opcode::kMove, "MOVE"},
    {Opcode::kCondFill, "COND_FILL"},
    {Opcode::kMeasure, "MEASURE"},
    {Opcode::kIdle, "IDLE"},
    {Opcode::kLoop, "LOOP"},
    {Opcode::kHerald, "HERALD"},
}};

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

template <typename T>
T parse_int(std::string_view s, std::string_view what) {
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("bad " + std::string(what) + " '" + std::string(s) + "'");
    }
    return value;
}

Site parse_site(std::string_view s) {
    auto colon = s.find(':');
    if (colon == std::string_view::npos) {
        throw std::invalid_argument("bad site '" + std::string(s) + "', expected ZONE:index");
    }
    return Site{parse_zone(s.substr(0, colon)), parse_int<int>(s.substr(colon + 1), "site index")};
}

std::string site_text(const Site& s) {
    return std::string(zone_name(s.zone)) + ":" + std::to_string(s.index);
}

bool needs_cycle_tag(Opcode code) { return code == Opcode::kMcm || code == Opcode::kIdle; }

}  // namespace

std::string_view zone_name(ZoneKind kind) { return kZoneNames[static_cast<std::size_t>(kind)]; }

ZoneKind parse_zone(std::string_view name) {
    for (std::size_t i = 0; i < kNumZones; ++i) {
        if (kZoneNames[i] == name) {
            return static_cast<ZoneKind>(i);
        }
    }
    throw std::invalid_argument("unknown zone '" + std::string(name) + "'");
}

ZoneLayout ZoneLayout::defaults() {
    ZoneLayout layout;
    layout.zone(ZoneKind::kRegister) = {ZoneKind::kRegister, 128, 8, 16};
    layout.zone(ZoneKind::kInteraction) = {ZoneKind::kInteraction, 16, 1, 16};
    layout.zone(ZoneKind::kMeasurement) = {ZoneKind::kMeasurement, 32, 2, 16};
    layout.zone(ZoneKind::kStorage) = {ZoneKind::kStorage, 32, 2, 16};
    layout.zone(ZoneKind::kLoading) = {ZoneKind::kLoading, 75, 5, 15};
    return layout;
}

std::string_view role_name(QubitRole role) {
    switch (role) {
        case QubitRole::kData:
            return "data";
        case QubitRole::kAncilla:
            return "ancilla";
        case QubitRole::kReservoir:
            return "reservoir";
        case QubitRole::kUnassigned:
            break;
    }
    return "none";
}

QubitRole parse_role(std::string_view name) {
    if (name == "data") return QubitRole::kData;
    if (name == "ancilla") return QubitRole::kAncilla;
    if (name == "reservoir") return QubitRole::kReservoir;
    if (name == "none") return QubitRole::kUnassigned;
    throw std::invalid_argument("unknown qubit role '" + std::string(name) + "'");
}

QuarterTurns QuarterTurns::from_ratio(int64_t num, int64_t den) {
    if (den == 0) {
        throw std::invalid_argument("zero denominator in angle");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g == 0) {
        return {0, 1};
    }
    return {num / g, den / g};
}

double QuarterTurns::radians() const {
    return static_cast<double>(num) / static_cast<double>(den) * (std::numbers::pi / 2);
}

std::string_view opcode_name(Opcode code) {
    for (const auto& [c, name] : kOpcodeNames) {
        if (c == code) {
            return name;
        }
    }
    return "?";
}

std::optional<Opcode> parse_opcode(std::string_view name) {
    for (const auto& [c, n] : kOpcodeNames) {
        if (n == name) {
            return c;
        }
    }
    return std::nullopt;
}

namespace {

NativeOp op_of(Opcode code, std::vector<uint32_t> targets = {}, std::optional<int> cycle = std::nullopt) {
    NativeOp op;
    op.code = code;
    op.targets = std::move(targets);
    op.cycle = cycle;
    return op;
}

}  // namespace

NativeOp make_rz(uint32_t q, int quarter_turns) {
    NativeOp op = op_of(Opcode::kRz, {q});
    op.angle = QuarterTurns::from_ratio(quarter_turns, 1);
    return op;
}
NativeOp make_sx(uint32_t q) { return op_of(Opcode::kSx, {q}); }
NativeOp make_x(uint32_t q) { return op_of(Opcode::kX, {q}); }
NativeOp make_cz(uint32_t a, uint32_t b) { return op_of(Opcode::kCz, {a, b}); }
NativeOp make_mcm(std::vector<uint32_t> targets, int cycle) { return op_of(Opcode::kMcm, std::move(targets), cycle); }
NativeOp make_reset0(std::vector<uint32_t> targets) { return op_of(Opcode::kReset0, std::move(targets)); }
NativeOp make_move(uint32_t q, Site dst) {
    NativeOp op = op_of(Opcode::kMove, {q});
    op.site = dst;
    return op;
}
NativeOp make_cond_fill(std::vector<uint32_t> targets, ZoneKind zone) {
    NativeOp op = op_of(Opcode::kCondFill, std::move(targets));
    op.zone = zone;
    return op;
}
NativeOp make_measure(std::vector<uint32_t> targets, std::optional<int> cycle) {
    return op_of(Opcode::kMeasure, std::move(targets), cycle);
}
NativeOp make_idle(std::vector<uint32_t> targets, int cycle) { return op_of(Opcode::kIdle, std::move(targets), cycle); }
NativeOp make_loop(int retries) {
    NativeOp op = op_of(Opcode::kLoop);
    op.retries = retries;
    return op;
}
NativeOp make_herald(std::vector<uint32_t> pairs) { return op_of(Opcode::kHerald, std::move(pairs)); }

bool Circuit::has_qubit(uint32_t q) const {
    return std::any_of(qubits.begin(), qubits.end(), [q](const Qubit& b) { return b.index == q; });
}

std::size_t Circuit::slot_of(uint32_t q) const {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        if (qubits[i].index == q) {
            return i;
        }
    }
    throw std::out_of_range("unknown qubit " + std::to_string(q));
}

std::string to_text(const Circuit& circuit) {
    std::ostringstream out;
    out << "# zonesim circuit v1\n";
    for (const auto& [key, value] : circuit.metadata) {
        out << "META " << key << ' ' << value << '\n';
    }
    for (const auto& q : circuit.qubits) {
        out << "QUBIT " << q.index << ' ' << role_name(q.role) << ' ' << site_text(q.site) << '\n';
    }
    for (const auto& op : circuit.ops) {
        out << opcode_name(op.code);
        for (uint32_t t : op.targets) {
            out << ' ' << t;
        }
        if (op.code == Opcode::kRz) {
            out << " angle=" << op.angle.num;
            if (op.angle.den != 1) {
                out << '/' << op.angle.den;
            }
        }
        if (op.code == Opcode::kMove) {
            out << " to=" << site_text(op.site);
        }
        if (op.code == Opcode::kCondFill) {
            out << " zone=" << zone_name(op.zone);
        }
        if (op.code == Opcode::kLoop) {
            out << " retries=" << op.retries;
        }
        if (op.cycle) {
            out << " cycle=" << *op.cycle;
        }
        out << '\n';
    }
    return out.str();
}

Circuit from_text(std::string_view text) {
    Circuit circuit;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        auto tokens = split_ws(line);
        if (tokens.empty()) {
            if (end == text.size()) break;
            continue;
        }
        try {
            if (tokens[0] == "META") {
                if (tokens.size() < 2) {
                    throw std::invalid_argument("META needs a key");
                }
                // The value is the raw remainder of the line.
                auto key_pos = line.find(tokens[1]);
                auto rest = line.substr(key_pos + tokens[1].size());
                auto first = rest.find_first_not_of(" \t");
                auto last = rest.find_last_not_of(" \t\r");
                circuit.metadata[std::string(tokens[1])] =
                    first == std::string_view::npos ? "" : std::string(rest.substr(first, last - first + 1));
                continue;
            }
            if (tokens[0] == "QUBIT") {
                if (tokens.size() != 4) {
                    throw std::invalid_argument("QUBIT expects: QUBIT index role ZONE:site");
                }
                circuit.qubits.push_back(Qubit{parse_int<uint32_t>(tokens[1], "qubit index"),
                                               parse_role(tokens[2]), parse_site(tokens[3])});
                continue;
            }
            auto code = parse_opcode(tokens[0]);
            if (!code) {
                throw std::invalid_argument("unknown opcode '" + std::string(tokens[0]) + "'");
            }
            NativeOp op = op_of(*code);
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                std::string_view tok = tokens[i];
                auto eq = tok.find('=');
                if (eq == std::string_view::npos) {
                    op.targets.push_back(parse_int<uint32_t>(tok, "target"));
                    continue;
                }
                std::string_view key = tok.substr(0, eq);
                std::string_view value = tok.substr(eq + 1);
                if (key == "angle") {
                    auto slash = value.find('/');
                    if (slash == std::string_view::npos) {
                        op.angle = QuarterTurns::from_ratio(parse_int<int64_t>(value, "angle"), 1);
                    } else {
                        op.angle = QuarterTurns::from_ratio(parse_int<int64_t>(value.substr(0, slash), "angle"),
                                                            parse_int<int64_t>(value.substr(slash + 1), "angle"));
                    }
                } else if (key == "cycle") {
                    op.cycle = parse_int<int>(value, "cycle");
                } else if (key == "to") {
                    op.site = parse_site(value);
                } else if (key == "zone") {
                    op.zone = parse_zone(value);
                } else if (key == "retries") {
                    op.retries = parse_int<int>(value, "retries");
                } else {
                    throw std::invalid_argument("unknown attribute '" + std::string(key) + "'");
                }
            }
            circuit.ops.push_back(std::move(op));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (end == text.size()) break;
    }
    return circuit;
}

std::string_view violation_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::kDuplicateQubit:
            return "duplicate qubit";
        case ViolationKind::kUnknownQubit:
            return "unknown qubit";
        case ViolationKind::kNonCliffordAngle:
            return "non-Clifford angle";
        case ViolationKind::kDuplicateTarget:
            return "duplicate target";
        case ViolationKind::kBadArity:
            return "bad arity";
        case ViolationKind::kMeasureInRegister:
            return "MCM in register";
        case ViolationKind::kCapacityOverflow:
            return "capacity overflow";
        case ViolationKind::kSiteConflict:
            return "site conflict";
        case ViolationKind::kMissingCycleTag:
            return "missing cycle tag";
        case ViolationKind::kHeraldOutsideLoop:
            return "herald outside loop";
    }
    return "?";
}

std::size_t ValidationReport::count(ViolationKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; }));
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    for (const auto& v : violations) {
        if (v.op_index) {
            out << "op " << *v.op_index << ": ";
        }
        out << violation_name(v.kind) << ": " << v.message << '\n';
    }
    return out.str();
}

Placement::Placement(const Circuit& circuit, const ZoneLayout& layout) : layout_(layout) {
    for (const auto& q : circuit.qubits) {
        sites_[q.index] = q.site;
        occupied_.emplace(q.site, q.index);
    }
}

Site Placement::site(uint32_t q) const {
    auto it = sites_.find(q);
    if (it == sites_.end()) {
        throw std::out_of_range("unknown qubit " + std::to_string(q));
    }
    return it->second;
}

bool Placement::move(uint32_t q, Site dst) {
    auto it = sites_.find(q);
    if (it == sites_.end()) {
        throw std::out_of_range("unknown qubit " + std::to_string(q));
    }
    if (dst.index < 0 || dst.index >= layout_.zone(dst.zone).capacity) {
        return false;
    }
    auto occ = occupied_.find(dst);
    if (occ != occupied_.end() && occ->second != q) {
        return false;
    }
    occupied_.erase(it->second);
    it->second = dst;
    occupied_[dst] = q;
    return true;
}

std::optional<uint32_t> Placement::occupant(Site s) const {
    auto it = occupied_.find(s);
    if (it == occupied_.end()) {
        return std::nullopt;
    }
    return it->second;
}

ValidationReport validate(const Circuit& circuit, const ZoneLayout& layout) {
    ValidationReport report;
    auto add = [&report](std::optional<std::size_t> idx, ViolationKind kind, std::string msg) {
        report.violations.push_back(Violation{idx, kind, std::move(msg)});
    };

    std::set<uint32_t> known;
    std::map<Site, uint32_t> sites;
    std::map<uint32_t, Site> where;
    for (const auto& q : circuit.qubits) {
        if (!known.insert(q.index).second) {
            add(std::nullopt, ViolationKind::kDuplicateQubit, "qubit " + std::to_string(q.index) + " declared twice");
            continue;
        }
        const Zone& z = layout.zone(q.site.zone);
        if (q.site.index < 0 || q.site.index >= z.capacity) {
            add(std::nullopt, ViolationKind::kCapacityOverflow,
                "qubit " + std::to_string(q.index) + " placed at " + site_text(q.site) + " beyond capacity " +
                    std::to_string(z.capacity));
        } else if (!sites.emplace(q.site, q.index).second) {
            add(std::nullopt, ViolationKind::kSiteConflict,
                "qubits " + std::to_string(sites[q.site]) + " and " + std::to_string(q.index) + " share " +
                    site_text(q.site));
        }
        where[q.index] = q.site;
    }

    bool in_loop = false;
    for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
        const NativeOp& op = circuit.ops[i];
        bool targets_ok = true;
        for (uint32_t t : op.targets) {
            if (!known.count(t)) {
                add(i, ViolationKind::kUnknownQubit, "target " + std::to_string(t) + " is not declared");
                targets_ok = false;
            }
        }
        if (op.code != Opcode::kHerald) {
            std::set<uint32_t> uniq(op.targets.begin(), op.targets.end());
            if (uniq.size() != op.targets.size()) {
                add(i, ViolationKind::kDuplicateTarget, std::string(opcode_name(op.code)) + " repeats a target");
            }
        }
        switch (op.code) {
            case Opcode::kRz:
            case Opcode::kSx:
            case Opcode::kX:
            case Opcode::kMove:
                if (op.targets.size() != 1) {
                    add(i, ViolationKind::kBadArity, std::string(opcode_name(op.code)) + " takes one target");
                }
                break;
            case Opcode::kCz:
                if (op.targets.size() != 2) {
                    add(i, ViolationKind::kBadArity, "CZ takes two targets");
                }
                break;
            case Opcode::kHerald:
                if (op.targets.size() % 2 != 0) {
                    add(i, ViolationKind::kBadArity, "HERALD takes qubit pairs");
                }
                if (!in_loop) {
                    add(i, ViolationKind::kHeraldOutsideLoop, "HERALD without a preceding LOOP");
                }
                break;
            case Opcode::kLoop:
                if (op.retries < 1) {
                    add(i, ViolationKind::kBadArity, "LOOP needs retries >= 1");
                }
                in_loop = true;
                break;
            default:
                break;
        }
        if (op.code == Opcode::kRz && !op.angle.is_clifford()) {
            add(i, ViolationKind::kNonCliffordAngle,
                "RZ angle " + std::to_string(op.angle.num) + "/" + std::to_string(op.angle.den) +
                    " quarter turns is not a multiple of pi/2");
        }
        if (needs_cycle_tag(op.code) && !op.cycle) {
            add(i, ViolationKind::kMissingCycleTag, std::string(opcode_name(op.code)) + " has no cycle tag");
        }
        if (!targets_ok) {
            continue;
        }
        if (op.code == Opcode::kMcm) {
            for (uint32_t t : op.targets) {
                if (where[t].zone == ZoneKind::kRegister) {
                    add(i, ViolationKind::kMeasureInRegister,
                        "qubit " + std::to_string(t) + " is register-resident during MCM");
                }
            }
        }
        if (op.code == Opcode::kMove && op.targets.size() == 1) {
            uint32_t q = op.targets[0];
            const Zone& z = layout.zone(op.site.zone);
            if (op.site.index < 0 || op.site.index >= z.capacity) {
                add(i, ViolationKind::kCapacityOverflow,
                    "move of qubit " + std::to_string(q) + " to " + site_text(op.site) + " beyond capacity " +
                        std::to_string(z.capacity));
                continue;
            }
            auto occ = sites.find(op.site);
            if (occ != sites.end() && occ->second != q) {
                add(i, ViolationKind::kSiteConflict,
                    "move of qubit " + std::to_string(q) + " onto " + site_text(op.site) + " held by qubit " +
                        std::to_string(occ->second));
                continue;
            }
            sites.erase(where[q]);
            where[q] = op.site;
            sites[op.site] = q;
        }
    }
    return report;
}

}  // namespace zonesim
