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

#ifndef ZONESIM_CIRCUIT_H
#define ZONESIM_CIRCUIT_H

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zonesim {

enum class ZoneKind : uint8_t { kRegister, kInteraction, kMeasurement, kStorage, kLoading };
inline constexpr std::size_t kNumZones = 5;

std::string_view zone_name(ZoneKind kind);  // "REGISTER", "IZ", "MZ", "SZ", "LZ"
ZoneKind parse_zone(std::string_view name);

struct Zone {
    ZoneKind kind = ZoneKind::kRegister;
    int capacity = 0;
    int rows = 0;
    int cols = 0;
};

/// Capacities and geometry of every zone of the processor.
struct ZoneLayout {
    std::array<Zone, kNumZones> zones{};

    /// 128-site register, 80 tweezers split into IZ (1 row), MZ (2 rows) and
    /// SZ (2 rows) of 16 columns each, and a 75-site loading zone.
    static ZoneLayout defaults();

    const Zone& zone(ZoneKind kind) const { return zones[static_cast<std::size_t>(kind)]; }
    Zone& zone(ZoneKind kind) { return zones[static_cast<std::size_t>(kind)]; }
};

struct Site {
    ZoneKind zone = ZoneKind::kRegister;
    int index = 0;

    friend bool operator==(const Site&, const Site&) = default;
    friend auto operator<=>(const Site&, const Site&) = default;
};

enum class QubitRole : uint8_t { kUnassigned, kData, kAncilla, kReservoir };

std::string_view role_name(QubitRole role);
QubitRole parse_role(std::string_view name);

struct Qubit {
    uint32_t index = 0;
    QubitRole role = QubitRole::kUnassigned;
    Site site;  // placement at the start of the program
    friend bool operator==(const Qubit&, const Qubit&) = default;
};

/// Rotation angle stored exactly as a rational number of quarter turns (pi/2).
struct QuarterTurns {
    int64_t num = 0;
    int64_t den = 1;

    static QuarterTurns from_ratio(int64_t num, int64_t den);
    bool is_clifford() const { return den == 1; }
    /// Reduced to {0,1,2,3}. Only meaningful for Clifford angles.
    int quarter() const { return static_cast<int>(((num % 4) + 4) % 4); }
    double radians() const;

    friend bool operator==(const QuarterTurns&, const QuarterTurns&) = default;
};

enum class Opcode : uint8_t {
    kRz,        // Z rotation by `angle`
    kSx,        // sqrt(X)
    kX,
    kCz,        // exactly two distinct targets
    kMcm,       // two-image midcircuit measurement; outcomes 0/1/LOST
    kReset0,    // optical pumping to |0>
    kMove,      // single-qubit transport to `site`
    kCondFill,  // replace lost targets with reservoir atoms
    kMeasure,   // terminal register readout
    kIdle,      // MCM-length wait with imaging light off
    kLoop,      // start of a heralded retry loop
    kHerald,    // pairwise-parity herald; jumps back to kLoop on failure
};

std::string_view opcode_name(Opcode code);
std::optional<Opcode> parse_opcode(std::string_view name);

struct NativeOp {
    Opcode code = Opcode::kX;
    std::vector<uint32_t> targets;
    QuarterTurns angle;              // kRz
    std::optional<int> cycle;        // kMcm / kIdle / kMeasure
    Site site;                       // kMove destination
    ZoneKind zone = ZoneKind::kMeasurement;  // kCondFill
    int retries = 0;                 // kLoop: maximum number of attempts

    friend bool operator==(const NativeOp&, const NativeOp&) = default;
};

NativeOp make_rz(uint32_t q, int quarter_turns);
NativeOp make_sx(uint32_t q);
NativeOp make_x(uint32_t q);
NativeOp make_cz(uint32_t a, uint32_t b);
NativeOp make_mcm(std::vector<uint32_t> targets, int cycle);
NativeOp make_reset0(std::vector<uint32_t> targets);
NativeOp make_move(uint32_t q, Site dst);
NativeOp make_cond_fill(std::vector<uint32_t> targets, ZoneKind zone = ZoneKind::kMeasurement);
NativeOp make_measure(std::vector<uint32_t> targets, std::optional<int> cycle = std::nullopt);
NativeOp make_idle(std::vector<uint32_t> targets, int cycle);
NativeOp make_loop(int retries);
NativeOp make_herald(std::vector<uint32_t> pairs);

/// An immutable-after-construction program over named qubits.
struct Circuit {
    std::vector<Qubit> qubits;
    std::vector<NativeOp> ops;
    std::map<std::string, std::string> metadata;

    std::size_t num_qubits() const { return qubits.size(); }
    bool has_qubit(uint32_t q) const;
    /// Position of qubit `q` in `qubits`; throws std::out_of_range.
    std::size_t slot_of(uint32_t q) const;

    friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// Line-oriented canonical form: one op per line,
/// `OPCODE target0 [target1 ...] [angle=k] [cycle=n] [to=ZONE:i] [zone=ZONE] [retries=n]`.
std::string to_text(const Circuit& circuit);
/// Inverse of to_text. Throws std::invalid_argument with the offending line number.
Circuit from_text(std::string_view text);

enum class ViolationKind : uint8_t {
    kDuplicateQubit,
    kUnknownQubit,
    kNonCliffordAngle,
    kDuplicateTarget,
    kBadArity,
    kMeasureInRegister,
    kCapacityOverflow,
    kSiteConflict,
    kMissingCycleTag,
    kHeraldOutsideLoop,
};

std::string_view violation_name(ViolationKind kind);

struct Violation {
    std::optional<std::size_t> op_index;
    ViolationKind kind;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::size_t count(ViolationKind kind) const;
    std::string to_string() const;
};

/// Collects every structural problem; an empty report means the circuit runs.
ValidationReport validate(const Circuit& circuit, const ZoneLayout& layout = ZoneLayout::defaults());

/// Tracks where each qubit sits while walking a program.
class Placement {
   public:
    Placement(const Circuit& circuit, const ZoneLayout& layout);

    Site site(uint32_t q) const;
    bool in_register(uint32_t q) const { return site(q).zone == ZoneKind::kRegister; }
    /// Returns false (and leaves state unchanged) when `dst` is occupied or out of range.
    bool move(uint32_t q, Site dst);
    std::optional<uint32_t> occupant(Site s) const;

   private:
    ZoneLayout layout_;
    std::map<uint32_t, Site> sites_;
    std::map<Site, uint32_t> occupied_;
};

}  // namespace zonesim

#endif  // ZONESIM_CIRCUIT_H
