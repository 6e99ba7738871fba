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

#ifndef ZONESIM_QEC_CIRCUITS_H
#define ZONESIM_QEC_CIRCUITS_H

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "zonesim/circuit.h"

namespace zonesim {

struct RepCodeSpec {
    int distance = 3;
    int cycles = 1;
    bool phase_sensitive = false;
    uint64_t seed = 0;
};

/// A measurement named by the measured qubit and the MCM cycle tag.
struct MeasRef {
    uint32_t qubit = 0;
    int cycle = 0;
    friend bool operator==(const MeasRef&, const MeasRef&) = default;
    friend auto operator<=>(const MeasRef&, const MeasRef&) = default;
};

struct DetectorDef {
    int check = 0;
    int cycle = 0;
    std::vector<MeasRef> measurements;
};

/// Ring geometry of a walking repetition code. Slot k of the ring lives on
/// qubit (2k + c) mod 2N during cycle c, and check k of cycle c is read out on
/// qubit (2k + 2 + c) mod 2N.
struct RepCodeLayout {
    int distance = 3;
    int cycles = 1;
    bool phase_sensitive = false;

    int num_qubits() const { return 2 * distance; }
    uint32_t data_qubit(int slot, int cycle) const;
    uint32_t check_qubit(int check, int cycle) const;
    /// Final transversal readout of slot k, tagged with cycle = cycles.
    MeasRef final_ref(int slot) const { return {data_qubit(slot, cycles), cycles}; }
    /// Noiseless value of the observable. The per-cycle X echo flips it in
    /// the phase-insensitive variant.
    int expected_observable() const { return phase_sensitive ? 0 : cycles % 2; }

    std::vector<DetectorDef> detectors() const;
    std::size_t detector_index(int check, int cycle) const {
        return static_cast<std::size_t>(cycle) * static_cast<std::size_t>(distance) + static_cast<std::size_t>(check);
    }
    std::size_t num_detectors() const {
        return static_cast<std::size_t>(cycles + 1) * static_cast<std::size_t>(distance);
    }
    std::vector<MeasRef> observable() const { return {final_ref(0)}; }

    nlohmann::json to_json() const;
    static RepCodeLayout from_json(const nlohmann::json& j);
    static RepCodeLayout from_circuit(const Circuit& circuit);
};

RepCodeLayout repcode_layout(const RepCodeSpec& spec);
Circuit gen_walking_repcode(const RepCodeSpec& spec);

enum class BellBasis : uint8_t { kXX, kYY, kZZ };
std::string_view basis_name(BellBasis b);
BellBasis parse_basis(std::string_view name);

struct DistillSpec {
    bool encoded = true;
    BellBasis basis = BellBasis::kZZ;
    int max_retries = 20;
    bool antiferro_variant = false;
};

/// Qubits of block b (0 = A, 1 = B, 2 = C).
std::vector<uint32_t> distill_block(const DistillSpec& spec, int block);
/// Target parity of b0 xor b1 of block A in `basis`.
int distill_target_parity(BellBasis basis, bool antiferro);
Circuit gen_distillation(const DistillSpec& spec);

struct GerbSpec {
    int n_blocks = 0;
    int pair_count = 1;
    uint64_t seed = 0;
};

/// A single-qubit Clifford as a word over SX ('s') and RZ quarter turn ('r'),
/// with the images of X and Z as signed Paulis such as "+X" or "-Y".
struct Clifford1Q {
    std::string word;
    std::string image_x;
    std::string image_z;
};

/// The 24-element single-qubit Clifford group, shortest words first.
const std::vector<Clifford1Q>& clifford_group_1q();

Circuit gen_gerb(const GerbSpec& spec);

/// Register qubit i carries phase_scan[i] (quarter turns) before the final
/// pi/2 pulse. The MZ probe qubit has index phase_scan.size().
Circuit gen_ramsey_mcm(int n_mcm_cycles, bool include_light, const std::vector<int>& phase_scan);

}  // namespace zonesim

#endif  // ZONESIM_QEC_CIRCUITS_H
