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

#include "zonesim/pauli_frame.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace zonesim {

void PauliFrame::inject(std::size_t q, char pauli) {
    switch (pauli) {
        case 'X':
            x_[q] ^= 1;
            break;
        case 'Z':
            z_[q] ^= 1;
            break;
        case 'Y':
            x_[q] ^= 1;
            z_[q] ^= 1;
            break;
        case 'I':
            break;
        default:
            throw std::invalid_argument(std::string("bad Pauli '") + pauli + "'");
    }
}

bool PauliFrame::empty() const {
    return std::none_of(x_.begin(), x_.end(), [](uint8_t b) { return b != 0; }) &&
           std::none_of(z_.begin(), z_.end(), [](uint8_t b) { return b != 0; });
}

void PauliFrame::h(std::size_t q) { std::swap(x_[q], z_[q]); }

void PauliFrame::s(std::size_t q) { z_[q] ^= x_[q]; }

void PauliFrame::sx(std::size_t q) { x_[q] ^= z_[q]; }

void PauliFrame::cz(std::size_t a, std::size_t b) {
    z_[a] ^= x_[b];
    z_[b] ^= x_[a];
}

std::vector<uint8_t> propagate_faults(const Circuit& circuit, const std::vector<FaultInjection>& faults) {
    std::vector<std::size_t> slot_of(0);
    uint32_t max_index = 0;
    for (const auto& q : circuit.qubits) max_index = std::max(max_index, q.index);
    slot_of.assign(max_index + 1, 0);
    for (std::size_t i = 0; i < circuit.qubits.size(); ++i) slot_of[circuit.qubits[i].index] = i;

    std::vector<const FaultInjection*> sorted;
    sorted.reserve(faults.size());
    for (const auto& f : faults) sorted.push_back(&f);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const FaultInjection* a, const FaultInjection* b) { return a->op_index < b->op_index; });

    PauliFrame frame(circuit.num_qubits());
    std::vector<uint8_t> flips;
    std::size_t next = 0;
    for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
        const NativeOp& op = circuit.ops[i];
        std::vector<uint32_t> record_flips;
        for (; next < sorted.size() && sorted[next]->op_index == i; ++next) {
            if (sorted[next]->pauli == 'M') {
                record_flips.push_back(sorted[next]->qubit);
            } else {
                frame.inject(slot_of.at(sorted[next]->qubit), sorted[next]->pauli);
            }
        }
        switch (op.code) {
            case Opcode::kLoop:
            case Opcode::kHerald:
                throw std::invalid_argument("propagate_faults does not follow herald loops");
            case Opcode::kRz:
                for (int k = 0; k < op.angle.quarter(); ++k) frame.s(slot_of[op.targets[0]]);
                break;
            case Opcode::kSx:
                frame.sx(slot_of[op.targets[0]]);
                break;
            case Opcode::kCz:
                frame.cz(slot_of[op.targets[0]], slot_of[op.targets[1]]);
                break;
            case Opcode::kMcm:
            case Opcode::kMeasure:
                for (uint32_t t : op.targets) {
                    bool flip = frame.x(slot_of[t]);
                    flip ^= (std::count(record_flips.begin(), record_flips.end(), t) & 1) != 0;
                    flips.push_back(flip ? 1 : 0);
                }
                break;
            case Opcode::kReset0:
                for (uint32_t t : op.targets) frame.clear(slot_of[t]);
                break;
            default:
                break;
        }
    }
    return flips;
}

}  // namespace zonesim
