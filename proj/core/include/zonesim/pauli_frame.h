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

#ifndef ZONESIM_PAULI_FRAME_H
#define ZONESIM_PAULI_FRAME_H

#include <cstdint>
#include <vector>

#include "zonesim/circuit.h"

namespace zonesim {

/// A Pauli error (signs dropped) propagated through Clifford ops.
class PauliFrame {
   public:
    explicit PauliFrame(std::size_t n) : x_(n, 0), z_(n, 0) {}

    std::size_t size() const { return x_.size(); }
    bool x(std::size_t q) const { return x_[q] != 0; }
    bool z(std::size_t q) const { return z_[q] != 0; }
    void clear(std::size_t q) { x_[q] = z_[q] = 0; }
    /// Multiplies 'X', 'Y' or 'Z' onto qubit q.
    void inject(std::size_t q, char pauli);
    bool empty() const;

    void h(std::size_t q);
    void s(std::size_t q);
    void sx(std::size_t q);
    void cz(std::size_t a, std::size_t b);

   private:
    std::vector<uint8_t> x_;
    std::vector<uint8_t> z_;
};

/// One elementary fault placed immediately before op `op_index`.
/// `pauli` is 'X', 'Y', 'Z', or 'M' for a classical flip of the record that
/// op `op_index` produces for `qubit`.
struct FaultInjection {
    std::size_t op_index = 0;
    uint32_t qubit = 0;
    char pauli = 'X';
};

/// Propagates the faults through a LOOP-free circuit and returns one flag per
/// measurement record (MCM and MEASURE targets in program order) telling
/// whether that record is flipped relative to the fault-free run.
std::vector<uint8_t> propagate_faults(const Circuit& circuit, const std::vector<FaultInjection>& faults);

}  // namespace zonesim

#endif  // ZONESIM_PAULI_FRAME_H
