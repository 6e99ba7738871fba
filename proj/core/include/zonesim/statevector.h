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

#ifndef ZONESIM_STATEVECTOR_H
#define ZONESIM_STATEVECTOR_H

#include <complex>
#include <cstdint>
#include <vector>

#include "zonesim/circuit.h"
#include "zonesim/rng.h"

namespace zonesim {

/// Dense state vector on at most 6 qubits, used to cross-check the tableau.
/// Qubit q corresponds to bit q of the basis index.
class StateVector {
   public:
    static constexpr std::size_t kMaxQubits = 6;

    explicit StateVector(std::size_t n);

    std::size_t num_qubits() const { return n_; }
    const std::vector<std::complex<double>>& amplitudes() const { return amp_; }
    void set_basis_state(uint64_t index);

    void apply_1q(std::size_t q, const std::complex<double> (&u)[2][2]);
    void h(std::size_t q);
    void sx(std::size_t q);
    void x(std::size_t q);
    void rz_quarter(std::size_t q, int k);
    void cz(std::size_t a, std::size_t b);
    void cx(std::size_t control, std::size_t target);

    double prob_one(std::size_t q) const;
    /// Samples with the same convention as Tableau::measure_z: a random
    /// outcome consumes one draw and equals its top bit when p = 1/2.
    bool measure_z(std::size_t q, CounterRng& rng);
    void reset(std::size_t q, CounterRng& rng);

   private:
    std::size_t n_;
    std::vector<std::complex<double>> amp_;
    void collapse(std::size_t q, bool value);
};

struct OracleResult {
    std::vector<std::complex<double>> amplitudes;
    /// One entry per measured target, in program order.
    std::vector<uint8_t> outcomes;
};

/// Noiseless dense simulation. Placement ops, IDLE, LOOP and HERALD are no-ops.
/// Throws std::invalid_argument for circuits with more than 6 qubits.
OracleResult oracle_statevector(const Circuit& circuit, uint64_t seed);

}  // namespace zonesim

#endif  // ZONESIM_STATEVECTOR_H
