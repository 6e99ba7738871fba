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

#include "zonesim/statevector.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace zonesim {

namespace {
using cd = std::complex<double>;
constexpr double kEps = 1e-12;
}  // namespace

StateVector::StateVector(std::size_t n) : n_(n) {
    if (n > kMaxQubits) {
        throw std::invalid_argument("statevector oracle supports at most 6 qubits, got " + std::to_string(n));
    }
    amp_.assign(std::size_t{1} << n, cd(0.0, 0.0));
    amp_[0] = 1.0;
}

void StateVector::set_basis_state(uint64_t index) {
    std::fill(amp_.begin(), amp_.end(), cd(0.0, 0.0));
    amp_.at(index) = 1.0;
}

void StateVector::apply_1q(std::size_t q, const cd (&u)[2][2]) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        if (i & bit) continue;
        const cd a0 = amp_[i];
        const cd a1 = amp_[i | bit];
        amp_[i] = u[0][0] * a0 + u[0][1] * a1;
        amp_[i | bit] = u[1][0] * a0 + u[1][1] * a1;
    }
}

void StateVector::h(std::size_t q) {
    const double s = 1.0 / std::sqrt(2.0);
    const cd u[2][2] = {{s, s}, {s, -s}};
    apply_1q(q, u);
}

void StateVector::sx(std::size_t q) {
    const cd u[2][2] = {{cd(0.5, 0.5), cd(0.5, -0.5)}, {cd(0.5, -0.5), cd(0.5, 0.5)}};
    apply_1q(q, u);
}

void StateVector::x(std::size_t q) {
    const cd u[2][2] = {{0.0, 1.0}, {1.0, 0.0}};
    apply_1q(q, u);
}

void StateVector::rz_quarter(std::size_t q, int k) {
    static const cd kPhase[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
    const cd u[2][2] = {{1.0, 0.0}, {0.0, kPhase[((k % 4) + 4) % 4]}};
    apply_1q(q, u);
}

void StateVector::cz(std::size_t a, std::size_t b) {
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        if ((i & mask) == mask) amp_[i] = -amp_[i];
    }
}

void StateVector::cx(std::size_t control, std::size_t target) {
    h(target);
    cz(control, target);
    h(target);
}

double StateVector::prob_one(std::size_t q) const {
    const std::size_t bit = std::size_t{1} << q;
    double p = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        if (i & bit) p += std::norm(amp_[i]);
    }
    return p;
}

void StateVector::collapse(std::size_t q, bool value) {
    const std::size_t bit = std::size_t{1} << q;
    double norm = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        if (((i & bit) != 0) != value) {
            amp_[i] = 0.0;
        } else {
            norm += std::norm(amp_[i]);
        }
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& a : amp_) a *= scale;
}

bool StateVector::measure_z(std::size_t q, CounterRng& rng) {
    const double p1 = prob_one(q);
    bool value;
    if (p1 < kEps) {
        value = false;
    } else if (p1 > 1.0 - kEps) {
        value = true;
    } else {
        value = rng.uniform() >= 1.0 - p1;
    }
    collapse(q, value);
    return value;
}

void StateVector::reset(std::size_t q, CounterRng& rng) {
    if (measure_z(q, rng)) x(q);
}

OracleResult oracle_statevector(const Circuit& circuit, uint64_t seed) {
    StateVector sv(circuit.num_qubits());
    CounterRng rng(seed);
    OracleResult result;
    for (const NativeOp& op : circuit.ops) {
        auto slot = [&](std::size_t i) { return circuit.slot_of(op.targets.at(i)); };
        switch (op.code) {
            case Opcode::kRz:
                if (!op.angle.is_clifford()) {
                    throw std::invalid_argument("oracle only runs Clifford RZ angles");
                }
                sv.rz_quarter(slot(0), op.angle.quarter());
                break;
            case Opcode::kSx:
                sv.sx(slot(0));
                break;
            case Opcode::kX:
                sv.x(slot(0));
                break;
            case Opcode::kCz:
                sv.cz(slot(0), slot(1));
                break;
            case Opcode::kMcm:
            case Opcode::kMeasure:
                for (std::size_t i = 0; i < op.targets.size(); ++i) {
                    result.outcomes.push_back(sv.measure_z(slot(i), rng) ? 1 : 0);
                }
                break;
            case Opcode::kReset0:
                for (std::size_t i = 0; i < op.targets.size(); ++i) {
                    sv.reset(slot(i), rng);
                }
                break;
            default:
                break;
        }
    }
    result.amplitudes = sv.amplitudes();
    return result;
}

}  // namespace zonesim
