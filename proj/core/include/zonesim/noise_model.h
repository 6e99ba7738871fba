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

#ifndef ZONESIM_NOISE_MODEL_H
#define ZONESIM_NOISE_MODEL_H

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace zonesim {

enum class Provenance : uint8_t { kMeasured, kCalibrated, kAssumed };

std::string_view provenance_name(Provenance p);
Provenance parse_provenance(std::string_view name);

struct ParameterInfo {
    Provenance provenance = Provenance::kAssumed;
    std::string note;
    std::string calibration_target;  // required for kCalibrated
};

/// Per-event noise probabilities and timing constants.
struct NoiseModel {
    // MCM imaging
    double p_mcm_loss_bright = 0.005;
    double p_distinguish = 0.003;
    double p_flip_1to0 = 0.003;
    double p_flip_0to1 = 0.0006;
    double p_background_loss_per_image = 0.0002;
    // register qubits, once per MCM op
    double p_register_loss_per_mcm = 0.0106;
    double p_register_dephase_per_mcm = 0.00245;
    // regular (terminal) imaging
    double p_regular_loss_bright = 0.0006;
    double p_distinguish_regular = 0.0003;
    // gates
    double p_1q_pauli = 0.001;
    double p_cz_pauli = 0.012124;
    double p_cz_loss = 0.0025;
    double p_loss_partner_z = 0.5;
    double p_leak_residual = 0.0;
    // transport
    double p_move_fail = 0.004;
    // light-off wait of one MCM block
    double p_idle_loss_per_block = 0.0004;
    double mcm_block_duration_s = 0.025;
    double idle_dephase_rate = 0.006;  // contrast decay per second
    // replenishment
    double replenish_contrast_site = 0.981;
    double replenish_contrast_array = 0.956;
    double lz_load_probability = 0.5;

    std::map<std::string, ParameterInfo> provenance;

    /// Shipped defaults with provenance annotations.
    static NoiseModel defaults();
    /// Every probability set to zero; timing constants unchanged.
    static NoiseModel noiseless();

    /// Z-flip probability of one light-off block: half the contrast lost.
    double p_idle_dephase_per_block() const { return 0.5 * idle_dephase_rate * mcm_block_duration_s; }

    /// Multiplies every error probability (not p_loss_partner_z) by `factor`, clamped to [0, 1].
    NoiseModel scaled(double factor) const;

    /// Throws std::invalid_argument naming the first bad parameter.
    void check() const;

    nlohmann::json to_json() const;
    /// Accepts {"parameters": {name: number | {"value": v, "provenance": ..., ...}}}
    /// layered on top of defaults(). Unknown names throw std::invalid_argument.
    static NoiseModel from_json(const nlohmann::json& j);

    std::vector<std::string> parameter_names() const;
    double get(std::string_view name) const;
    void set(std::string_view name, double value);
};

/// Exact fidelity of the compiled Bell circuit (H on q0, CNOT q0->q1) under the
/// gate channels of `noise`, by enumeration of every Pauli fault combination.
double bell_circuit_fidelity(const NoiseModel& noise);

/// Bisects p_cz_pauli so that bell_circuit_fidelity equals `target`.
double calibrate_cz_pauli(NoiseModel noise, double target);

}  // namespace zonesim

#endif  // ZONESIM_NOISE_MODEL_H
