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

#include "zonesim/noise_model.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "zonesim/compile.h"
#include "zonesim/pauli_frame.h"

namespace zonesim {

namespace {

struct Field {
    std::string_view name;
    double NoiseModel::*member;
    bool probability;  // clamped by scaled() and bounded to [0, 1]
    bool scalable;
};

constexpr std::array<Field, 21> kFields = {{
    {"p_mcm_loss_bright", &NoiseModel::p_mcm_loss_bright, true, true},
    {"p_distinguish", &NoiseModel::p_distinguish, true, true},
    {"p_flip_1to0", &NoiseModel::p_flip_1to0, true, true},
    {"p_flip_0to1", &NoiseModel::p_flip_0to1, true, true},
    {"p_background_loss_per_image", &NoiseModel::p_background_loss_per_image, true, true},
    {"p_register_loss_per_mcm", &NoiseModel::p_register_loss_per_mcm, true, true},
    {"p_register_dephase_per_mcm", &NoiseModel::p_register_dephase_per_mcm, true, true},
    {"p_regular_loss_bright", &NoiseModel::p_regular_loss_bright, true, true},
    {"p_distinguish_regular", &NoiseModel::p_distinguish_regular, true, true},
    {"p_1q_pauli", &NoiseModel::p_1q_pauli, true, true},
    {"p_cz_pauli", &NoiseModel::p_cz_pauli, true, true},
    {"p_cz_loss", &NoiseModel::p_cz_loss, true, true},
    {"p_loss_partner_z", &NoiseModel::p_loss_partner_z, true, false},
    {"p_leak_residual", &NoiseModel::p_leak_residual, true, true},
    {"p_move_fail", &NoiseModel::p_move_fail, true, true},
    {"p_idle_loss_per_block", &NoiseModel::p_idle_loss_per_block, true, true},
    {"mcm_block_duration_s", &NoiseModel::mcm_block_duration_s, false, false},
    {"idle_dephase_rate", &NoiseModel::idle_dephase_rate, false, true},
    {"replenish_contrast_site", &NoiseModel::replenish_contrast_site, true, false},
    {"replenish_contrast_array", &NoiseModel::replenish_contrast_array, true, false},
    {"lz_load_probability", &NoiseModel::lz_load_probability, true, false},
}};

const Field& field(std::string_view name) {
    for (const auto& f : kFields) {
        if (f.name == name) return f;
    }
    throw std::invalid_argument("unknown noise parameter '" + std::string(name) + "'");
}

}  // namespace

std::string_view provenance_name(Provenance p) {
    switch (p) {
        case Provenance::kMeasured:
            return "MEASURED";
        case Provenance::kCalibrated:
            return "CALIBRATED";
        case Provenance::kAssumed:
            break;
    }
    return "ASSUMED";
}

Provenance parse_provenance(std::string_view name) {
    if (name == "MEASURED") return Provenance::kMeasured;
    if (name == "CALIBRATED") return Provenance::kCalibrated;
    if (name == "ASSUMED") return Provenance::kAssumed;
    throw std::invalid_argument("unknown provenance tag '" + std::string(name) + "'");
}

NoiseModel NoiseModel::defaults() {
    NoiseModel m;
    using P = Provenance;
    auto& t = m.provenance;
    t["p_mcm_loss_bright"] = {P::kMeasured, "MCM imaging: atom loss per bright image, 0.005(2)", ""};
    t["p_distinguish"] = {P::kMeasured, "MCM imaging: state distinguishability error", ""};
    t["p_flip_1to0"] = {P::kMeasured, "spin flip 1->0 during imaging, 0.003(16); uncertainty exceeds value", ""};
    t["p_flip_0to1"] = {P::kMeasured, "spin flip 0->1 during imaging, 0.0006(8)", ""};
    t["p_background_loss_per_image"] = {P::kMeasured, "vacuum-limited loss per image (30 s lifetime)", ""};
    t["p_register_loss_per_mcm"] = {P::kMeasured, "register atom loss per MCM cycle, 0.0106(7)", ""};
    t["p_register_dephase_per_mcm"] = {P::kMeasured, "half the register contrast loss per MCM cycle, 0.0049(7)/2", ""};
    t["p_regular_loss_bright"] = {P::kAssumed, "regular imaging loss per bright image; only an upper bound (<0.0006) is known", ""};
    t["p_distinguish_regular"] = {P::kMeasured, "regular imaging distinguishability error", ""};
    t["p_1q_pauli"] = {P::kAssumed, "single-qubit depolarizing probability per SX or X pulse", ""};
    t["p_cz_pauli"] = {P::kCalibrated, "two-qubit depolarizing probability per CZ",
                       "compiled Bell circuit fidelity 0.988 with p_1q_pauli = 0.001 (calibrate_cz_pauli)"};
    t["p_cz_loss"] = {P::kAssumed, "per-qubit loss per CZ from leakage conversion; pair-survival decay is not tabulated", ""};
    t["p_loss_partner_z"] = {P::kAssumed, "Z probability on the partner of an absent CZ operand", ""};
    t["p_leak_residual"] = {P::kAssumed, "leakage that is not converted to loss", ""};
    t["p_move_fail"] = {P::kMeasured, "conditional SZ->MZ move failure, efficiency exceeding 0.996", ""};
    t["p_idle_loss_per_block"] = {P::kAssumed, "light-off loss per MCM-length wait: two images of background loss", ""};
    t["mcm_block_duration_s"] = {P::kAssumed, "duration of one MCM block in seconds", ""};
    t["idle_dephase_rate"] = {P::kMeasured, "differential contrast decay with the MOT running, 0.006(5)/s", ""};
    t["replenish_contrast_site"] = {P::kMeasured, "site-averaged normalized contrast after replenishment, 0.981(7)", ""};
    t["replenish_contrast_array"] = {P::kMeasured, "array-averaged normalized contrast after replenishment, 0.956(14)", ""};
    t["lz_load_probability"] = {P::kMeasured, "LZ single-atom probability after light-assisted collisions", ""};
    return m;
}

NoiseModel NoiseModel::noiseless() {
    NoiseModel m = defaults();
    for (const auto& f : kFields) {
        if (f.scalable && f.probability) m.*(f.member) = 0.0;
    }
    m.idle_dephase_rate = 0.0;
    m.replenish_contrast_site = 1.0;
    m.replenish_contrast_array = 1.0;
    return m;
}

NoiseModel NoiseModel::scaled(double factor) const {
    if (!(factor >= 0.0)) {
        throw std::invalid_argument("noise scale factor must be nonnegative");
    }
    NoiseModel m = *this;
    for (const auto& f : kFields) {
        if (!f.scalable) continue;
        double v = m.*(f.member) * factor;
        if (f.probability) v = std::clamp(v, 0.0, 1.0);
        m.*(f.member) = v;
    }
    return m;
}

void NoiseModel::check() const {
    for (const auto& f : kFields) {
        const double v = this->*(f.member);
        if (!std::isfinite(v) || v < 0.0 || (f.probability && v > 1.0)) {
            throw std::invalid_argument("noise parameter " + std::string(f.name) + " = " + std::to_string(v) +
                                        " is outside its range");
        }
    }
    for (const auto& [name, info] : provenance) {
        field(name);
        if (info.provenance == Provenance::kCalibrated && info.calibration_target.empty()) {
            throw std::invalid_argument("calibrated parameter " + name + " does not state its calibration target");
        }
    }
}

std::vector<std::string> NoiseModel::parameter_names() const {
    std::vector<std::string> out;
    for (const auto& f : kFields) out.emplace_back(f.name);
    return out;
}

double NoiseModel::get(std::string_view name) const { return this->*(field(name).member); }

void NoiseModel::set(std::string_view name, double value) { this->*(field(name).member) = value; }

nlohmann::json NoiseModel::to_json() const {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& f : kFields) {
        nlohmann::json entry = {{"value", this->*(f.member)}};
        if (auto it = provenance.find(std::string(f.name)); it != provenance.end()) {
            entry["provenance"] = provenance_name(it->second.provenance);
            if (!it->second.note.empty()) entry["note"] = it->second.note;
            if (!it->second.calibration_target.empty()) entry["calibration_target"] = it->second.calibration_target;
        }
        params[std::string(f.name)] = entry;
    }
    return {{"schema", "zonesim.noise/1"}, {"parameters", params}};
}

NoiseModel NoiseModel::from_json(const nlohmann::json& j) {
    NoiseModel m = defaults();
    if (!j.is_object()) {
        throw std::invalid_argument("noise model must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (key != "schema" && key != "parameters") {
            throw std::invalid_argument("unknown noise model key '" + key + "'");
        }
    }
    if (j.contains("schema") && j["schema"] != "zonesim.noise/1") {
        throw std::invalid_argument("unsupported noise schema " + j["schema"].dump());
    }
    if (!j.contains("parameters")) return m;
    for (const auto& [name, entry] : j["parameters"].items()) {
        const Field& f = field(name);
        if (entry.is_number()) {
            m.*(f.member) = entry.get<double>();
            continue;
        }
        if (!entry.is_object() || !entry.contains("value") || !entry["value"].is_number()) {
            throw std::invalid_argument("noise parameter " + name + " needs a numeric value");
        }
        for (const auto& [k, v] : entry.items()) {
            if (k != "value" && k != "provenance" && k != "note" && k != "calibration_target") {
                throw std::invalid_argument("unknown field '" + k + "' in noise parameter " + name);
            }
        }
        m.*(f.member) = entry["value"].get<double>();
        ParameterInfo& info = m.provenance[name];
        if (entry.contains("provenance")) info.provenance = parse_provenance(entry["provenance"].get<std::string>());
        if (entry.contains("note")) info.note = entry["note"].get<std::string>();
        if (entry.contains("calibration_target")) {
            info.calibration_target = entry["calibration_target"].get<std::string>();
        }
    }
    m.check();
    return m;
}

double bell_circuit_fidelity(const NoiseModel& noise) {
    Circuit c;
    c.qubits = {{0, QubitRole::kData, {}}, {1, QubitRole::kData, {ZoneKind::kRegister, 1}}};
    append(c.ops, compile_h(0));
    append(c.ops, compile_cnot(0, 1));

    struct Location {
        std::size_t op;
        std::vector<uint32_t> qubits;
    };
    std::vector<Location> locations;
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
        const NativeOp& op = c.ops[i];
        if (op.code == Opcode::kSx || op.code == Opcode::kX || op.code == Opcode::kCz) {
            locations.push_back({i + 1, op.targets});
        }
    }
    constexpr char kP[4] = {'I', 'X', 'Y', 'Z'};
    double fidelity = 0.0;
    std::vector<int> choice(locations.size(), 0);
    auto radix = [&](std::size_t k) { return locations[k].qubits.size() == 1 ? 4 : 16; };
    while (true) {
        double prob = 1.0;
        PauliFrame frame(2);
        for (std::size_t k = 0; k < locations.size(); ++k) {
            const bool two = locations[k].qubits.size() == 2;
            const double p = two ? noise.p_cz_pauli : noise.p_1q_pauli;
            const int n_nontrivial = two ? 15 : 3;
            prob *= choice[k] == 0 ? 1.0 - p : p / n_nontrivial;
        }
        // Propagate each chosen Pauli from its location to the end.
        for (std::size_t i = 0; i <= c.ops.size(); ++i) {
            for (std::size_t k = 0; k < locations.size(); ++k) {
                if (locations[k].op != i) continue;
                frame.inject(locations[k].qubits[0], kP[choice[k] % 4]);
                if (locations[k].qubits.size() == 2) frame.inject(locations[k].qubits[1], kP[choice[k] / 4]);
            }
            if (i == c.ops.size()) break;
            const NativeOp& op = c.ops[i];
            if (op.code == Opcode::kRz) {
                for (int r = 0; r < op.angle.quarter(); ++r) frame.s(op.targets[0]);
            } else if (op.code == Opcode::kSx) {
                frame.sx(op.targets[0]);
            } else if (op.code == Opcode::kCz) {
                frame.cz(op.targets[0], op.targets[1]);
            }
        }
        // Errors in the stabilizer group {II, XX, YY, ZZ} of |Phi+> leave it unchanged.
        if (frame.x(0) == frame.x(1) && frame.z(0) == frame.z(1)) fidelity += prob;

        std::size_t k = 0;
        while (k < locations.size() && ++choice[k] == radix(k)) {
            choice[k] = 0;
            ++k;
        }
        if (k == locations.size()) break;
    }
    return fidelity;
}

double calibrate_cz_pauli(NoiseModel noise, double target) {
    noise.p_cz_pauli = 0.0;
    if (bell_circuit_fidelity(noise) < target) {
        throw std::invalid_argument("target fidelity unreachable with the configured single-qubit error");
    }
    double lo = 0.0, hi = 0.75;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        noise.p_cz_pauli = mid;
        (bell_circuit_fidelity(noise) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace zonesim
