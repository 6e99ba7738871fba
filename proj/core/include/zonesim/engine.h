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

#ifndef ZONESIM_ENGINE_H
#define ZONESIM_ENGINE_H

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "zonesim/circuit.h"
#include "zonesim/logistics.h"
#include "zonesim/noise_model.h"
#include "zonesim/pauli_frame.h"
#include "zonesim/rng.h"
#include "zonesim/tableau.h"

namespace zonesim {

enum class Outcome : uint8_t { kZero = 0, kOne = 1, kLost = 2 };

char outcome_char(Outcome o);

/// Random streams of one shot. Projections and noise draw from separate
/// streams so a noiseless run samples exactly like the statevector oracle.
enum RngStream : uint64_t { kMeasurementStream = 0, kNoiseStream = 1, kDecoderStream = 2 };

/// Stabilizer state plus per-qubit presence and leakage.
class LossyStabilizerState {
   public:
    LossyStabilizerState(std::size_t n, uint64_t seed);

    std::size_t num_qubits() const { return tableau_.num_qubits(); }
    Tableau& tableau() { return tableau_; }
    const Tableau& tableau() const { return tableau_; }
    bool present(std::size_t q) const { return present_[q] != 0; }
    bool leaked(std::size_t q) const { return leaked_[q] != 0; }
    /// Present and not leaked: gates act on the qubit.
    bool active(std::size_t q) const { return present_[q] && !leaked_[q]; }

    /// Removes the atom. The qubit is traced out by a Z measurement whose
    /// outcome is discarded; later ops never touch its column again.
    void lose(std::size_t q);
    void leak(std::size_t q) { leaked_[q] = 1; }
    void replace_leaked(std::size_t q) { leaked_[q] = 0; }
    /// A fresh atom in |0> takes the slot.
    void replace(std::size_t q);

    /// Software Pauli frame: corrections known to the controller that are never
    /// applied physically. Measurement records are reported in the corrected frame.
    PauliFrame& frame() { return frame_; }
    const PauliFrame& frame() const { return frame_; }

    CounterRng& measurement_rng() { return meas_rng_; }
    CounterRng& noise_rng() { return noise_rng_; }

   private:
    Tableau tableau_;
    std::vector<uint8_t> present_;
    std::vector<uint8_t> leaked_;
    PauliFrame frame_;
    CounterRng meas_rng_;
    CounterRng noise_rng_;
};

struct OutcomeEntry {
    std::size_t op_index = 0;
    uint32_t qubit = 0;
    Outcome value = Outcome::kZero;
    std::optional<int> cycle;
    int attempt = 1;
    bool terminal = false;  // MEASURE rather than MCM
};

enum class LossCause : uint8_t { kCz, kMcmImage, kRegisterMcm, kIdle, kRegularImage, kInjected };

std::string_view loss_cause_name(LossCause c);

struct LossEvent {
    std::size_t op_index = 0;
    uint32_t qubit = 0;
    LossCause cause = LossCause::kCz;
    int attempt = 1;
};

struct FillEvent {
    std::size_t op_index = 0;
    uint32_t qubit = 0;
    int attempt = 1;
    bool planned = false;   // false: no reservoir atom was available
    bool success = false;
    std::optional<Site> source;
};

struct HeraldEvent {
    std::size_t op_index = 0;
    int attempt = 1;
    bool passed = false;
};

/// Everything observable from one shot, plus ground-truth loss events.
struct ShotRecord {
    uint64_t seed = 0;
    std::vector<OutcomeEntry> outcomes;
    std::vector<FillEvent> fills;
    std::vector<HeraldEvent> heralds;
    std::vector<LossEvent> losses;
    int attempts = 1;
    bool herald_exhausted = false;
    int reservoir_remaining = 0;

    /// Last terminal value of each qubit measured by MEASURE, or by the final MCM if none.
    std::vector<std::pair<uint32_t, Outcome>> final_measurements() const;
    nlohmann::json to_json() const;
    static ShotRecord from_json(const nlohmann::json& j);

    friend bool operator==(const ShotRecord&, const ShotRecord&);
};

/// Fault placed before op `op_index` executes, in a given herald attempt.
struct ForcedFault {
    enum class Kind : uint8_t { kX, kY, kZ, kLoss, kFlipRecord };
    std::size_t op_index = 0;
    uint32_t qubit = 0;
    Kind kind = Kind::kX;
    int attempt = 1;
};

struct EngineOptions {
    /// Verify the tableau commutation relations after every op.
    bool check_symplectic = false;
    std::vector<ForcedFault> faults;
    int initial_reservoir = 32;
    FillOptions fill{};
};

/// Raised for circuits that cannot execute (bad moves, unknown qubits).
class StructuralError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Circuit qubit index -> tableau column.
class QubitMap {
   public:
    static QubitMap identity(std::size_t n);
    static QubitMap of(const Circuit& circuit);
    std::size_t operator()(uint32_t q) const;

   private:
    std::vector<std::size_t> slot_;
    static constexpr std::size_t kNone = ~std::size_t{0};
};

/// Where loss events of a channel are reported.
struct EventSink {
    std::vector<LossEvent>* losses = nullptr;
    std::size_t op_index = 0;
    int attempt = 1;
    void lost(uint32_t qubit, LossCause cause) const;
};

/// Applies a unitary op (RZ, SX, X, CZ) and samples its noise channel.
/// An absent CZ operand leaves the partner with a Z of probability p_loss_partner_z.
void apply_gate(LossyStabilizerState& state, const NativeOp& op, const NoiseModel& noise, const QubitMap& map,
                const EventSink& sink = {});

/// Two-image midcircuit measurement of `targets`, followed by the lumped
/// loss and dephasing of every qubit in `register_qubits`.
std::vector<Outcome> measure_mcm(LossyStabilizerState& state, const std::vector<uint32_t>& targets,
                                 const std::vector<uint32_t>& register_qubits, const NoiseModel& noise,
                                 const QubitMap& map, const EventSink& sink = {});

/// Terminal readout with regular-imaging error rates.
std::vector<Outcome> measure_regular(LossyStabilizerState& state, const std::vector<uint32_t>& targets,
                                     const NoiseModel& noise, const QubitMap& map, const EventSink& sink = {});

/// Executes a validated circuit under a noise model. Immutable and shareable
/// across threads.
class Engine {
   public:
    Engine(Circuit circuit, NoiseModel noise, EngineOptions options = {});

    const Circuit& circuit() const { return circuit_; }
    const NoiseModel& noise() const { return noise_; }

    ShotRecord run_shot(uint64_t seed) const;

   private:
    struct ShotContext;
    Circuit circuit_;
    NoiseModel noise_;
    EngineOptions options_;
    QubitMap map_;

    void execute(ShotContext& ctx, const NativeOp& op, std::size_t op_index) const;
};

/// Executes one shot. Throws StructuralError for structurally invalid circuits.
ShotRecord run_shot(const Circuit& circuit, const NoiseModel& noise, uint64_t seed, const EngineOptions& options = {});

/// Shot i uses derive_seed(base_seed, i). Results are independent of `threads`.
std::vector<ShotRecord> run_batch(const Circuit& circuit, const NoiseModel& noise, std::size_t n_shots,
                                  uint64_t base_seed, unsigned threads = 1, const EngineOptions& options = {});

/// Streams records as JSONL in shot order.
void run_batch_jsonl(const Circuit& circuit, const NoiseModel& noise, std::size_t n_shots, uint64_t base_seed,
                     std::ostream& out, unsigned threads = 1, const EngineOptions& options = {});

}  // namespace zonesim

#endif  // ZONESIM_ENGINE_H
