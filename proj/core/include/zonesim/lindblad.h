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

#ifndef ZONESIM_LINDBLAD_H
#define ZONESIM_LINDBLAD_H

#include <complex>
#include <cstddef>
#include <functional>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace zonesim {

struct Level {
    std::string name;
    double energy = 0.0;  // angular frequency, rotating frame
    bool sink = false;    // counts toward leakage
};

/// Coupling lower <-> upper with Rabi frequency weight * rabi. The upper
/// level sits at detuning -detuning relative to the lower one in the frame
/// co-rotating with this drive.
struct Drive {
    std::size_t lower = 0;
    std::size_t upper = 0;
    double rabi = 0.0;
    double detuning = 0.0;
    double weight = 1.0;
};

struct Decay {
    std::size_t upper = 0;
    std::size_t lower = 0;
    double rate = 0.0;
};

class EvolutionError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct LevelSystem {
    std::vector<Level> levels;
    std::vector<Drive> drives;
    std::vector<Decay> decays;

    std::size_t dim() const { return levels.size(); }
    /// Throws EvolutionError for invalid systems: negative rates, bad
    /// indices, a level that is the upper end of two drives, more than 20 levels.
    void check() const;
    Eigen::MatrixXcd hamiltonian() const;
    /// Column-stacked superoperator: d vec(rho) / dt = L vec(rho).
    Eigen::MatrixXcd liouvillian() const;

    nlohmann::json to_json() const;
    static LevelSystem from_json(const nlohmann::json& j);
};

enum class Integrator : uint8_t { kAuto, kRungeKutta, kExponential };

struct StepControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    /// Number of equally spaced output times after t = 0.
    std::size_t outputs = 100;
    Integrator method = Integrator::kAuto;
    /// kAuto switches to the exponential propagator above this |L| * duration.
    double stiffness_limit = 2e4;
    /// Steps below duration * min_step_fraction count as step-size underflow.
    double min_step_fraction = 1e-15;
    std::size_t max_steps = 50'000'000;
    bool store_states = false;
    /// Throw EvolutionError when trace or positivity tolerances are violated.
    bool enforce_invariants = true;
};

struct EvolutionResult {
    Eigen::MatrixXcd rho;
    std::vector<double> times;
    std::vector<std::vector<double>> populations;
    std::vector<Eigen::MatrixXcd> states;  // only with StepControl::store_states
    double leakage = 0.0;
    double max_trace_drift = 0.0;
    double min_eigenvalue = 0.0;
};

Eigen::MatrixXcd pure_state(std::size_t dim, std::size_t level);

EvolutionResult evolve(const LevelSystem& system, const Eigen::MatrixXcd& rho0, double duration,
                       const StepControl& control = {});

/// Energy shift of `level` measured from the phase of its coherence with an
/// uncoupled `reference` level, by a straight-line fit over the run.
double measured_level_shift(const LevelSystem& system, std::size_t level, std::size_t reference, double duration,
                            std::size_t outputs = 400);

struct LeakageMap {
    std::vector<double> register_detunings;
    std::vector<double> imaging_detunings;
    /// loss[i][j] at imaging_detunings[i], register_detunings[j].
    std::vector<std::vector<double>> loss;
    std::string to_csv(double frequency_unit = 1.0) const;
};

using SystemBuilder = std::function<LevelSystem(double register_detuning, double imaging_detuning)>;

LeakageMap leakage_map(const SystemBuilder& builder, const std::vector<double>& register_detunings,
                       const std::vector<double>& imaging_detunings, double duration, std::size_t initial_level,
                       unsigned threads = 1);

/// extinction * (omega / delta)^2 * gamma * t.
double leakage_estimate(double extinction, double omega, double delta, double gamma, double t);

/// Register-atom imaging model: ground, the imaged 3P1 sublevel, the 8s 3S1
/// hyperfine levels reached by the register laser, and a loss sink.
/// Frequencies are angular, in rad/us; durations in us. The JSON form uses
/// MHz and us.
struct RegisterImagingModel {
    double imaging_rabi = 0.0;
    double gamma_3p1 = 0.0;
    double register_rabi = 0.0;
    double register_detuning = 0.0;  // from the 3P1 -> 3S1 line
    std::vector<double> s1_offsets;  // hyperfine offsets of the 3S1 levels
    std::vector<double> s1_weights;  // coupling weights
    double gamma_3s1 = 0.0;
    double branch_to_3p1 = 0.5;      // remainder goes to the sink
    double image_duration = 7000.0;

    static RegisterImagingModel from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    /// `register_offset` shifts the register laser from its operating point,
    /// `imaging_detuning` detunes the imaging light from the bare transition.
    LevelSystem build(double register_offset, double imaging_detuning) const;
    /// Stark shift of the imaged level in the perturbative limit.
    double perturbative_stark_shift() const;
};

}  // namespace zonesim

#endif  // ZONESIM_LINDBLAD_H
