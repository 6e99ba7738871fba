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

#ifndef ZONESIM_EXPERIMENT_H
#define ZONESIM_EXPERIMENT_H

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "zonesim/analysis.h"
#include "zonesim/engine.h"
#include "zonesim/lindblad.h"
#include "zonesim/logistics.h"
#include "zonesim/noise_model.h"
#include "zonesim/qec_circuits.h"

namespace zonesim {

/// Invalid experiment configuration. `pointer` is a JSON pointer to the
/// offending key.
class ConfigError : public std::runtime_error {
   public:
    ConfigError(std::string pointer, const std::string& message);
    const std::string& pointer() const { return pointer_; }

   private:
    std::string pointer_;
};

inline constexpr const char* kConfigSchema = "zonesim.experiment/1";

enum class ExperimentKind : uint8_t { kRepcode, kDistill, kGerb, kRamseyMcm, kReplenish, kLeakageMap };
std::string_view experiment_kind_name(ExperimentKind k);

struct RepcodeRun {
    std::vector<int> distances{3};
    int cycles = 0;  // 0: one cycle per unit of distance
    bool phase_sensitive = false;
    bool loss_aware = true;
    bool write_shots = true;
};

struct DistillRun {
    bool encoded = true;
    std::vector<BellBasis> bases{BellBasis::kXX, BellBasis::kYY, BellBasis::kZZ};
    int max_retries = 20;
    bool antiferro_variant = false;
    bool calibrate_herald = false;
    double target_attempts = 1.44;
    std::size_t calibration_shots = 10000;
    bool compare_pre_herald = true;
    bool write_shots = true;
};

struct GerbRun {
    std::vector<int> blocks{0, 4, 8, 16, 32};
    int pair_count = 4;
    int sequences = 10;
};

struct RamseyRun {
    std::vector<int> cycles{0, 10, 20, 30, 40, 50, 60};
    bool include_light = true;
    int register_qubits = 10;  // alternating phases 0 and 2
};

struct ReplenishRun {
    int sz_vacancies = 32;
    double lz_yield = 0.5;
    double target_fill = 0.9;
};

struct Grid {
    double start = 0.0;
    double stop = 0.0;
    int points = 1;
    std::vector<double> values() const;
};

struct LeakageMapRun {
    RegisterImagingModel model;
    Grid register_offset_mhz{-200.0, 200.0, 41};
    Grid imaging_detuning_mhz{-200.0, 50.0, 51};
    double duration_us = 7000.0;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::kRepcode;
    nlohmann::json raw;  // as written, for the echo
    std::string noise_ref = "defaults";
    NoiseModel noise = NoiseModel::defaults();
    std::size_t shots = 1000;
    uint64_t seed = 1;
    std::filesystem::path output_dir = "out";
    unsigned threads = 1;

    RepcodeRun repcode;
    DistillRun distill;
    GerbRun gerb;
    RamseyRun ramsey;
    ReplenishRun replenish;
    LeakageMapRun leakage;

    /// Relative file references resolve against `base_dir`.
    static ExperimentConfig parse(const nlohmann::json& j, const std::filesystem::path& base_dir = ".");
    static ExperimentConfig load(const std::filesystem::path& path);
    /// FNV-1a over the canonical config, excluding threads and output_dir.
    std::string hash() const;
};

/// Built-in noise names ("defaults", "noiseless") or a JSON file path.
NoiseModel load_noise(const std::string& ref, const std::filesystem::path& base_dir = ".");
RegisterImagingModel load_imaging_model(const nlohmann::json& ref, const std::filesystem::path& base_dir = ".");
RegisterImagingModel default_imaging_model();

uint64_t fnv1a64(std::string_view data);

// ---------------------------------------------------------------- repcode

struct RepcodeResult {
    int distance = 0;
    int cycles = 0;
    bool phase_sensitive = false;
    RateEstimate failures;           // loss-aware when requested
    RateEstimate failures_unedited;  // without per-shot loss edits
    std::size_t loss_touched_shots = 0;
    FrequencySeries detection;       // mean detector parity per cycle
    double mean_detection = 0.0;
    std::vector<ShotRecord> shots;   // retained when requested
};

RepcodeResult run_repcode(const RepCodeSpec& spec, const NoiseModel& noise, std::size_t shots, uint64_t seed,
                          unsigned threads = 1, bool keep_shots = false);

// ---------------------------------------------------------------- distill

enum class DistillVerdict : uint8_t { kSuccess, kFailure, kUncorrectable, kHeraldExhausted };
std::string_view distill_verdict_name(DistillVerdict v);

/// Scores the terminal data-block readout. Encoded blocks use the block
/// parity to correct one lost atom; two losses or an odd block parity are
/// uncorrectable.
DistillVerdict score_distill_shot(const ShotRecord& shot, const DistillSpec& spec);

struct DistillBasisResult {
    BellBasis basis = BellBasis::kZZ;
    uint64_t successes = 0;
    uint64_t failures = 0;
    uint64_t uncorrectable = 0;
    uint64_t herald_exhausted = 0;
    RetryHistogram retries;
    // Single attempt, no conditioning on the herald.
    RateEstimate pre_herald;
    // Single attempt, herald passed.
    RateEstimate post_herald;
    double herald_acceptance = 0.0;
    std::vector<ShotRecord> shots;
};

struct DistillResult {
    bool encoded = true;
    bool antiferro_variant = false;
    double noise_scale = 1.0;
    std::vector<DistillBasisResult> bases;
    FidelityEstimate fidelity;
    RetryHistogram retries;  // pooled over bases
};

DistillBasisResult run_distill_basis(const DistillSpec& spec, const NoiseModel& noise, std::size_t shots,
                                     uint64_t seed, unsigned threads = 1, bool compare_pre_herald = true,
                                     bool keep_shots = false);
/// Single-attempt herald acceptance probability.
double herald_acceptance(const DistillSpec& spec, const NoiseModel& noise, std::size_t shots, uint64_t seed,
                         unsigned threads = 1);
/// Noise scale factor at which the per-attempt acceptance equals `target`,
/// by bisection with common random numbers.
double calibrate_herald_scale(const DistillSpec& spec, const NoiseModel& noise, double target, std::size_t shots,
                              uint64_t seed, unsigned threads = 1);
DistillResult run_distill(const DistillRun& run, const NoiseModel& noise, std::size_t shots, uint64_t seed,
                          unsigned threads = 1);

// ---------------------------------------------------------------- gerb

struct GerbPoint {
    int blocks = 0;
    uint64_t pairs = 0;
    uint64_t returned = 0;  // pairs read back as 11
    double probability = 0.0;
    double sigma = 0.0;
};

struct GerbResult {
    std::vector<GerbPoint> points;
    FitResult fit;  // of probability - 1/4
    double error_per_block = 0.0;
    double error_per_block_se = 0.0;
};

GerbResult run_gerb(const GerbRun& run, const NoiseModel& noise, std::size_t shots, uint64_t seed,
                    unsigned threads = 1);

// ---------------------------------------------------------------- ramsey

struct RamseyPoint {
    int cycles = 0;
    uint64_t atoms = 0;
    uint64_t survived = 0;
    double survival = 0.0;
    double survival_sigma = 0.0;
    double p1_phase0 = 0.0;
    double p1_phase2 = 0.0;
    double contrast = 0.0;
    double contrast_sigma = 0.0;
};

struct RamseyResult {
    bool include_light = true;
    std::vector<RamseyPoint> points;
    FitResult loss_fit;
    FitResult contrast_fit;
    double loss_per_cycle = 0.0;
    double loss_per_cycle_se = 0.0;
    double contrast_loss_per_cycle = 0.0;
    double contrast_loss_per_cycle_se = 0.0;
};

/// `shots` per cycle-count point.
RamseyResult run_ramsey(const RamseyRun& run, const NoiseModel& noise, std::size_t shots, uint64_t seed,
                        unsigned threads = 1);

// ---------------------------------------------------------------- replenish

struct ReplenishResult {
    std::size_t trials = 0;
    std::size_t reached_target = 0;
    double mean_fill_after = 0.0;
    double mean_rounds = 0.0;
    double mean_total_ms = 0.0;
    std::size_t partial = 0;
    Interval reached_ci;
};

ReplenishResult run_replenish(const ReplenishRun& run, const NoiseModel& noise, std::size_t trials, uint64_t seed);

// ---------------------------------------------------------------- tables

struct TableCheck {
    std::string name;
    double value = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string detail;
    bool pass() const;
};

struct PublishedTables {
    std::vector<TableCheck> checks;
    std::string report;  // Markdown
    bool all_pass() const;
};

/// Published count data with the rates and fidelities quoted alongside them.
PublishedTables reproduce_published_tables();

// ---------------------------------------------------------------- bundle

struct RunSummary {
    std::string config_hash;
    std::vector<std::filesystem::path> files;
    nlohmann::json summary;
};

/// Writes config.json, JSONL shot streams, summary.csv and report.md under
/// the configured output directory. Each file is written to a temporary name
/// and renamed into place.
RunSummary run_experiment(const ExperimentConfig& config);

void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace zonesim

#endif  // ZONESIM_EXPERIMENT_H
