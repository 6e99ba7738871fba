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

#ifndef ZONESIM_LOGISTICS_H
#define ZONESIM_LOGISTICS_H

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "zonesim/circuit.h"
#include "zonesim/noise_model.h"
#include "zonesim/rng.h"

namespace zonesim {

/// Thrown by plan_fill when the SZ holds fewer atoms than there are vacancies.
class InsufficientReservoir : public std::runtime_error {
   public:
    InsufficientReservoir(std::size_t vacancies, std::size_t available);
    std::size_t vacancies;
    std::size_t available;
};

/// Physical position in units of the site pitch. Rows of all zones share one
/// vertical axis; the LZ sits above the SZ.
struct Coord {
    double x = 0.0;
    double y = 0.0;
};

Coord site_coord(const ZoneLayout& layout, const Site& site);

/// Manhattan length of a single-tweezer move that leaves and re-enters the
/// paired-column arrays through the inter-pair highways.
double path_length(const ZoneLayout& layout, const Site& src, const Site& dst);

class ZoneOccupancy {
   public:
    explicit ZoneOccupancy(ZoneLayout layout = ZoneLayout::defaults());

    const ZoneLayout& layout() const { return layout_; }
    bool occupied(const Site& s) const;
    void set(const Site& s, bool value);
    /// Fills the first `count` sites of `zone`.
    void fill(ZoneKind zone, int count);
    int count(ZoneKind zone) const;
    int capacity(ZoneKind zone) const { return layout_.zone(zone).capacity; }
    double fill_fraction(ZoneKind zone) const;
    std::vector<Site> occupied_sites(ZoneKind zone) const;
    std::vector<Site> vacant_sites(ZoneKind zone) const;
    nlohmann::json to_json() const;

   private:
    ZoneLayout layout_;
    std::vector<std::vector<uint8_t>> sites_;
    std::vector<uint8_t>& zone_bits(ZoneKind z) { return sites_[static_cast<std::size_t>(z)]; }
    const std::vector<uint8_t>& zone_bits(ZoneKind z) const { return sites_[static_cast<std::size_t>(z)]; }
};

struct Move {
    Site src;
    Site dst;
    double length = 0.0;
};

/// Affine latency model: base + per_move * count, in milliseconds.
struct LatencyModel {
    double base_ms = 8.0;
    double per_move_ms = 0.25;
};

struct MovePlan {
    std::vector<Move> moves;
    double total_length = 0.0;
    double latency_ms = 0.0;
    nlohmann::json to_json() const;
};

/// Exact minimum-cost assignment of each row to a distinct column (rows <= cols).
/// Returns the column chosen for every row.
std::vector<int> hungarian_assign(const std::vector<std::vector<double>>& cost);

struct FillOptions {
    LatencyModel latency{};
    /// Instances up to this many vacancies use the exact Hungarian assignment.
    std::size_t exact_limit = 64;
};

/// Assigns every vacancy a distinct source among `sources`, minimizing total
/// path length. Throws InsufficientReservoir when sources run short.
MovePlan plan_moves(const ZoneLayout& layout, const std::vector<Site>& vacancies, const std::vector<Site>& sources,
                    const FillOptions& options = {});

/// MZ vacancies filled from occupied SZ sites.
MovePlan plan_fill(const std::vector<Site>& mz_vacancies, const ZoneOccupancy& occupancy,
                   const FillOptions& options = {});

struct MoveOutcome {
    Move move;
    bool success = false;
};

/// Applies the plan in order. A failed move empties the source and leaves the
/// destination vacant. Throws std::logic_error if a source is empty or a
/// destination occupied when its move is reached.
std::vector<MoveOutcome> execute_plan(ZoneOccupancy& occupancy, const MovePlan& plan, double p_move_fail,
                                      CounterRng& rng);

struct Stage {
    std::string name;
    double duration_ms = 0.0;
};

struct ReplenishOptions {
    double transport_ms = 120.0;
    double handoff_ms = 10.0;
    double galvo_ms = 10.0;
    double lac_ms = 20.0;        // not stated; assumed
    double mcm_block_ms = 25.0;  // not stated; assumed
    LatencyModel rearrange{8.0, 3.5};
    double target_fill = 0.9;
    /// Loading rounds attempted before reporting a partial fill.
    int max_load_rounds = 3;
    /// Applies MCM-block imaging loss to LZ and SZ atoms before planning.
    bool imaging_loss = true;
    FillOptions fill{};
};

struct ReplenishReport {
    std::vector<Stage> stages;
    double total_ms = 0.0;
    int rounds = 0;
    std::vector<int> lz_loaded;
    int moves_attempted = 0;
    int moves_failed = 0;
    double sz_fill_before = 0.0;
    double sz_fill_after = 0.0;
    bool partial = false;
    /// Lumped register Z-flip probability of the whole sequence.
    double register_z_probability = 0.0;
    /// Normalized Ramsey contrast of a surviving register atom, 1 - 2 p_z.
    double register_contrast = 1.0;
    nlohmann::json to_json() const;
};

/// LZ load and light-assisted collisions, MCM imaging of LZ and SZ, and
/// LZ -> SZ conditional rearrangement, repeated until the target fill is met.
ReplenishReport replenish(ZoneOccupancy& occupancy, const NoiseModel& noise, CounterRng& rng,
                          const ReplenishOptions& options = {});

/// Per-cycle atom demand of a circuit on the reservoir.
struct ReservoirProfile {
    /// MZ qubits imaged per MCM cycle.
    int mcm_targets_per_cycle = 0;
    /// Probability that one MZ qubit is lost during one MCM cycle.
    double p_loss_per_target = 0.0;
    /// Probability that a parked SZ atom is lost during one MCM cycle.
    double p_loss_per_reservoir_atom = 0.0;
    double p_move_fail = 0.0;
    int reservoir_atoms = 32;
};

/// Loss per MZ qubit per MCM cycle: one bright image in two, the second image
/// always bright, plus two images of background loss.
double mz_loss_per_mcm(const NoiseModel& noise);
/// SZ atoms sit in |0>: one bright image, plus background.
double sz_loss_per_mcm(const NoiseModel& noise);

/// Profile for a generated circuit: counts the MCM targets of the most
/// common cycle and takes loss rates from `noise`.
ReservoirProfile reservoir_profile(const Circuit& circuit, const NoiseModel& noise);

struct LifetimeEstimate {
    bool infinite = false;
    double mean_cycles = std::numeric_limits<double>::infinity();
    double ci_low = std::numeric_limits<double>::infinity();
    double ci_high = std::numeric_limits<double>::infinity();
    std::size_t trials = 0;
};

/// Monte-Carlo number of MCM cycles until a fill request exceeds the
/// remaining reservoir, with a 95% normal-approximation CI on the mean.
LifetimeEstimate reservoir_lifetime(const ReservoirProfile& profile, std::size_t trials, uint64_t seed,
                                    long max_cycles = 10'000'000);

}  // namespace zonesim

#endif  // ZONESIM_LOGISTICS_H
