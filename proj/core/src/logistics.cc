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

#include "zonesim/logistics.h"

#include <algorithm>
#include <cmath>
#include <map>

namespace zonesim {

namespace {

// Vertical position of row 0 of each zone, in site pitches.
double zone_top(ZoneKind z) {
    switch (z) {
        case ZoneKind::kLoading:
            return -7.0;
        case ZoneKind::kStorage:
            return 0.0;
        case ZoneKind::kMeasurement:
            return 2.0;
        case ZoneKind::kInteraction:
            return 4.0;
        case ZoneKind::kRegister:
            break;
    }
    return 14.0;
}

// x at which a move enters or leaves the vertical highway system.
double highway_x(const ZoneLayout& layout, const Site& s) {
    const Zone& z = layout.zone(s.zone);
    const int col = s.index % z.cols;
    if (s.zone == ZoneKind::kLoading) {
        // Dense array without highways; atoms drop straight down.
        return col + 0.5;
    }
    return col % 2 == 0 ? col - 0.5 : col + 0.5;
}

}  // namespace

InsufficientReservoir::InsufficientReservoir(std::size_t v, std::size_t a)
    : std::runtime_error("INSUFFICIENT_RESERVOIR: " + std::to_string(v) + " vacancies, " + std::to_string(a) +
                         " reservoir atoms"),
      vacancies(v),
      available(a) {}

Coord site_coord(const ZoneLayout& layout, const Site& site) {
    const Zone& z = layout.zone(site.zone);
    if (site.index < 0 || site.index >= z.capacity) {
        throw std::out_of_range("site index outside zone " + std::string(zone_name(site.zone)));
    }
    return {static_cast<double>(site.index % z.cols), zone_top(site.zone) + site.index / z.cols};
}

double path_length(const ZoneLayout& layout, const Site& src, const Site& dst) {
    const Coord a = site_coord(layout, src);
    const Coord b = site_coord(layout, dst);
    return std::abs(a.y - b.y) + std::abs(highway_x(layout, src) - highway_x(layout, dst)) + 1.0;
}

ZoneOccupancy::ZoneOccupancy(ZoneLayout layout) : layout_(layout) {
    sites_.resize(kNumZones);
    for (std::size_t z = 0; z < kNumZones; ++z) {
        sites_[z].assign(static_cast<std::size_t>(layout_.zones[z].capacity), 0);
    }
}

bool ZoneOccupancy::occupied(const Site& s) const { return zone_bits(s.zone).at(static_cast<std::size_t>(s.index)); }

void ZoneOccupancy::set(const Site& s, bool value) {
    zone_bits(s.zone).at(static_cast<std::size_t>(s.index)) = value ? 1 : 0;
}

void ZoneOccupancy::fill(ZoneKind zone, int count) {
    auto& bits = zone_bits(zone);
    if (count < 0 || count > static_cast<int>(bits.size())) {
        throw std::invalid_argument("fill count exceeds zone capacity");
    }
    std::fill(bits.begin(), bits.end(), 0);
    std::fill(bits.begin(), bits.begin() + count, 1);
}

int ZoneOccupancy::count(ZoneKind zone) const {
    const auto& bits = zone_bits(zone);
    return static_cast<int>(std::count(bits.begin(), bits.end(), 1));
}

double ZoneOccupancy::fill_fraction(ZoneKind zone) const {
    const int cap = capacity(zone);
    return cap == 0 ? 0.0 : static_cast<double>(count(zone)) / cap;
}

std::vector<Site> ZoneOccupancy::occupied_sites(ZoneKind zone) const {
    std::vector<Site> out;
    const auto& bits = zone_bits(zone);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) out.push_back({zone, static_cast<int>(i)});
    }
    return out;
}

std::vector<Site> ZoneOccupancy::vacant_sites(ZoneKind zone) const {
    std::vector<Site> out;
    const auto& bits = zone_bits(zone);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (!bits[i]) out.push_back({zone, static_cast<int>(i)});
    }
    return out;
}

nlohmann::json ZoneOccupancy::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t z = 0; z < kNumZones; ++z) {
        std::string row;
        for (uint8_t b : sites_[z]) row += b ? '1' : '0';
        j[std::string(zone_name(static_cast<ZoneKind>(z)))] = row;
    }
    return j;
}

nlohmann::json MovePlan::to_json() const {
    nlohmann::json moves_json = nlohmann::json::array();
    for (const Move& m : moves) {
        moves_json.push_back({{"src", std::string(zone_name(m.src.zone)) + ":" + std::to_string(m.src.index)},
                              {"dst", std::string(zone_name(m.dst.zone)) + ":" + std::to_string(m.dst.index)},
                              {"length", m.length}});
    }
    return {{"moves", moves_json}, {"total_length", total_length}, {"latency_ms", latency_ms}};
}

std::vector<int> hungarian_assign(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    if (n == 0) return {};
    const std::size_t m = cost[0].size();
    if (m < n) {
        throw std::invalid_argument("hungarian_assign needs at least as many columns as rows");
    }
    constexpr double kInf = std::numeric_limits<double>::infinity();
    // Potentials and matching, 1-indexed with column 0 as the virtual root.
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<uint8_t> used(m + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> assignment(n, -1);
    for (std::size_t j = 1; j <= m; ++j) {
        if (p[j] != 0) assignment[p[j] - 1] = static_cast<int>(j - 1);
    }
    return assignment;
}

MovePlan plan_moves(const ZoneLayout& layout, const std::vector<Site>& vacancies, const std::vector<Site>& sources,
                    const FillOptions& options) {
    MovePlan plan;
    if (vacancies.size() > sources.size()) {
        throw InsufficientReservoir(vacancies.size(), sources.size());
    }
    if (!vacancies.empty()) {
        // Among equal path lengths, prefer the physically closer column.
        auto cost = [&](const Site& dst, const Site& src) {
            return path_length(layout, src, dst) +
                   1e-6 * std::abs(site_coord(layout, src).x - site_coord(layout, dst).x);
        };
        std::vector<int> chosen(vacancies.size(), -1);
        if (vacancies.size() <= options.exact_limit) {
            std::vector<std::vector<double>> c(vacancies.size(), std::vector<double>(sources.size()));
            for (std::size_t i = 0; i < vacancies.size(); ++i) {
                for (std::size_t j = 0; j < sources.size(); ++j) c[i][j] = cost(vacancies[i], sources[j]);
            }
            chosen = hungarian_assign(c);
        } else {
            std::vector<uint8_t> taken(sources.size(), 0);
            for (std::size_t i = 0; i < vacancies.size(); ++i) {
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < sources.size(); ++j) {
                    if (taken[j]) continue;
                    const double c = cost(vacancies[i], sources[j]);
                    if (c < best) {
                        best = c;
                        chosen[i] = static_cast<int>(j);
                    }
                }
                taken[static_cast<std::size_t>(chosen[i])] = 1;
            }
        }
        for (std::size_t i = 0; i < vacancies.size(); ++i) {
            const Site& src = sources[static_cast<std::size_t>(chosen[i])];
            const double len = path_length(layout, src, vacancies[i]);
            plan.moves.push_back({src, vacancies[i], len});
            plan.total_length += len;
        }
    }
    plan.latency_ms = options.latency.base_ms + options.latency.per_move_ms * static_cast<double>(plan.moves.size());
    return plan;
}

MovePlan plan_fill(const std::vector<Site>& mz_vacancies, const ZoneOccupancy& occupancy, const FillOptions& options) {
    for (const Site& s : mz_vacancies) {
        if (s.zone != ZoneKind::kMeasurement) {
            throw std::invalid_argument("plan_fill vacancies must be MZ sites");
        }
        if (occupancy.occupied(s)) {
            throw std::invalid_argument("MZ site " + std::to_string(s.index) + " is not vacant");
        }
    }
    return plan_moves(occupancy.layout(), mz_vacancies, occupancy.occupied_sites(ZoneKind::kStorage), options);
}

std::vector<MoveOutcome> execute_plan(ZoneOccupancy& occupancy, const MovePlan& plan, double p_move_fail,
                                      CounterRng& rng) {
    std::vector<MoveOutcome> out;
    out.reserve(plan.moves.size());
    for (const Move& m : plan.moves) {
        if (!occupancy.occupied(m.src)) {
            throw std::logic_error("move source " + std::string(zone_name(m.src.zone)) + ":" +
                                   std::to_string(m.src.index) + " is empty");
        }
        if (occupancy.occupied(m.dst)) {
            throw std::logic_error("move destination " + std::string(zone_name(m.dst.zone)) + ":" +
                                   std::to_string(m.dst.index) + " is occupied");
        }
        const bool ok = !rng.bernoulli(p_move_fail);
        occupancy.set(m.src, false);
        if (ok) occupancy.set(m.dst, true);
        out.push_back({m, ok});
    }
    return out;
}

nlohmann::json ReplenishReport::to_json() const {
    nlohmann::json st = nlohmann::json::array();
    for (const Stage& s : stages) st.push_back({{"name", s.name}, {"duration_ms", s.duration_ms}});
    return {{"stages", st},
            {"total_ms", total_ms},
            {"rounds", rounds},
            {"lz_loaded", lz_loaded},
            {"moves_attempted", moves_attempted},
            {"moves_failed", moves_failed},
            {"sz_fill_before", sz_fill_before},
            {"sz_fill_after", sz_fill_after},
            {"partial", partial},
            {"register_z_probability", register_z_probability},
            {"register_contrast", register_contrast}};
}

double mz_loss_per_mcm(const NoiseModel& noise) {
    return 1.5 * noise.p_mcm_loss_bright + 2.0 * noise.p_background_loss_per_image;
}

double sz_loss_per_mcm(const NoiseModel& noise) {
    return noise.p_mcm_loss_bright + 2.0 * noise.p_background_loss_per_image;
}

ReplenishReport replenish(ZoneOccupancy& occupancy, const NoiseModel& noise, CounterRng& rng,
                          const ReplenishOptions& options) {
    ReplenishReport report;
    report.sz_fill_before = occupancy.fill_fraction(ZoneKind::kStorage);
    const double p_image_loss = options.imaging_loss ? sz_loss_per_mcm(noise) : 0.0;
    const int sz_cap = occupancy.capacity(ZoneKind::kStorage);
    auto add_stage = [&](const std::string& name, double ms) {
        report.stages.push_back({name, ms});
        report.total_ms += ms;
    };
    while (report.rounds < options.max_load_rounds &&
           (report.rounds == 0 || occupancy.fill_fraction(ZoneKind::kStorage) <= options.target_fill)) {
        ++report.rounds;
        add_stage("transport", options.transport_ms);
        add_stage("handoff", options.handoff_ms);
        add_stage("galvo", options.galvo_ms);
        // Light-assisted collisions leave 0 or 1 atom per LZ site.
        int loaded = 0;
        for (int i = 0; i < occupancy.capacity(ZoneKind::kLoading); ++i) {
            const bool atom = rng.bernoulli(noise.lz_load_probability);
            occupancy.set({ZoneKind::kLoading, i}, atom);
            loaded += atom ? 1 : 0;
        }
        report.lz_loaded.push_back(loaded);
        add_stage("lac", options.lac_ms);
        // One MCM block images LZ and SZ; atoms lost here are seen as vacancies.
        for (ZoneKind z : {ZoneKind::kLoading, ZoneKind::kStorage}) {
            for (const Site& s : occupancy.occupied_sites(z)) {
                if (rng.bernoulli(p_image_loss)) occupancy.set(s, false);
            }
        }
        add_stage("mcm", options.mcm_block_ms);
        std::vector<Site> vacancies = occupancy.vacant_sites(ZoneKind::kStorage);
        std::vector<Site> sources = occupancy.occupied_sites(ZoneKind::kLoading);
        if (vacancies.size() > sources.size()) {
            // Fill the vacancies closest to the LZ first.
            vacancies.resize(sources.size());
        }
        MovePlan plan = plan_moves(occupancy.layout(), vacancies, sources, options.fill);
        plan.latency_ms =
            options.rearrange.base_ms + options.rearrange.per_move_ms * static_cast<double>(plan.moves.size());
        for (const MoveOutcome& m : execute_plan(occupancy, plan, noise.p_move_fail, rng)) {
            ++report.moves_attempted;
            report.moves_failed += m.success ? 0 : 1;
        }
        add_stage("rearrange", plan.latency_ms);
        // Leftover LZ atoms are discarded before the next load.
        occupancy.fill(ZoneKind::kLoading, 0);
    }
    report.sz_fill_after = occupancy.fill_fraction(ZoneKind::kStorage);
    report.partial = occupancy.count(ZoneKind::kStorage) < sz_cap &&
                     report.sz_fill_after <= options.target_fill;
    const double p_rep = 0.5 * (1.0 - noise.replenish_contrast_site);
    const double p_idle = 0.5 * noise.idle_dephase_rate * report.total_ms * 1e-3;
    report.register_z_probability = p_rep * (1.0 - p_idle) + p_idle * (1.0 - p_rep);
    report.register_contrast = 1.0 - 2.0 * report.register_z_probability;
    return report;
}

ReservoirProfile reservoir_profile(const Circuit& circuit, const NoiseModel& noise) {
    std::map<int, int> per_cycle;
    Placement placement(circuit, ZoneLayout::defaults());
    for (const NativeOp& op : circuit.ops) {
        if (op.code == Opcode::kMove) {
            placement.move(op.targets[0], op.site);
        } else if (op.code == Opcode::kMcm) {
            int n = 0;
            for (uint32_t t : op.targets) {
                n += placement.site(t).zone == ZoneKind::kMeasurement ? 1 : 0;
            }
            per_cycle[op.cycle.value_or(-1)] += n;
        }
    }
    std::map<int, int> freq;
    for (const auto& [cycle, n] : per_cycle) ++freq[n];
    int typical = 0, best = 0;
    for (const auto& [n, f] : freq) {
        if (f > best) {
            best = f;
            typical = n;
        }
    }
    ReservoirProfile profile;
    profile.mcm_targets_per_cycle = typical;
    profile.p_loss_per_target = mz_loss_per_mcm(noise);
    profile.p_loss_per_reservoir_atom = sz_loss_per_mcm(noise);
    profile.p_move_fail = noise.p_move_fail;
    return profile;
}

LifetimeEstimate reservoir_lifetime(const ReservoirProfile& profile, std::size_t trials, uint64_t seed,
                                    long max_cycles) {
    LifetimeEstimate est;
    est.trials = trials;
    if (profile.mcm_targets_per_cycle <= 0 || profile.p_loss_per_target <= 0.0) {
        est.infinite = true;
        return est;
    }
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        CounterRng rng(derive_seed(seed, t), 7);
        int reservoir = profile.reservoir_atoms;
        int vacancies = 0;
        long cycle = 0;
        while (cycle < max_cycles) {
            ++cycle;
            for (int q = 0; q < profile.mcm_targets_per_cycle - vacancies; ++q) {
                if (rng.bernoulli(profile.p_loss_per_target)) ++vacancies;
            }
            int parked = reservoir;
            for (int a = 0; a < parked; ++a) {
                if (rng.bernoulli(profile.p_loss_per_reservoir_atom)) --reservoir;
            }
            if (vacancies > reservoir) break;
            const int requested = vacancies;
            for (int m = 0; m < requested; ++m) {
                --reservoir;
                if (!rng.bernoulli(profile.p_move_fail)) --vacancies;
            }
        }
        sum += static_cast<double>(cycle);
        sum_sq += static_cast<double>(cycle) * static_cast<double>(cycle);
    }
    const double n = static_cast<double>(trials);
    est.mean_cycles = sum / n;
    const double var = trials > 1 ? (sum_sq - n * est.mean_cycles * est.mean_cycles) / (n - 1.0) : 0.0;
    const double half = 1.959963984540054 * std::sqrt(std::max(var, 0.0) / n);
    est.ci_low = est.mean_cycles - half;
    est.ci_high = est.mean_cycles + half;
    return est;
}

}  // namespace zonesim
