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

#include "zonesim/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include "zonesim/decoder.h"

namespace zonesim {

namespace fs = std::filesystem;
using nlohmann::json;

ConfigError::ConfigError(std::string pointer, const std::string& message)
    : std::runtime_error(pointer + ": " + message), pointer_(std::move(pointer)) {}

std::string_view experiment_kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::kRepcode:
            return "repcode";
        case ExperimentKind::kDistill:
            return "distill";
        case ExperimentKind::kGerb:
            return "gerb";
        case ExperimentKind::kRamseyMcm:
            return "ramsey_mcm";
        case ExperimentKind::kReplenish:
            return "replenish";
        case ExperimentKind::kLeakageMap:
            return "leakage_map";
    }
    return "?";
}

uint64_t fnv1a64(std::string_view data) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<double> Grid::values() const {
    if (points < 1) throw std::invalid_argument("grid needs at least one point");
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        v[static_cast<std::size_t>(i)] = points == 1 ? start : start + (stop - start) * i / (points - 1);
    return v;
}

namespace {

// Typed access to one JSON object; leftover keys are rejected by finish().
class Fields {
   public:
    Fields(const json& j, std::string pointer) : j_(j), ptr_(std::move(pointer)) {
        if (!j_.is_object()) throw ConfigError(ptr_.empty() ? "/" : ptr_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }
    std::string at(const std::string& key) const { return ptr_ + "/" + key; }

    const json& raw(const std::string& key) {
        used_.insert(key);
        if (!j_.contains(key)) throw ConfigError(at(key), "required key is missing");
        return j_.at(key);
    }

    template <typename T>
    T get(const std::string& key, T fallback) {
        used_.insert(key);
        if (!j_.contains(key)) return fallback;
        return convert<T>(key, j_.at(key));
    }

    template <typename T>
    T req(const std::string& key) {
        return convert<T>(key, raw(key));
    }

    template <typename T>
    std::vector<T> list(const std::string& key, std::vector<T> fallback) {
        used_.insert(key);
        if (!j_.contains(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_array()) return {convert<T>(key, v)};
        std::vector<T> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(convert<T>(key + "/" + std::to_string(i), v[i]));
        if (out.empty()) throw ConfigError(at(key), "list must not be empty");
        return out;
    }

    void finish() const {
        for (const auto& [key, value] : j_.items())
            if (!used_.count(key)) throw ConfigError(at(key), "unknown key");
    }

   private:
    template <typename T>
    T convert(const std::string& key, const json& v) const {
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw ConfigError(at(key), "expected a boolean");
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
            if (std::is_unsigned_v<T> && v.get<int64_t>() < 0 && !v.is_number_unsigned())
                throw ConfigError(at(key), "expected a non-negative integer");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) throw ConfigError(at(key), "expected a number");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw ConfigError(at(key), "expected a string");
        }
        return v.get<T>();
    }

    const json& j_;
    std::string ptr_;
    std::set<std::string> used_;
};

json read_json_file(const fs::path& path, const std::string& pointer) {
    std::ifstream in(path);
    if (!in) throw ConfigError(pointer, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(pointer, path.string() + ": " + e.what());
    }
}

Grid parse_grid(const json& j, const std::string& pointer) {
    Fields f(j, pointer);
    Grid g{f.req<double>("start"), f.req<double>("stop"), f.req<int>("points")};
    f.finish();
    if (g.points < 1) throw ConfigError(pointer + "/points", "must be at least 1");
    if (!std::isfinite(g.start) || !std::isfinite(g.stop)) throw ConfigError(pointer, "grid bounds must be finite");
    return g;
}

void parse_spec(ExperimentConfig& c, const json& spec, const fs::path& base) {
    Fields f(spec, "/spec");
    switch (c.kind) {
        case ExperimentKind::kRepcode: {
            RepcodeRun& r = c.repcode;
            r.distances = f.list<int>("distance", r.distances);
            r.cycles = f.get<int>("cycles", r.cycles);
            r.phase_sensitive = f.get<bool>("phase_sensitive", r.phase_sensitive);
            r.loss_aware = f.get<bool>("loss_aware", r.loss_aware);
            r.write_shots = f.get<bool>("write_shots", r.write_shots);
            for (int d : r.distances)
                if (d < 2) throw ConfigError("/spec/distance", "distance must be at least 2");
            if (r.cycles < 0) throw ConfigError("/spec/cycles", "must be non-negative");
            break;
        }
        case ExperimentKind::kDistill: {
            DistillRun& r = c.distill;
            r.encoded = f.get<bool>("encoded", r.encoded);
            std::vector<BellBasis> bases;
            for (const std::string& b : f.list<std::string>("basis", {"XX", "YY", "ZZ"})) {
                try {
                    bases.push_back(parse_basis(b));
                } catch (const std::exception&) {
                    throw ConfigError("/spec/basis", "unknown basis '" + b + "'");
                }
            }
            r.bases = bases;
            r.max_retries = f.get<int>("max_retries", r.max_retries);
            r.antiferro_variant = f.get<bool>("antiferro_variant", r.antiferro_variant);
            r.calibrate_herald = f.get<bool>("calibrate_herald", r.calibrate_herald);
            r.target_attempts = f.get<double>("target_attempts", r.target_attempts);
            r.calibration_shots = f.get<std::size_t>("calibration_shots", r.calibration_shots);
            r.compare_pre_herald = f.get<bool>("compare_pre_herald", r.compare_pre_herald);
            r.write_shots = f.get<bool>("write_shots", r.write_shots);
            if (r.max_retries < 1) throw ConfigError("/spec/max_retries", "must be at least 1");
            if (!(r.target_attempts >= 1.0)) throw ConfigError("/spec/target_attempts", "must be at least 1");
            break;
        }
        case ExperimentKind::kGerb: {
            GerbRun& r = c.gerb;
            r.blocks = f.list<int>("blocks", r.blocks);
            r.pair_count = f.get<int>("pair_count", r.pair_count);
            r.sequences = f.get<int>("sequences", r.sequences);
            if (r.blocks.size() < 3) throw ConfigError("/spec/blocks", "need at least three block counts for a fit");
            for (int b : r.blocks)
                if (b < 0) throw ConfigError("/spec/blocks", "block counts must be non-negative");
            if (r.pair_count < 1) throw ConfigError("/spec/pair_count", "must be positive");
            if (r.sequences < 1) throw ConfigError("/spec/sequences", "must be positive");
            break;
        }
        case ExperimentKind::kRamseyMcm: {
            RamseyRun& r = c.ramsey;
            r.cycles = f.list<int>("cycles", r.cycles);
            r.include_light = f.get<bool>("include_light", r.include_light);
            r.register_qubits = f.get<int>("register_qubits", r.register_qubits);
            if (r.cycles.size() < 3) throw ConfigError("/spec/cycles", "need at least three cycle counts for a fit");
            for (int n : r.cycles)
                if (n < 0) throw ConfigError("/spec/cycles", "cycle counts must be non-negative");
            if (r.register_qubits < 2 || r.register_qubits % 2)
                throw ConfigError("/spec/register_qubits", "must be a positive even number");
            break;
        }
        case ExperimentKind::kReplenish: {
            ReplenishRun& r = c.replenish;
            r.sz_vacancies = f.get<int>("sz_vacancies", r.sz_vacancies);
            r.lz_yield = f.get<double>("lz_yield", r.lz_yield);
            r.target_fill = f.get<double>("target_fill", r.target_fill);
            const int cap = ZoneLayout::defaults().zone(ZoneKind::kStorage).capacity;
            if (r.sz_vacancies < 0 || r.sz_vacancies > cap)
                throw ConfigError("/spec/sz_vacancies", "must lie in [0, " + std::to_string(cap) + "]");
            if (!(r.lz_yield >= 0.0 && r.lz_yield <= 1.0)) throw ConfigError("/spec/lz_yield", "must lie in [0, 1]");
            if (!(r.target_fill >= 0.0 && r.target_fill <= 1.0))
                throw ConfigError("/spec/target_fill", "must lie in [0, 1]");
            break;
        }
        case ExperimentKind::kLeakageMap: {
            LeakageMapRun& r = c.leakage;
            if (f.has("model")) {
                try {
                    r.model = load_imaging_model(f.raw("model"), base);
                } catch (const ConfigError&) {
                    throw;
                } catch (const std::exception& e) {
                    throw ConfigError("/spec/model", e.what());
                }
            } else {
                r.model = default_imaging_model();
            }
            if (f.has("register_offset_mhz"))
                r.register_offset_mhz = parse_grid(f.raw("register_offset_mhz"), "/spec/register_offset_mhz");
            if (f.has("imaging_detuning_mhz"))
                r.imaging_detuning_mhz = parse_grid(f.raw("imaging_detuning_mhz"), "/spec/imaging_detuning_mhz");
            r.duration_us = f.get<double>("duration_us", r.model.image_duration);
            if (!(r.duration_us > 0.0)) throw ConfigError("/spec/duration_us", "must be positive");
            break;
        }
    }
    f.finish();
}

}  // namespace

NoiseModel load_noise(const std::string& ref, const fs::path& base_dir) {
    if (ref == "defaults") return NoiseModel::defaults();
    if (ref == "noiseless") return NoiseModel::noiseless();
    fs::path p(ref);
    if (p.is_relative()) p = base_dir / p;
    const json j = read_json_file(p, "/noise");
    try {
        NoiseModel m = NoiseModel::from_json(j);
        m.check();
        return m;
    } catch (const std::exception& e) {
        throw ConfigError("/noise", p.string() + ": " + e.what());
    }
}

RegisterImagingModel default_imaging_model() {
    RegisterImagingModel m;
    const double tp = 2.0 * std::numbers::pi;
    m.imaging_rabi = tp * 0.2;
    m.gamma_3p1 = tp * 0.182;
    m.register_rabi = tp * 2400.0;
    m.register_detuning = tp * -7600.0;
    m.s1_offsets = {0.0, tp * 3000.0};
    m.s1_weights = {0.73, 0.4};
    m.gamma_3s1 = tp * 8.0;
    m.branch_to_3p1 = 0.6;
    m.image_duration = 7000.0;
    return m;
}

RegisterImagingModel load_imaging_model(const json& ref, const fs::path& base_dir) {
    if (ref.is_string()) {
        fs::path p(ref.get<std::string>());
        if (p.is_relative()) p = base_dir / p;
        const json j = read_json_file(p, "/spec/model");
        return RegisterImagingModel::from_json(j.contains("model") ? j.at("model") : j);
    }
    return RegisterImagingModel::from_json(ref);
}

ExperimentConfig ExperimentConfig::parse(const json& j, const fs::path& base_dir) {
    ExperimentConfig c;
    c.raw = j;
    Fields f(j, "");
    const std::string schema = f.req<std::string>("schema");
    if (schema != kConfigSchema) throw ConfigError("/schema", "unsupported schema '" + schema + "'");
    const std::string kind = f.req<std::string>("kind");
    bool known = false;
    for (ExperimentKind k : {ExperimentKind::kRepcode, ExperimentKind::kDistill, ExperimentKind::kGerb,
                             ExperimentKind::kRamseyMcm, ExperimentKind::kReplenish, ExperimentKind::kLeakageMap}) {
        if (experiment_kind_name(k) == kind) {
            c.kind = k;
            known = true;
        }
    }
    if (!known) throw ConfigError("/kind", "unknown experiment kind '" + kind + "'");

    if (f.has("noise")) {
        const json& n = f.raw("noise");
        if (n.is_string()) {
            c.noise_ref = n.get<std::string>();
            c.noise = load_noise(c.noise_ref, base_dir);
        } else if (n.is_object()) {
            c.noise_ref = "inline";
            try {
                c.noise = NoiseModel::from_json(n);
                c.noise.check();
            } catch (const std::exception& e) {
                throw ConfigError("/noise", e.what());
            }
        } else {
            throw ConfigError("/noise", "expected a name, a file path or an object");
        }
    }
    const double scale = f.get<double>("noise_scale", 1.0);
    if (!(scale >= 0.0) || !std::isfinite(scale)) throw ConfigError("/noise_scale", "must be a non-negative number");
    if (scale != 1.0) c.noise = c.noise.scaled(scale);

    c.shots = f.get<std::size_t>("shots", c.shots);
    if (c.shots == 0) throw ConfigError("/shots", "must be positive");
    c.seed = f.get<uint64_t>("seed", c.seed);
    c.output_dir = f.get<std::string>("output_dir", c.output_dir.string());
    if (c.output_dir.is_relative()) c.output_dir = base_dir / c.output_dir;
    c.threads = f.get<unsigned>("threads", c.threads);
    if (c.threads == 0) throw ConfigError("/threads", "must be positive");
    parse_spec(c, j.contains("spec") ? f.raw("spec") : json::object(), base_dir);
    f.finish();
    if (c.kind == ExperimentKind::kReplenish) c.noise.lz_load_probability = c.replenish.lz_yield;
    return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
    return parse(read_json_file(path, "/"), path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

std::string ExperimentConfig::hash() const {
    json canon = raw;
    canon.erase("threads");
    canon.erase("output_dir");
    // File references are covered through their resolved content.
    canon["resolved_noise"] = noise.to_json();
    if (kind == ExperimentKind::kLeakageMap) canon["resolved_model"] = leakage.model.to_json();
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(canon.dump());
    return os.str();
}

// ---------------------------------------------------------------- repcode

RepcodeResult run_repcode(const RepCodeSpec& spec, const NoiseModel& noise, std::size_t shots, uint64_t seed,
                          unsigned threads, bool keep_shots) {
    const Circuit circuit = gen_walking_repcode(spec);
    const RepCodeLayout layout = repcode_layout(spec);
    std::vector<ShotRecord> records = run_batch(circuit, noise, shots, seed, threads);
    const MatchingGraph graph = build_matching_graph(circuit, noise);

    RepcodeResult r;
    r.distance = spec.distance;
    r.cycles = spec.cycles;
    r.phase_sensitive = spec.phase_sensitive;
    std::vector<ShotDecode> edited(records.size()), plain(records.size());
    std::vector<std::vector<uint8_t>> parity(records.size());
    std::vector<int> cycle_of;
    for (std::size_t s = 0; s < records.size(); ++s) {
        edited[s] = decode_shot(graph, records[s], true);
        plain[s] = decode_shot(graph, records[s], false);
        r.loss_touched_shots += edited[s].loss_touched ? 1 : 0;
        const ExtractedShot ex = extract_detectors(records[s], layout);
        parity[s].reserve(ex.detectors.size());
        for (const DetectorRecord& d : ex.detectors) parity[s].push_back(d.parity);
        if (s == 0)
            for (const DetectorRecord& d : ex.detectors) cycle_of.push_back(d.cycle);
    }
    r.failures = logical_failure_rate(edited);
    r.failures_unedited = logical_failure_rate(plain);
    r.detection = detection_frequency(parity, cycle_of, 1000, derive_seed(seed, 0xde7ec7));
    double total = 0.0, count = 0.0;
    for (const auto& row : parity)
        for (uint8_t p : row) {
            total += p;
            count += 1.0;
        }
    r.mean_detection = count > 0 ? total / count : 0.0;
    if (keep_shots) r.shots = std::move(records);
    return r;
}

// ---------------------------------------------------------------- distill

std::string_view distill_verdict_name(DistillVerdict v) {
    switch (v) {
        case DistillVerdict::kSuccess:
            return "success";
        case DistillVerdict::kFailure:
            return "failure";
        case DistillVerdict::kUncorrectable:
            return "uncorrectable";
        case DistillVerdict::kHeraldExhausted:
            return "herald_exhausted";
    }
    return "?";
}

DistillVerdict score_distill_shot(const ShotRecord& shot, const DistillSpec& spec) {
    if (shot.herald_exhausted && spec.max_retries > 1) return DistillVerdict::kHeraldExhausted;
    const std::vector<uint32_t> data = distill_block(spec, 0);
    std::map<uint32_t, Outcome> final;
    for (const auto& [q, v] : shot.final_measurements()) final[q] = v;
    std::vector<int> bits;
    int lost = 0;
    for (uint32_t q : data) {
        auto it = final.find(q);
        if (it == final.end()) throw StructuralError("data qubit " + std::to_string(q) + " was not read out");
        if (it->second == Outcome::kLost) {
            ++lost;
            bits.push_back(-1);
        } else {
            bits.push_back(it->second == Outcome::kOne ? 1 : 0);
        }
    }
    const int target = distill_target_parity(spec.basis, spec.antiferro_variant);
    if (!spec.encoded) {
        if (lost) return DistillVerdict::kUncorrectable;
        return (bits[0] ^ bits[1]) == target ? DistillVerdict::kSuccess : DistillVerdict::kFailure;
    }
    // Both physical pairs carry the target parity, so the block parity is even.
    if (lost > 1) return DistillVerdict::kUncorrectable;
    int parity = 0;
    for (int b : bits) parity ^= b < 0 ? 0 : b;
    if (lost == 1) {
        for (int& b : bits)
            if (b < 0) b = parity;
    } else if (parity != 0) {
        return DistillVerdict::kUncorrectable;
    }
    return (bits[0] ^ bits[1]) == target ? DistillVerdict::kSuccess : DistillVerdict::kFailure;
}

namespace {

DistillSpec single_attempt(DistillSpec spec) {
    spec.max_retries = 1;
    return spec;
}

}  // namespace

double herald_acceptance(const DistillSpec& spec, const NoiseModel& noise, std::size_t shots, uint64_t seed,
                         unsigned threads) {
    const Circuit c = gen_distillation(single_attempt(spec));
    const auto records = run_batch(c, noise, shots, seed, threads);
    std::size_t pass = 0;
    for (const auto& r : records) pass += r.herald_exhausted ? 0 : 1;
    return static_cast<double>(pass) / static_cast<double>(shots);
}

double calibrate_herald_scale(const DistillSpec& spec, const NoiseModel& noise, double target, std::size_t shots,
                              uint64_t seed, unsigned threads) {
    if (!(target > 0.0 && target < 1.0)) throw std::invalid_argument("target acceptance must lie in (0, 1)");
    auto acc = [&](double s) { return herald_acceptance(spec, noise.scaled(s), shots, seed, threads); };
    if (acc(0.0) < target) throw std::runtime_error("noiseless herald acceptance is below the target");
    double lo = 0.0, hi = 1.0;
    while (acc(hi) > target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1024.0) throw std::runtime_error("herald acceptance does not reach the target");
    }
    for (int it = 0; it < 24; ++it) {
        const double mid = 0.5 * (lo + hi);
        (acc(mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

DistillBasisResult run_distill_basis(const DistillSpec& spec, const NoiseModel& noise, std::size_t shots,
                                     uint64_t seed, unsigned threads, bool compare_pre_herald, bool keep_shots) {
    DistillBasisResult r;
    r.basis = spec.basis;
    const Circuit c = gen_distillation(spec);
    std::vector<ShotRecord> records = run_batch(c, noise, shots, seed, threads);
    std::vector<int> attempts;
    attempts.reserve(records.size());
    for (const ShotRecord& s : records) {
        attempts.push_back(s.attempts);
        switch (score_distill_shot(s, spec)) {
            case DistillVerdict::kSuccess:
                ++r.successes;
                break;
            case DistillVerdict::kFailure:
                ++r.failures;
                break;
            case DistillVerdict::kUncorrectable:
                ++r.uncorrectable;
                break;
            case DistillVerdict::kHeraldExhausted:
                ++r.herald_exhausted;
                break;
        }
    }
    r.retries = retry_histogram(attempts);
    if (compare_pre_herald) {
        const DistillSpec one = single_attempt(spec);
        const auto single = run_batch(gen_distillation(one), noise, shots, derive_seed(seed, 0x9e4e), threads);
        uint64_t pre_fail = 0, pre_n = 0, post_fail = 0, post_n = 0, passed = 0;
        for (const ShotRecord& s : single) {
            const DistillVerdict v = score_distill_shot(s, one);
            if (!s.herald_exhausted) ++passed;
            if (v == DistillVerdict::kUncorrectable) continue;
            const bool fail = v == DistillVerdict::kFailure;
            ++pre_n;
            pre_fail += fail ? 1 : 0;
            if (!s.herald_exhausted) {
                ++post_n;
                post_fail += fail ? 1 : 0;
            }
        }
        if (pre_n) r.pre_herald = estimate_rate(pre_fail, pre_n);
        if (post_n) r.post_herald = estimate_rate(post_fail, post_n);
        r.herald_acceptance = static_cast<double>(passed) / static_cast<double>(single.size());
    }
    if (keep_shots) r.shots = std::move(records);
    return r;
}

DistillResult run_distill(const DistillRun& run, const NoiseModel& noise, std::size_t shots, uint64_t seed,
                          unsigned threads) {
    DistillResult out;
    out.encoded = run.encoded;
    out.antiferro_variant = run.antiferro_variant;
    NoiseModel model = noise;
    if (run.calibrate_herald) {
        DistillSpec probe{run.encoded, run.bases.front(), 1, run.antiferro_variant};
        out.noise_scale = calibrate_herald_scale(probe, noise, 1.0 / run.target_attempts, run.calibration_shots,
                                                 derive_seed(seed, 0xca1b), threads);
        model = noise.scaled(out.noise_scale);
    }
    CountTable table;
    std::vector<int> pooled;
    for (std::size_t i = 0; i < run.bases.size(); ++i) {
        DistillSpec spec{run.encoded, run.bases[i], run.max_retries, run.antiferro_variant};
        DistillBasisResult b = run_distill_basis(spec, model, shots, derive_seed(seed, i + 1), threads,
                                                 run.compare_pre_herald, run.write_shots);
        table.rows[std::string(basis_name(b.basis))] = {b.successes, b.failures};
        for (std::size_t k = 0; k < b.retries.counts.size(); ++k)
            pooled.insert(pooled.end(), b.retries.counts[k], static_cast<int>(k) + 1);
        out.bases.push_back(std::move(b));
    }
    if (table.rows.size() == 3) {
        bool nonempty = true;
        for (const auto& [name, row] : table.rows) nonempty = nonempty && row.trials() > 0;
        if (nonempty)
            out.fidelity =
                bell_fidelity(table, run.antiferro_variant ? BellTarget::kPsiMinus : BellTarget::kPhiPlus);
    }
    out.retries = retry_histogram(pooled);
    return out;
}

// ---------------------------------------------------------------- gerb

GerbResult run_gerb(const GerbRun& run, const NoiseModel& noise, std::size_t shots, uint64_t seed,
                    unsigned threads) {
    GerbResult out;
    const std::size_t per_seq = std::max<std::size_t>(1, shots / static_cast<std::size_t>(run.sequences));
    std::vector<double> x, y, sig;
    for (int blocks : run.blocks) {
        GerbPoint pt;
        pt.blocks = blocks;
        for (int s = 0; s < run.sequences; ++s) {
            const uint64_t key = derive_seed(seed, static_cast<uint64_t>(blocks) * 100003ULL + static_cast<uint64_t>(s));
            const Circuit c = gen_gerb({blocks, run.pair_count, key});
            for (const ShotRecord& rec : run_batch(c, noise, per_seq, derive_seed(key, 1), threads)) {
                std::map<uint32_t, Outcome> m;
                for (const auto& [q, v] : rec.final_measurements()) m[q] = v;
                for (int p = 0; p < run.pair_count; ++p) {
                    ++pt.pairs;
                    const auto a = static_cast<uint32_t>(2 * p);
                    if (m[a] == Outcome::kOne && m[a + 1] == Outcome::kOne) ++pt.returned;
                }
            }
        }
        const double n = static_cast<double>(pt.pairs);
        pt.probability = static_cast<double>(pt.returned) / n;
        // Floor the binomial error so that perfect points keep a finite weight.
        pt.sigma = std::max(std::sqrt(pt.probability * (1.0 - pt.probability) / n), 1.0 / n);
        x.push_back(blocks);
        // A fully randomized pair returns 11 with probability 1/4.
        y.push_back(pt.probability - 0.25);
        sig.push_back(pt.sigma);
        out.points.push_back(pt);
    }
    out.fit = fit_exponential_decay(x, y, sig);
    out.error_per_block = out.fit.params[1];
    out.error_per_block_se = out.fit.stderrs[1];
    return out;
}

// ---------------------------------------------------------------- ramsey

RamseyResult run_ramsey(const RamseyRun& run, const NoiseModel& noise, std::size_t shots, uint64_t seed,
                        unsigned threads) {
    RamseyResult out;
    out.include_light = run.include_light;
    std::vector<int> phases;
    for (int i = 0; i < run.register_qubits; ++i) phases.push_back(i % 2 ? 2 : 0);
    std::vector<double> x, surv, surv_sig, con, con_sig;
    for (int n : run.cycles) {
        RamseyPoint pt;
        pt.cycles = n;
        const Circuit c = gen_ramsey_mcm(n, run.include_light, phases);
        uint64_t ones[2] = {0, 0}, seen[2] = {0, 0};
        for (const ShotRecord& rec : run_batch(c, noise, shots, derive_seed(seed, static_cast<uint64_t>(n)), threads)) {
            for (const auto& [q, v] : rec.final_measurements()) {
                if (q >= static_cast<uint32_t>(run.register_qubits)) continue;
                ++pt.atoms;
                if (v == Outcome::kLost) continue;
                ++pt.survived;
                const int k = phases[q] ? 1 : 0;
                ++seen[k];
                ones[k] += v == Outcome::kOne ? 1 : 0;
            }
        }
        const double a = static_cast<double>(pt.atoms);
        pt.survival = static_cast<double>(pt.survived) / a;
        pt.survival_sigma = std::max(std::sqrt(pt.survival * (1.0 - pt.survival) / a), 1.0 / a);
        const double n0 = std::max<double>(1.0, static_cast<double>(seen[0]));
        const double n2 = std::max<double>(1.0, static_cast<double>(seen[1]));
        pt.p1_phase0 = static_cast<double>(ones[0]) / n0;
        pt.p1_phase2 = static_cast<double>(ones[1]) / n2;
        pt.contrast = pt.p1_phase2 - pt.p1_phase0;
        const double v0 = std::max(pt.p1_phase0 * (1.0 - pt.p1_phase0), 1.0 / n0) / n0;
        const double v2 = std::max(pt.p1_phase2 * (1.0 - pt.p1_phase2), 1.0 / n2) / n2;
        pt.contrast_sigma = std::sqrt(v0 + v2);
        x.push_back(n);
        surv.push_back(pt.survival);
        surv_sig.push_back(pt.survival_sigma);
        con.push_back(pt.contrast);
        con_sig.push_back(pt.contrast_sigma);
        out.points.push_back(pt);
    }
    out.loss_fit = fit_exponential_decay(x, surv, surv_sig);
    out.contrast_fit = fit_exponential_decay(x, con, con_sig);
    out.loss_per_cycle = out.loss_fit.params[1];
    out.loss_per_cycle_se = out.loss_fit.stderrs[1];
    out.contrast_loss_per_cycle = out.contrast_fit.params[1];
    out.contrast_loss_per_cycle_se = out.contrast_fit.stderrs[1];
    return out;
}

// ---------------------------------------------------------------- replenish

ReplenishResult run_replenish(const ReplenishRun& run, const NoiseModel& noise, std::size_t trials, uint64_t seed) {
    NoiseModel model = noise;
    model.lz_load_probability = run.lz_yield;
    ReplenishOptions opts;
    opts.target_fill = run.target_fill;
    ReplenishResult out;
    out.trials = trials;
    double fill = 0.0, rounds = 0.0, ms = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        ZoneOccupancy occ;
        occ.fill(ZoneKind::kStorage, occ.capacity(ZoneKind::kStorage) - run.sz_vacancies);
        CounterRng rng(derive_seed(seed, t), kNoiseStream);
        const ReplenishReport rep = replenish(occ, model, rng, opts);
        out.reached_target += rep.sz_fill_after > run.target_fill ? 1 : 0;
        out.partial += rep.partial ? 1 : 0;
        fill += rep.sz_fill_after;
        rounds += rep.rounds;
        ms += rep.total_ms;
    }
    const double n = static_cast<double>(std::max<std::size_t>(1, trials));
    out.mean_fill_after = fill / n;
    out.mean_rounds = rounds / n;
    out.mean_total_ms = ms / n;
    if (trials) out.reached_ci = wilson_interval(out.reached_target, trials);
    return out;
}

// ---------------------------------------------------------------- tables

bool TableCheck::pass() const { return std::abs(value - expected) <= tolerance; }

bool PublishedTables::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const TableCheck& c) { return c.pass(); });
}

namespace {

struct RepRow {
    bool phase_sensitive;
    int distance;
    uint64_t failures;
    uint64_t shots;
};

// Decoding failure counts per distance.
constexpr RepRow kRepRows[] = {
    {true, 3, 30, 11700},  {true, 5, 11, 11250},  {true, 7, 6, 11250},   {false, 3, 25, 17820},
    {false, 5, 3, 17640},  {false, 7, 4, 17460},  {false, 9, 3, 16920},
};

struct BellRow {
    const char* basis;
    uint64_t successes;
    uint64_t failures;
};

constexpr BellRow kUnencoded[] = {{"XX", 2443, 7}, {"YY", 2127, 61}, {"ZZ", 4828, 79}};
constexpr BellRow kEncoded[] = {{"XX", 1440, 3}, {"YY", 1366, 3}, {"ZZ", 1452, 4}};

std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

}  // namespace

PublishedTables reproduce_published_tables() {
    PublishedTables out;
    std::ostringstream md;
    md << "# Published count tables\n\n## Repetition code decoding failures\n\n"
       << "| variant | d | failures | shots | rate | 95% Wilson CI |\n|---|---|---|---|---|---|\n";
    for (const RepRow& r : kRepRows) {
        const RateEstimate e = estimate_rate(r.failures, r.shots);
        const std::string name = std::string(r.phase_sensitive ? "sensitive" : "insensitive") + " d=" +
                                 std::to_string(r.distance);
        md << "| " << (r.phase_sensitive ? "phase-sensitive" : "phase-insensitive") << " | " << r.distance << " | "
           << r.failures << " | " << r.shots << " | " << fmt(e.rate, 4) << " | [" << fmt(e.ci.low, 4) << ", "
           << fmt(e.ci.high, 4) << "] |\n";
        out.checks.push_back({name + " rate", e.rate,
                              static_cast<double>(r.failures) / static_cast<double>(r.shots), 0.0,
                              std::to_string(r.failures) + "/" + std::to_string(r.shots)});
        const bool inside = e.ci.low <= e.rate && e.rate <= e.ci.high && e.ci.low >= 0.0 && e.ci.high <= 1.0;
        out.checks.push_back({name + " CI brackets rate", inside ? 1.0 : 0.0, 1.0, 0.0,
                              "[" + fmt(e.ci.low) + ", " + fmt(e.ci.high) + "]"});
    }
    // Rates quoted in the text, to their printed precision.
    out.checks.push_back({"insensitive d=3 quoted 1.403e-3", 25.0 / 17820.0, 1.403e-3, 0.5e-6, "25/17820"});
    out.checks.push_back({"sensitive d=7 quoted 5.33e-4", 6.0 / 11250.0, 5.33e-4, 0.5e-6, "6/11250"});

    md << "\n## Bell pair distillation\n\n| block | XX | YY | ZZ | fidelity | sigma |\n|---|---|---|---|---|---|\n";
    auto bell = [&](const char* name, const BellRow (&rows)[3], double quoted) {
        CountTable t;
        for (const BellRow& r : rows) t.rows[r.basis] = {r.successes, r.failures};
        const FidelityEstimate f = bell_fidelity(t);
        md << "| " << name;
        for (const BellRow& r : rows) md << " | " << r.failures << "/" << r.successes + r.failures;
        md << " | " << fmt(f.fidelity, 5) << " | " << fmt(f.sigma, 2) << " |\n";
        out.checks.push_back({std::string(name) + " fidelity", f.fidelity, quoted, 0.001,
                              "sigma " + fmt(f.sigma, 2)});
    };
    bell("unencoded", kUnencoded, 0.977);
    bell("encoded", kEncoded, 0.996);

    md << "\n## Checks\n\n| check | value | expected | tolerance | result |\n|---|---|---|---|---|\n";
    for (const TableCheck& c : out.checks)
        md << "| " << c.name << " | " << fmt(c.value, 8) << " | " << fmt(c.expected, 8) << " | " << c.tolerance
           << " | " << (c.pass() ? "pass" : "FAIL") << " |\n";
    out.report = md.str();
    return out;
}

// ---------------------------------------------------------------- bundle

void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

namespace {

class Bundle {
   public:
    Bundle(const ExperimentConfig& c) : cfg_(c), hash_(c.hash()) {}

    const std::string& hash() const { return hash_; }

    void add(const std::string& name, const std::string& content) {
        const fs::path p = cfg_.output_dir / name;
        write_atomic(p, content);
        files_.push_back(p);
    }

    std::string csv_header() const { return "# config_hash=" + hash_ + "\n"; }

    void shots(const std::string& name, const std::string& condition, const Circuit& circuit,
               const std::vector<ShotRecord>& records) {
        const std::string circuit_file = "circuit_" + condition + ".txt";
        add(circuit_file, "# config_hash=" + hash_ + "\n" + to_text(circuit));
        std::string body = json{{"schema", "zonesim.shots/1"},
                                {"config_hash", hash_},
                                {"condition", condition},
                                {"circuit", circuit_file},
                                {"shots", records.size()}}
                               .dump() +
                           "\n";
        for (const ShotRecord& r : records) body += r.to_json().dump() + "\n";
        add(name, body);
    }

    std::vector<fs::path> files() const { return files_; }

   private:
    const ExperimentConfig& cfg_;
    std::string hash_;
    std::vector<fs::path> files_;
};

std::string timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string interval_text(const Interval& i) { return "[" + fmt(i.low, 4) + ", " + fmt(i.high, 4) + "]"; }

}  // namespace

RunSummary run_experiment(const ExperimentConfig& cfg) {
    Bundle b(cfg);
    RunSummary out;
    out.config_hash = b.hash();
    json summary = {{"kind", experiment_kind_name(cfg.kind)}, {"config_hash", b.hash()}, {"shots", cfg.shots}};
    std::ostringstream md, csv;
    md << "# " << experiment_kind_name(cfg.kind) << " run\n\n- config hash: `" << b.hash() << "`\n- generated: "
       << timestamp() << "\n- shots: " << cfg.shots << "\n- base seed: " << cfg.seed << "\n- noise: " << cfg.noise_ref
       << "\n\n";
    csv << b.csv_header();

    switch (cfg.kind) {
        case ExperimentKind::kRepcode: {
            const RepcodeRun& r = cfg.repcode;
            csv << "distance,cycles,phase_sensitive,shots,failures,rate,ci_low,ci_high,failures_unedited,"
                   "rate_unedited,loss_touched_shots,mean_detection\n";
            md << "| d | cycles | failures | rate | 95% CI | without loss edits | mean detection |\n"
                  "|---|---|---|---|---|---|---|\n";
            std::ostringstream freq;
            freq << b.csv_header() << "distance,cycle,mean,stddev\n";
            json rows = json::array();
            for (std::size_t i = 0; i < r.distances.size(); ++i) {
                const int d = r.distances[i];
                const RepCodeSpec spec{d, r.cycles ? r.cycles : d, r.phase_sensitive, cfg.seed};
                const RepcodeResult res =
                    run_repcode(spec, cfg.noise, cfg.shots, derive_seed(cfg.seed, i), cfg.threads, r.write_shots);
                const RateEstimate& f = r.loss_aware ? res.failures : res.failures_unedited;
                csv << d << ',' << spec.cycles << ',' << (r.phase_sensitive ? 1 : 0) << ',' << cfg.shots << ','
                    << f.events << ',' << fmt(f.rate, 8) << ',' << fmt(f.ci.low, 8) << ',' << fmt(f.ci.high, 8)
                    << ',' << res.failures_unedited.events << ',' << fmt(res.failures_unedited.rate, 8) << ','
                    << res.loss_touched_shots << ',' << fmt(res.mean_detection, 8) << '\n';
                md << "| " << d << " | " << spec.cycles << " | " << f.events << " | " << fmt(f.rate, 4) << " | "
                   << interval_text(f.ci) << " | " << res.failures_unedited.events << " | "
                   << fmt(res.mean_detection, 4) << " |\n";
                for (std::size_t k = 0; k < res.detection.cycles.size(); ++k)
                    freq << d << ',' << res.detection.cycles[k] << ',' << fmt(res.detection.mean[k], 8) << ','
                         << fmt(res.detection.stddev[k], 8) << '\n';
                if (r.write_shots)
                    b.shots("shots_d" + std::to_string(d) + ".jsonl", "d" + std::to_string(d),
                            gen_walking_repcode(spec), res.shots);
                rows.push_back({{"distance", d}, {"cycles", spec.cycles}, {"failures", f.to_json()}});
            }
            b.add("detection_frequency.csv", freq.str());
            summary["conditions"] = rows;
            break;
        }
        case ExperimentKind::kDistill: {
            const DistillRun& r = cfg.distill;
            const DistillResult res = run_distill(r, cfg.noise, cfg.shots, cfg.seed, cfg.threads);
            csv << "basis,encoded,successes,failures,uncorrectable,herald_exhausted,mean_attempts,"
                   "pre_herald_rate,post_herald_rate,herald_acceptance\n";
            md << "Noise scale: " << fmt(res.noise_scale) << "\n\n"
               << "| basis | successes | failures | uncorrectable | herald exhausted | mean attempts | pre-herald "
                  "failure | post-herald failure |\n|---|---|---|---|---|---|---|---|\n";
            json rows = json::array();
            for (const DistillBasisResult& x : res.bases) {
                const std::string name(basis_name(x.basis));
                csv << name << ',' << (r.encoded ? 1 : 0) << ',' << x.successes << ',' << x.failures << ','
                    << x.uncorrectable << ',' << x.herald_exhausted << ',' << fmt(x.retries.mean_attempts, 8) << ','
                    << fmt(x.pre_herald.rate, 8) << ',' << fmt(x.post_herald.rate, 8) << ','
                    << fmt(x.herald_acceptance, 8) << '\n';
                md << "| " << name << " | " << x.successes << " | " << x.failures << " | " << x.uncorrectable
                   << " | " << x.herald_exhausted << " | " << fmt(x.retries.mean_attempts, 4) << " | "
                   << fmt(x.pre_herald.rate, 4) << " | " << fmt(x.post_herald.rate, 4) << " |\n";
                if (r.write_shots) {
                    const DistillSpec spec{r.encoded, x.basis, r.max_retries, r.antiferro_variant};
                    b.shots("shots_" + name + ".jsonl", name, gen_distillation(spec), x.shots);
                }
                rows.push_back({{"basis", name},
                                {"successes", x.successes},
                                {"failures", x.failures},
                                {"uncorrectable", x.uncorrectable},
                                {"retries", x.retries.to_json()},
                                {"pre_herald", x.pre_herald.to_json()},
                                {"post_herald", x.post_herald.to_json()}});
            }
            std::ostringstream hist;
            hist << b.csv_header() << "retries,count\n";
            md << "\n## Retry histogram\n\n| retries | count |\n|---|---|\n";
            for (std::size_t k = 0; k < res.retries.counts.size(); ++k) {
                hist << k << ',' << res.retries.counts[k] << '\n';
                md << "| " << k << " | " << res.retries.counts[k] << " |\n";
            }
            md << "\nMean retries " << fmt(res.retries.mean_retries, 4) << ", mean attempts "
               << fmt(res.retries.mean_attempts, 4) << " " << interval_text(res.retries.attempts_ci) << "\n";
            if (!res.fidelity.correlators.empty())
                md << "\nBell fidelity " << fmt(res.fidelity.fidelity, 5) << " +/- " << fmt(res.fidelity.sigma, 2)
                   << "\n";
            b.add("retry_histogram.csv", hist.str());
            summary["bases"] = rows;
            summary["noise_scale"] = res.noise_scale;
            summary["retries"] = res.retries.to_json();
            if (!res.fidelity.correlators.empty()) summary["fidelity"] = res.fidelity.fidelity;
            break;
        }
        case ExperimentKind::kGerb: {
            const GerbResult res = run_gerb(cfg.gerb, cfg.noise, cfg.shots, cfg.seed, cfg.threads);
            csv << "blocks,pairs,returned,probability,sigma\n";
            md << "| blocks | pairs | returned | probability |\n|---|---|---|---|\n";
            for (const GerbPoint& p : res.points) {
                csv << p.blocks << ',' << p.pairs << ',' << p.returned << ',' << fmt(p.probability, 8) << ','
                    << fmt(p.sigma, 8) << '\n';
                md << "| " << p.blocks << " | " << p.pairs << " | " << p.returned << " | " << fmt(p.probability, 4)
                   << " |\n";
            }
            md << "\nError per block " << fmt(res.error_per_block, 4) << " +/- " << fmt(res.error_per_block_se, 2)
               << "\n";
            summary["error_per_block"] = res.error_per_block;
            summary["error_per_block_se"] = res.error_per_block_se;
            break;
        }
        case ExperimentKind::kRamseyMcm: {
            const RamseyResult res = run_ramsey(cfg.ramsey, cfg.noise, cfg.shots, cfg.seed, cfg.threads);
            csv << "cycles,atoms,survived,survival,survival_sigma,p1_phase0,p1_phase2,contrast,contrast_sigma\n";
            md << "| cycles | survival | contrast |\n|---|---|---|\n";
            for (const RamseyPoint& p : res.points) {
                csv << p.cycles << ',' << p.atoms << ',' << p.survived << ',' << fmt(p.survival, 8) << ','
                    << fmt(p.survival_sigma, 8) << ',' << fmt(p.p1_phase0, 8) << ',' << fmt(p.p1_phase2, 8) << ','
                    << fmt(p.contrast, 8) << ',' << fmt(p.contrast_sigma, 8) << '\n';
                md << "| " << p.cycles << " | " << fmt(p.survival, 4) << " | " << fmt(p.contrast, 4) << " |\n";
            }
            md << "\nLoss per cycle " << fmt(res.loss_per_cycle, 4) << " +/- " << fmt(res.loss_per_cycle_se, 2)
               << "\n\nContrast loss per cycle " << fmt(res.contrast_loss_per_cycle, 4) << " +/- "
               << fmt(res.contrast_loss_per_cycle_se, 2) << "\n";
            summary["loss_per_cycle"] = res.loss_per_cycle;
            summary["loss_per_cycle_se"] = res.loss_per_cycle_se;
            summary["contrast_loss_per_cycle"] = res.contrast_loss_per_cycle;
            summary["contrast_loss_per_cycle_se"] = res.contrast_loss_per_cycle_se;
            break;
        }
        case ExperimentKind::kReplenish: {
            const ReplenishResult res = run_replenish(cfg.replenish, cfg.noise, cfg.shots, cfg.seed);
            csv << "trials,reached_target,fraction,ci_low,ci_high,mean_fill_after,mean_rounds,mean_total_ms,partial\n";
            const double frac = static_cast<double>(res.reached_target) / static_cast<double>(res.trials);
            csv << res.trials << ',' << res.reached_target << ',' << fmt(frac, 8) << ',' << fmt(res.reached_ci.low, 8)
                << ',' << fmt(res.reached_ci.high, 8) << ',' << fmt(res.mean_fill_after, 8) << ','
                << fmt(res.mean_rounds, 8) << ',' << fmt(res.mean_total_ms, 8) << ',' << res.partial << '\n';
            md << "Storage fill above " << cfg.replenish.target_fill << " in " << res.reached_target << " of "
               << res.trials << " trials " << interval_text(res.reached_ci) << ".\n\nMean fill "
               << fmt(res.mean_fill_after, 4) << ", mean load rounds " << fmt(res.mean_rounds, 3)
               << ", mean duration " << fmt(res.mean_total_ms, 4) << " ms.\n";
            summary["reached_fraction"] = frac;
            summary["mean_fill_after"] = res.mean_fill_after;
            break;
        }
        case ExperimentKind::kLeakageMap: {
            const LeakageMapRun& r = cfg.leakage;
            const double mhz = 2.0 * std::numbers::pi;
            std::vector<double> reg, img;
            for (double v : r.register_offset_mhz.values()) reg.push_back(v * mhz);
            for (double v : r.imaging_detuning_mhz.values()) img.push_back(v * mhz);
            const RegisterImagingModel model = r.model;
            const LeakageMap map = leakage_map([&model](double a, double b) { return model.build(a, b); }, reg, img,
                                               r.duration_us, 0, cfg.threads);
            b.add("loss_map.csv", b.csv_header() + map.to_csv(mhz));
            const LevelSystem op = model.build(0.0, 0.0);
            StepControl ctl;
            ctl.outputs = 1;
            const double op_loss = evolve(op, pure_state(op.dim(), 0), r.duration_us, ctl).leakage;
            double peak = 0.0, peak_reg = 0.0, peak_img = 0.0;
            for (std::size_t i = 0; i < img.size(); ++i)
                for (std::size_t j = 0; j < reg.size(); ++j)
                    if (map.loss[i][j] > peak) {
                        peak = map.loss[i][j];
                        peak_reg = reg[j] / mhz;
                        peak_img = img[i] / mhz;
                    }
            csv << "operating_point_loss,peak_loss,peak_register_offset_mhz,peak_imaging_detuning_mhz,"
                   "stark_shift_mhz\n"
                << fmt(op_loss, 8) << ',' << fmt(peak, 8) << ',' << fmt(peak_reg, 8) << ',' << fmt(peak_img, 8)
                << ',' << fmt(model.perturbative_stark_shift() / mhz, 8) << '\n';
            md << "Per-image loss at the operating point: " << fmt(op_loss, 3) << "\n\nPeak loss " << fmt(peak, 3)
               << " at register offset " << fmt(peak_reg, 5) << " MHz, imaging detuning " << fmt(peak_img, 5)
               << " MHz.\n\nPerturbative Stark shift of the imaged level: "
               << fmt(model.perturbative_stark_shift() / mhz, 5) << " MHz.\n";
            summary["operating_point_loss"] = op_loss;
            summary["peak_loss"] = peak;
            break;
        }
    }

    b.add("summary.csv", csv.str());
    b.add("report.md", md.str());
    b.add("config.json", json{{"schema", "zonesim.run/1"},
                              {"config_hash", b.hash()},
                              {"config", cfg.raw},
                              {"resolved_noise", cfg.noise.to_json()}}
                                 .dump(2) +
                             "\n");
    out.files = b.files();
    out.summary = summary;
    return out;
}

}  // namespace zonesim
