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

// zonesim command-line front end.
//
// Exit codes: 0 success, 1 failed check or runtime error, 2 invalid
// configuration or usage, 3 structural circuit error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "zonesim/analysis.h"
#include "zonesim/circuit.h"
#include "zonesim/decoder.h"
#include "zonesim/engine.h"
#include "zonesim/experiment.h"
#include "zonesim/lindblad.h"
#include "zonesim/qec_circuits.h"

namespace {

using namespace zonesim;
using nlohmann::json;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitStructural = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        write_atomic(out_path, text);
    }
}

// Shot streams may begin with a zonesim.shots/1 header line.
std::vector<ShotRecord> read_shots(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<ShotRecord> shots;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        if (j.value("schema", "") == "zonesim.shots/1") continue;
        shots.push_back(ShotRecord::from_json(j));
    }
    return shots;
}

Circuit checked_circuit(const Circuit& c) {
    const ValidationReport report = validate(c);
    if (!report.ok()) throw StructuralError(report.to_string());
    return c;
}

struct GenArgs {
    int distance = 3;
    int cycles = 0;
    bool phase_sensitive = false;
    std::string basis = "ZZ";
    bool unencoded = false;
    int max_retries = 20;
    bool antiferro = false;
    int blocks = 8;
    int pairs = 1;
    uint64_t seed = 0;
    int mcm_cycles = 10;
    bool dark = false;
    std::vector<int> phases{0, 2};
    std::string out;
};

struct RunArgs {
    std::string config;
    unsigned threads = 0;
    std::string out_dir;
};

struct DecodeArgs {
    std::string circuit;
    std::string shots;
    std::string noise = "defaults";
    bool no_loss_edits = false;
    std::string graph_out;
};

struct AnalyzeArgs {
    uint64_t successes = 0;
    uint64_t trials = 0;
    double confidence = 0.95;
    std::vector<uint64_t> xx, yy, zz;
    bool psi_minus = false;
    std::string circuit;
    std::string shots;
    int resamples = 1000;
    std::string csv;
    std::string out;
};

struct TablesArgs {
    std::string out;
};

struct MapArgs {
    std::string model;
    std::vector<double> reg{-200.0, 200.0, 41};
    std::vector<double> img{-200.0, 50.0, 51};
    double duration_us = 0.0;
    unsigned threads = 1;
    std::string out;
};

std::string repcode_summary(const MatchingGraph& graph, const std::vector<ShotRecord>& shots, bool edits) {
    std::vector<ShotDecode> decoded;
    decoded.reserve(shots.size());
    std::size_t touched = 0;
    for (const ShotRecord& s : shots) {
        decoded.push_back(decode_shot(graph, s, edits));
        touched += decoded.back().loss_touched ? 1 : 0;
    }
    const RateEstimate r = logical_failure_rate(decoded);
    json j = r.to_json();
    j["loss_touched_shots"] = touched;
    j["loss_edits"] = edits;
    j["distance"] = graph.layout().distance;
    j["cycles"] = graph.layout().cycles;
    return j.dump(2) + "\n";
}

std::vector<double> read_column_csv(const std::string& path, std::vector<double>& y, std::vector<double>& s) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<double> x;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() < 2) throw std::runtime_error("each row needs x,y[,sigma]");
        x.push_back(row[0]);
        y.push_back(row[1]);
        if (row.size() > 2) s.push_back(row[2]);
    }
    if (!s.empty() && s.size() != x.size()) throw std::runtime_error("sigma column is incomplete");
    return x;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zonesim: zoned neutral-atom QEC simulator and analysis tools"};
    app.require_subcommand(1);

    // gen
    GenArgs g;
    auto* gen = app.add_subcommand("gen", "Generate a native circuit and print it in text form");
    gen->require_subcommand(1);
    auto* gen_rep = gen->add_subcommand("repcode", "Walking repetition code memory circuit");
    gen_rep->add_option("-d,--distance", g.distance, "Code distance")->check(CLI::Range(2, 64));
    gen_rep->add_option("-c,--cycles", g.cycles, "Syndrome cycles (default: distance)")->check(CLI::NonNegativeNumber);
    gen_rep->add_flag("--phase-sensitive", g.phase_sensitive, "Detect phase errors during MCM");
    auto* gen_dis = gen->add_subcommand("distill", "Heralded Bell pair distillation");
    gen_dis->add_option("-b,--basis", g.basis, "Final basis: XX, YY or ZZ");
    gen_dis->add_flag("--unencoded", g.unencoded, "Physical Bell pairs instead of [[4,2,2]] blocks");
    gen_dis->add_option("--max-retries", g.max_retries, "Attempts before giving up")->check(CLI::PositiveNumber);
    gen_dis->add_flag("--antiferro", g.antiferro, "Prepare the anti-ferromagnetic variant");
    auto* gen_gb = gen->add_subcommand("gerb", "Global-echo randomized benchmarking sequence");
    gen_gb->add_option("-n,--blocks", g.blocks, "Number of blocks")->check(CLI::NonNegativeNumber);
    gen_gb->add_option("-p,--pairs", g.pairs, "Number of qubit pairs")->check(CLI::PositiveNumber);
    gen_gb->add_option("-s,--seed", g.seed, "Sequence seed");
    auto* gen_ram = gen->add_subcommand("ramsey", "Ramsey sequence interleaved with MCM cycles");
    gen_ram->add_option("-n,--mcm-cycles", g.mcm_cycles, "MCM cycles")->check(CLI::NonNegativeNumber);
    gen_ram->add_flag("--dark", g.dark, "Idle instead of imaging");
    gen_ram->add_option("--phases", g.phases, "Per-qubit phase in quarter turns")->delimiter(',');
    for (auto* sc : {gen_rep, gen_dis, gen_gb, gen_ram}) sc->add_option("-o,--out", g.out, "Output file (default stdout)");

    // run
    RunArgs r;
    auto* run = app.add_subcommand("run", "Run an experiment configuration and write its output bundle");
    run->add_option("config", r.config, "Experiment configuration (JSON)")->required();
    run->add_option("-t,--threads", r.threads, "Worker threads (results do not depend on this)");
    run->add_option("-o,--out", r.out_dir, "Override the configured output directory");

    // decode
    DecodeArgs d;
    auto* dec = app.add_subcommand("decode", "Decode a repetition-code shot stream");
    dec->add_option("-c,--circuit", d.circuit, "Circuit text file")->required();
    dec->add_option("-s,--shots", d.shots, "JSONL shot stream")->required();
    dec->add_option("-n,--noise", d.noise, "Noise model: defaults, noiseless or a JSON file");
    dec->add_flag("--no-loss-edits", d.no_loss_edits, "Decode without per-shot loss edits");
    dec->add_option("--graph", d.graph_out, "Also write the matching graph in text form");

    // analyze
    AnalyzeArgs a;
    auto* ana = app.add_subcommand("analyze", "Statistics on counts and shot streams");
    ana->require_subcommand(1);
    auto* ana_w = ana->add_subcommand("wilson", "Wilson score interval");
    ana_w->add_option("successes", a.successes)->required();
    ana_w->add_option("trials", a.trials)->required();
    ana_w->add_option("--confidence", a.confidence)->check(CLI::Range(0.0, 1.0));
    auto* ana_f = ana->add_subcommand("fidelity", "Bell fidelity from per-basis successes and failures");
    ana_f->add_option("--xx", a.xx, "successes,failures")->delimiter(',')->expected(2)->required();
    ana_f->add_option("--yy", a.yy, "successes,failures")->delimiter(',')->expected(2)->required();
    ana_f->add_option("--zz", a.zz, "successes,failures")->delimiter(',')->expected(2)->required();
    ana_f->add_flag("--psi-minus", a.psi_minus, "Target the anti-ferromagnetic state");
    auto* ana_d = ana->add_subcommand("detection", "Per-cycle detection frequency of a repetition-code run");
    ana_d->add_option("-c,--circuit", a.circuit)->required();
    ana_d->add_option("-s,--shots", a.shots)->required();
    ana_d->add_option("--resamples", a.resamples)->check(CLI::NonNegativeNumber);
    ana_d->add_option("-o,--out", a.out, "CSV output (default stdout)");
    auto* ana_e = ana->add_subcommand("decay", "Fit A (1 - eps)^x to a CSV of x,y[,sigma]");
    ana_e->add_option("csv", a.csv)->required();

    // reproduce-tables
    TablesArgs t;
    auto* tab = app.add_subcommand("reproduce-tables", "Recompute rates and fidelities from published counts");
    tab->add_option("-o,--out", t.out, "Markdown report (default stdout)");

    // leakage-map
    MapArgs m;
    auto* lm = app.add_subcommand("leakage-map", "Register-atom loss versus laser detunings");
    lm->add_option("-m,--model", m.model, "Imaging model JSON (default: built-in model)");
    lm->add_option("--register", m.reg, "start,stop,points in MHz")->delimiter(',')->expected(3);
    lm->add_option("--imaging", m.img, "start,stop,points in MHz")->delimiter(',')->expected(3);
    lm->add_option("--duration-us", m.duration_us, "Image duration (default: model value)");
    lm->add_option("-t,--threads", m.threads)->check(CLI::PositiveNumber);
    lm->add_option("-o,--out", m.out, "CSV output (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (gen->parsed()) {
            Circuit c;
            if (gen_rep->parsed()) {
                c = gen_walking_repcode({g.distance, g.cycles ? g.cycles : g.distance, g.phase_sensitive, 0});
            } else if (gen_dis->parsed()) {
                c = gen_distillation({!g.unencoded, parse_basis(g.basis), g.max_retries, g.antiferro});
            } else if (gen_gb->parsed()) {
                c = gen_gerb({g.blocks, g.pairs, g.seed});
            } else {
                c = gen_ramsey_mcm(g.mcm_cycles, !g.dark, g.phases);
            }
            emit(to_text(checked_circuit(c)), g.out);
        } else if (run->parsed()) {
            ExperimentConfig cfg = ExperimentConfig::load(r.config);
            if (r.threads) cfg.threads = r.threads;
            if (!r.out_dir.empty()) cfg.output_dir = r.out_dir;
            const RunSummary s = run_experiment(cfg);
            json j = s.summary;
            j["files"] = json::array();
            for (const auto& f : s.files) j["files"].push_back(f.string());
            std::cout << j.dump(2) << "\n";
        } else if (dec->parsed()) {
            const Circuit c = checked_circuit(from_text(slurp(d.circuit)));
            const NoiseModel noise = load_noise(d.noise);
            const MatchingGraph graph = build_matching_graph(c, noise);
            if (!d.graph_out.empty()) write_atomic(d.graph_out, graph.to_text());
            std::cout << repcode_summary(graph, read_shots(d.shots), !d.no_loss_edits);
        } else if (ana->parsed()) {
            if (ana_w->parsed()) {
                const RateEstimate e = estimate_rate(a.successes, a.trials, a.confidence);
                std::cout << e.to_json().dump(2) << "\n";
            } else if (ana_f->parsed()) {
                CountTable table;
                table.rows["XX"] = {a.xx[0], a.xx[1]};
                table.rows["YY"] = {a.yy[0], a.yy[1]};
                table.rows["ZZ"] = {a.zz[0], a.zz[1]};
                const FidelityEstimate f =
                    bell_fidelity(table, a.psi_minus ? BellTarget::kPsiMinus : BellTarget::kPhiPlus);
                std::cout << json{{"fidelity", f.fidelity}, {"sigma", f.sigma}, {"correlators", f.correlators}}.dump(2)
                          << "\n";
            } else if (ana_d->parsed()) {
                const Circuit c = checked_circuit(from_text(slurp(a.circuit)));
                const RepCodeLayout layout = RepCodeLayout::from_circuit(c);
                std::vector<std::vector<uint8_t>> parity;
                std::vector<int> cycle_of;
                for (const ShotRecord& s : read_shots(a.shots)) {
                    const ExtractedShot ex = extract_detectors(s, layout);
                    parity.emplace_back();
                    for (const DetectorRecord& dr : ex.detectors) parity.back().push_back(dr.parity);
                    if (cycle_of.empty())
                        for (const DetectorRecord& dr : ex.detectors) cycle_of.push_back(dr.cycle);
                }
                const FrequencySeries fs = detection_frequency(parity, cycle_of, a.resamples);
                std::ostringstream os;
                os << "cycle,mean,stddev\n";
                for (std::size_t k = 0; k < fs.cycles.size(); ++k)
                    os << fs.cycles[k] << ',' << fs.mean[k] << ',' << fs.stddev[k] << '\n';
                emit(os.str(), a.out);
            } else {
                std::vector<double> y, s;
                const std::vector<double> x = read_column_csv(a.csv, y, s);
                const FitResult f = fit_exponential_decay(x, y, s);
                std::cout << json{{"amplitude", f.params[0]},
                                  {"amplitude_se", f.stderrs[0]},
                                  {"eps", f.params[1]},
                                  {"eps_se", f.stderrs[1]},
                                  {"residual_norm", f.residual_norm}}
                                 .dump(2)
                          << "\n";
            }
        } else if (tab->parsed()) {
            const PublishedTables tables = reproduce_published_tables();
            emit(tables.report, t.out);
            if (!tables.all_pass()) {
                for (const TableCheck& c : tables.checks)
                    if (!c.pass())
                        std::cerr << "mismatch: " << c.name << " = " << c.value << ", expected " << c.expected
                                  << " +/- " << c.tolerance << "\n";
                return kExitFailure;
            }
        } else if (lm->parsed()) {
            const RegisterImagingModel model =
                m.model.empty() ? default_imaging_model() : load_imaging_model(json(m.model));
            const double mhz = 2.0 * std::numbers::pi;
            auto grid = [&](const std::vector<double>& v) {
                std::vector<double> out;
                for (double x : Grid{v[0], v[1], static_cast<int>(v[2])}.values()) out.push_back(x * mhz);
                return out;
            };
            const double duration = m.duration_us > 0 ? m.duration_us : model.image_duration;
            const LeakageMap map = leakage_map([&model](double a1, double b1) { return model.build(a1, b1); },
                                               grid(m.reg), grid(m.img), duration, 0, m.threads);
            emit(map.to_csv(mhz), m.out);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error at " << e.what() << "\n";
        return kExitConfig;
    } catch (const StructuralError& e) {
        std::cerr << "structural error: " << e.what() << "\n";
        return kExitStructural;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return 0;
}
