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


#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "zonesim/experiment.h"

namespace zonesim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch(const std::string& name) {
    const fs::path p = fs::path(::testing::TempDir()) / ("zonesim_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json repcode_config(const fs::path& out) {
    return {{"schema", kConfigSchema},
            {"kind", "repcode"},
            {"noise", "noiseless"},
            {"shots", 100},
            {"seed", 9},
            {"output_dir", out.string()},
            {"spec", {{"distance", 3}, {"cycles", 3}}}};
}

TEST(Config, UnknownKeyReportsPointer) {
    json j = repcode_config("x");
    j["spec"]["frobnicate"] = 1;
    try {
        ExperimentConfig::parse(j);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.pointer(), "/spec/frobnicate");
    }
    json top = repcode_config("x");
    top["shotz"] = 3;
    EXPECT_THROW(ExperimentConfig::parse(top), ConfigError);
}

TEST(Config, RejectsBadValues) {
    json j = repcode_config("x");
    j["schema"] = "other/1";
    EXPECT_THROW(ExperimentConfig::parse(j), ConfigError);
    j = repcode_config("x");
    j["kind"] = "teleport";
    EXPECT_THROW(ExperimentConfig::parse(j), ConfigError);
    j = repcode_config("x");
    j["shots"] = 0;
    EXPECT_THROW(ExperimentConfig::parse(j), ConfigError);
    j = repcode_config("x");
    j["spec"]["distance"] = 1;
    EXPECT_THROW(ExperimentConfig::parse(j), ConfigError);
    j = repcode_config("x");
    j["noise"] = "no_such_file.json";
    EXPECT_THROW(ExperimentConfig::parse(j), ConfigError);
}

TEST(Config, HashIgnoresThreadsAndOutput) {
    json a = repcode_config("one");
    json b = repcode_config("two");
    b["threads"] = 4;
    EXPECT_EQ(ExperimentConfig::parse(a).hash(), ExperimentConfig::parse(b).hash());
    b["seed"] = 10;
    EXPECT_NE(ExperimentConfig::parse(a).hash(), ExperimentConfig::parse(b).hash());
    EXPECT_EQ(ExperimentConfig::parse(a).hash().size(), 16u);
}

TEST(Config, NoiseByName) {
    EXPECT_EQ(load_noise("defaults").to_json(), NoiseModel::defaults().to_json());
    EXPECT_EQ(load_noise("noiseless").to_json(), NoiseModel::noiseless().to_json());
}

TEST(Config, ShippedFilesParse) {
    const fs::path root = fs::path(ZONESIM_SOURCE_DIR) / "config";
    std::size_t n = 0;
    for (const auto& entry : fs::directory_iterator(root / "experiments")) {
        if (entry.path().extension() != ".json") continue;
        EXPECT_NO_THROW(ExperimentConfig::load(entry.path())) << entry.path();
        ++n;
    }
    EXPECT_GE(n, 7u);
    EXPECT_EQ(load_noise((root / "noise_defaults.json").string()).to_json(), NoiseModel::defaults().to_json());
    const RegisterImagingModel m = load_imaging_model((root / "lindblad_register_imaging.json").string());
    EXPECT_NEAR(m.register_rabi, default_imaging_model().register_rabi, 1e-9);
}

TEST(Fnv, KnownVectors) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(RunExperiment, NoiselessRepcodeBundle) {
    const fs::path out = scratch("repcode");
    const ExperimentConfig cfg = ExperimentConfig::parse(repcode_config(out));
    const RunSummary s = run_experiment(cfg);
    EXPECT_EQ(s.summary["conditions"][0]["failures"]["events"], 0);
    for (const char* name : {"summary.csv", "report.md", "config.json", "shots_d3.jsonl", "detection_frequency.csv"})
        EXPECT_TRUE(fs::exists(out / name)) << name;
    for (const fs::path& f : s.files) {
        EXPECT_NE(slurp(f).find(s.config_hash), std::string::npos) << f;
        EXPECT_FALSE(fs::exists(fs::path(f.string() + ".tmp")));
    }
    std::istringstream shots(slurp(out / "shots_d3.jsonl"));
    std::string line;
    std::getline(shots, line);
    EXPECT_EQ(json::parse(line)["shots"], 100);
    std::size_t n = 0;
    while (std::getline(shots, line)) ++n;
    EXPECT_EQ(n, 100u);
}

TEST(RunExperiment, ShotStreamIndependentOfThreads) {
    const fs::path one = scratch("t1"), two = scratch("t2");
    json a = repcode_config(one);
    a["noise"] = "defaults";
    json b = a;
    b["output_dir"] = two.string();
    b["threads"] = 2;
    run_experiment(ExperimentConfig::parse(a));
    run_experiment(ExperimentConfig::parse(b));
    EXPECT_EQ(slurp(one / "shots_d3.jsonl"), slurp(two / "shots_d3.jsonl"));
    EXPECT_EQ(slurp(one / "summary.csv"), slurp(two / "summary.csv"));
}

TEST(RunExperiment, DistillSmoke) {
    const fs::path out = scratch("distill");
    const json j = {{"schema", kConfigSchema},
                    {"kind", "distill"},
                    {"shots", 200},
                    {"output_dir", out.string()},
                    {"spec", {{"encoded", true}, {"write_shots", false}}}};
    const RunSummary s = run_experiment(ExperimentConfig::parse(j));
    EXPECT_TRUE(fs::exists(out / "retry_histogram.csv"));
    ASSERT_EQ(s.summary["bases"].size(), 3u);
    EXPECT_GT(s.summary["fidelity"].get<double>(), 0.9);
    EXPECT_NE(slurp(out / "report.md").find("| YY |"), std::string::npos);
}

TEST(RunExperiment, NoiselessRamseyKeepsContrast) {
    RamseyRun r;
    r.cycles = {0, 4, 8};
    const RamseyResult res = run_ramsey(r, NoiseModel::noiseless(), 50, 3);
    for (const RamseyPoint& p : res.points) {
        EXPECT_DOUBLE_EQ(p.survival, 1.0);
        EXPECT_DOUBLE_EQ(p.contrast, 1.0);
    }
}

TEST(RunExperiment, NoiselessGerbReturnsEveryPair) {
    GerbRun g;
    g.blocks = {0, 2, 4};
    g.sequences = 2;
    const GerbResult res = run_gerb(g, NoiseModel::noiseless(), 20, 5);
    for (const GerbPoint& p : res.points) EXPECT_EQ(p.returned, p.pairs);
}

TEST(PublishedTables, AllChecksPass) {
    const PublishedTables t = reproduce_published_tables();
    for (const TableCheck& c : t.checks) EXPECT_TRUE(c.pass()) << c.name << " " << c.value << " vs " << c.expected;
    EXPECT_TRUE(t.all_pass());
    EXPECT_NE(t.report.find("17820"), std::string::npos);
}

}  // namespace
}  // namespace zonesim
