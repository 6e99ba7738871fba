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


#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "zonesim/analysis.h"
#include "zonesim/experiment.h"
#include "zonesim/lindblad.h"

namespace zonesim {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

LevelSystem two_level(double rabi, double detuning, double gamma = 0.0) {
    LevelSystem s;
    s.levels = {{"g", 0.0, false}, {"e", 0.0, false}};
    s.drives = {{0, 1, rabi, detuning, 1.0}};
    if (gamma > 0) s.decays = {{1, 0, gamma}};
    return s;
}

// Populated level a, off-resonant level e decaying into a sink.
LevelSystem leaky(double rabi, double detuning, double gamma) {
    LevelSystem s;
    s.levels = {{"a", 0.0, false}, {"e", 0.0, false}, {"sink", 0.0, true}};
    s.drives = {{0, 1, rabi, detuning, 1.0}};
    s.decays = {{1, 2, gamma}};
    return s;
}

TEST(Evolve, NoDriveLeavesStateAlone) {
    LevelSystem s;
    s.levels = {{"a", 1.0, false}, {"b", -2.0, false}, {"c", 0.5, false}};
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(3, 3);
    rho(0, 0) = 1.0;
    const EvolutionResult r = evolve(s, rho, 50.0);
    EXPECT_LT((r.rho - rho).norm(), 1e-10);
}

TEST(Evolve, ResonantRabi) {
    const double omega = 1.3;
    StepControl ctl;
    ctl.outputs = 50;
    const EvolutionResult r = evolve(two_level(omega, 0.0), pure_state(2, 0), 10.0, ctl);
    ASSERT_EQ(r.times.size(), r.populations.size());
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        const double s = std::sin(omega * r.times[k] / 2);
        EXPECT_NEAR(r.populations[k][1], s * s, 1e-6) << "t = " << r.times[k];
    }
}

TEST(Evolve, FarDetunedStarkShift) {
    const double omega = 1.0, delta = 10.0;
    LevelSystem s = two_level(omega, delta);
    s.levels.push_back({"ref", 0.0, false});
    const double shift = measured_level_shift(s, 0, 2, 200.0, 2000);
    EXPECT_NEAR(shift, omega * omega / (4 * delta), 0.05 * omega * omega / (4 * delta));
    const double exact = 0.5 * (-delta + std::sqrt(delta * delta + omega * omega));
    EXPECT_NEAR(shift, exact, 0.01 * exact);
}

TEST(Evolve, ClosedSystemMatchesSchrodinger) {
    LevelSystem s;
    s.levels = {{"0", 0.0, false}, {"1", 0.3, false}, {"2", -0.2, false}, {"3", 0.0, false}};
    s.drives = {{0, 1, 0.8, 0.1, 1.0}, {1, 2, 0.5, -0.4, 0.7}, {0, 3, 0.3, 0.2, 1.0}};
    const double t = 7.5;
    const Eigen::MatrixXcd h = s.hamiltonian();
    const Eigen::MatrixXcd u = (std::complex<double>(0, -t) * h).exp();
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
    psi(0) = 1.0;
    psi = u * psi;
    const Eigen::MatrixXcd expect = psi * psi.adjoint();
    for (Integrator m : {Integrator::kRungeKutta, Integrator::kExponential}) {
        StepControl ctl;
        ctl.method = m;
        const EvolutionResult r = evolve(s, pure_state(4, 0), t, ctl);
        EXPECT_LT((r.rho - expect).norm(), 1e-8);
    }
}

TEST(Evolve, TraceAndPositivityOverTenMilliseconds) {
    const RegisterImagingModel m = default_imaging_model();
    const EvolutionResult r = evolve(m.build(0.0, 0.0), pure_state(m.s1_offsets.size() + 3, 0), 10000.0);
    EXPECT_LT(r.max_trace_drift, 1e-9);
    EXPECT_GT(r.min_eigenvalue, -1e-8);
    EXPECT_GT(r.leakage, 0.0);
    EXPECT_LT(r.leakage, 1.0);
}

TEST(Evolve, RejectsInvalidSystems) {
    LevelSystem s = two_level(1.0, 0.0);
    s.decays = {{1, 0, -1.0}};
    EXPECT_THROW(evolve(s, pure_state(2, 0), 1.0), EvolutionError);
    LevelSystem big;
    big.levels.assign(21, Level{"x", 0.0, false});
    EXPECT_THROW(big.check(), EvolutionError);
    LevelSystem twice;
    twice.levels = {{"a", 0, false}, {"b", 0, false}, {"c", 0, false}};
    twice.drives = {{0, 2, 1, 0, 1}, {1, 2, 1, 0, 1}};
    EXPECT_THROW(twice.check(), EvolutionError);
    EXPECT_THROW(evolve(two_level(1, 0), pure_state(2, 0), -1.0), EvolutionError);
}

TEST(Evolve, SinkPopulationIsLeakage) {
    const EvolutionResult r = evolve(leaky(1.0, 0.0, 2.0), pure_state(3, 0), 30.0);
    EXPECT_NEAR(r.leakage, r.populations.back()[2], 1e-12);
    EXPECT_GT(r.leakage, 0.99);
}

double slope_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    return fit_line(lx, ly).params[1];
}

TEST(LeakageScaling, LinearInTime) {
    const LevelSystem s = leaky(1.0, 100.0, 1.0);
    std::vector<double> t, loss;
    for (double d : {100.0, 200.0, 400.0, 700.0, 1000.0}) {
        t.push_back(d);
        loss.push_back(evolve(s, pure_state(3, 0), d).leakage);
    }
    EXPECT_NEAR(slope_loglog(t, loss), 1.0, 0.05);
}

TEST(LeakageScaling, QuadraticInRabi) {
    std::vector<double> w, loss;
    for (double omega : {0.3, 0.6, 1.0, 1.8, 3.0}) {
        w.push_back(omega);
        loss.push_back(evolve(leaky(omega, 100.0, 1.0), pure_state(3, 0), 300.0).leakage);
    }
    EXPECT_NEAR(slope_loglog(w, loss), 2.0, 0.1);
}

TEST(LeakageScaling, MatchesPerturbativeRate) {
    const double omega = 1.0, delta = 100.0, gamma = 1.0, t = 500.0;
    const double loss = evolve(leaky(omega, delta, gamma), pure_state(3, 0), t).leakage;
    // Excited admixture (Omega / 2 Delta)^2 decays at gamma.
    const double expect = 1.0 - std::exp(-std::pow(omega / (2 * delta), 2) * gamma * t);
    EXPECT_NEAR(loss, expect, 0.05 * expect);
}

TEST(LeakageEstimate, Formula) {
    EXPECT_EQ(leakage_estimate(0.0, 2.4, 7.6, 1.0, 1.0), 0.0);
    const double base = leakage_estimate(1e-5, 2.4, 7.6, 3.0, 100.0);
    EXPECT_NEAR(leakage_estimate(1e-5, 2.4, 7.6, 3.0, 200.0), 2 * base, 1e-18);
    EXPECT_NEAR(leakage_estimate(1e-5, 2.4, 15.2, 3.0, 100.0), base / 4, 1e-18);
    EXPECT_THROW(leakage_estimate(1e-5, 2.4, 0.0, 3.0, 100.0), std::invalid_argument);
    // (2.4 / 7.6)^2 = 0.099723, so gamma t = 0.0025 / (1e-5 * 0.099723) = 2506.94.
    const double gt = 2506.944444;
    EXPECT_NEAR(leakage_estimate(1e-5, 2.4, 7.6, 1.0, gt), 0.0025, 1e-8);
}

double peak_location(const LeakageMap& map, std::size_t column) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < map.imaging_detunings.size(); ++i)
        if (map.loss[i][column] > map.loss[best][column]) best = i;
    if (best == 0 || best + 1 == map.imaging_detunings.size()) return map.imaging_detunings[best];
    const double a = map.loss[best - 1][column], b = map.loss[best][column], c = map.loss[best + 1][column];
    const double h = map.imaging_detunings[best + 1] - map.imaging_detunings[best];
    return map.imaging_detunings[best] + 0.5 * h * (a - c) / (a - 2 * b + c);
}

std::vector<double> grid(double center, double half, std::size_t n) {
    std::vector<double> g;
    for (std::size_t i = 0; i < n; ++i) g.push_back(center - half + 2 * half * i / (n - 1));
    return g;
}

TEST(LeakageMap, WeakRegisterLightPeaksAtBareResonance) {
    RegisterImagingModel m = default_imaging_model();
    m.register_rabi = kTwoPi * 0.5;
    // Register offsets that put the laser on the bare 3P1 -> 3S1 line.
    const LeakageMap map = leakage_map([&](double reg, double imaging) { return m.build(reg, imaging); },
                                       grid(-m.register_detuning, kTwoPi * 20.0, 41), {0.0}, 20.0, 0);
    std::size_t best = 0;
    for (std::size_t j = 1; j < map.register_detunings.size(); ++j)
        if (map.loss[0][j] > map.loss[0][best]) best = j;
    EXPECT_NEAR(map.register_detunings[best] + m.register_detuning, 0.0, kTwoPi * 1.0);
}

TEST(LeakageMap, ResonanceFollowsStarkShift) {
    const RegisterImagingModel m = default_imaging_model();
    LevelSystem dressed = m.build(0.0, 0.0);
    dressed.drives.erase(dressed.drives.begin());
    dressed.decays.clear();
    const double shift = measured_level_shift(dressed, 1, 0, 0.5, 4000);
    EXPECT_NEAR(shift, m.perturbative_stark_shift(), 0.05 * std::abs(m.perturbative_stark_shift()));
    EXPECT_LT(shift, 0.0);

    const auto builder = [&](double reg, double imaging) { return m.build(reg, imaging); };
    const LeakageMap map = leakage_map(builder, {0.0}, grid(shift, kTwoPi * 1.0, 41), 3.0, 0);
    EXPECT_NEAR(peak_location(map, 0), shift, kTwoPi * 0.05);
}

TEST(LeakageMap, CsvHasOneRowPerPoint) {
    LeakageMap map{{0.0, 1.0}, {2.0, 3.0, 4.0}, {{0, 0}, {0, 0}, {0, 0}}};
    const std::string csv = map.to_csv();
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n';
    EXPECT_EQ(lines, 1u + 6u);
}

TEST(RegisterImagingModel, JsonRoundTrip) {
    const RegisterImagingModel m = default_imaging_model();
    const RegisterImagingModel back = RegisterImagingModel::from_json(m.to_json());
    EXPECT_NEAR(back.register_rabi, m.register_rabi, 1e-9);
    EXPECT_NEAR(back.register_detuning, m.register_detuning, 1e-9);
    ASSERT_EQ(back.s1_offsets.size(), m.s1_offsets.size());
    EXPECT_NEAR(back.s1_offsets[1], m.s1_offsets[1], 1e-9);
    EXPECT_DOUBLE_EQ(back.branch_to_3p1, m.branch_to_3p1);
}

}  // namespace
}  // namespace zonesim
